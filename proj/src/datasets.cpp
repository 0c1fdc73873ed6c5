#include "fsplaplace/datasets.hpp"

#include "fsplaplace/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsp {

namespace {
constexpr Scalar kPi = 3.14159265358979323846;
}

Dataset Dataset::subset(Split tag) const {
  Dataset out;
  out.task = task;
  std::vector<Index> keep;
  for (Index i = 0; i < size(); ++i)
    if (splits[static_cast<std::size_t>(i)] == tag) keep.push_back(i);
  const Index m = static_cast<Index>(keep.size());
  out.inputs.resize(m, inputs.cols());
  if (task == TaskKind::Regression)
    out.targets.resize(m, targets.cols());
  else
    out.labels.resize(m);
  out.splits.assign(static_cast<std::size_t>(m), tag);
  for (Index i = 0; i < m; ++i) {
    out.inputs.row(i) = inputs.row(keep[static_cast<std::size_t>(i)]);
    if (task == TaskKind::Regression)
      out.targets.row(i) = targets.row(keep[static_cast<std::size_t>(i)]);
    else
      out.labels[i] = labels[keep[static_cast<std::size_t>(i)]];
  }
  return out;
}

void Dataset::validate(Index num_classes) const {
  if (!inputs.allFinite()) throw ConfigError("dataset inputs contain NaN/inf");
  if (splits.size() != static_cast<std::size_t>(size()))
    throw ConfigError("dataset split tags out of sync with rows");
  if (task == TaskKind::Regression) {
    if (targets.rows() != size())
      throw ConfigError("dataset targets out of sync with inputs");
    if (!targets.allFinite()) throw ConfigError("dataset targets contain NaN/inf");
  } else {
    if (labels.size() != size())
      throw ConfigError("dataset labels out of sync with inputs");
    const Index hi = num_classes >= 0 ? num_classes : labels.maxCoeff() + 1;
    for (Index i = 0; i < labels.size(); ++i)
      if (labels[i] < 0 || labels[i] >= hi)
        throw ConfigError("dataset label out of range");
  }
}

Dataset genSine(Index n, std::uint64_t seed, Scalar noise_sigma) {
  if (n < 1) throw ConfigError("genSine needs n >= 1");
  Rng rng(seed);
  Dataset ds;
  ds.task = TaskKind::Regression;
  ds.inputs.resize(n, 1);
  ds.targets.resize(n, 1);
  for (Index i = 0; i < n; ++i) {
    const Scalar u = rng.uniform01();
    const Scalar x = u < 0.5 ? -1.0 + u : 0.5 + (u - 0.5);
    ds.inputs(i, 0) = x;
    ds.targets(i, 0) = std::sin(2.0 * kPi * x) + noise_sigma * rng.normal();
  }
  ds.splits.assign(static_cast<std::size_t>(n), Split::Train);
  return ds;
}

Dataset genTwoMoons(Index n, Scalar noise, std::uint64_t seed) {
  if (n < 2) throw ConfigError("genTwoMoons needs n >= 2");
  Rng rng(seed);
  Dataset ds;
  ds.task = TaskKind::Classification;
  ds.inputs.resize(n, 2);
  ds.labels.resize(n);
  const Index n_outer = (n + 1) / 2;
  const Index n_inner = n - n_outer;
  for (Index i = 0; i < n_outer; ++i) {
    const Scalar a = kPi * static_cast<Scalar>(i) /
                     static_cast<Scalar>(std::max<Index>(1, n_outer - 1));
    ds.inputs(i, 0) = std::cos(a);
    ds.inputs(i, 1) = std::sin(a);
    ds.labels[i] = 0;
  }
  for (Index i = 0; i < n_inner; ++i) {
    const Scalar a = kPi * static_cast<Scalar>(i) /
                     static_cast<Scalar>(std::max<Index>(1, n_inner - 1));
    ds.inputs(n_outer + i, 0) = 1.0 - std::cos(a);
    ds.inputs(n_outer + i, 1) = 0.5 - std::sin(a);
    ds.labels[n_outer + i] = 1;
  }
  if (noise > 0.0)
    for (Index i = 0; i < n; ++i) {
      ds.inputs(i, 0) += noise * rng.normal();
      ds.inputs(i, 1) += noise * rng.normal();
    }
  ds.splits.assign(static_cast<std::size_t>(n), Split::Train);
  return ds;
}

void assignSplits(Dataset& ds, Scalar val_fraction, Scalar test_fraction,
                  std::uint64_t seed) {
  if (val_fraction < 0 || test_fraction < 0 || val_fraction + test_fraction >= 1.0)
    throw ConfigError("split fractions must be nonnegative and sum below 1");
  const Index n = ds.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  Rng rng(seed);
  for (Index i = n - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.uniformIndex(i + 1))]);
  const Index n_val = static_cast<Index>(std::floor(val_fraction * n));
  const Index n_test = static_cast<Index>(std::floor(test_fraction * n));
  ds.splits.assign(static_cast<std::size_t>(n), Split::Train);
  for (Index i = 0; i < n_val; ++i)
    ds.splits[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        Split::Val;
  for (Index i = n_val; i < n_val + n_test; ++i)
    ds.splits[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        Split::Test;
}

}  // namespace fsp
