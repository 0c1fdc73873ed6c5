#include "fsplaplace/context.hpp"

#include "fsplaplace/rng.hpp"

namespace fsp {

namespace {

const Index kHaltonPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

void checkBounds(const Vector& lower, const Vector& upper) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw ConfigError("context bounds must be nonempty and matched");
  for (Index d = 0; d < lower.size(); ++d)
    if (!(lower[d] < upper[d]))
      throw ConfigError("context bounds need lower < upper in every dimension");
}

}  // namespace

ContextSampler ContextSampler::uniformBox(const Vector& lower, const Vector& upper) {
  checkBounds(lower, upper);
  ContextSampler s;
  s.kind = Kind::UniformBox;
  s.lower = lower;
  s.upper = upper;
  return s;
}

ContextSampler ContextSampler::grid(const Vector& lower, const Vector& upper,
                                    const IntVector& counts) {
  checkBounds(lower, upper);
  if (counts.size() != lower.size())
    throw ConfigError("grid counts must match the bound dimensions");
  for (Index d = 0; d < counts.size(); ++d)
    if (counts[d] < 1) throw ConfigError("grid counts must be >= 1");
  ContextSampler s;
  s.kind = Kind::Grid;
  s.lower = lower;
  s.upper = upper;
  s.grid_counts = counts;
  return s;
}

ContextSampler ContextSampler::halton(const Vector& lower, const Vector& upper,
                                      Index skip) {
  checkBounds(lower, upper);
  if (lower.size() > static_cast<Index>(std::size(kHaltonPrimes)))
    throw ConfigError("Halton sampler supports at most 20 dimensions");
  if (skip < 0) throw ConfigError("Halton skip must be nonnegative");
  ContextSampler s;
  s.kind = Kind::Halton;
  s.lower = lower;
  s.upper = upper;
  s.halton_skip = skip;
  return s;
}

ContextSampler ContextSampler::fromDataset(const Matrix& pool) {
  if (pool.rows() == 0)
    throw ConfigError("FromDataset context sampler needs a nonempty pool");
  ContextSampler s;
  s.kind = Kind::FromDataset;
  s.pool = pool;
  return s;
}

Index ContextSampler::dim() const {
  return kind == Kind::FromDataset ? pool.cols() : lower.size();
}

Scalar haltonValue(Index index, Index base) {
  Scalar result = 0.0;
  Scalar f = 1.0 / static_cast<Scalar>(base);
  Index i = index;
  while (i > 0) {
    result += f * static_cast<Scalar>(i % base);
    i /= base;
    f /= static_cast<Scalar>(base);
  }
  return result;
}

Matrix sampleContext(const ContextSampler& sampler, Index count,
                     std::uint64_t seed) {
  if (count < 1) throw ConfigError("context count must be >= 1");
  const Index d = sampler.dim();
  Matrix points(count, d);
  switch (sampler.kind) {
    case ContextSampler::Kind::UniformBox: {
      Rng rng(seed);
      for (Index i = 0; i < count; ++i)
        for (Index j = 0; j < d; ++j)
          points(i, j) = rng.uniform(sampler.lower[j], sampler.upper[j]);
      break;
    }
    case ContextSampler::Kind::Grid: {
      Index total = 1;
      for (Index j = 0; j < d; ++j) total *= sampler.grid_counts[j];
      if (count != total)
        throw ConfigError("grid sampler produces exactly " +
                          std::to_string(total) + " points, got count " +
                          std::to_string(count));
      for (Index i = 0; i < total; ++i) {
        Index rem = i;
        for (Index j = 0; j < d; ++j) {
          const Index c = sampler.grid_counts[j];
          const Index idx = rem % c;
          rem /= c;
          points(i, j) =
              c == 1 ? 0.5 * (sampler.lower[j] + sampler.upper[j])
                     : sampler.lower[j] + (sampler.upper[j] - sampler.lower[j]) *
                                              static_cast<Scalar>(idx) /
                                              static_cast<Scalar>(c - 1);
        }
      }
      break;
    }
    case ContextSampler::Kind::Halton: {
      for (Index i = 0; i < count; ++i)
        for (Index j = 0; j < d; ++j) {
          const Scalar u = haltonValue(sampler.halton_skip + i + 1,
                                       kHaltonPrimes[j]);
          points(i, j) = sampler.lower[j] + (sampler.upper[j] - sampler.lower[j]) * u;
        }
      break;
    }
    case ContextSampler::Kind::FromDataset: {
      Rng rng(seed);
      for (Index i = 0; i < count; ++i)
        points.row(i) = sampler.pool.row(rng.uniformIndex(sampler.pool.rows()));
      break;
    }
  }
  return points;
}

}  // namespace fsp
