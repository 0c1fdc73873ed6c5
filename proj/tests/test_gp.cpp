#include "doctest.h"

#include "fsplaplace/gp.hpp"
#include "fsplaplace/rng.hpp"

#include <Eigen/LU>

#include <cmath>

using namespace fsp;

namespace {

Vector scalar1(double v) {
  Vector out(1);
  out << v;
  return out;
}

GpPrior rbfPrior(double lengthscale, double variance) {
  return GpPrior::zeroMean(
      MultiOutputKernel::replicate(Kernel::rbf(scalar1(lengthscale), variance), 1));
}

Dataset regression1d(const std::vector<double>& xs, const std::vector<double>& ys) {
  Dataset ds;
  ds.task = TaskKind::Regression;
  const Index n = static_cast<Index>(xs.size());
  ds.inputs.resize(n, 1);
  ds.targets.resize(n, 1);
  for (Index i = 0; i < n; ++i) {
    ds.inputs(i, 0) = xs[static_cast<std::size_t>(i)];
    ds.targets(i, 0) = ys[static_cast<std::size_t>(i)];
  }
  ds.splits.assign(static_cast<std::size_t>(n), Split::Train);
  return ds;
}

}  // namespace

TEST_CASE("samplePrior: near-zero variance degenerates to the mean") {
  GpPrior prior = GpPrior::constantMean(
      MultiOutputKernel::replicate(Kernel::rbf(scalar1(1.0), 1e-12), 1),
      scalar1(0.7));
  Matrix X(4, 1);
  X << -1.0, 0.0, 0.5, 2.0;
  const Matrix samples = samplePrior(prior, X, 20, 5);
  CHECK((samples.array() - 0.7).abs().maxCoeff() <= 1e-5);
}

TEST_CASE("samplePrior: empirical covariance matches the Gram") {
  const GpPrior prior = rbfPrior(0.8, 1.3);
  Matrix X(3, 1);
  X << -0.5, 0.1, 0.9;
  const Index n_samples = 100000;
  const Matrix samples = samplePrior(prior, X, n_samples, 11);
  const Matrix K = gram(prior.kernel, X, X);
  const Matrix centered = samples.rowwise() - samples.colwise().mean();
  const Matrix emp = centered.transpose() * centered / double(n_samples - 1);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      const double se = std::sqrt((K(i, i) * K(j, j) + K(i, j) * K(i, j)) /
                                  double(n_samples));
      CHECK(std::abs(emp(i, j) - K(i, j)) <= 3.0 * se);
    }
}

TEST_CASE("samplePrior: fixed seed reproduces samples exactly") {
  const GpPrior prior = rbfPrior(0.5, 1.0);
  Matrix X(2, 1);
  X << 0.0, 1.0;
  const Matrix a = samplePrior(prior, X, 5, 42);
  const Matrix b = samplePrior(prior, X, 5, 42);
  CHECK((a.array() == b.array()).all());
}

TEST_CASE("gpRegress: interpolation limit at small noise") {
  const GpPrior prior = rbfPrior(1.0, 1.0);
  const Dataset ds = regression1d({0.3}, {1.7});
  const GpPosterior post = gpRegress(prior, ds, 1e-5);
  Matrix Xq(1, 1);
  Xq << 0.3;
  CHECK(post.predictMean(Xq)(0, 0) == doctest::Approx(1.7).epsilon(1e-6));
}

TEST_CASE("gpRegress: no data returns the prior") {
  const GpPrior prior = rbfPrior(0.6, 2.0);
  Dataset empty;
  empty.task = TaskKind::Regression;
  empty.inputs.resize(0, 1);
  empty.targets.resize(0, 1);
  const GpPosterior post = gpRegress(prior, empty, 0.1);
  Matrix Xq(3, 1);
  Xq << -1.0, 0.0, 1.0;
  CHECK(post.predictMean(Xq).cwiseAbs().maxCoeff() == 0.0);
  CHECK((post.predictVariance(Xq).array() - 2.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("gpRegress matches an independent dense implementation") {
  const double l = 0.7, s2 = 1.4, sn = 0.2;
  const GpPrior prior = rbfPrior(l, s2);
  const Dataset ds =
      regression1d({-1.0, -0.3, 0.2, 0.8, 1.5}, {0.1, -0.4, 0.9, 0.3, -1.2});
  const GpPosterior post = gpRegress(prior, ds, sn);

  // Textbook route, written against raw formulas with an LU solve.
  auto k = [&](double a, double b) {
    return s2 * std::exp(-0.5 * (a - b) * (a - b) / (l * l));
  };
  Matrix K(5, 5);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) K(i, j) = k(ds.inputs(i, 0), ds.inputs(j, 0));
  K.diagonal().array() += sn * sn;
  const Eigen::PartialPivLU<Matrix> lu(K);
  const Vector y = ds.targets.col(0);

  Matrix Xq(4, 1);
  Xq << -2.0, -0.1, 0.5, 2.5;
  const Matrix mean = post.predictMean(Xq);
  const Vector var = post.predictVariance(Xq);
  for (Index q = 0; q < 4; ++q) {
    Vector kq(5);
    for (Index i = 0; i < 5; ++i) kq[i] = k(Xq(q, 0), ds.inputs(i, 0));
    const Vector w = lu.solve(kq);
    CHECK(mean(q, 0) == doctest::Approx(w.dot(y)).epsilon(1e-8));
    CHECK(var[q] == doctest::Approx(k(Xq(q, 0), Xq(q, 0)) - kq.dot(w))
                        .epsilon(1e-8));
  }
}

TEST_CASE("posterior variance never exceeds prior variance") {
  const GpPrior prior = rbfPrior(0.5, 1.1);
  Rng rng(13);
  Dataset ds;
  ds.task = TaskKind::Regression;
  ds.inputs.resize(8, 1);
  ds.targets.resize(8, 1);
  for (Index i = 0; i < 8; ++i) {
    ds.inputs(i, 0) = rng.uniform(-1, 1);
    ds.targets(i, 0) = rng.normal();
  }
  ds.splits.assign(8, Split::Train);
  const GpPosterior post = gpRegress(prior, ds, 0.1);
  Matrix Xq(50, 1);
  for (Index i = 0; i < 50; ++i) Xq(i, 0) = -3.0 + 6.0 * double(i) / 49.0;
  const Vector var = post.predictVariance(Xq);
  const Vector prior_var = gramDiag(prior.kernel, Xq);
  CHECK((var - prior_var).maxCoeff() <= 1e-10);
}

TEST_CASE("log marginal likelihood: scalar closed form") {
  const double s2 = 1.3, sn = 0.4, y = 0.9;
  const GpPrior prior = rbfPrior(1.0, s2);
  const Dataset ds = regression1d({0.0}, {y});
  const double expected = -0.5 * y * y / (s2 + sn * sn) -
                          0.5 * std::log(2.0 * 3.14159265358979323846 *
                                         (s2 + sn * sn));
  CHECK(logMarginalLikelihood(prior, ds, sn) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("log marginal likelihood: zero targets maximize the fit term") {
  const GpPrior prior = rbfPrior(0.8, 1.0);
  Rng rng(17);
  const Dataset zero = regression1d({-0.5, 0.2, 0.9}, {0.0, 0.0, 0.0});
  const double at_zero = logMarginalLikelihood(prior, zero, 0.3);
  for (int rep = 0; rep < 5; ++rep) {
    const Dataset other =
        regression1d({-0.5, 0.2, 0.9}, {rng.normal(), rng.normal(), rng.normal()});
    CHECK(at_zero >= logMarginalLikelihood(prior, other, 0.3) - 1e-12);
  }
}

TEST_CASE("log marginal likelihood decomposes into fit + complexity") {
  const GpPrior prior = rbfPrior(0.6, 0.9);
  const Dataset ds = regression1d({-1.0, 0.0, 0.4, 1.2}, {0.3, -0.1, 0.8, 0.2});
  const LmlParts parts = logMarginalLikelihoodParts(prior, ds, 0.25);
  CHECK(parts.total == doctest::Approx(parts.fit + parts.complexity).epsilon(1e-10));
}

TEST_CASE("grid search reproduces the exhaustive best") {
  const Dataset ds = regression1d({-0.9, -0.4, 0.1, 0.5, 1.0},
                                  {0.8, 0.1, -0.6, -0.2, 0.9});
  const auto make = [](Scalar l, Scalar s2) { return Kernel::rbf(scalar1(l), s2); };
  const std::vector<Scalar> sigmas = logSpaced(0.2, 2.0, 5);
  const std::vector<Scalar> lengths = logSpaced(0.1, 1.5, 5);
  const GridSearchResult got =
      gridSearchLml(make, sigmas, lengths, ds, 0.1, Vector::Zero(1));

  double best = -1e300;
  Scalar best_s = 0, best_l = 0;
  for (Scalar s : sigmas)
    for (Scalar l : lengths) {
      const GpPrior prior = GpPrior::zeroMean(
          MultiOutputKernel::replicate(make(l, s * s), 1));
      const double lml = logMarginalLikelihood(prior, ds, 0.1);
      if (lml > best) {
        best = lml;
        best_s = s;
        best_l = l;
      }
    }
  CHECK(got.sigma == doctest::Approx(best_s));
  CHECK(got.lengthscale == doctest::Approx(best_l));
  CHECK(got.lml == doctest::Approx(best).epsilon(1e-12));
}
