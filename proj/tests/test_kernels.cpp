#include "doctest.h"

#include "fsplaplace/kernels.hpp"
#include "fsplaplace/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

using namespace fsp;

namespace {

Vector scalar1(double v) {
  Vector out(1);
  out << v;
  return out;
}

std::vector<Kernel> suiteKernels() {
  const Vector l = scalar1(0.7);
  return {
      Kernel::rbf(l, 1.3),
      Kernel::matern12(l, 0.8),
      Kernel::matern32(l, 1.0),
      Kernel::matern52(l, 2.0),
      Kernel::rationalQuadratic(l, 1.1, 0.9),
      Kernel::periodic(l, 1.0, 1.5),
      Kernel::sum(Kernel::rbf(l), Kernel::matern32(l, 0.5)),
      Kernel::product(Kernel::rbf(l), Kernel::periodic(l, 1.0, 2.0)),
      Kernel::scaled(0.5, Kernel::matern52(l)),
  };
}

Matrix randomPoints(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(n, d);
  for (Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(-2.0, 2.0);
  return X;
}

}  // namespace

TEST_CASE("closed-form evaluations") {
  const Vector x = scalar1(0.3);
  SUBCASE("rbf at zero distance equals the variance") {
    CHECK(eval(Kernel::rbf(scalar1(0.5), 1.0), x, x) == doctest::Approx(1.0));
    CHECK(eval(Kernel::rbf(scalar1(0.5), 2.5), x, x) == doctest::Approx(2.5));
  }
  SUBCASE("matern12 at unit distance is exp(-1)") {
    CHECK(eval(Kernel::matern12(scalar1(1.0), 1.0), scalar1(0.0), scalar1(1.0)) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("periodic kernel is exactly periodic") {
    const Kernel k = Kernel::periodic(scalar1(0.6), 1.2, 0.9);
    for (double v : {-1.3, 0.0, 0.4, 2.2})
      CHECK(eval(k, scalar1(v), scalar1(v + 0.9)) ==
            doctest::Approx(eval(k, scalar1(v), scalar1(v))).epsilon(1e-12));
  }
}

TEST_CASE("hyperparameter validation happens at construction") {
  CHECK_THROWS_AS(Kernel::rbf(scalar1(0.0)), ConfigError);
  CHECK_THROWS_AS(Kernel::rbf(scalar1(1.0), -1.0), ConfigError);
  CHECK_THROWS_AS(Kernel::periodic(scalar1(1.0), 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(Kernel::rationalQuadratic(scalar1(1.0), 1.0, -2.0), ConfigError);
  CHECK_THROWS_AS(Kernel::scaled(0.0, Kernel::rbf(scalar1(1.0))), ConfigError);
}

TEST_CASE("kernel symmetry on random pairs") {
  Rng rng(5);
  for (const Kernel& k : suiteKernels()) {
    for (int rep = 0; rep < 5; ++rep) {
      const Vector x = scalar1(rng.uniform(-3, 3));
      const Vector y = scalar1(rng.uniform(-3, 3));
      CHECK(eval(k, x, y) == doctest::Approx(eval(k, y, x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("stationary kernels depend only on the difference") {
  Rng rng(6);
  for (const Kernel& k : suiteKernels()) {
    if (!k.stationary()) continue;
    for (int rep = 0; rep < 5; ++rep) {
      const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
      const double shift = rng.uniform(-5, 5);
      CHECK(std::abs(eval(k, scalar1(a), scalar1(b)) -
                     eval(k, scalar1(a + shift), scalar1(b + shift))) <= 1e-12);
    }
  }
  CHECK_FALSE(Kernel::linear(1.0).stationary());
}

TEST_CASE("gram: one point, one output") {
  const MultiOutputKernel k = MultiOutputKernel::replicate(Kernel::rbf(scalar1(1.0), 2.0), 1);
  Matrix X(1, 1);
  X << 0.4;
  const Matrix G = gram(k, X, X);
  REQUIRE(G.rows() == 1);
  CHECK(G(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("gram matches elementwise evaluation and is block diagonal") {
  const Kernel k0 = Kernel::rbf(scalar1(0.8), 1.0);
  const Kernel k1 = Kernel::matern32(scalar1(0.5), 0.7);
  MultiOutputKernel mok;
  mok.channels = {k0, k1};
  const Matrix X = randomPoints(3, 1, 7);
  const Matrix G = gram(mok, X, X);
  REQUIRE(G.rows() == 6);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      CHECK(G(2 * i, 2 * j) ==
            doctest::Approx(eval(k0, X.row(i).transpose(), X.row(j).transpose())));
      CHECK(G(2 * i + 1, 2 * j + 1) ==
            doctest::Approx(eval(k1, X.row(i).transpose(), X.row(j).transpose())));
      CHECK(G(2 * i, 2 * j + 1) == 0.0);
      CHECK(G(2 * i + 1, 2 * j) == 0.0);
    }
  CHECK((G - G.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("duplicated points: plain Cholesky fails, jitter recovers") {
  const MultiOutputKernel k =
      MultiOutputKernel::replicate(Kernel::rbf(scalar1(0.5), 1.0), 1);
  Matrix X(4, 1);
  X << 0.2, 0.2, 0.2, 1.0;  // rank-deficient Gram
  const Matrix G = gram(k, X, X);
  JitterPolicy none;
  none.initial = 0.0;
  CHECK_THROWS_AS(choleskyWithJitter(G, none), NumericalError);
  const JitteredLlt j = choleskyWithJitter(G, JitterPolicy{});
  CHECK(j.jitter > 0.0);
  const Vector b = Vector::Ones(4);
  CHECK(j.llt.solve(b).allFinite());
}

TEST_CASE("gramMatvec agrees with the dense Gram") {
  const Kernel k0 = Kernel::rbf(scalar1(0.8), 1.0);
  MultiOutputKernel mok;
  mok.channels = {k0, Kernel::matern12(scalar1(1.2), 0.5)};
  const Matrix X = randomPoints(9, 2, 13);
  const Matrix G = gram(mok, X, X);
  Rng rng(17);

  SUBCASE("zero vector") {
    CHECK(gramMatvec(mok, X, Vector::Zero(18)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("basis vectors reproduce columns") {
    for (Index j : {0, 5, 17}) {
      Vector e = Vector::Zero(18);
      e[j] = 1.0;
      const Vector col = gramMatvec(mok, X, e);
      CHECK((col - G.col(j)).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SUBCASE("random vectors, including tiny blocks") {
    for (Index cap : {Index(4), Index(64), Index(1) << 22}) {
      const Vector v = rng.normalVector(18);
      const Vector y = gramMatvec(mok, X, v, cap);
      CHECK((y - G * v).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SUBCASE("single point") {
    Matrix X1(1, 2);
    X1 << 0.3, -0.4;
    Vector v = rng.normalVector(2);
    const Vector y = gramMatvec(mok, X1, v);
    CHECK(y[0] == doctest::Approx(eval(k0, X1.row(0).transpose(),
                                       X1.row(0).transpose()) * v[0]));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(gramMatvec(mok, X, Vector::Zero(7)), ShapeError);
  }
}

TEST_CASE("Gram matrices are positive semidefinite up to tolerance") {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const Matrix X = randomPoints(32, 1, seed);
    for (const Kernel& k : suiteKernels()) {
      const Matrix G = gram(MultiOutputKernel::replicate(k, 1), X, X);
      Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >=
            -1e-8 * G.trace() / static_cast<double>(X.rows()));
    }
  }
}

TEST_CASE("sum/product/scaled algebra at the Gram level") {
  const Vector l = scalar1(0.6);
  const Kernel a = Kernel::rbf(l, 1.4);
  const Kernel b = Kernel::matern52(l, 0.9);
  const Matrix X = randomPoints(6, 1, 31);
  const auto G = [&](const Kernel& k) {
    return gram(MultiOutputKernel::replicate(k, 1), X, X);
  };
  CHECK((G(Kernel::sum(a, b)) - (G(a) + G(b))).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((G(Kernel::product(a, b)) - G(a).cwiseProduct(G(b))).cwiseAbs().maxCoeff() <=
        1e-12);
  const double c = 1.7;
  CHECK((G(Kernel::scaled(c, a)) - c * c * G(a)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("describe round-trips the expression shape") {
  const Kernel k = Kernel::scaled(
      0.5, Kernel::product(Kernel::rbf(scalar1(1.0)),
                           Kernel::periodic(scalar1(0.5), 1.0, 1.0)));
  CHECK(k.describe() ==
        "scaled(0.5, product(rbf(l=1, s2=1), periodic(l=0.5, s2=1, T=1)))");
}
