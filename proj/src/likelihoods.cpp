#include "fsplaplace/likelihoods.hpp"

#include <cmath>

namespace fsp {

namespace {
constexpr Scalar kTwoPi = 6.283185307179586476925286766559;

void checkClassTarget(const Likelihood& lik, const Target& y) {
  if (y.label < 0 || y.label >= lik.num_classes)
    throw std::domain_error("class label " + std::to_string(y.label) +
                            " outside {0,...," +
                            std::to_string(lik.num_classes - 1) + "}");
}

void checkRegressionTarget(const Target& y, const Vector& f) {
  if (y.value.size() != f.size())
    throw ShapeError("target and prediction have mismatched lengths");
}
}  // namespace

Likelihood Likelihood::gaussian(Scalar sigma_n) {
  if (!(sigma_n > 0.0))
    throw ConfigError("Gaussian likelihood needs sigma_n > 0");
  Likelihood lik;
  lik.kind = Kind::Gaussian;
  lik.noise_sigma = sigma_n;
  return lik;
}

Likelihood Likelihood::categorical(Index num_classes) {
  if (num_classes < 2)
    throw ConfigError("categorical likelihood needs at least two classes");
  Likelihood lik;
  lik.kind = Kind::Categorical;
  lik.num_classes = num_classes;
  return lik;
}

Vector softmax(const Vector& f) {
  const Scalar m = f.maxCoeff();
  Vector p = (f.array() - m).exp();
  p /= p.sum();
  return p;
}

Scalar nll(const Likelihood& lik, const Target& y, const Vector& f) {
  if (lik.kind == Likelihood::Kind::Gaussian) {
    checkRegressionTarget(y, f);
    const Scalar s2 = lik.noise_sigma * lik.noise_sigma;
    return 0.5 * (y.value - f).squaredNorm() / s2 +
           0.5 * static_cast<Scalar>(f.size()) * std::log(kTwoPi * s2);
  }
  checkClassTarget(lik, y);
  if (f.size() != lik.num_classes)
    throw ShapeError("logit vector length does not match num_classes");
  const Scalar m = f.maxCoeff();
  const Scalar lse = m + std::log((f.array() - m).exp().sum());
  return lse - f[y.label];
}

Vector nllGrad(const Likelihood& lik, const Target& y, const Vector& f) {
  if (lik.kind == Likelihood::Kind::Gaussian) {
    checkRegressionTarget(y, f);
    return (f - y.value) / (lik.noise_sigma * lik.noise_sigma);
  }
  checkClassTarget(lik, y);
  Vector g = softmax(f);
  g[y.label] -= 1.0;
  return g;
}

Matrix curvature(const Likelihood& lik, const Target& /*y*/, const Vector& f) {
  if (lik.kind == Likelihood::Kind::Gaussian) {
    const Index O = f.size();
    return Matrix::Identity(O, O) / (lik.noise_sigma * lik.noise_sigma);
  }
  const Vector p = softmax(f);
  return Matrix(p.asDiagonal()) - p * p.transpose();
}

}  // namespace fsp
