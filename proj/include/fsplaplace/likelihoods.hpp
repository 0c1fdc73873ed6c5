#pragma once

#include "fsplaplace/types.hpp"

namespace fsp {

enum class TaskKind { Regression, Classification };

/// Target of a single observation: a real vector for regression, a class
/// label for classification.
struct Target {
  Vector value;    // regression
  Index label = -1;  // classification

  static Target regression(const Vector& y) { return Target{y, -1}; }
  static Target regression(Scalar y) {
    Vector v(1);
    v << y;
    return Target{v, -1};
  }
  static Target classification(Index label) { return Target{Vector(), label}; }
};

// Per-observation negative log-likelihood with its PSD output-space
// curvature block (the GGN form, independent of the target).
struct Likelihood {
  enum class Kind { Gaussian, Categorical };
  Kind kind = Kind::Gaussian;
  Scalar noise_sigma = 0.1;  // Gaussian, homoskedastic
  Index num_classes = 0;     // Categorical

  static Likelihood gaussian(Scalar sigma_n);
  static Likelihood categorical(Index num_classes);

  Index outputDim(Index regression_outputs) const {
    return kind == Kind::Categorical ? num_classes : regression_outputs;
  }
};

/// -log p(y | f); Gaussian: 0.5*||y-f||^2/s^2 + (O/2) log(2 pi s^2),
/// Categorical: logsumexp(f) - f_y.
Scalar nll(const Likelihood& lik, const Target& y, const Vector& f);

/// Gradient of nll w.r.t. f.
Vector nllGrad(const Likelihood& lik, const Target& y, const Vector& f);

/// PSD curvature Lambda_i = -d^2_f log p(y | f). Gaussian: I/s^2;
/// Categorical: diag(p) - p p^T with p = softmax(f). Target-independent.
Matrix curvature(const Likelihood& lik, const Target& y, const Vector& f);

Vector softmax(const Vector& f);

}  // namespace fsp
