#pragma once

#include "fsplaplace/types.hpp"

#include <Eigen/Cholesky>

#include <memory>
#include <string>
#include <vector>

namespace fsp {

// Covariance-function expression tree. Kernels are immutable after
// construction; hyperparameters are validated eagerly.
class Kernel {
 public:
  /// Lengthscale may be scalar (broadcast over dimensions) or per-dimension.
  static Kernel rbf(const Vector& lengthscale, Scalar variance = 1.0);
  static Kernel matern12(const Vector& lengthscale, Scalar variance = 1.0);
  static Kernel matern32(const Vector& lengthscale, Scalar variance = 1.0);
  static Kernel matern52(const Vector& lengthscale, Scalar variance = 1.0);
  static Kernel rationalQuadratic(const Vector& lengthscale, Scalar variance,
                                  Scalar alpha);
  static Kernel periodic(const Vector& lengthscale, Scalar variance,
                         Scalar period);
  /// Dot-product kernel with bias feature: k(x, x') = variance * (x.x' + 1).
  /// Matches a Gaussian weight prior with scale sqrt(variance) on [x; 1].
  static Kernel linear(Scalar variance = 1.0);

  static Kernel sum(const Kernel& a, const Kernel& b);
  static Kernel product(const Kernel& a, const Kernel& b);
  /// Amplitude scaling: covariance is multiplied by amplitude^2.
  static Kernel scaled(Scalar amplitude, const Kernel& k);

  Scalar operator()(const Vector& x, const Vector& y) const;

  bool stationary() const;

  /// Expression string in the config sub-language.
  std::string describe() const;

  struct Node;
  const Node& node() const { return *node_; }

 private:
  explicit Kernel(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Scalar eval(const Kernel& k, const Vector& x, const Vector& y);

/// Independent scalar kernels, one per output channel. The Gram over n
/// points is (n*O) x (n*O) with rows ordered by input then output index and
/// zero blocks across distinct outputs.
struct MultiOutputKernel {
  std::vector<Kernel> channels;

  Index outputDim() const { return static_cast<Index>(channels.size()); }

  static MultiOutputKernel replicate(const Kernel& k, Index num_outputs);
};

/// Dense cross-Gram between point sets; refuses above `entry_cap` entries.
Matrix gram(const MultiOutputKernel& k, const Matrix& X, const Matrix& Xp,
            Index entry_cap = 1 << 24);

/// K(X, X) v computed in row blocks, never holding more than `entry_cap`
/// kernel evaluations at once.
Vector gramMatvec(const MultiOutputKernel& k, const Matrix& X, const Vector& v,
                  Index entry_cap = 1 << 22);

/// diag K(X, X), length n*O.
Vector gramDiag(const MultiOutputKernel& k, const Matrix& X);

// Jitter policy for solves against kernel Gram matrices: tau * mean(diag) is
// added to the diagonal, with tau escalating by x10 on failure.
struct JitterPolicy {
  Scalar initial = 1e-8;
  Scalar max = 1e-4;
};

struct JitteredLlt {
  Eigen::LLT<Matrix> llt;
  Scalar jitter = 0.0;  // absolute value added to the diagonal
};

/// Cholesky of K + tau*mean(diag)*I. A factorization whose smallest pivot is
/// at the level of roundoff counts as failed. Throws NumericalError when the
/// ladder is exhausted.
JitteredLlt choleskyWithJitter(const Matrix& K, const JitterPolicy& policy = {});

}  // namespace fsp
