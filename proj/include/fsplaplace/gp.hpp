#pragma once

#include "fsplaplace/datasets.hpp"
#include "fsplaplace/kernels.hpp"
#include "fsplaplace/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fsp {

/// Function-space prior: constant mean per output channel plus a
/// multi-output kernel.
struct GpPrior {
  MultiOutputKernel kernel;
  Vector mean_const;  // length O
  JitterPolicy jitter;

  Index outputDim() const { return kernel.outputDim(); }

  /// m(X) as an n x O matrix.
  Matrix meanAt(const Matrix& X) const;
  /// m(X) flattened to n*O, row-major over (point, output).
  Vector meanFlat(const Matrix& X) const;

  static GpPrior zeroMean(const MultiOutputKernel& k,
                          const JitterPolicy& jitter = {});
  static GpPrior constantMean(const MultiOutputKernel& k, const Vector& mean,
                              const JitterPolicy& jitter = {});
};

/// Draws from the prior at fixed points; rows are samples, columns follow
/// the flat (point, output) ordering. Seeded and reproducible.
Matrix samplePrior(const GpPrior& prior, const Matrix& X, Index n_samples,
                   std::uint64_t seed);

/// Conjugate GP regression posterior (dense, desk scale).
struct GpPosterior {
  GpPrior prior;
  Scalar noise_sigma = 0.0;
  Matrix train_inputs;  // n x d
  Eigen::LLT<Matrix> chol;  // K + sigma_n^2 I + jitter if needed
  Vector alpha;             // (K + sigma_n^2 I)^{-1} (y - m)

  Matrix predictMean(const Matrix& Xq) const;     // nq x O
  Vector predictVariance(const Matrix& Xq) const;  // nq*O, clamped >= 0
};

GpPosterior gpRegress(const GpPrior& prior, const Dataset& data, Scalar sigma_n);

struct LmlParts {
  Scalar fit = 0.0;         // -0.5 r^T (K + s^2 I)^{-1} r
  Scalar complexity = 0.0;  // -0.5 log det - (n/2) log(2 pi)
  Scalar total = 0.0;
};

LmlParts logMarginalLikelihoodParts(const GpPrior& prior, const Dataset& data,
                                    Scalar sigma_n);
Scalar logMarginalLikelihood(const GpPrior& prior, const Dataset& data,
                             Scalar sigma_n);

/// Exhaustive grid search over (amplitude sigma, lengthscale) maximizing the
/// log marginal likelihood; deterministic first-maximum tie-break.
struct GridSearchResult {
  Scalar sigma = 0.0;
  Scalar lengthscale = 0.0;
  Scalar lml = 0.0;
};

GridSearchResult gridSearchLml(
    const std::function<Kernel(Scalar lengthscale, Scalar variance)>& make_kernel,
    const std::vector<Scalar>& sigmas, const std::vector<Scalar>& lengthscales,
    const Dataset& data, Scalar sigma_n, const Vector& mean_const);

/// Log-spaced grid of `count` values between lo and hi inclusive.
std::vector<Scalar> logSpaced(Scalar lo, Scalar hi, Index count);

}  // namespace fsp
