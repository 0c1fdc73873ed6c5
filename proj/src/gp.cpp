#include "fsplaplace/gp.hpp"

#include "fsplaplace/rng.hpp"

#include <cmath>

namespace fsp {

namespace {
constexpr Scalar kLogTwoPi = 1.8378770664093454835606594728112;

Vector flattenRowMajor(const Matrix& m) {
  Vector v(m.size());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  return v;
}
}  // namespace

Matrix GpPrior::meanAt(const Matrix& X) const {
  if (mean_const.size() != outputDim())
    throw ShapeError("prior mean has wrong number of outputs");
  Matrix m(X.rows(), outputDim());
  m.rowwise() = mean_const.transpose();
  return m;
}

Vector GpPrior::meanFlat(const Matrix& X) const { return flattenRowMajor(meanAt(X)); }

GpPrior GpPrior::zeroMean(const MultiOutputKernel& k, const JitterPolicy& jitter) {
  return GpPrior{k, Vector::Zero(k.outputDim()), jitter};
}

GpPrior GpPrior::constantMean(const MultiOutputKernel& k, const Vector& mean,
                              const JitterPolicy& jitter) {
  if (mean.size() != k.outputDim())
    throw ShapeError("constant mean length must equal the output dimension");
  return GpPrior{k, mean, jitter};
}

Matrix samplePrior(const GpPrior& prior, const Matrix& X, Index n_samples,
                   std::uint64_t seed) {
  const Matrix K = gram(prior.kernel, X, X);
  const JitteredLlt fac = choleskyWithJitter(K, prior.jitter);
  const Matrix L = fac.llt.matrixL();
  const Vector m = prior.meanFlat(X);
  Rng rng(seed);
  Matrix samples(n_samples, K.rows());
  for (Index s = 0; s < n_samples; ++s)
    samples.row(s) = (m + L * rng.normalVector(K.rows())).transpose();
  return samples;
}

GpPosterior gpRegress(const GpPrior& prior, const Dataset& data, Scalar sigma_n) {
  if (data.task != TaskKind::Regression)
    throw ConfigError("gpRegress needs a regression dataset");
  if (!(sigma_n > 0.0)) throw ConfigError("gpRegress needs sigma_n > 0");
  data.validate();
  if (data.size() > 0 && data.outputDim() != prior.outputDim())
    throw ShapeError("dataset outputs do not match the prior");

  GpPosterior post;
  post.prior = prior;
  post.noise_sigma = sigma_n;
  post.train_inputs = data.inputs;
  if (data.size() == 0) return post;  // posterior equals the prior

  Matrix K = gram(prior.kernel, data.inputs, data.inputs);
  K.diagonal().array() += sigma_n * sigma_n;
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) {
    const JitteredLlt fac = choleskyWithJitter(K, prior.jitter);
    llt = fac.llt;
  }
  const Vector resid = flattenRowMajor(data.targets) - prior.meanFlat(data.inputs);
  post.chol = llt;
  post.alpha = llt.solve(resid);
  return post;
}

Matrix GpPosterior::predictMean(const Matrix& Xq) const {
  const Index O = prior.outputDim();
  Matrix m = prior.meanAt(Xq);
  if (train_inputs.rows() == 0) return m;
  const Matrix Kqt = gram(prior.kernel, Xq, train_inputs);
  const Vector corr = Kqt * alpha;
  for (Index i = 0; i < Xq.rows(); ++i)
    for (Index o = 0; o < O; ++o) m(i, o) += corr[i * O + o];
  return m;
}

Vector GpPosterior::predictVariance(const Matrix& Xq) const {
  Vector var = gramDiag(prior.kernel, Xq);
  if (train_inputs.rows() == 0) return var;
  const Matrix Kqt = gram(prior.kernel, Xq, train_inputs);
  const Matrix solved = chol.solve(Kqt.transpose());
  for (Index r = 0; r < var.size(); ++r)
    var[r] -= Kqt.row(r).dot(solved.col(r));
  return var.cwiseMax(0.0);
}

LmlParts logMarginalLikelihoodParts(const GpPrior& prior, const Dataset& data,
                                    Scalar sigma_n) {
  if (data.task != TaskKind::Regression)
    throw ConfigError("log marginal likelihood needs a regression dataset");
  data.validate();
  Matrix K = gram(prior.kernel, data.inputs, data.inputs);
  K.diagonal().array() += sigma_n * sigma_n;
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) {
    const JitteredLlt fac = choleskyWithJitter(K, prior.jitter);
    llt = fac.llt;
  }
  const Vector resid = flattenRowMajor(data.targets) - prior.meanFlat(data.inputs);
  const Index n = K.rows();
  LmlParts parts;
  parts.fit = -0.5 * resid.dot(llt.solve(resid));
  const Scalar log_det =
      2.0 * llt.matrixLLT().diagonal().array().log().sum();
  parts.complexity = -0.5 * log_det - 0.5 * static_cast<Scalar>(n) * kLogTwoPi;
  parts.total = parts.fit + parts.complexity;
  return parts;
}

Scalar logMarginalLikelihood(const GpPrior& prior, const Dataset& data,
                             Scalar sigma_n) {
  return logMarginalLikelihoodParts(prior, data, sigma_n).total;
}

GridSearchResult gridSearchLml(
    const std::function<Kernel(Scalar lengthscale, Scalar variance)>& make_kernel,
    const std::vector<Scalar>& sigmas, const std::vector<Scalar>& lengthscales,
    const Dataset& data, Scalar sigma_n, const Vector& mean_const) {
  if (sigmas.empty() || lengthscales.empty())
    throw ConfigError("grid search needs nonempty candidate lists");
  GridSearchResult best;
  bool first = true;
  for (const Scalar s : sigmas)
    for (const Scalar l : lengthscales) {
      const MultiOutputKernel mok =
          MultiOutputKernel::replicate(make_kernel(l, s * s), mean_const.size());
      const GpPrior prior = GpPrior::constantMean(mok, mean_const);
      const Scalar lml = logMarginalLikelihood(prior, data, sigma_n);
      if (first || lml > best.lml) {
        best = GridSearchResult{s, l, lml};
        first = false;
      }
    }
  return best;
}

std::vector<Scalar> logSpaced(Scalar lo, Scalar hi, Index count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1)
    throw ConfigError("logSpaced needs 0 < lo <= hi and count >= 1");
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  const Scalar step = (std::log(hi) - std::log(lo)) / static_cast<Scalar>(count - 1);
  for (Index i = 0; i < count; ++i)
    out.push_back(std::exp(std::log(lo) + step * static_cast<Scalar>(i)));
  return out;
}

}  // namespace fsp
