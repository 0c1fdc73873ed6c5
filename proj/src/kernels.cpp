#include "fsplaplace/kernels.hpp"

#include <cmath>
#include <sstream>

namespace fsp {

struct Kernel::Node {
  enum class Tag { Rbf, M12, M32, M52, Rq, Periodic, Linear, Sum, Product, Scaled };
  Tag tag;
  Vector lengthscale;
  Scalar variance = 1.0;
  Scalar period = 0.0;
  Scalar alpha = 0.0;
  Scalar amplitude = 0.0;
  std::shared_ptr<const Node> left, right;
};

namespace {

using Tag = Kernel::Node::Tag;

void requirePositive(Scalar v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string("kernel hyperparameter ") + name +
                      " must be strictly positive");
}

void requirePositive(const Vector& v, const char* name) {
  if (v.size() == 0)
    throw ConfigError(std::string("kernel hyperparameter ") + name +
                      " must not be empty");
  for (Index i = 0; i < v.size(); ++i) requirePositive(v[i], name);
}

std::shared_ptr<const Kernel::Node> makeStationary(Tag tag, const Vector& l,
                                                   Scalar variance) {
  requirePositive(l, "lengthscale");
  requirePositive(variance, "variance");
  auto node = std::make_shared<Kernel::Node>();
  node->tag = tag;
  node->lengthscale = l;
  node->variance = variance;
  return node;
}

Scalar lengthscaleAt(const Vector& l, Index dim) {
  return l.size() == 1 ? l[0] : l[dim];
}

void checkDims(const Kernel::Node& node, Index dim) {
  if (node.lengthscale.size() > 1 && node.lengthscale.size() != dim)
    throw ShapeError("per-dimension lengthscale has " +
                     std::to_string(node.lengthscale.size()) +
                     " entries but inputs have dimension " + std::to_string(dim));
}

/// sum_d ((x_d - y_d) / l_d)^2
Scalar scaledSqDist(const Kernel::Node& node, const Vector& x, const Vector& y) {
  checkDims(node, x.size());
  Scalar r2 = 0.0;
  for (Index d = 0; d < x.size(); ++d) {
    const Scalar t = (x[d] - y[d]) / lengthscaleAt(node.lengthscale, d);
    r2 += t * t;
  }
  return r2;
}

Scalar evalNode(const Kernel::Node& node, const Vector& x, const Vector& y) {
  switch (node.tag) {
    case Tag::Rbf:
      return node.variance * std::exp(-0.5 * scaledSqDist(node, x, y));
    case Tag::M12:
      return node.variance * std::exp(-std::sqrt(scaledSqDist(node, x, y)));
    case Tag::M32: {
      const Scalar r = std::sqrt(3.0 * scaledSqDist(node, x, y));
      return node.variance * (1.0 + r) * std::exp(-r);
    }
    case Tag::M52: {
      const Scalar r = std::sqrt(5.0 * scaledSqDist(node, x, y));
      return node.variance * (1.0 + r + r * r / 3.0) * std::exp(-r);
    }
    case Tag::Rq:
      return node.variance *
             std::pow(1.0 + scaledSqDist(node, x, y) / (2.0 * node.alpha),
                      -node.alpha);
    case Tag::Periodic: {
      checkDims(node, x.size());
      Scalar acc = 0.0;
      for (Index d = 0; d < x.size(); ++d) {
        const Scalar s =
            std::sin(3.14159265358979323846 * (x[d] - y[d]) / node.period) /
            lengthscaleAt(node.lengthscale, d);
        acc += s * s;
      }
      return node.variance * std::exp(-2.0 * acc);
    }
    case Tag::Linear:
      return node.variance * (x.dot(y) + 1.0);
    case Tag::Sum:
      return evalNode(*node.left, x, y) + evalNode(*node.right, x, y);
    case Tag::Product:
      return evalNode(*node.left, x, y) * evalNode(*node.right, x, y);
    case Tag::Scaled:
      return node.amplitude * node.amplitude * evalNode(*node.left, x, y);
  }
  throw std::logic_error("unreachable kernel tag");
}

bool stationaryNode(const Kernel::Node& node) {
  switch (node.tag) {
    case Tag::Linear:
      return false;
    case Tag::Sum:
    case Tag::Product:
      return stationaryNode(*node.left) && stationaryNode(*node.right);
    case Tag::Scaled:
      return stationaryNode(*node.left);
    default:
      return true;
  }
}

std::string describeLengthscale(const Vector& l) {
  std::ostringstream os;
  if (l.size() == 1) {
    os << l[0];
  } else {
    os << '[';
    for (Index i = 0; i < l.size(); ++i) os << (i ? "," : "") << l[i];
    os << ']';
  }
  return os.str();
}

std::string describeNode(const Kernel::Node& node) {
  std::ostringstream os;
  switch (node.tag) {
    case Tag::Rbf:
      os << "rbf(l=" << describeLengthscale(node.lengthscale)
         << ", s2=" << node.variance << ")";
      break;
    case Tag::M12:
      os << "matern12(l=" << describeLengthscale(node.lengthscale)
         << ", s2=" << node.variance << ")";
      break;
    case Tag::M32:
      os << "matern32(l=" << describeLengthscale(node.lengthscale)
         << ", s2=" << node.variance << ")";
      break;
    case Tag::M52:
      os << "matern52(l=" << describeLengthscale(node.lengthscale)
         << ", s2=" << node.variance << ")";
      break;
    case Tag::Rq:
      os << "rq(l=" << describeLengthscale(node.lengthscale)
         << ", s2=" << node.variance << ", alpha=" << node.alpha << ")";
      break;
    case Tag::Periodic:
      os << "periodic(l=" << describeLengthscale(node.lengthscale)
         << ", s2=" << node.variance << ", T=" << node.period << ")";
      break;
    case Tag::Linear:
      os << "linear(var=" << node.variance << ")";
      break;
    case Tag::Sum:
      os << "sum(" << describeNode(*node.left) << ", "
         << describeNode(*node.right) << ")";
      break;
    case Tag::Product:
      os << "product(" << describeNode(*node.left) << ", "
         << describeNode(*node.right) << ")";
      break;
    case Tag::Scaled:
      os << "scaled(" << node.amplitude << ", " << describeNode(*node.left)
         << ")";
      break;
  }
  return os.str();
}

}  // namespace

Kernel Kernel::rbf(const Vector& l, Scalar variance) {
  return Kernel(makeStationary(Tag::Rbf, l, variance));
}
Kernel Kernel::matern12(const Vector& l, Scalar variance) {
  return Kernel(makeStationary(Tag::M12, l, variance));
}
Kernel Kernel::matern32(const Vector& l, Scalar variance) {
  return Kernel(makeStationary(Tag::M32, l, variance));
}
Kernel Kernel::matern52(const Vector& l, Scalar variance) {
  return Kernel(makeStationary(Tag::M52, l, variance));
}

Kernel Kernel::rationalQuadratic(const Vector& l, Scalar variance, Scalar alpha) {
  requirePositive(alpha, "alpha");
  auto node = std::const_pointer_cast<Node>(makeStationary(Tag::Rq, l, variance));
  node->alpha = alpha;
  return Kernel(node);
}

Kernel Kernel::periodic(const Vector& l, Scalar variance, Scalar period) {
  requirePositive(period, "period");
  auto node =
      std::const_pointer_cast<Node>(makeStationary(Tag::Periodic, l, variance));
  node->period = period;
  return Kernel(node);
}

Kernel Kernel::linear(Scalar variance) {
  requirePositive(variance, "variance");
  auto node = std::make_shared<Node>();
  node->tag = Tag::Linear;
  node->variance = variance;
  return Kernel(node);
}

Kernel Kernel::sum(const Kernel& a, const Kernel& b) {
  auto node = std::make_shared<Node>();
  node->tag = Tag::Sum;
  node->left = a.node_;
  node->right = b.node_;
  return Kernel(node);
}

Kernel Kernel::product(const Kernel& a, const Kernel& b) {
  auto node = std::make_shared<Node>();
  node->tag = Tag::Product;
  node->left = a.node_;
  node->right = b.node_;
  return Kernel(node);
}

Kernel Kernel::scaled(Scalar amplitude, const Kernel& k) {
  requirePositive(amplitude, "amplitude");
  auto node = std::make_shared<Node>();
  node->tag = Tag::Scaled;
  node->amplitude = amplitude;
  node->left = k.node_;
  return Kernel(node);
}

Scalar Kernel::operator()(const Vector& x, const Vector& y) const {
  if (x.size() != y.size())
    throw ShapeError("kernel arguments have mismatched dimensions");
  return evalNode(*node_, x, y);
}

bool Kernel::stationary() const { return stationaryNode(*node_); }

std::string Kernel::describe() const { return describeNode(*node_); }

Scalar eval(const Kernel& k, const Vector& x, const Vector& y) { return k(x, y); }

MultiOutputKernel MultiOutputKernel::replicate(const Kernel& k, Index num_outputs) {
  if (num_outputs <= 0)
    throw ConfigError("multi-output kernel needs at least one channel");
  MultiOutputKernel mok;
  mok.channels.assign(static_cast<std::size_t>(num_outputs), k);
  return mok;
}

Matrix gram(const MultiOutputKernel& k, const Matrix& X, const Matrix& Xp,
            Index entry_cap) {
  if (X.cols() != Xp.cols())
    throw ShapeError("gram point sets have mismatched dimensions");
  const Index O = k.outputDim();
  const Index n = X.rows();
  const Index np = Xp.rows();
  if (n * O * np * O > entry_cap)
    throw NumericalError("dense Gram of " + std::to_string(n * O * np * O) +
                         " entries exceeds the cap");
  Matrix G = Matrix::Zero(n * O, np * O);
  for (Index o = 0; o < O; ++o) {
    const Kernel& ker = k.channels[static_cast<std::size_t>(o)];
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < np; ++j)
        G(i * O + o, j * O + o) = ker(X.row(i).transpose(), Xp.row(j).transpose());
  }
  return G;
}

Vector gramMatvec(const MultiOutputKernel& k, const Matrix& X, const Vector& v,
                  Index entry_cap) {
  const Index O = k.outputDim();
  const Index n = X.rows();
  if (v.size() != n * O)
    throw ShapeError("gramMatvec vector has length " + std::to_string(v.size()) +
                     ", expected " + std::to_string(n * O));
  Vector y = Vector::Zero(n * O);
  const Index block = std::max<Index>(1, entry_cap / std::max<Index>(1, n));
  for (Index o = 0; o < O; ++o) {
    const Kernel& ker = k.channels[static_cast<std::size_t>(o)];
    for (Index i0 = 0; i0 < n; i0 += block) {
      const Index rows = std::min(block, n - i0);
      Matrix K(rows, n);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < n; ++j)
          K(i, j) = ker(X.row(i0 + i).transpose(), X.row(j).transpose());
      Vector vo(n);
      for (Index j = 0; j < n; ++j) vo[j] = v[j * O + o];
      const Vector yo = K * vo;
      for (Index i = 0; i < rows; ++i) y[(i0 + i) * O + o] = yo[i];
    }
  }
  return y;
}

Vector gramDiag(const MultiOutputKernel& k, const Matrix& X) {
  const Index O = k.outputDim();
  const Index n = X.rows();
  Vector d(n * O);
  for (Index i = 0; i < n; ++i)
    for (Index o = 0; o < O; ++o)
      d[i * O + o] = k.channels[static_cast<std::size_t>(o)](
          X.row(i).transpose(), X.row(i).transpose());
  return d;
}

JitteredLlt choleskyWithJitter(const Matrix& K, const JitterPolicy& policy) {
  if (K.rows() != K.cols()) throw ShapeError("Cholesky needs a square matrix");
  const Index n = K.rows();
  Scalar mean_diag = K.diagonal().mean();
  if (!(mean_diag > 0.0)) mean_diag = 1.0;

  auto attempt = [&](Scalar jitter) -> JitteredLlt {
    Matrix Kj = K;
    Kj.diagonal().array() += jitter;
    JitteredLlt out{Eigen::LLT<Matrix>(Kj), jitter};
    if (out.llt.info() != Eigen::Success) out.jitter = -1.0;  // flag failure
    else {
      // Pivots at roundoff level mean the factor is unusable for solves.
      const Scalar min_pivot = out.llt.matrixLLT().diagonal().minCoeff();
      if (min_pivot * min_pivot <=
          static_cast<Scalar>(n) * 2.220446049250313e-16 * mean_diag)
        out.jitter = -1.0;
    }
    return out;
  };

  if (!(policy.initial > 0.0)) {
    JitteredLlt out = attempt(0.0);
    if (out.jitter < 0.0)
      throw NumericalError("Cholesky failed and jitter is disabled");
    return out;
  }
  for (Scalar tau = policy.initial; tau <= policy.max * (1.0 + 1e-12); tau *= 10.0) {
    JitteredLlt out = attempt(tau * mean_diag);
    if (out.jitter >= 0.0) return out;
  }
  throw NumericalError("Cholesky failed after jitter escalation to " +
                       std::to_string(policy.max));
}

}  // namespace fsp
