#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace fsp {

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

// Row-major view used when flattening weight matrices into parameter vectors.
using RowMajorMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Mismatched dimensions between arguments.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid configuration (bad file, bad hyperparameter, empty pool, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Irrecoverable numerical failure (Cholesky breakdown, NaN in objective, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fsp
