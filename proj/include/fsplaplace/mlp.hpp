#pragma once

#include "fsplaplace/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fsp {

enum class Activation { Tanh, Identity };

/// Fully-connected network: affine layers with the activation on hidden
/// layers only; the output layer is always affine.
struct MlpSpec {
  std::vector<Index> layer_widths;  // input dim, hidden widths..., output dim
  Activation activation = Activation::Tanh;

  Index inputDim() const { return layer_widths.front(); }
  Index outputDim() const { return layer_widths.back(); }
  Index numLayers() const { return static_cast<Index>(layer_widths.size()) - 1; }

  /// Total parameter count P.
  Index paramCount() const;

  /// Throws ConfigError unless there are >= 2 widths, all positive.
  void validate() const;
};

// Parameters are stored flat. Canonical order: for each layer, the weight
// matrix in row-major order (out x in), then the bias vector. Checkpoints
// depend on this ordering.
struct ParamVector {
  Vector values;

  Index size() const { return values.size(); }
};

/// Flat slice offsets of layer `l` inside a ParamVector.
struct LayerOffsets {
  Index weights;  // start of row-major weight block
  Index bias;     // start of bias block
  Index rows;     // fan-out
  Index cols;     // fan-in
};

LayerOffsets layerOffsets(const MlpSpec& spec, Index layer);

/// Glorot-style scaled-uniform weights, zero biases; deterministic per seed.
ParamVector initParams(const MlpSpec& spec, std::uint64_t seed);

/// Cached activations from a forward pass, consumed by reverse mode.
struct MlpWorkspace {
  std::vector<Matrix> layers;  // layers[0] = inputs, layers[L] = outputs
};

/// Batched evaluation; rows of `inputs` are data points.
Matrix forward(const MlpSpec& spec, const ParamVector& params,
               const Matrix& inputs);
Matrix forward(const MlpSpec& spec, const ParamVector& params,
               const Matrix& inputs, MlpWorkspace& ws);

/// J(x)^T u for a single input point and output cotangent u.
ParamVector vjp(const MlpSpec& spec, const ParamVector& params,
                const Vector& x, const Vector& cotangent);

/// sum_i J(x_i)^T u_i over a batch; `cotangents` is n x O.
ParamVector vjpSum(const MlpSpec& spec, const ParamVector& params,
                   const Matrix& inputs, const Matrix& cotangents);

/// Same, reusing activations from a prior forward(spec, params, inputs, ws).
ParamVector vjpSum(const MlpSpec& spec, const ParamVector& params,
                   const MlpWorkspace& ws, const Matrix& cotangents);

/// J(x) v for a single input point and parameter tangent v.
Vector jvp(const MlpSpec& spec, const ParamVector& params, const Vector& x,
           const ParamVector& tangent);

/// Stacked J(x_i) v over a batch; returns n x O.
Matrix jvpBatch(const MlpSpec& spec, const ParamVector& params,
                const Matrix& inputs, const ParamVector& tangent);

/// Dense Jacobian block, row (i, o) = d f_o(x_i) / d theta. Diagnostic scale
/// only: refuses when n*O*P exceeds `entry_cap`.
struct JacobianBlock {
  Matrix matrix;  // (n*O) x P, rows ordered by input then output index
};

JacobianBlock jacobian(const MlpSpec& spec, const ParamVector& params,
                       const Matrix& inputs, Index entry_cap = 50'000'000);

/// Checkpoint: one-line JSON header, then the flat parameter array as
/// little-endian 64-bit floats.
void saveCheckpoint(const std::string& path, const MlpSpec& spec,
                    const ParamVector& params);
void loadCheckpoint(const std::string& path, MlpSpec& spec,
                    ParamVector& params);

}  // namespace fsp
