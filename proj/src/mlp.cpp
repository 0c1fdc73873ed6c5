#include "fsplaplace/mlp.hpp"

#include "fsplaplace/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstring>
#include <fstream>

namespace fsp {

namespace {

using WeightMap = Eigen::Map<const RowMajorMatrix>;
using BiasMap = Eigen::Map<const Vector>;
using WeightMutMap = Eigen::Map<RowMajorMatrix>;
using BiasMutMap = Eigen::Map<Vector>;

void checkParams(const MlpSpec& spec, const ParamVector& params) {
  if (params.size() != spec.paramCount())
    throw ShapeError("parameter vector has length " +
                     std::to_string(params.size()) + ", spec requires " +
                     std::to_string(spec.paramCount()));
  if (!params.values.allFinite())
    throw ShapeError("parameter vector contains non-finite entries");
}

void checkInputs(const MlpSpec& spec, const Matrix& inputs) {
  if (inputs.cols() != spec.inputDim())
    throw ShapeError("inputs have " + std::to_string(inputs.cols()) +
                     " columns, spec input dim is " +
                     std::to_string(spec.inputDim()));
  if (!inputs.allFinite())
    throw ShapeError("inputs contain non-finite entries");
}

}  // namespace

Index MlpSpec::paramCount() const {
  validate();
  Index p = 0;
  for (Index l = 0; l + 1 < static_cast<Index>(layer_widths.size()); ++l)
    p += layer_widths[l + 1] * (layer_widths[l] + 1);
  return p;
}

void MlpSpec::validate() const {
  if (layer_widths.size() < 2)
    throw ConfigError("MlpSpec needs at least input and output widths");
  for (Index w : layer_widths)
    if (w <= 0) throw ConfigError("MlpSpec widths must be positive");
}

LayerOffsets layerOffsets(const MlpSpec& spec, Index layer) {
  Index off = 0;
  for (Index l = 0; l < layer; ++l)
    off += spec.layer_widths[l + 1] * (spec.layer_widths[l] + 1);
  const Index rows = spec.layer_widths[layer + 1];
  const Index cols = spec.layer_widths[layer];
  return LayerOffsets{off, off + rows * cols, rows, cols};
}

ParamVector initParams(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  ParamVector params{Vector::Zero(spec.paramCount())};
  for (Index l = 0; l < spec.numLayers(); ++l) {
    const LayerOffsets lo = layerOffsets(spec, l);
    const Scalar bound = std::sqrt(6.0 / static_cast<Scalar>(lo.rows + lo.cols));
    for (Index i = 0; i < lo.rows * lo.cols; ++i)
      params.values[lo.weights + i] = rng.uniform(-bound, bound);
  }
  return params;
}

Matrix forward(const MlpSpec& spec, const ParamVector& params,
               const Matrix& inputs) {
  MlpWorkspace ws;
  return forward(spec, params, inputs, ws);
}

Matrix forward(const MlpSpec& spec, const ParamVector& params,
               const Matrix& inputs, MlpWorkspace& ws) {
  checkParams(spec, params);
  checkInputs(spec, inputs);
  const Index num_layers = spec.numLayers();
  ws.layers.assign(static_cast<std::size_t>(num_layers) + 1, Matrix());
  ws.layers[0] = inputs;
  for (Index l = 0; l < num_layers; ++l) {
    const LayerOffsets lo = layerOffsets(spec, l);
    WeightMap W(params.values.data() + lo.weights, lo.rows, lo.cols);
    BiasMap b(params.values.data() + lo.bias, lo.rows);
    Matrix pre = ws.layers[l] * W.transpose();
    pre.rowwise() += b.transpose();
    if (l + 1 < num_layers && spec.activation == Activation::Tanh)
      ws.layers[l + 1] = pre.array().tanh().matrix();
    else
      ws.layers[l + 1] = std::move(pre);
  }
  return ws.layers.back();
}

ParamVector vjpSum(const MlpSpec& spec, const ParamVector& params,
                   const MlpWorkspace& ws, const Matrix& cotangents) {
  const Index num_layers = spec.numLayers();
  if (cotangents.rows() != ws.layers[0].rows() ||
      cotangents.cols() != spec.outputDim())
    throw ShapeError("cotangent block has wrong shape");

  ParamVector grad{Vector::Zero(spec.paramCount())};
  Matrix delta = cotangents;  // d(sum_i u_i^T f_i) / d pre-activation
  for (Index l = num_layers - 1; l >= 0; --l) {
    const LayerOffsets lo = layerOffsets(spec, l);
    WeightMap W(params.values.data() + lo.weights, lo.rows, lo.cols);
    WeightMutMap dW(grad.values.data() + lo.weights, lo.rows, lo.cols);
    BiasMutMap db(grad.values.data() + lo.bias, lo.rows);
    dW = delta.transpose() * ws.layers[l];
    db = delta.colwise().sum().transpose();
    if (l > 0) {
      Matrix back = delta * W;
      if (spec.activation == Activation::Tanh)
        back.array() *= 1.0 - ws.layers[l].array().square();
      delta = std::move(back);
    }
  }
  return grad;
}

ParamVector vjpSum(const MlpSpec& spec, const ParamVector& params,
                   const Matrix& inputs, const Matrix& cotangents) {
  MlpWorkspace ws;
  forward(spec, params, inputs, ws);
  return vjpSum(spec, params, ws, cotangents);
}

ParamVector vjp(const MlpSpec& spec, const ParamVector& params,
                const Vector& x, const Vector& cotangent) {
  if (cotangent.size() != spec.outputDim())
    throw ShapeError("cotangent has length " + std::to_string(cotangent.size()) +
                     ", output dim is " + std::to_string(spec.outputDim()));
  if (!cotangent.allFinite())
    throw ShapeError("cotangent contains non-finite entries");
  return vjpSum(spec, params, Matrix(x.transpose()),
                Matrix(cotangent.transpose()));
}

Matrix jvpBatch(const MlpSpec& spec, const ParamVector& params,
                const Matrix& inputs, const ParamVector& tangent) {
  checkParams(spec, params);
  checkInputs(spec, inputs);
  if (tangent.size() != spec.paramCount())
    throw ShapeError("tangent has length " + std::to_string(tangent.size()) +
                     ", spec requires " + std::to_string(spec.paramCount()));

  const Index num_layers = spec.numLayers();
  const Index n = inputs.rows();
  Matrix z = inputs;
  Matrix dz = Matrix::Zero(n, spec.inputDim());
  for (Index l = 0; l < num_layers; ++l) {
    const LayerOffsets lo = layerOffsets(spec, l);
    WeightMap W(params.values.data() + lo.weights, lo.rows, lo.cols);
    BiasMap b(params.values.data() + lo.bias, lo.rows);
    WeightMap dW(tangent.values.data() + lo.weights, lo.rows, lo.cols);
    BiasMap db(tangent.values.data() + lo.bias, lo.rows);
    Matrix pre = z * W.transpose();
    pre.rowwise() += b.transpose();
    Matrix dpre = dz * W.transpose() + z * dW.transpose();
    dpre.rowwise() += db.transpose();
    if (l + 1 < num_layers && spec.activation == Activation::Tanh) {
      z = pre.array().tanh().matrix();
      dpre.array() *= 1.0 - z.array().square();
    } else {
      z = std::move(pre);
    }
    dz = std::move(dpre);
  }
  return dz;
}

Vector jvp(const MlpSpec& spec, const ParamVector& params, const Vector& x,
           const ParamVector& tangent) {
  return jvpBatch(spec, params, Matrix(x.transpose()), tangent)
      .row(0)
      .transpose();
}

JacobianBlock jacobian(const MlpSpec& spec, const ParamVector& params,
                       const Matrix& inputs, Index entry_cap) {
  checkParams(spec, params);
  checkInputs(spec, inputs);
  const Index n = inputs.rows();
  const Index out = spec.outputDim();
  const Index p = spec.paramCount();
  if (n * out * p > entry_cap)
    throw NumericalError("dense Jacobian of " + std::to_string(n * out * p) +
                         " entries exceeds the cap of " +
                         std::to_string(entry_cap));
  JacobianBlock block;
  block.matrix.resize(n * out, p);
  if (n == 0) return block;

  for (Index i = 0; i < n; ++i) {
    MlpWorkspace row_ws;
    forward(spec, params, Matrix(inputs.row(i)), row_ws);
    for (Index o = 0; o < out; ++o) {
      Matrix u = Matrix::Zero(1, out);
      u(0, o) = 1.0;
      block.matrix.row(i * out + o) =
          vjpSum(spec, params, row_ws, u).values.transpose();
    }
  }
  return block;
}

void saveCheckpoint(const std::string& path, const MlpSpec& spec,
                    const ParamVector& params) {
  checkParams(spec, params);
  nlohmann::json header;
  header["layer_widths"] = spec.layer_widths;
  header["activation"] = spec.activation == Activation::Tanh ? "tanh" : "identity";
  header["param_count"] = spec.paramCount();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open checkpoint file for writing: " + path);
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(params.values.data()),
            static_cast<std::streamsize>(sizeof(Scalar)) * params.size());
  if (!out) throw ConfigError("failed writing checkpoint: " + path);
}

void loadCheckpoint(const std::string& path, MlpSpec& spec,
                    ParamVector& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("checkpoint missing header line: " + path);
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded())
    throw ConfigError("checkpoint header is not valid JSON: " + path);
  spec.layer_widths = header.at("layer_widths").get<std::vector<Index>>();
  const std::string act = header.at("activation").get<std::string>();
  if (act == "tanh")
    spec.activation = Activation::Tanh;
  else if (act == "identity")
    spec.activation = Activation::Identity;
  else
    throw ConfigError("unknown activation in checkpoint: " + act);
  spec.validate();
  const Index p = header.at("param_count").get<Index>();
  if (p != spec.paramCount())
    throw ConfigError("checkpoint param_count disagrees with layer widths");
  params.values.resize(p);
  in.read(reinterpret_cast<char*>(params.values.data()),
          static_cast<std::streamsize>(sizeof(Scalar)) * p);
  if (in.gcount() != static_cast<std::streamsize>(sizeof(Scalar)) * p)
    throw ConfigError("checkpoint truncated: " + path);
}

}  // namespace fsp
