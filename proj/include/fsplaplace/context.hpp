#pragma once

#include "fsplaplace/types.hpp"

#include <cstdint>

namespace fsp {

// Generators for context-point sets. Sampling is a pure function of
// (sampler, count, seed), so per-step resampling stays reproducible.
struct ContextSampler {
  enum class Kind { UniformBox, Grid, Halton, FromDataset };
  Kind kind = Kind::UniformBox;

  Vector lower, upper;  // box bounds, per dimension
  IntVector grid_counts;  // Grid: points per dimension
  Index halton_skip = 0;  // Halton: leading points skipped
  Matrix pool;            // FromDataset: candidate points

  static ContextSampler uniformBox(const Vector& lower, const Vector& upper);
  static ContextSampler grid(const Vector& lower, const Vector& upper,
                             const IntVector& counts);
  static ContextSampler halton(const Vector& lower, const Vector& upper,
                               Index skip = 0);
  static ContextSampler fromDataset(const Matrix& pool);

  Index dim() const;
};

/// `count` context points as rows, inside the declared bounds. For Grid the
/// count must equal the product of the per-dimension counts.
Matrix sampleContext(const ContextSampler& sampler, Index count,
                     std::uint64_t seed);

/// Radical-inverse Halton value: index i >= 1 in the given prime base.
Scalar haltonValue(Index index, Index base);

}  // namespace fsp
