#pragma once

#include "fsplaplace/likelihoods.hpp"
#include "fsplaplace/types.hpp"

#include <cstdint>
#include <vector>

namespace fsp {

enum class Split : std::uint8_t { Train, Val, Test };

struct Dataset {
  TaskKind task = TaskKind::Regression;
  Matrix inputs;              // n x d
  Matrix targets;             // n x O, regression only
  IntVector labels;           // n, classification only
  std::vector<Split> splits;  // one tag per row

  Index size() const { return inputs.rows(); }
  Index inputDim() const { return inputs.cols(); }
  Index outputDim() const {
    return task == TaskKind::Regression ? targets.cols()
                                        : Index(labels.size() ? labels.maxCoeff() + 1 : 0);
  }

  Target target(Index i) const {
    return task == TaskKind::Regression
               ? Target::regression(Vector(targets.row(i).transpose()))
               : Target::classification(labels[i]);
  }

  Dataset subset(Split tag) const;

  /// Throws on NaN inputs/targets or out-of-range labels.
  void validate(Index num_classes = -1) const;
};

/// y = sin(2 pi x) + eps, eps ~ N(0, noise_sigma^2),
/// x ~ U([-1, -0.5] u [0.5, 1]). All rows tagged Train.
Dataset genSine(Index n, std::uint64_t seed, Scalar noise_sigma = 0.1);

// Two interleaved half-circles of unit radius. Class 0 lies on the circle
// centered at (0, 0) with angles in [0, pi]; class 1 on the circle centered
// at (1, 0.5) traced as (1 - cos a, 0.5 - sin a). Points are perturbed by
// isotropic Gaussian noise of the given scale. Classes are balanced to
// within one point.
Dataset genTwoMoons(Index n, Scalar noise, std::uint64_t seed);

/// Reassigns split tags by a seeded shuffle; fractions of the total size.
void assignSplits(Dataset& ds, Scalar val_fraction, Scalar test_fraction,
                  std::uint64_t seed);

}  // namespace fsp
