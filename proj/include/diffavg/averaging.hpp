#pragma once

// Averaging of transformations through their Jacobian and curl fields, with
// the nodewise Euclidean average as a baseline.
//
// The average of phi_1..phi_K under weights w is the transformation whose
// Jacobian determinant is sum w_i J(phi_i) and whose curl is
// sum w_i curl(phi_i). Since every phi_i is the identity on the boundary,
// each J(phi_i) integrates to the area of the square, and so does the
// weighted sum; no renormalization of the target Jacobian is needed.

#include <span>

#include "diffavg/grid.hpp"
#include "diffavg/reconstruct.hpp"

namespace diffavg {

struct AveragedFields {
  ScalarField jacobian;
  ScalarField curl;
};

AveragedFields average_fields(std::span<const GridTransform> grids, const WeightVector& w);

/// Reconstructs the field average starting from the identity. Every input
/// must be fold-free.
Reconstruction average_diffeomorphisms(std::span<const GridTransform> grids,
                                       const WeightVector& w,
                                       const ReconstructOptions& opts = {});

GridTransform euclidean_average(std::span<const GridTransform> grids, const WeightVector& w);

struct FoldReport {
  double min_jac = 0.0;
  Index nonpositive_count = 0;  // interior nodes with J <= 0
};

FoldReport fold_check(const GridTransform& g);

/// Weights proportional to each grid's RMS distance from the uniform
/// Euclidean mean. Falls back to uniform weights when every distance is 0.
WeightVector distance_weights(std::span<const GridTransform> grids);

}  // namespace diffavg
