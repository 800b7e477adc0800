#pragma once

// Construction of a transformation with a prescribed Jacobian determinant f0
// and curl g0. The unknown map is parameterized as
//
//     phi = phi0 + u,   laplacian(u) = F,   u = 0 on the boundary,
//
// and the discrete energy
//
//     E = 1/2 * sum_nodes [(J(phi) - f0)^2 + (curl(phi) - g0)^2] * hx * hy
//
// is minimized over the control field F by gradient descent.

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "diffavg/grid.hpp"

namespace diffavg {

struct ReconstructOptions {
  int max_iters = 5000;
  double energy_decrease_target = 0.90;
  // Unset: the first trial step is the Gauss-Newton step length along the
  // first gradient, which skips the ramp-up from a badly scaled guess.
  std::optional<double> initial_step = 1.0;
  double step_shrink = 0.5;
  double step_grow = 1.1;
  double min_step = 1e-12;
  // A trial step is rejected when its minimum interior Jacobian is <= this.
  double jacobian_floor = 0.0;

  void validate() const;
};

enum class StopReason { target_reached, max_iters, step_underflow };

std::string_view to_string(StopReason reason);

struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double rel_energy = 0.0;
  double min_jac = 0.0;
  double step = 0.0;
};

struct ConvergenceReport {
  // records[0] describes the starting point; one more per accepted step.
  std::vector<IterationRecord> records;
  StopReason stopping_reason = StopReason::max_iters;
  bool diffeomorphic = false;

  double initial_energy() const { return records.front().energy; }
  double final_energy() const { return records.back().energy; }
  // Fraction of the initial energy removed; 1 when the start was already exact.
  double energy_decrease() const;
  int accepted_steps() const { return static_cast<int>(records.size()) - 1; }

  void write_csv(std::ostream& os) const;
};

struct Reconstruction {
  GridTransform grid;
  ConvergenceReport report;
};

double energy(const GridTransform& g, const ScalarField& f0, const ScalarField& g0);

GridTransform apply_control(const GridTransform& phi0, const VectorField& control);

/// Gradient of the energy with respect to the node coordinates of `g`, given
/// the Jacobian and curl residuals. Linear in the residuals.
VectorField energy_map_gradient(const GridTransform& g, const ScalarField& jacobian_residual,
                                const ScalarField& curl_residual);

/// Exact gradient of the discrete energy with respect to the control field.
/// Boundary entries are zero: boundary samples of F never reach the map.
VectorField energy_gradient(const GridTransform& phi0, const VectorField& control,
                            const ScalarField& f0, const ScalarField& g0);

Reconstruction reconstruct(const GridTransform& phi_init, const ScalarField& f0,
                           const ScalarField& g0, const ReconstructOptions& opts = {});

}  // namespace diffavg
