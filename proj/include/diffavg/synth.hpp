#pragma once

// Test transformations: a smooth analytic deformation, windowed in-place
// rotations, and composition by bilinear resampling. Every output is the
// identity on the boundary.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <numbers>
#include <utility>

#include "diffavg/grid.hpp"

namespace diffavg {

struct Phi0Params {
  double amplitude = 0.05;
  int modes = 2;
  // 0 disables the pseudo-random low-mode mixture.
  std::uint64_t seed = 0;
};

struct RotationParams {
  double theta = 75.0 * std::numbers::pi / 180.0;  // radians, counter-clockwise
  Eigen::Vector2d center{0.5, 0.5};
  double r_inner = 0.2;
  double r_outer = 0.45;
};

/// Rotates each node about `center` by theta*s(r), where s is 1 inside
/// r_inner, 0 beyond r_outer, and the C1 smoothstep in between. The
/// continuous map is area preserving for any theta.
GridTransform windowed_rotation(const DomainSpec& spec, double theta,
                                const Eigen::Vector2d& center, double r_inner, double r_outer);

inline GridTransform windowed_rotation(const DomainSpec& spec, const RotationParams& p) {
  return windowed_rotation(spec, p.theta, p.center, p.r_inner, p.r_outer);
}

/// identity + u with
///   u_x = amplitude * sin(m pi x) sin(pi y),
///   u_y = amplitude * sin(pi x) sin(m pi y),
/// plus, for a nonzero seed, amplitude/4 times a mixture of the modes
/// sin(p pi x) sin(q pi y), p, q in 1..3, with coefficients in [-1, 1].
/// Throws ValidationError when the result folds.
GridTransform synthetic_phi0(const DomainSpec& spec, const Phi0Params& params = {});

struct Composition {
  GridTransform grid;
  Index clamped = 0;  // inner positions that fell outside the unit square
};

/// outer o inner, evaluating outer's coordinates bilinearly at the positions
/// given by inner.
Composition resample_compose(const GridTransform& outer, const GridTransform& inner);

/// (R_theta o phi0, R_-theta o phi0).
std::pair<GridTransform, GridTransform> rotation_pair(const GridTransform& phi0,
                                                      const RotationParams& params = {});

}  // namespace diffavg
