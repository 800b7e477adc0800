#include "diffavg/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "diffavg/averaging.hpp"

namespace diffavg {

GridTransform windowed_rotation(const DomainSpec& spec, double theta,
                                const Eigen::Vector2d& center, double r_inner, double r_outer) {
  const double room = std::min({center.x(), 1.0 - center.x(), center.y(), 1.0 - center.y()});
  if (!(r_inner > 0.0 && r_inner < r_outer && r_outer <= room)) {
    throw ValidationError("windowed rotation: need 0 < r_inner < r_outer <= " +
                          std::to_string(room));
  }
  if (!std::isfinite(theta)) throw ValidationError("windowed rotation: non-finite angle");

  NodeArray<double> x(spec.nx(), spec.ny()), y(spec.nx(), spec.ny());
  for (Index j = 0; j < spec.ny(); ++j) {
    for (Index i = 0; i < spec.nx(); ++i) {
      const Eigen::Vector2d v = Eigen::Vector2d(spec.node_x(i), spec.node_y(j)) - center;
      const double r = v.norm();
      double s = 0.0;
      if (r <= r_inner) {
        s = 1.0;
      } else if (r < r_outer) {
        const double t = (r - r_inner) / (r_outer - r_inner);
        s = 1.0 - t * t * (3.0 - 2.0 * t);
      }
      const Eigen::Vector2d p = center + Eigen::Rotation2Dd(theta * s).toRotationMatrix() * v;
      x(i, j) = p.x();
      y(i, j) = p.y();
    }
  }
  return GridTransform(spec, x, y);
}

namespace {

// Portable uniform draw in [-1, 1]; the standard distributions are not
// reproducible across library implementations.
double signed_unit(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

}  // namespace

GridTransform synthetic_phi0(const DomainSpec& spec, const Phi0Params& params) {
  if (params.modes < 1) throw ValidationError("phi0: modes must be at least 1");
  if (!std::isfinite(params.amplitude)) throw ValidationError("phi0: non-finite amplitude");

  constexpr int kMix = 3;
  std::array<double, kMix * kMix> mix_x{}, mix_y{};
  if (params.seed != 0) {
    std::mt19937_64 rng(params.seed);
    for (int k = 0; k < kMix * kMix; ++k) {
      mix_x[k] = signed_unit(rng);
      mix_y[k] = signed_unit(rng);
    }
  }

  const double pi = std::numbers::pi;
  const double m = static_cast<double>(params.modes);
  const double a = params.amplitude;
  NodeArray<double> x(spec.nx(), spec.ny()), y(spec.nx(), spec.ny());
  for (Index j = 0; j < spec.ny(); ++j) {
    for (Index i = 0; i < spec.nx(); ++i) {
      const double px = spec.node_x(i), py = spec.node_y(j);
      double ux = a * std::sin(m * pi * px) * std::sin(pi * py);
      double uy = a * std::sin(pi * px) * std::sin(m * pi * py);
      if (params.seed != 0) {
        for (int p = 1; p <= kMix; ++p) {
          for (int q = 1; q <= kMix; ++q) {
            const double mode = std::sin(p * pi * px) * std::sin(q * pi * py);
            const int k = (p - 1) * kMix + (q - 1);
            ux += 0.25 * a * mix_x[k] * mode;
            uy += 0.25 * a * mix_y[k] * mode;
          }
        }
      }
      x(i, j) = px + ux;
      y(i, j) = py + uy;
    }
  }

  GridTransform phi0(spec, x, y);
  const FoldReport folds = fold_check(phi0);
  if (folds.nonpositive_count > 0) {
    throw ValidationError("phi0: amplitude " + std::to_string(a) + " folds the grid (min J " +
                          std::to_string(folds.min_jac) + ")");
  }
  return phi0;
}

namespace {

struct CellCoord {
  Index cell;
  double frac;
};

// Locates t in [0, n-1] (grid units); values within 1e-10 of a node snap to it
// so node-aligned queries reproduce node values exactly.
CellCoord locate(double t, Index n) {
  const double nearest = std::round(t);
  if (std::abs(t - nearest) < 1e-10) t = nearest;
  const Index cell = std::min(static_cast<Index>(std::floor(t)), n - 2);
  return {cell, t - static_cast<double>(cell)};
}

}  // namespace

Composition resample_compose(const GridTransform& outer, const GridTransform& inner) {
  require_same_spec(outer.spec(), inner.spec(), "resample_compose");
  const DomainSpec& spec = outer.spec();
  const Index nx = spec.nx(), ny = spec.ny();
  NodeArray<double> x(nx, ny), y(nx, ny);
  Index clamped = 0;
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      double px = inner.x()(i, j), py = inner.y()(i, j);
      if (px < 0.0 || px > 1.0 || py < 0.0 || py > 1.0) {
        ++clamped;
        px = std::clamp(px, 0.0, 1.0);
        py = std::clamp(py, 0.0, 1.0);
      }
      const CellCoord cx = locate(px * static_cast<double>(nx - 1), nx);
      const CellCoord cy = locate(py * static_cast<double>(ny - 1), ny);
      const double a = cx.frac, b = cy.frac;
      const Index k = cx.cell, l = cy.cell;
      auto bilinear = [&](const NodeArray<double>& v) {
        return (1.0 - a) * (1.0 - b) * v(k, l) + a * (1.0 - b) * v(k + 1, l) +
               (1.0 - a) * b * v(k, l + 1) + a * b * v(k + 1, l + 1);
      };
      x(i, j) = bilinear(outer.x());
      y(i, j) = bilinear(outer.y());
    }
  }
  return {GridTransform(spec, x, y), clamped};
}

std::pair<GridTransform, GridTransform> rotation_pair(const GridTransform& phi0,
                                                      const RotationParams& params) {
  const DomainSpec& spec = phi0.spec();
  const GridTransform ccw =
      windowed_rotation(spec, params.theta, params.center, params.r_inner, params.r_outer);
  const GridTransform cw =
      windowed_rotation(spec, -params.theta, params.center, params.r_inner, params.r_outer);
  return {resample_compose(ccw, phi0).grid, resample_compose(cw, phi0).grid};
}

}  // namespace diffavg
