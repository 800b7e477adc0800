#include "diffavg/reconstruct.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "diffavg/diffops.hpp"
#include "diffavg/poisson.hpp"

namespace diffavg {

void ReconstructOptions::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("reconstruct options: " + what); };
  if (max_iters < 1) fail("max_iters must be positive");
  if (!(energy_decrease_target > 0.0 && energy_decrease_target <= 1.0)) {
    fail("energy_decrease_target must be in (0, 1]");
  }
  if (initial_step && !(*initial_step > 0.0)) fail("initial_step must be positive");
  if (!(step_shrink > 0.0 && step_shrink < 1.0)) fail("step_shrink must be in (0, 1)");
  if (!(step_grow > 1.0)) fail("step_grow must exceed 1");
  if (!(min_step > 0.0)) fail("min_step must be positive");
  if (!std::isfinite(jacobian_floor)) fail("jacobian_floor must be finite");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::target_reached: return "target_reached";
    case StopReason::max_iters: return "max_iters";
    case StopReason::step_underflow: return "step_underflow";
  }
  return "unknown";
}

double ConvergenceReport::energy_decrease() const {
  const double e0 = initial_energy();
  if (e0 == 0.0) return 1.0;
  return 1.0 - final_energy() / e0;
}

void ConvergenceReport::write_csv(std::ostream& os) const {
  os << "iter,energy,rel_energy,min_jac,step\n";
  char line[160];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.energy,
                  r.rel_energy, r.min_jac, r.step);
    os << line;
  }
}

namespace {

struct Residuals {
  NodeArray<double> jacobian;
  NodeArray<double> curl;
};

double quadrature_weight(const DomainSpec& spec) { return spec.hx() * spec.hy(); }

double energy_of(const DomainSpec& spec, const Residuals& r) {
  return 0.5 * quadrature_weight(spec) * (r.jacobian.square().sum() + r.curl.square().sum());
}

void require_fields(const DomainSpec& spec, const ScalarField& f0, const ScalarField& g0) {
  require_same_spec(spec, f0.spec(), "target jacobian");
  require_same_spec(spec, g0.spec(), "target curl");
}

}  // namespace

double energy(const GridTransform& g, const ScalarField& f0, const ScalarField& g0) {
  require_fields(g.spec(), f0, g0);
  const Residuals r{jacobian_det(g).values() - f0.values(), curl2d(g).values() - g0.values()};
  return energy_of(g.spec(), r);
}

GridTransform apply_control(const GridTransform& phi0, const VectorField& control) {
  require_same_spec(phi0.spec(), control.spec(), "apply_control");
  const VectorField u = solve_poisson_vec(control);
  return GridTransform(phi0.spec(), phi0.x() + u.x(), phi0.y() + u.y());
}

// Adjoint of the linearized stencils:
//   dJ    = dXx*Yy + Xx*dYy - dXy*Yx - Xy*dYx
//   dcurl = dYx - dXy
VectorField energy_map_gradient(const GridTransform& g, const ScalarField& jacobian_residual,
                                const ScalarField& curl_residual) {
  const DomainSpec& spec = g.spec();
  require_fields(spec, jacobian_residual, curl_residual);
  const auto& rj = jacobian_residual.values();
  const auto& rc = curl_residual.values();

  const NodeArray<double> xx = partial_x(spec, g.x()), xy = partial_y(spec, g.x());
  const NodeArray<double> yx = partial_x(spec, g.y()), yy = partial_y(spec, g.y());

  const NodeArray<double> gx = partial_x_adjoint<double>(spec, rj * yy) -
                               partial_y_adjoint<double>(spec, rj * yx + rc);
  const NodeArray<double> gy = partial_y_adjoint<double>(spec, rj * xx) -
                               partial_x_adjoint<double>(spec, rj * xy - rc);
  const double w = quadrature_weight(spec);
  return VectorField(spec, w * gx, w * gy);
}

namespace {

NodeArray<double> zero_boundary(NodeArray<double> a) {
  a.row(0).setZero();
  a.row(a.rows() - 1).setZero();
  a.col(0).setZero();
  a.col(a.cols() - 1).setZero();
  return a;
}

// dE/dF = L^-T dE/du = L^-1 dE/du, using the symmetry of the discrete
// Dirichlet Laplacian. Only interior map nodes depend on u.
VectorField control_gradient(const PoissonSolver& solver, const GridTransform& phi,
                             const ScalarField& f0, const ScalarField& g0) {
  const ScalarField rj(phi.spec(), jacobian_det(phi).values() - f0.values());
  const ScalarField rc(phi.spec(), curl2d(phi).values() - g0.values());
  const VectorField dmap = energy_map_gradient(phi, rj, rc);
  return solver.solve(
      VectorField(phi.spec(), zero_boundary(dmap.x()), zero_boundary(dmap.y())));
}

// Gauss-Newton curvature of the energy along the map-space direction du:
// the squared norm of the linearized residual change.
double gauss_newton_curvature(const GridTransform& phi, const VectorField& du) {
  const DomainSpec& spec = phi.spec();
  const NodeArray<double> xx = partial_x(spec, phi.x()), xy = partial_y(spec, phi.x());
  const NodeArray<double> yx = partial_x(spec, phi.y()), yy = partial_y(spec, phi.y());
  const NodeArray<double> dxx = partial_x(spec, du.x()), dxy = partial_y(spec, du.x());
  const NodeArray<double> dyx = partial_x(spec, du.y()), dyy = partial_y(spec, du.y());
  const NodeArray<double> djac = dxx * yy + xx * dyy - dxy * yx - xy * dyx;
  const NodeArray<double> dcurl = dyx - dxy;
  return quadrature_weight(spec) * (djac.square().sum() + dcurl.square().sum());
}

}  // namespace

VectorField energy_gradient(const GridTransform& phi0, const VectorField& control,
                            const ScalarField& f0, const ScalarField& g0) {
  require_fields(phi0.spec(), f0, g0);
  const auto solver = poisson_solver_for(phi0.spec());
  return control_gradient(*solver, apply_control(phi0, control), f0, g0);
}

Reconstruction reconstruct(const GridTransform& phi_init, const ScalarField& f0,
                           const ScalarField& g0, const ReconstructOptions& opts) {
  opts.validate();
  const DomainSpec& spec = phi_init.spec();
  require_fields(spec, f0, g0);
  if (!(f0.values() > 0.0).all()) {
    Index i = 0, j = 0;
    const double lowest = f0.values().minCoeff(&i, &j);
    throw ValidationError("f0 must be strictly positive (min " + std::to_string(lowest) +
                          " at node " + std::to_string(i) + "," + std::to_string(j) + ")");
  }

  const auto solver = poisson_solver_for(spec);

  auto evaluate = [&](const GridTransform& g, double& min_jac) {
    const ScalarField jac = jacobian_det(g);
    min_jac = min_interior(jac);
    const Residuals r{jac.values() - f0.values(), curl2d(g).values() - g0.values()};
    return energy_of(spec, r);
  };

  double min_jac = 0.0;
  const double e0 = evaluate(phi_init, min_jac);

  Reconstruction out{phi_init, {}};
  ConvergenceReport& report = out.report;
  report.records.push_back(
      {0, e0, e0 > 0.0 ? 1.0 : 0.0, min_jac, opts.initial_step.value_or(0.0)});

  const double target = (1.0 - opts.energy_decrease_target) * e0;
  double e = e0;
  bool need_step = !opts.initial_step;
  double step = opts.initial_step.value_or(0.0);
  GridTransform phi = phi_init;
  report.stopping_reason = StopReason::max_iters;

  for (int iter = 1;; ++iter) {
    if (e <= target) {
      report.stopping_reason = StopReason::target_reached;
      break;
    }
    if (iter > opts.max_iters) {
      report.stopping_reason = StopReason::max_iters;
      break;
    }

    // phi depends linearly on F, so the descent direction in map space is
    // L^-1 applied to the control gradient.
    const VectorField grad = control_gradient(*solver, phi, f0, g0);
    const VectorField du = solver->solve(grad);
    if (need_step) {
      const double g2 = grad.x().square().sum() + grad.y().square().sum();
      const double curvature = gauss_newton_curvature(phi, du);
      step = curvature > 0.0 ? g2 / curvature : 1.0;
      need_step = false;
    }

    bool accepted = false;
    while (!accepted) {
      const NodeArray<double> cx = phi.x() - step * du.x();
      const NodeArray<double> cy = phi.y() - step * du.y();
      if (cx.allFinite() && cy.allFinite()) {
        GridTransform candidate(spec, cx, cy);
        double cand_min_jac = 0.0;
        const double ce = evaluate(candidate, cand_min_jac);
        if (ce < e && cand_min_jac > opts.jacobian_floor) {
          report.records.push_back({iter, ce, ce / e0, cand_min_jac, step});
          phi = std::move(candidate);
          e = ce;
          step *= opts.step_grow;
          accepted = true;
          continue;
        }
      }
      step *= opts.step_shrink;
      if (step < opts.min_step) break;
    }
    if (!accepted) {
      report.stopping_reason = StopReason::step_underflow;
      break;
    }
  }

  report.diffeomorphic = min_interior(jacobian_det(phi)) > 0.0;
  out.grid = std::move(phi);
  return out;
}

}  // namespace diffavg
