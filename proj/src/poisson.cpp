#include "diffavg/poisson.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace diffavg {

namespace {

Eigen::MatrixXd dst1_basis(Index m) {
  const double scale = std::sqrt(2.0 / static_cast<double>(m + 1));
  Eigen::MatrixXd q(m, m);
  for (Index k = 0; k < m; ++k) {
    for (Index l = 0; l < m; ++l) {
      q(k, l) = scale * std::sin(std::numbers::pi * static_cast<double>((k + 1) * (l + 1)) /
                                 static_cast<double>(m + 1));
    }
  }
  return q;
}

// Eigenvalues of the Dirichlet second difference with spacing h.
Eigen::ArrayXd second_difference_eigenvalues(Index m, double h) {
  Eigen::ArrayXd mu(m);
  for (Index k = 0; k < m; ++k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k + 1) /
                              (2.0 * static_cast<double>(m + 1)));
    mu(k) = -4.0 * s * s / (h * h);
  }
  return mu;
}

Eigen::ArrayXXd interior_of(const ScalarField& f) {
  const Index nx = f.spec().nx(), ny = f.spec().ny();
  return f.values().block(1, 1, nx - 2, ny - 2);
}

NodeArray<double> embed(const DomainSpec& spec, const Eigen::ArrayXXd& interior) {
  NodeArray<double> out = NodeArray<double>::Zero(spec.nx(), spec.ny());
  out.block(1, 1, spec.nx() - 2, spec.ny() - 2) = interior;
  return out;
}

}  // namespace

PoissonSolver::PoissonSolver(const DomainSpec& spec)
    : spec_(spec), basis_x_(dst1_basis(spec.nx() - 2)), basis_y_(dst1_basis(spec.ny() - 2)) {
  const Eigen::ArrayXd mx = second_difference_eigenvalues(spec.nx() - 2, spec.hx());
  const Eigen::ArrayXd my = second_difference_eigenvalues(spec.ny() - 2, spec.hy());
  inverse_eigenvalues_ = (mx.replicate(1, my.size()).rowwise() + my.transpose()).inverse();
}

Eigen::ArrayXXd PoissonSolver::solve_interior(const Eigen::ArrayXXd& rhs) const {
  if (rhs.rows() != spec_.nx() - 2 || rhs.cols() != spec_.ny() - 2) {
    throw ValidationError("poisson: interior block has wrong shape");
  }
  if (!rhs.allFinite()) throw ValidationError("poisson: non-finite right-hand side");
  const Eigen::MatrixXd spectral =
      (basis_x_ * rhs.matrix() * basis_y_).array() * inverse_eigenvalues_;
  return (basis_x_ * spectral * basis_y_).array();
}

ScalarField PoissonSolver::solve(const ScalarField& f) const {
  require_same_spec(spec_, f.spec(), "poisson");
  return ScalarField(spec_, embed(spec_, solve_interior(interior_of(f))));
}

VectorField PoissonSolver::solve(const VectorField& f) const {
  require_same_spec(spec_, f.spec(), "poisson");
  const Index mx = spec_.nx() - 2, my = spec_.ny() - 2;
  return VectorField(spec_, embed(spec_, solve_interior(f.x().block(1, 1, mx, my))),
                     embed(spec_, solve_interior(f.y().block(1, 1, mx, my))));
}

std::shared_ptr<const PoissonSolver> poisson_solver_for(const DomainSpec& spec) {
  static std::mutex mutex;
  static std::map<std::pair<Index, Index>, std::shared_ptr<const PoissonSolver>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{spec.nx(), spec.ny()}];
  if (!slot) slot = std::make_shared<const PoissonSolver>(spec);
  return slot;
}

ScalarField solve_poisson(const ScalarField& f) { return poisson_solver_for(f.spec())->solve(f); }

VectorField solve_poisson_vec(const VectorField& f) {
  return poisson_solver_for(f.spec())->solve(f);
}

namespace {

NodeArray<double> five_point(const DomainSpec& spec, const NodeArray<double>& u) {
  const Index nx = spec.nx(), ny = spec.ny();
  const double cx = 1.0 / (spec.hx() * spec.hx()), cy = 1.0 / (spec.hy() * spec.hy());
  NodeArray<double> out = NodeArray<double>::Zero(nx, ny);
  out.block(1, 1, nx - 2, ny - 2) =
      cx * (u.block(2, 1, nx - 2, ny - 2) - 2.0 * u.block(1, 1, nx - 2, ny - 2) +
            u.block(0, 1, nx - 2, ny - 2)) +
      cy * (u.block(1, 2, nx - 2, ny - 2) - 2.0 * u.block(1, 1, nx - 2, ny - 2) +
            u.block(1, 0, nx - 2, ny - 2));
  return out;
}

}  // namespace

ScalarField laplacian(const ScalarField& u) {
  return ScalarField(u.spec(), five_point(u.spec(), u.values()));
}

VectorField laplacian(const VectorField& u) {
  return VectorField(u.spec(), five_point(u.spec(), u.x()), five_point(u.spec(), u.y()));
}

}  // namespace diffavg
