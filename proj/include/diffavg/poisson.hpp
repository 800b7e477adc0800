#pragma once

// Dirichlet Poisson solve on the unit square: given F, find u with u = 0 on
// the boundary and the 5-point Laplacian of u equal to F at every interior
// node. Boundary samples of F are ignored.

#include <Eigen/Core>

#include <memory>

#include "diffavg/grid.hpp"

namespace diffavg {

/// Direct solver by sine-transform diagonalization of the 5-point operator.
/// Both 1D second-difference matrices share the orthonormal DST-I
/// eigenbasis, so a solve is four dense products plus a diagonal scaling.
/// The operator it applies is symmetric, which the reconstructor's adjoint
/// gradient relies on. Instances are immutable and safe to share.
class PoissonSolver {
 public:
  explicit PoissonSolver(const DomainSpec& spec);

  const DomainSpec& spec() const { return spec_; }

  ScalarField solve(const ScalarField& f) const;
  VectorField solve(const VectorField& f) const;

  // Interior block in, interior block out: (nx-2) x (ny-2).
  Eigen::ArrayXXd solve_interior(const Eigen::ArrayXXd& rhs) const;

 private:
  DomainSpec spec_;
  Eigen::MatrixXd basis_x_;  // symmetric orthogonal DST-I matrix
  Eigen::MatrixXd basis_y_;
  Eigen::ArrayXXd inverse_eigenvalues_;
};

/// Shared solver for `spec`, built on first use. Thread-safe.
std::shared_ptr<const PoissonSolver> poisson_solver_for(const DomainSpec& spec);

ScalarField solve_poisson(const ScalarField& f);
VectorField solve_poisson_vec(const VectorField& f);

/// 5-point Laplacian at interior nodes; zero on the boundary.
ScalarField laplacian(const ScalarField& u);
VectorField laplacian(const VectorField& u);

}  // namespace diffavg
