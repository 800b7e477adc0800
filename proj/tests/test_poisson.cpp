#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "diffavg/poisson.hpp"
#include "support.hpp"

using namespace diffavg;
using namespace diffavg::testing;

namespace {

ScalarField eigen_rhs(const DomainSpec& spec) {
  return ScalarField(spec, sample(spec, [](double x, double y) {
                       return -2 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y);
                     }));
}

double eigen_error(Index n) {
  const DomainSpec spec(n, n);
  const auto exact = sample(spec, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
  return (solve_poisson(eigen_rhs(spec)).values() - exact).abs().maxCoeff();
}

double residual(const ScalarField& f) {
  const ScalarField u = solve_poisson(f);
  const Index nx = f.spec().nx(), ny = f.spec().ny();
  return (laplacian(u).values() - f.values()).block(1, 1, nx - 2, ny - 2).abs().maxCoeff();
}

}  // namespace

TEST_CASE("zero right-hand side gives zero") {
  const DomainSpec spec(17, 17);
  CHECK((solve_poisson(ScalarField(spec)).values() == 0.0).all());
  const VectorField u = solve_poisson_vec(VectorField(spec));
  CHECK((u.x() == 0.0).all());
  CHECK((u.y() == 0.0).all());
}

TEST_CASE("eigenfunction is recovered to second order") {
  const double e17 = eigen_error(17), e33 = eigen_error(33), e65 = eigen_error(65);
  // Discrete eigenvalue error: relative defect ~ (pi h)^2 / 12.
  const double h = 1.0 / 64.0;
  CHECK(e65 <= 1.1 * kPi * kPi * h * h / 12.0);
  const double r1 = e17 / e33, r2 = e33 / e65;
  MESSAGE("eigenfunction error ratios " << r1 << " " << r2);
  CHECK(r1 >= 3.5);
  CHECK(r1 <= 4.5);
  CHECK(r2 >= 3.5);
  CHECK(r2 <= 4.5);
}

TEST_CASE("discrete Laplacian of the solution matches the right-hand side") {
  std::mt19937 rng(21);
  for (auto [nx, ny] : {std::pair<Index, Index>{17, 17}, {33, 20}, {65, 65}, {9, 40}}) {
    const DomainSpec spec(nx, ny);
    const ScalarField f(spec, random_nodes(spec, rng, -5, 5));
    CHECK(residual(f) <= 1e-10 * f.values().abs().maxCoeff());
  }
}

TEST_CASE("boundary samples of the right-hand side are ignored") {
  const DomainSpec spec(12, 12);
  std::mt19937 rng(4);
  const NodeArray<double> f = random_nodes(spec, rng, -1, 1);
  const ScalarField a = solve_poisson(ScalarField(spec, f));
  const ScalarField b = solve_poisson(ScalarField(spec, interior_only(f)));
  CHECK((a.values() == b.values()).all());
  CHECK((a.values().row(0) == 0.0).all());
  CHECK((a.values().col(11) == 0.0).all());
}

TEST_CASE("solve is linear") {
  const DomainSpec spec(21, 21);
  std::mt19937 rng(9);
  const NodeArray<double> f1 = random_nodes(spec, rng, -1, 1), f2 = random_nodes(spec, rng, -1, 1);
  const double a = 1.7, b = -0.4;
  const NodeArray<double> lhs = solve_poisson(ScalarField(spec, a * f1 + b * f2)).values();
  const NodeArray<double> rhs = a * solve_poisson(ScalarField(spec, f1)).values() +
                                b * solve_poisson(ScalarField(spec, f2)).values();
  CHECK((lhs - rhs).abs().maxCoeff() <= 1e-12 * rhs.abs().maxCoeff());
}

TEST_CASE("vector solve is componentwise") {
  const DomainSpec spec(33, 33);
  const ScalarField rhs = eigen_rhs(spec);
  const VectorField u = solve_poisson_vec(VectorField(spec, rhs.values(), NodeArray<double>::Zero(33, 33)));
  const auto exact = sample(spec, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
  CHECK((u.x() - exact).abs().maxCoeff() <= 2e-3);
  CHECK((u.y() == 0.0).all());
  CHECK(u.zero_on_boundary());

  std::mt19937 rng(2);
  const NodeArray<double> p = random_nodes(spec, rng, -1, 1), q = random_nodes(spec, rng, -1, 1);
  const VectorField uv = solve_poisson_vec(VectorField(spec, p, q));
  const VectorField vu = solve_poisson_vec(VectorField(spec, q, p));
  CHECK((uv.x() == vu.y()).all());
  CHECK((uv.y() == vu.x()).all());
}

TEST_CASE("solve is self-adjoint on interior-supported fields") {
  std::mt19937 rng(17);
  for (auto [nx, ny] : {std::pair<Index, Index>{9, 9}, {17, 17}, {33, 21}, {65, 65}}) {
    const DomainSpec spec(nx, ny);
    for (int trial = 0; trial < 5; ++trial) {
      const NodeArray<double> a = interior_only(random_nodes(spec, rng, -1, 1));
      const NodeArray<double> b = interior_only(random_nodes(spec, rng, -1, 1));
      const double lhs = (solve_poisson(ScalarField(spec, a)).values() * b).sum();
      const double rhs = (a * solve_poisson(ScalarField(spec, b)).values()).sum();
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(std::abs(lhs), std::abs(rhs)));
    }
  }
}

TEST_CASE("maximum principle: nonpositive source gives nonnegative solution") {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const DomainSpec spec(9 + trial, 17);
    const ScalarField f(spec, random_nodes(spec, rng, -1, 0));
    CHECK(solve_poisson(f).values().minCoeff() >= 0.0);
  }
}

TEST_CASE("solver rejects bad interior blocks") {
  const PoissonSolver solver(DomainSpec(6, 6));
  Eigen::ArrayXXd rhs = Eigen::ArrayXXd::Zero(4, 4);
  rhs(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solver.solve_interior(rhs), ValidationError);
  CHECK_THROWS_AS(solver.solve_interior(Eigen::ArrayXXd::Zero(3, 4)), ValidationError);
  CHECK_THROWS_AS(solver.solve(ScalarField(DomainSpec(7, 6))), ValidationError);
}

TEST_CASE("cached solvers are shared across threads") {
  const DomainSpec spec(31, 29);
  std::vector<std::shared_ptr<const PoissonSolver>> seen(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < seen.size(); ++t) {
    threads.emplace_back([&, t] { seen[t] = poisson_solver_for(spec); });
  }
  for (auto& th : threads) th.join();
  for (const auto& s : seen) CHECK(s.get() == seen.front().get());
}
