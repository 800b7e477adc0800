#include "doctest.h"

#include <cmath>
#include <random>

#include "diffavg/diffops.hpp"
#include "support.hpp"

using namespace diffavg;
using namespace diffavg::testing;

namespace {

// Smooth analytic map with closed-form partials.
struct AnalyticMap {
  double a = 0.05;
  double x(double px, double py) const { return px + a * std::sin(kPi * px) * std::sin(2 * kPi * py); }
  double y(double px, double py) const { return py + a * std::sin(2 * kPi * px) * std::sin(kPi * py); }
  double xx(double px, double py) const { return 1 + a * kPi * std::cos(kPi * px) * std::sin(2 * kPi * py); }
  double xy(double px, double py) const { return 2 * a * kPi * std::sin(kPi * px) * std::cos(2 * kPi * py); }
  double yx(double px, double py) const { return 2 * a * kPi * std::cos(2 * kPi * px) * std::sin(kPi * py); }
  double yy(double px, double py) const { return 1 + a * kPi * std::sin(2 * kPi * px) * std::cos(kPi * py); }
};

struct OperatorErrors {
  double jacobian;
  double curl;
};

OperatorErrors max_errors(Index n) {
  const DomainSpec spec(n, n);
  const AnalyticMap m;
  const GridTransform g(spec, sample(spec, [&](double x, double y) { return m.x(x, y); }),
                        sample(spec, [&](double x, double y) { return m.y(x, y); }));
  const auto jac_exact = sample(spec, [&](double x, double y) {
    return m.xx(x, y) * m.yy(x, y) - m.xy(x, y) * m.yx(x, y);
  });
  const auto curl_exact = sample(spec, [&](double x, double y) { return m.yx(x, y) - m.xy(x, y); });
  return {(jacobian_det(g).values() - jac_exact).abs().maxCoeff(),
          (curl2d(g).values() - curl_exact).abs().maxCoeff()};
}

}  // namespace

TEST_CASE("identity has unit Jacobian and zero curl") {
  for (Index n : {3, 9, 65}) {
    const auto id = identity_grid(DomainSpec(n, n + 2));
    CHECK((jacobian_det(id).values() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK((curl2d(id).values() == 0.0).all());
    CHECK(cell_jacobian(id, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stencils are exact on affine maps") {
  const DomainSpec spec(17, 13);
  SUBCASE("stretch (2x, y)") {
    const auto x = sample(spec, [](double px, double) { return 2 * px; });
    const auto y = sample(spec, [](double, double py) { return py; });
    const auto jac = jacobian_det<double>(spec, x, y);
    CHECK((jac.values() - 2.0).abs().maxCoeff() <= 1e-12);
  }
  SUBCASE("rigid rotation about the center") {
    const double t = 0.7;
    const auto x = sample(spec, [&](double px, double py) {
      return 0.5 + std::cos(t) * (px - 0.5) - std::sin(t) * (py - 0.5);
    });
    const auto y = sample(spec, [&](double px, double py) {
      return 0.5 + std::sin(t) * (px - 0.5) + std::cos(t) * (py - 0.5);
    });
    CHECK((jacobian_det<double>(spec, x, y).values() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK((curl2d<double>(spec, x, y).values() - 2 * std::sin(t)).abs().maxCoeff() <= 1e-12);
  }
  SUBCASE("rigid rotation displacement has curl 2*omega") {
    const double omega = 0.3;
    const auto x = sample(spec, [&](double px, double py) { return px - omega * (py - 0.5); });
    const auto y = sample(spec, [&](double px, double py) { return py + omega * (px - 0.5); });
    CHECK((curl2d<double>(spec, x, y).values() - 2 * omega).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("curl and divergence are linear") {
  const DomainSpec spec(11, 11);
  std::mt19937 rng(5);
  const auto id = identity_grid(spec);
  const GridTransform g1(spec, id.x() + 0.02 * random_nodes(spec, rng, -1, 1),
                         id.y() + 0.02 * random_nodes(spec, rng, -1, 1));
  const GridTransform g2(spec, id.x() + 0.02 * random_nodes(spec, rng, -1, 1),
                         id.y() + 0.02 * random_nodes(spec, rng, -1, 1));
  const double a = 0.3, b = 0.7;
  const NodeArray<double> lhs = curl2d(grid_axpy(a, g1, b, g2)).values();
  const NodeArray<double> rhs = a * curl2d(g1).values() + b * curl2d(g2).values();
  CHECK((lhs - rhs).abs().maxCoeff() <= 1e-12);

  const VectorField v1(spec, random_nodes(spec, rng, -1, 1), random_nodes(spec, rng, -1, 1));
  const VectorField v2(spec, random_nodes(spec, rng, -1, 1), random_nodes(spec, rng, -1, 1));
  const VectorField combo(spec, a * v1.x() + b * v2.x(), a * v1.y() + b * v2.y());
  const NodeArray<double> dl = divergence(combo).values();
  const NodeArray<double> dr = a * divergence(v1).values() + b * divergence(v2).values();
  CHECK((dl - dr).abs().maxCoeff() <= 1e-11);
}

TEST_CASE("divergence examples") {
  const DomainSpec spec(65, 65);
  CHECK((divergence(VectorField(spec)).values() == 0.0).all());

  const VectorField linear(spec, sample(spec, [](double x, double) { return x; }),
                           sample(spec, [](double, double y) { return y; }));
  CHECK((divergence(linear).values() - 2.0).abs().maxCoeff() <= 1e-12);

  const VectorField wave(spec, sample(spec, [](double x, double y) {
                           return std::sin(kPi * x) * std::sin(kPi * y);
                         }),
                         NodeArray<double>::Zero(65, 65));
  const auto exact = sample(spec, [](double x, double y) {
    return kPi * std::cos(kPi * x) * std::sin(kPi * y);
  });
  // Leading truncation term is h^2 * f''' / 3 at the boundary.
  const double bound = kPi * kPi * kPi * spec.hx() * spec.hx() / 3.0 * 1.05;
  CHECK((divergence(wave).values() - exact).abs().maxCoeff() <= bound);
}

TEST_CASE("Jacobian and curl converge at second order") {
  const auto e33 = max_errors(33), e65 = max_errors(65), e129 = max_errors(129);
  const double rj1 = e33.jacobian / e65.jacobian, rj2 = e65.jacobian / e129.jacobian;
  const double rc1 = e33.curl / e65.curl, rc2 = e65.curl / e129.curl;
  MESSAGE("jacobian ratios " << rj1 << " " << rj2 << ", curl ratios " << rc1 << " " << rc2);
  for (double r : {rj1, rj2, rc1, rc2}) {
    CHECK(r >= 3.5);
    CHECK(r <= 4.5);
  }
}

TEST_CASE("adjoint stencils are exact transposes") {
  const DomainSpec spec(9, 7);
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_nodes(spec, rng, -1, 1), b = random_nodes(spec, rng, -1, 1);
    const double lx = (partial_x(spec, a) * b).sum(), rx = (a * partial_x_adjoint(spec, b)).sum();
    const double ly = (partial_y(spec, a) * b).sum(), ry = (a * partial_y_adjoint(spec, b)).sum();
    CHECK(lx == doctest::Approx(rx).epsilon(1e-12));
    CHECK(ly == doctest::Approx(ry).epsilon(1e-12));
  }
}
