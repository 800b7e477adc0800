#pragma once

// Fixtures shared by the unit tests.

#include <cmath>
#include <numbers>
#include <random>

#include "diffavg/grid.hpp"

namespace diffavg::testing {

inline constexpr double kPi = std::numbers::pi;

// Random values in [lo, hi] at every node.
inline NodeArray<double> random_nodes(const DomainSpec& spec, std::mt19937& rng, double lo,
                                      double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  NodeArray<double> a(spec.nx(), spec.ny());
  for (Index j = 0; j < spec.ny(); ++j)
    for (Index i = 0; i < spec.nx(); ++i) a(i, j) = dist(rng);
  return a;
}

inline NodeArray<double> interior_only(NodeArray<double> a) {
  a.row(0).setZero();
  a.row(a.rows() - 1).setZero();
  a.col(0).setZero();
  a.col(a.cols() - 1).setZero();
  return a;
}

// Samples fn(x, y) at every node.
template <typename Fn>
NodeArray<double> sample(const DomainSpec& spec, Fn fn) {
  NodeArray<double> a(spec.nx(), spec.ny());
  for (Index j = 0; j < spec.ny(); ++j)
    for (Index i = 0; i < spec.nx(); ++i) a(i, j) = fn(spec.node_x(i), spec.node_y(j));
  return a;
}

}  // namespace diffavg::testing
