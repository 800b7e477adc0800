#pragma once

// Core value types: a uniform node grid on the unit square and the fields
// and transformations sampled on it.
//
// Storage convention: node (i, j) sits at (x, y) = (i*hx, j*hy). Every
// per-node array is an Eigen array with nx rows (index i, the x direction)
// and ny columns (index j, the y direction).

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "diffavg/errors.hpp"

namespace diffavg {

using Index = Eigen::Index;

template <typename Scalar>
using NodeArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

class DomainSpec {
 public:
  DomainSpec(Index nx, Index ny) : nx_(nx), ny_(ny) {
    if (nx < 3 || ny < 3) {
      throw ValidationError("grid needs at least 3x3 nodes, got " + std::to_string(nx) + "x" +
                            std::to_string(ny));
    }
  }

  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  Index node_count() const { return nx_ * ny_; }

  double hx() const { return 1.0 / static_cast<double>(nx_ - 1); }
  double hy() const { return 1.0 / static_cast<double>(ny_ - 1); }

  // Identity positions. Computed as i/(nx-1) so the far edge is exactly 1.
  template <typename Scalar = double>
  Scalar node_x(Index i) const {
    return static_cast<Scalar>(i) / static_cast<Scalar>(nx_ - 1);
  }
  template <typename Scalar = double>
  Scalar node_y(Index j) const {
    return static_cast<Scalar>(j) / static_cast<Scalar>(ny_ - 1);
  }

  bool on_boundary(Index i, Index j) const {
    return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
  }

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;

 private:
  Index nx_;
  Index ny_;
};

inline std::string to_string(const DomainSpec& spec) {
  return std::to_string(spec.nx()) + "x" + std::to_string(spec.ny());
}

inline void require_same_spec(const DomainSpec& a, const DomainSpec& b, const char* what) {
  if (!(a == b)) {
    throw ValidationError(std::string(what) + ": grid size mismatch (" + to_string(a) + " vs " +
                          to_string(b) + ")");
  }
}

namespace detail {

template <typename Derived>
void require_shape(const DomainSpec& spec, const Eigen::ArrayBase<Derived>& a, const char* what) {
  if (a.rows() != spec.nx() || a.cols() != spec.ny()) {
    throw ValidationError(std::string(what) + ": array is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", expected " + to_string(spec));
  }
}

template <typename Derived>
void require_finite(const Eigen::ArrayBase<Derived>& a, const char* what) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j))) {
        throw ValidationError(std::string(what) + ": non-finite value at node (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

template <typename Scalar>
NodeArray<Scalar> identity_x(const DomainSpec& spec) {
  NodeArray<Scalar> x(spec.nx(), spec.ny());
  for (Index i = 0; i < spec.nx(); ++i) x.row(i).setConstant(spec.node_x<Scalar>(i));
  return x;
}

template <typename Scalar>
NodeArray<Scalar> identity_y(const DomainSpec& spec) {
  NodeArray<Scalar> y(spec.nx(), spec.ny());
  for (Index j = 0; j < spec.ny(); ++j) y.col(j).setConstant(spec.node_y<Scalar>(j));
  return y;
}

}  // namespace detail

/// Samples of a scalar function on the grid nodes (Jacobian determinant,
/// curl, Poisson right-hand sides).
template <typename Scalar>
class BasicScalarField {
 public:
  explicit BasicScalarField(const DomainSpec& spec)
      : spec_(spec), values_(NodeArray<Scalar>::Zero(spec.nx(), spec.ny())) {}

  template <typename Derived>
  BasicScalarField(const DomainSpec& spec, const Eigen::ArrayBase<Derived>& values)
      : spec_(spec), values_(values) {
    detail::require_shape(spec_, values_, "scalar field");
    detail::require_finite(values_, "scalar field");
  }

  static BasicScalarField constant(const DomainSpec& spec, Scalar v) {
    return BasicScalarField(spec, NodeArray<Scalar>::Constant(spec.nx(), spec.ny(), v));
  }

  const DomainSpec& spec() const { return spec_; }
  const NodeArray<Scalar>& values() const { return values_; }
  Scalar operator()(Index i, Index j) const { return values_(i, j); }

 private:
  DomainSpec spec_;
  NodeArray<Scalar> values_;
};

/// Two-component field on the grid nodes (displacements, Poisson controls,
/// energy gradients).
template <typename Scalar>
class BasicVectorField {
 public:
  explicit BasicVectorField(const DomainSpec& spec)
      : spec_(spec),
        vx_(NodeArray<Scalar>::Zero(spec.nx(), spec.ny())),
        vy_(NodeArray<Scalar>::Zero(spec.nx(), spec.ny())) {}

  template <typename DerivedX, typename DerivedY>
  BasicVectorField(const DomainSpec& spec, const Eigen::ArrayBase<DerivedX>& vx,
                   const Eigen::ArrayBase<DerivedY>& vy)
      : spec_(spec), vx_(vx), vy_(vy) {
    detail::require_shape(spec_, vx_, "vector field x");
    detail::require_shape(spec_, vy_, "vector field y");
    detail::require_finite(vx_, "vector field x");
    detail::require_finite(vy_, "vector field y");
  }

  const DomainSpec& spec() const { return spec_; }
  const NodeArray<Scalar>& x() const { return vx_; }
  const NodeArray<Scalar>& y() const { return vy_; }

  bool zero_on_boundary() const {
    const Index nx = spec_.nx(), ny = spec_.ny();
    auto edge_zero = [](const NodeArray<Scalar>& a, Index nx_, Index ny_) {
      return (a.row(0) == 0).all() && (a.row(nx_ - 1) == 0).all() && (a.col(0) == 0).all() &&
             (a.col(ny_ - 1) == 0).all();
    };
    return edge_zero(vx_, nx, ny) && edge_zero(vy_, nx, ny);
  }

 private:
  DomainSpec spec_;
  NodeArray<Scalar> vx_;
  NodeArray<Scalar> vy_;
};

/// A transformation of the unit square, sampled as the image of every grid
/// node. Boundary nodes always sit at their identity positions: the
/// constructor re-pins them, `checked` rejects inputs that violate it.
template <typename Scalar>
class BasicGridTransform {
 public:
  explicit BasicGridTransform(const DomainSpec& spec)
      : spec_(spec), x_(detail::identity_x<Scalar>(spec)), y_(detail::identity_y<Scalar>(spec)) {}

  template <typename DerivedX, typename DerivedY>
  BasicGridTransform(const DomainSpec& spec, const Eigen::ArrayBase<DerivedX>& x,
                     const Eigen::ArrayBase<DerivedY>& y)
      : spec_(spec), x_(x), y_(y) {
    detail::require_shape(spec_, x_, "grid x");
    detail::require_shape(spec_, y_, "grid y");
    detail::require_finite(x_, "grid x");
    detail::require_finite(y_, "grid y");
    pin_boundary();
  }

  // Strict construction: boundary nodes must already equal identity bit-exactly.
  template <typename DerivedX, typename DerivedY>
  static BasicGridTransform checked(const DomainSpec& spec, const Eigen::ArrayBase<DerivedX>& x,
                                    const Eigen::ArrayBase<DerivedY>& y) {
    detail::require_shape(spec, x, "grid x");
    detail::require_shape(spec, y, "grid y");
    for (Index j = 0; j < spec.ny(); ++j) {
      for (Index i = 0; i < spec.nx(); ++i) {
        if (!spec.on_boundary(i, j)) continue;
        if (x(i, j) != spec.node_x<Scalar>(i) || y(i, j) != spec.node_y<Scalar>(j)) {
          throw ValidationError("boundary node (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is not at its identity position");
        }
      }
    }
    return BasicGridTransform(spec, x, y);
  }

  const DomainSpec& spec() const { return spec_; }
  const NodeArray<Scalar>& x() const { return x_; }
  const NodeArray<Scalar>& y() const { return y_; }

 private:
  void pin_boundary() {
    const Index nx = spec_.nx(), ny = spec_.ny();
    const auto ix = detail::identity_x<Scalar>(spec_);
    const auto iy = detail::identity_y<Scalar>(spec_);
    for (Index i : {Index{0}, nx - 1}) {
      x_.row(i) = ix.row(i);
      y_.row(i) = iy.row(i);
    }
    for (Index j : {Index{0}, ny - 1}) {
      x_.col(j) = ix.col(j);
      y_.col(j) = iy.col(j);
    }
  }

  DomainSpec spec_;
  NodeArray<Scalar> x_;
  NodeArray<Scalar> y_;
};

using ScalarField = BasicScalarField<double>;
using VectorField = BasicVectorField<double>;
using GridTransform = BasicGridTransform<double>;

template <typename Scalar = double>
BasicGridTransform<Scalar> identity_grid(const DomainSpec& spec) {
  return BasicGridTransform<Scalar>(spec);
}

/// Nodewise a*g1 + b*g2. Boundary is re-pinned, which is exact when a+b=1.
template <typename Scalar>
BasicGridTransform<Scalar> grid_axpy(Scalar a, const BasicGridTransform<Scalar>& g1, Scalar b,
                                     const BasicGridTransform<Scalar>& g2) {
  require_same_spec(g1.spec(), g2.spec(), "grid_axpy");
  return BasicGridTransform<Scalar>(g1.spec(), a * g1.x() + b * g2.x(), a * g1.y() + b * g2.y());
}

/// Root-mean-square Euclidean node distance over all nodes.
template <typename Scalar>
Scalar grid_rms_distance(const BasicGridTransform<Scalar>& g1, const BasicGridTransform<Scalar>& g2) {
  require_same_spec(g1.spec(), g2.spec(), "grid_rms_distance");
  const Scalar sum = (g1.x() - g2.x()).square().sum() + (g1.y() - g2.y()).square().sum();
  return std::sqrt(sum / static_cast<Scalar>(g1.spec().node_count()));
}

/// Root-mean-square displacement magnitude relative to the identity.
template <typename Scalar>
Scalar rms_displacement(const BasicGridTransform<Scalar>& g) {
  return grid_rms_distance(g, identity_grid<Scalar>(g.spec()));
}

/// K positive weights summing to one.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w);

  static WeightVector uniform(std::size_t k);
  // Rescales positive raw weights to sum to one.
  static WeightVector normalized(std::vector<double> raw);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }

 private:
  std::vector<double> w_;
};

}  // namespace diffavg
