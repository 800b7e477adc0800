#pragma once

// Second-order finite differences on the node grid: central differences in
// the interior, one-sided (-3/2, 2, -1/2)/h stencils on boundary nodes.
// Every stencil is exact on affine data.

#include <Eigen/Core>

#include <limits>

#include "diffavg/grid.hpp"

namespace diffavg {

namespace stencil {

// d/dx along the first index (rows).
template <typename Scalar>
NodeArray<Scalar> diff_rows(const NodeArray<Scalar>& a, Scalar h) {
  const Index n = a.rows();
  const Scalar c = Scalar(1) / (Scalar(2) * h);
  NodeArray<Scalar> out(n, a.cols());
  // One-sided rows written as differences so constants give exactly 0.
  out.row(0) = (Scalar(4) * (a.row(1) - a.row(0)) - (a.row(2) - a.row(0))) * c;
  out.middleRows(1, n - 2) = (a.bottomRows(n - 2) - a.topRows(n - 2)) * c;
  out.row(n - 1) = (Scalar(4) * (a.row(n - 1) - a.row(n - 2)) - (a.row(n - 1) - a.row(n - 3))) * c;
  return out;
}

// Transpose of diff_rows as a linear map on node arrays.
template <typename Scalar>
NodeArray<Scalar> diff_rows_adjoint(const NodeArray<Scalar>& b, Scalar h) {
  const Index n = b.rows();
  const Scalar c = Scalar(1) / (Scalar(2) * h);
  NodeArray<Scalar> out = NodeArray<Scalar>::Zero(n, b.cols());
  out.row(0) -= Scalar(3) * c * b.row(0);
  out.row(1) += Scalar(4) * c * b.row(0);
  out.row(2) -= c * b.row(0);
  out.bottomRows(n - 2) += c * b.middleRows(1, n - 2);
  out.topRows(n - 2) -= c * b.middleRows(1, n - 2);
  out.row(n - 1) += Scalar(3) * c * b.row(n - 1);
  out.row(n - 2) -= Scalar(4) * c * b.row(n - 1);
  out.row(n - 3) += c * b.row(n - 1);
  return out;
}

template <typename Scalar>
NodeArray<Scalar> diff_cols(const NodeArray<Scalar>& a, Scalar h) {
  NodeArray<Scalar> t = a.transpose();
  return diff_rows<Scalar>(t, h).transpose();
}

template <typename Scalar>
NodeArray<Scalar> diff_cols_adjoint(const NodeArray<Scalar>& b, Scalar h) {
  NodeArray<Scalar> t = b.transpose();
  return diff_rows_adjoint<Scalar>(t, h).transpose();
}

}  // namespace stencil

template <typename Scalar>
NodeArray<Scalar> partial_x(const DomainSpec& spec, const NodeArray<Scalar>& a) {
  detail::require_shape(spec, a, "partial_x");
  return stencil::diff_rows<Scalar>(a, static_cast<Scalar>(spec.hx()));
}

template <typename Scalar>
NodeArray<Scalar> partial_y(const DomainSpec& spec, const NodeArray<Scalar>& a) {
  detail::require_shape(spec, a, "partial_y");
  return stencil::diff_cols<Scalar>(a, static_cast<Scalar>(spec.hy()));
}

template <typename Scalar>
NodeArray<Scalar> partial_x_adjoint(const DomainSpec& spec, const NodeArray<Scalar>& a) {
  detail::require_shape(spec, a, "partial_x_adjoint");
  return stencil::diff_rows_adjoint<Scalar>(a, static_cast<Scalar>(spec.hx()));
}

template <typename Scalar>
NodeArray<Scalar> partial_y_adjoint(const DomainSpec& spec, const NodeArray<Scalar>& a) {
  detail::require_shape(spec, a, "partial_y_adjoint");
  return stencil::diff_cols_adjoint<Scalar>(a, static_cast<Scalar>(spec.hy()));
}

// The coordinate-array overloads accept maps that are not pinned to the
// identity on the boundary (test fixtures, intermediate sums).

template <typename Scalar>
BasicScalarField<Scalar> jacobian_det(const DomainSpec& spec, const NodeArray<Scalar>& x,
                                      const NodeArray<Scalar>& y) {
  const NodeArray<Scalar> xx = partial_x(spec, x), xy = partial_y(spec, x);
  const NodeArray<Scalar> yx = partial_x(spec, y), yy = partial_y(spec, y);
  return BasicScalarField<Scalar>(spec, xx * yy - xy * yx);
}

template <typename Scalar>
BasicScalarField<Scalar> jacobian_det(const BasicGridTransform<Scalar>& g) {
  return jacobian_det(g.spec(), g.x(), g.y());
}

/// Scalar 2D curl of the map: d(phi_y)/dx - d(phi_x)/dy.
template <typename Scalar>
BasicScalarField<Scalar> curl2d(const DomainSpec& spec, const NodeArray<Scalar>& x,
                                const NodeArray<Scalar>& y) {
  return BasicScalarField<Scalar>(spec, partial_x(spec, y) - partial_y(spec, x));
}

template <typename Scalar>
BasicScalarField<Scalar> curl2d(const BasicGridTransform<Scalar>& g) {
  return curl2d(g.spec(), g.x(), g.y());
}

template <typename Scalar>
BasicScalarField<Scalar> divergence(const BasicVectorField<Scalar>& v) {
  return BasicScalarField<Scalar>(v.spec(), partial_x(v.spec(), v.x()) + partial_y(v.spec(), v.y()));
}

/// Jacobian of the bilinear map of cell (i, j)..(i+1, j+1), evaluated at the
/// cell center and normalized by the undeformed cell area.
template <typename Scalar>
Scalar cell_jacobian(const BasicGridTransform<Scalar>& g, Index i, Index j) {
  const auto& x = g.x();
  const auto& y = g.y();
  const Scalar hx = static_cast<Scalar>(g.spec().hx()), hy = static_cast<Scalar>(g.spec().hy());
  const Scalar dxdu = (x(i + 1, j) - x(i, j) + x(i + 1, j + 1) - x(i, j + 1)) / (Scalar(2) * hx);
  const Scalar dydu = (y(i + 1, j) - y(i, j) + y(i + 1, j + 1) - y(i, j + 1)) / (Scalar(2) * hx);
  const Scalar dxdv = (x(i, j + 1) - x(i, j) + x(i + 1, j + 1) - x(i + 1, j)) / (Scalar(2) * hy);
  const Scalar dydv = (y(i, j + 1) - y(i, j) + y(i + 1, j + 1) - y(i + 1, j)) / (Scalar(2) * hy);
  return dxdu * dydv - dxdv * dydu;
}

template <typename Scalar>
Scalar min_interior(const BasicScalarField<Scalar>& f) {
  const Index nx = f.spec().nx(), ny = f.spec().ny();
  return f.values().block(1, 1, nx - 2, ny - 2).minCoeff();
}

}  // namespace diffavg
