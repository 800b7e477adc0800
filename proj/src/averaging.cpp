#include "diffavg/averaging.hpp"

#include <string>
#include <vector>

#include "diffavg/diffops.hpp"

namespace diffavg {

namespace {

void require_inputs(std::span<const GridTransform> grids, const WeightVector& w) {
  if (grids.empty()) throw ValidationError("averaging: need at least one grid");
  if (grids.size() != w.size()) {
    throw ValidationError("averaging: " + std::to_string(grids.size()) + " grids but " +
                          std::to_string(w.size()) + " weights");
  }
  for (const auto& g : grids) require_same_spec(grids.front().spec(), g.spec(), "averaging");
}

}  // namespace

AveragedFields average_fields(std::span<const GridTransform> grids, const WeightVector& w) {
  require_inputs(grids, w);
  const DomainSpec& spec = grids.front().spec();
  NodeArray<double> jac = NodeArray<double>::Zero(spec.nx(), spec.ny());
  NodeArray<double> curl = NodeArray<double>::Zero(spec.nx(), spec.ny());
  // Fixed input order keeps the sums deterministic.
  for (std::size_t k = 0; k < grids.size(); ++k) {
    jac += w[k] * jacobian_det(grids[k]).values();
    curl += w[k] * curl2d(grids[k]).values();
  }
  return {ScalarField(spec, jac), ScalarField(spec, curl)};
}

Reconstruction average_diffeomorphisms(std::span<const GridTransform> grids,
                                       const WeightVector& w, const ReconstructOptions& opts) {
  require_inputs(grids, w);
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const FoldReport folds = fold_check(grids[k]);
    if (folds.nonpositive_count > 0) {
      throw ValidationError("averaging: input " + std::to_string(k) + " is folded (min J " +
                            std::to_string(folds.min_jac) + ")");
    }
  }
  const AveragedFields target = average_fields(grids, w);
  return reconstruct(identity_grid(grids.front().spec()), target.jacobian, target.curl, opts);
}

GridTransform euclidean_average(std::span<const GridTransform> grids, const WeightVector& w) {
  require_inputs(grids, w);
  const DomainSpec& spec = grids.front().spec();
  NodeArray<double> x = NodeArray<double>::Zero(spec.nx(), spec.ny());
  NodeArray<double> y = NodeArray<double>::Zero(spec.nx(), spec.ny());
  for (std::size_t k = 0; k < grids.size(); ++k) {
    x += w[k] * grids[k].x();
    y += w[k] * grids[k].y();
  }
  return GridTransform(spec, x, y);
}

FoldReport fold_check(const GridTransform& g) {
  const ScalarField jac = jacobian_det(g);
  const Index nx = g.spec().nx(), ny = g.spec().ny();
  const auto interior = jac.values().block(1, 1, nx - 2, ny - 2);
  return {interior.minCoeff(), (interior <= 0.0).count()};
}

WeightVector distance_weights(std::span<const GridTransform> grids) {
  if (grids.size() < 2) throw ValidationError("distance weights: need at least two grids");
  const GridTransform mean = euclidean_average(grids, WeightVector::uniform(grids.size()));
  std::vector<double> d;
  d.reserve(grids.size());
  for (const auto& g : grids) d.push_back(grid_rms_distance(g, mean));

  bool all_zero = true;
  for (double v : d) all_zero = all_zero && v == 0.0;
  if (all_zero) return WeightVector::uniform(grids.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] == 0.0) {
      throw ValidationError("distance weights: grid " + std::to_string(k) +
                            " coincides with the Euclidean mean, its weight would be 0");
    }
  }
  return WeightVector::normalized(std::move(d));
}

}  // namespace diffavg
