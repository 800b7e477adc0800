#include "diffavg/grid.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace diffavg {

namespace {

void require_positive(const std::vector<double>& w) {
  if (w.empty()) throw ValidationError("weights: need at least one weight");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || !(w[i] > 0.0)) {
      throw ValidationError("weights: weight " + std::to_string(i) + " must be positive and finite");
    }
  }
}

}  // namespace

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  require_positive(w_);
  const double sum = std::accumulate(w_.begin(), w_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("weights: must sum to 1, got " + std::to_string(sum));
  }
}

WeightVector WeightVector::uniform(std::size_t k) {
  if (k == 0) throw ValidationError("weights: need at least one weight");
  return WeightVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

WeightVector WeightVector::normalized(std::vector<double> raw) {
  require_positive(raw);
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (double& v : raw) v /= sum;
  return WeightVector(std::move(raw));
}

}  // namespace diffavg
