#include "trsco/types.hpp"

#include <algorithm>
#include <cmath>

namespace trsco {

double Trajectories::max_abs_difference(const Trajectories& other) const {
  if (!same_shape(other)) throw DomainError("Trajectories: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    worst = std::max(worst, (points_[i] - other.points_[i]).cwiseAbs().maxCoeff());
  }
  return worst;
}

bool Trajectories::all_finite() const {
  return std::all_of(points_.begin(), points_.end(), [](const Point3& p) { return p.allFinite(); });
}

}  // namespace trsco
