#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace trsco {

using Point2 = Eigen::Vector2d;
using Point3 = Eigen::Vector3d;

/// Raised when an argument falls outside the domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AllocationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-drone sequences of 3D waypoints, stored drone-major.
class Trajectories {
 public:
  Trajectories() = default;
  Trajectories(int n_drones, int n_waypoints)
      : n_drones_(n_drones),
        n_waypoints_(n_waypoints),
        points_(static_cast<std::size_t>(n_drones) * n_waypoints, Point3::Zero()) {
    if (n_drones < 0 || n_waypoints < 0) {
      throw DomainError("Trajectories: negative dimensions");
    }
  }

  int n_drones() const { return n_drones_; }
  int n_waypoints() const { return n_waypoints_; }
  bool empty() const { return points_.empty(); }

  Point3& at(int k, int t) { return points_[index(k, t)]; }
  const Point3& at(int k, int t) const { return points_[index(k, t)]; }

  const std::vector<Point3>& points() const { return points_; }

  bool same_shape(const Trajectories& other) const {
    return n_drones_ == other.n_drones_ && n_waypoints_ == other.n_waypoints_;
  }

  /// Largest absolute coordinate difference: ||a - b||_inf.
  double max_abs_difference(const Trajectories& other) const;

  bool all_finite() const;

 private:
  std::size_t index(int k, int t) const {
    if (k < 0 || k >= n_drones_ || t < 0 || t >= n_waypoints_) {
      throw DomainError("Trajectories: index out of range");
    }
    return static_cast<std::size_t>(k) * n_waypoints_ + t;
  }

  int n_drones_ = 0;
  int n_waypoints_ = 0;
  std::vector<Point3> points_;
};

/// Index map of the stacked decision vector used by the convex subproblem:
/// [positions (3NT) | smoothness epigraphs N(T-2) | length epigraphs N(T-1) | delta].
struct VariableLayout {
  int n_drones = 0;
  int n_waypoints = 0;

  int position(int k, int t, int axis) const { return 3 * (k * n_waypoints + t) + axis; }
  int n_positions() const { return 3 * n_drones * n_waypoints; }
  int smooth_epigraph(int k, int t) const {
    return n_positions() + k * (n_waypoints - 2) + (t - 1);
  }
  int length_epigraph(int k, int t) const {
    return n_positions() + n_drones * (n_waypoints - 2) + k * (n_waypoints - 1) + t;
  }
  int delta() const {
    return n_positions() + n_drones * (n_waypoints - 2) + n_drones * (n_waypoints - 1);
  }
  int n_variables() const { return delta() + 1; }
};

}  // namespace trsco
