#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace mcl {

/// Planar pendulum reference trajectory: theta_d as a C^1 piecewise cubic
/// Bezier over uniform segments. theta_dot_d and theta_ddot_d come from the
/// derivative curves; the acceleration is piecewise linear by construction.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double segment_dt, std::vector<std::array<double, 4>> segments)
      : seg_dt_(segment_dt), segs_(std::move(segments)) {}

  /// Fit through knot states (theta_k, omega_k) spaced dt apart (cubic
  /// Hermite, expressed in Bezier control points). Requires >= 2 knots.
  static Trajectory fit_knots(const std::vector<Eigen::Vector2d>& knots,
                              double dt);

  bool empty() const { return segs_.empty(); }
  double horizon() const { return seg_dt_ * static_cast<double>(segs_.size()); }
  double segment_dt() const { return seg_dt_; }
  const std::vector<std::array<double, 4>>& segments() const { return segs_; }

  /// Position/velocity/acceleration at local time t, clamped to [0, horizon].
  double theta(double t) const;
  double theta_dot(double t) const;
  double theta_ddot(double t) const;

  /// (theta, theta_dot) at local time t.
  Eigen::Vector2d state(double t) const { return {theta(t), theta_dot(t)}; }

  bool operator==(const Trajectory& o) const = delete;  // pointwise eval only

 private:
  void locate(double t, std::size_t& seg, double& u) const;

  double seg_dt_ = 0.0;
  std::vector<std::array<double, 4>> segs_;
};

}  // namespace mcl
