#include "mcl/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace mcl {

Trajectory Trajectory::fit_knots(const std::vector<Eigen::Vector2d>& knots,
                                 double dt) {
  std::vector<std::array<double, 4>> segs;
  if (knots.size() >= 2) {
    segs.reserve(knots.size() - 1);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double th0 = knots[k](0), w0 = knots[k](1);
      const double th1 = knots[k + 1](0), w1 = knots[k + 1](1);
      // Hermite -> Bezier: endpoint tangents w0, w1 over span dt.
      segs.push_back({th0, th0 + w0 * dt / 3.0, th1 - w1 * dt / 3.0, th1});
    }
  }
  return Trajectory(dt, std::move(segs));
}

void Trajectory::locate(double t, std::size_t& seg, double& u) const {
  const double tc = std::clamp(t, 0.0, horizon());
  double s = tc / seg_dt_;
  seg = std::min(static_cast<std::size_t>(s),
                 segs_.empty() ? std::size_t{0} : segs_.size() - 1);
  u = std::clamp(s - static_cast<double>(seg), 0.0, 1.0);
}

double Trajectory::theta(double t) const {
  if (segs_.empty()) return 0.0;
  std::size_t k;
  double u;
  locate(t, k, u);
  const auto& b = segs_[k];
  const double v = 1.0 - u;
  return v * v * v * b[0] + 3.0 * v * v * u * b[1] + 3.0 * v * u * u * b[2] +
         u * u * u * b[3];
}

double Trajectory::theta_dot(double t) const {
  if (segs_.empty()) return 0.0;
  std::size_t k;
  double u;
  locate(t, k, u);
  const auto& b = segs_[k];
  const double v = 1.0 - u;
  const double d = 3.0 * (v * v * (b[1] - b[0]) + 2.0 * v * u * (b[2] - b[1]) +
                          u * u * (b[3] - b[2]));
  return d / seg_dt_;
}

double Trajectory::theta_ddot(double t) const {
  if (segs_.empty()) return 0.0;
  std::size_t k;
  double u;
  locate(t, k, u);
  const auto& b = segs_[k];
  const double dd =
      6.0 * ((1.0 - u) * (b[2] - 2.0 * b[1] + b[0]) +
             u * (b[3] - 2.0 * b[2] + b[1]));
  return dd / (seg_dt_ * seg_dt_);
}

}  // namespace mcl
