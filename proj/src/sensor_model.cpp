#include "sweep/sensor_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sweep {

void SensorModel::validate() const {
  if (!(alpha > 0.0) || !(beta > alpha)) {
    throw std::invalid_argument("sensor ranges require 0 < alpha < beta");
  }
  if (p_floor != 0.5) {
    throw std::invalid_argument("p_floor must be 0.5 so far-range measurements carry nothing");
  }
  if (!(p_peak > p_floor && p_peak <= 1.0)) {
    throw std::invalid_argument("p_peak must lie in (0.5, 1]");
  }
  if (!(fov_h > 0.0 && fov_h < kPi) || !(fov_v > 0.0 && fov_v < kPi)) {
    throw std::invalid_argument("fields of view must lie in (0, pi)");
  }
  if (!(pitch > 0.0 && pitch < kPi / 2.0)) {
    throw std::invalid_argument("pitch must lie in (0, pi/2)");
  }
  if (!(pitch - fov_v / 2.0 > 0.0)) {
    throw std::invalid_argument("pitch must exceed fov_v/2 so the footprint closes");
  }
}

double tpr_at_range(const SensorModel& model, double range_m) {
  if (range_m <= model.alpha) return model.p_peak;
  if (range_m >= model.beta) return model.p_floor;
  return model.slope() * range_m + model.intercept();
}

DetectionRates rates_at_range(const SensorModel& model, double range_m) {
  const double f = tpr_at_range(model, range_m);
  return {f, 1.0 - f, f, 1.0 - f};
}

double FootprintTrapezoid::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    twice += a.cross(b);
  }
  return std::abs(twice) / 2.0;
}

bool FootprintTrapezoid::contains(const Vec2& p, double slack) const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    if ((b - a).cross(p - a) < -slack) return false;
  }
  return true;
}

FootprintTrapezoid instantaneous_footprint(const UavState& uav, double gimbal_yaw,
                                           const SensorModel& model) {
  if (!(uav.z > 0.0)) throw std::domain_error("footprint needs positive altitude");
  const double upper_edge = model.pitch - model.fov_v / 2.0;  // depression of top frustum edge
  if (upper_edge < 1e-3) {
    throw std::domain_error("grazing footprint: upper frustum edge nearly horizontal");
  }

  const double ty = std::tan(model.fov_h / 2.0);
  const double tv = std::tan(model.fov_v / 2.0);
  const double c = std::cos(model.pitch);
  const double s = std::sin(model.pitch);
  // frustum corner rays (1, y, z) in the camera frame, pitched down and cast
  // onto the ground; order near-right, far-right, far-left, near-left
  const double corner_tv[4] = {-tv, tv, tv, -tv};
  const double corner_ty[4] = {-ty, -ty, ty, ty};

  const double yaw = uav.psi + gimbal_yaw;
  FootprintTrapezoid fp;
  for (int i = 0; i < 4; ++i) {
    const double dir_x = c + corner_tv[i] * s;
    const double dir_z = corner_tv[i] * c - s;  // negative: ray descends
    const double t = uav.z / -dir_z;
    const Vec2 local{t * dir_x, t * corner_ty[i]};
    fp.v[i] = local.rotated(yaw) + uav.ground();
  }
  return fp;
}

FootprintTrapezoid swept_trapezoid(const UavState& uav, double psi1, double psi2,
                                   const SensorModel& model) {
  if (psi1 > psi2) std::swap(psi1, psi2);
  const FootprintTrapezoid f1 = instantaneous_footprint(uav, psi1, model);
  const FootprintTrapezoid f2 = instantaneous_footprint(uav, psi2, model);

  // work in the mid-sweep frame so the band edges stay perpendicular to the
  // mean viewing direction (and the degenerate sweep reproduces the footprint)
  const double frame = uav.psi + 0.5 * (psi1 + psi2);
  const Vec2 origin = uav.ground();
  auto to_frame = [&](const Vec2& p) { return (p - origin).rotated(-frame); };

  Vec2 a1[4], a2[4];
  for (int i = 0; i < 4; ++i) {
    a1[i] = to_frame(f1.v[i]);
    a2[i] = to_frame(f2.v[i]);
  }
  // vertex order: 0 near-right, 1 far-right, 2 far-left, 3 near-left
  const double x_near = std::min({a1[0].x, a1[3].x, a2[0].x, a2[3].x});
  const double x_far = std::max({a1[1].x, a1[2].x, a2[1].x, a2[2].x});

  // side edges of the outermost footprints, extended across the band
  auto leg_at = [](const Vec2& a, const Vec2& b, double x) {
    const double run = b.x - a.x;
    if (std::abs(run) < 1e-12) throw std::domain_error("swept footprint side edge degenerate");
    const double s = (x - a.x) / run;
    return a + (b - a) * s;
  };

  FootprintTrapezoid out;
  out.v[0] = leg_at(a1[0], a1[1], x_near);  // right side from the low-yaw footprint
  out.v[1] = leg_at(a1[0], a1[1], x_far);
  out.v[2] = leg_at(a2[3], a2[2], x_far);   // left side from the high-yaw footprint
  out.v[3] = leg_at(a2[3], a2[2], x_near);
  for (auto& p : out.v) p = p.rotated(frame) + origin;
  return out;
}

}  // namespace sweep
