#pragma once

#include <array>

#include "sweep/types.hpp"

namespace sweep {

// Range-dependent binary detector. The true-positive rate is p_peak out to
// alpha, decays linearly to p_floor at beta and stays there; the true-negative
// rate follows the same curve. At p_floor = 0.5 a measurement carries no
// information, so cells beyond beta are never updated.
struct SensorModel {
  double alpha = 300.0;             // m, full-quality detection range
  double beta = 800.0;              // m, range where detection degrades to chance
  double p_peak = 0.9;
  double p_floor = 0.5;
  double fov_h = deg2rad(40.0);     // horizontal field of view
  double fov_v = deg2rad(30.0);     // vertical field of view
  double pitch = deg2rad(20.0);     // camera depression below horizontal; must exceed fov_v/2

  // linear segment f(r) = a*r + b joining (alpha, p_peak) to (beta, p_floor)
  double slope() const { return (p_floor - p_peak) / (beta - alpha); }
  double intercept() const { return p_peak - slope() * alpha; }

  void validate() const;            // throws std::invalid_argument
};

struct DetectionRates {
  double tpr = 0.5;  // P(positive | target)
  double fpr = 0.5;  // P(positive | no target)
  double tnr = 0.5;  // P(negative | no target)
  double fnr = 0.5;  // P(negative | target)
};

double tpr_at_range(const SensorModel& model, double range_m);
DetectionRates rates_at_range(const SensorModel& model, double range_m);

// ground-plane camera footprint; vertices counter-clockwise:
// near-right, far-right, far-left, near-left
struct FootprintTrapezoid {
  std::array<Vec2, 4> v{};

  double area() const;
  bool contains(const Vec2& p, double slack = 1e-9) const;
};

// Projects the four frustum corner rays onto the ground plane z = 0.
// gimbal_yaw is relative to the vehicle heading, positive to the left.
// Throws std::domain_error when altitude <= 0 or when the upper frustum edge
// comes within 1e-3 rad of horizontal (the projection would run to infinity).
FootprintTrapezoid instantaneous_footprint(const UavState& uav, double gimbal_yaw,
                                           const SensorModel& model);

// Trapezoid covering a gimbal sweep from psi1 to psi2: the band between the
// nearest near corner and farthest far corner of the two extreme footprints
// (measured along the mid-sweep bearing), cut by the outward side edges of
// those footprints. Contains both extreme footprints; for psi1 == psi2 it
// degenerates to the instantaneous footprint.
FootprintTrapezoid swept_trapezoid(const UavState& uav, double psi1, double psi2,
                                   const SensorModel& model);

}  // namespace sweep
