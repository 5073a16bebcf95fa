#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sweep/types.hpp"

namespace sweep {

// Global plan: straight segments between waypoints. Each waypoint's psi is the
// bearing of its incoming segment (the start keeps its initial heading); cost
// is the polyline arc length in meters.
struct Trajectory {
  std::vector<UavState> waypoints;
  double cost = 0.0;

  double arc_length() const;

  // pure path following: state at arc distance s from the start, clamped to
  // [0, arc_length]; heading is the containing segment's bearing
  UavState state_at_arc(double s) const;  // throws std::domain_error when empty

  void save_file(const std::string& path) const;
  static Trajectory load_file(const std::string& path);
};

}  // namespace sweep
