#include "sweep/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sweep {

double Trajectory::arc_length() const {
  double s = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    s += (waypoints[i].ground() - waypoints[i - 1].ground()).norm();
  }
  return s;
}

UavState Trajectory::state_at_arc(double s) const {
  if (waypoints.empty()) throw std::domain_error("state_at_arc on an empty trajectory");
  if (waypoints.size() == 1 || s <= 0.0) {
    UavState st = waypoints.front();
    return st;
  }
  double remaining = s;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Vec2 a = waypoints[i - 1].ground();
    const Vec2 b = waypoints[i].ground();
    const double len = (b - a).norm();
    if (len <= 0.0) continue;
    // arcs within epsilon past a junction belong to the ending segment, so
    // extending the trajectory never changes the pose at an already-valid arc
    if (remaining <= len + 1e-6) {
      const double t = std::min(remaining / len, 1.0);
      const Vec2 p = a + (b - a) * t;
      return {p.x, p.y, waypoints[i].z, bearing(a, b)};
    }
    remaining -= len;
  }
  return waypoints.back();
}

void Trajectory::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory: " + path);
  char buf[128];
  std::snprintf(buf, sizeof buf, "cost %.17g\n", cost);
  out << buf;
  for (const UavState& w : waypoints) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", w.x, w.y, w.z, w.psi);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Trajectory Trajectory::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory: " + path);
  std::string tag;
  Trajectory traj;
  if (!(in >> tag >> traj.cost) || tag != "cost") {
    throw std::runtime_error("malformed trajectory header: " + path);
  }
  UavState w;
  while (in >> w.x >> w.y >> w.z >> w.psi) traj.waypoints.push_back(w);
  if (!in.eof() && in.fail()) {
    throw std::runtime_error("malformed trajectory row: " + path);
  }
  if (traj.waypoints.empty()) throw std::runtime_error("trajectory has no waypoints: " + path);
  return traj;
}

}  // namespace sweep
