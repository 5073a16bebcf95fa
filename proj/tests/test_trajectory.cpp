#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <random>

#include "sweep/trajectory.hpp"

using namespace sweep;

TEST_CASE("arc length of a polyline") {
  Trajectory t;
  CHECK(t.arc_length() == 0.0);
  t.waypoints = {{0, 0, 100, 0}};
  CHECK(t.arc_length() == 0.0);
  t.waypoints = {{0, 0, 100, 0}, {20, 0, 100, 0}, {20, 10, 100, deg2rad(90)}};
  CHECK(t.arc_length() == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("state along the path: interpolation, heading, clamping") {
  Trajectory t;
  CHECK_THROWS_AS(t.state_at_arc(0.0), std::domain_error);

  t.waypoints = {{0, 0, 100, deg2rad(45)}, {20, 0, 100, 0}, {20, 10, 100, deg2rad(90)}};
  // s = 0 keeps the stored initial heading
  const UavState start = t.state_at_arc(0.0);
  CHECK(start.x == 0.0);
  CHECK(start.psi == deg2rad(45));
  // mid-first-segment: heading of that segment
  const UavState mid = t.state_at_arc(10.0);
  CHECK(mid.x == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(mid.y == 0.0);
  CHECK(mid.psi == doctest::Approx(0.0));
  // past the corner
  const UavState up = t.state_at_arc(25.0);
  CHECK(up.x == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(up.y == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(up.psi == doctest::Approx(deg2rad(90)).epsilon(1e-12));
  // clamped at both ends
  const UavState past = t.state_at_arc(1000.0);
  CHECK(past.x == 20.0);
  CHECK(past.y == 10.0);
  const UavState before = t.state_at_arc(-5.0);
  CHECK(before.x == 0.0);
}

TEST_CASE("zero-length segments are skipped") {
  Trajectory t;
  t.waypoints = {{0, 0, 100, 0}, {10, 0, 100, 0}, {10, 0, 100, 0}, {10, 8, 100, deg2rad(90)}};
  CHECK(t.arc_length() == doctest::Approx(18.0));
  const UavState s = t.state_at_arc(14.0);
  CHECK(s.x == doctest::Approx(10.0));
  CHECK(s.y == doctest::Approx(4.0));
  CHECK(s.psi == doctest::Approx(deg2rad(90)));
}

TEST_CASE("trajectory save/load round-trips exactly") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "sweep_traj_roundtrip.txt").string();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  Trajectory t;
  for (int i = 0; i < 12; ++i) t.waypoints.push_back({u(rng), u(rng), 100.0, u(rng) / 400.0});
  t.cost = t.arc_length();
  t.save_file(path);
  const Trajectory back = Trajectory::load_file(path);
  CHECK(back.cost == t.cost);
  REQUIRE(back.waypoints.size() == t.waypoints.size());
  for (std::size_t i = 0; i < t.waypoints.size(); ++i) {
    CHECK(back.waypoints[i].x == t.waypoints[i].x);
    CHECK(back.waypoints[i].y == t.waypoints[i].y);
    CHECK(back.waypoints[i].z == t.waypoints[i].z);
    CHECK(back.waypoints[i].psi == t.waypoints[i].psi);
  }
  fs::remove(path);
}

TEST_CASE("trajectory load rejects malformed files") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "sweep_traj_bad.txt").string();
  {
    std::ofstream f(path);
    f << "budget 100\n1 2 3 4\n";
  }
  CHECK_THROWS_AS(Trajectory::load_file(path), std::runtime_error);
  {
    std::ofstream f(path);
    f << "cost 100\n";  // no waypoints
  }
  CHECK_THROWS_AS(Trajectory::load_file(path), std::runtime_error);
  CHECK_THROWS_AS(Trajectory::load_file("/nonexistent/plan.txt"), std::runtime_error);
  fs::remove(path);
}
