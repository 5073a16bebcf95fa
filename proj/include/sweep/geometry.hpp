#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sweep/belief_map.hpp"
#include "sweep/sensor_model.hpp"
#include "sweep/types.hpp"

namespace sweep {

// Andrew monotone chain. Returns the hull counter-clockwise without a repeated
// closing vertex; throws std::domain_error when all points are collinear.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Convex planning-horizon region: hull of the current and future swept
// footprints, with a cached axis along the path segment between them. Lateral
// offsets are signed distances from the axis line, positive on the left
// (upper) side of travel.
struct HorizonPolygon {
  std::vector<Vec2> vertices;  // CCW convex
  Vec2 axis_point;
  Vec2 axis_dir;               // unit
  double half_height_upper = 0.0;
  double half_height_lower = 0.0;

  double offset_of(const Vec2& p) const { return axis_dir.cross(p - axis_point); }
  bool contains(const Vec2& p, double slack = 1e-9) const;

  // lateral offset of scan layer `layer` (0 = outermost), clipped at the axis
  double layer_y(int layer, double layer_ht, bool is_upper) const;

  // intersection of the line parallel to the axis at offset cur_y with the
  // polygon, ordered along axis_dir; empty when the line misses entirely
  std::optional<std::pair<Vec2, Vec2>> layer_endpoints(double cur_y) const;
};

HorizonPolygon build_horizon_polygon(const FootprintTrapezoid& f_current,
                                     const FootprintTrapezoid& f_future,
                                     Vec2 axis_point, Vec2 axis_dir_hint);

// Every in-bounds grid cell the segment passes through, in order from a to b,
// each exactly once (grid ray traversal, so no diagonally-skipped cells).
// Endpoints may lie off the grid; off-grid cells are omitted.
std::vector<CellIndex> bresenham_cells(Vec2 a, Vec2 b, const BeliefGrid& grid);

// All in-bounds cells whose centers lie inside the footprint (row-major order).
std::vector<CellIndex> cells_in_footprint(const FootprintTrapezoid& fp, const BeliefGrid& grid);

}  // namespace sweep
