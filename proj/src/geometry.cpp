#include "sweep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sweep {

namespace {
constexpr double kOnLineTol = 1e-9;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
               points.end());
  const std::size_t n = points.size();
  if (n < 3) throw std::domain_error("degenerate hull: fewer than three distinct points");

  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  if (hull.size() < 3) throw std::domain_error("degenerate hull: all points collinear");
  return hull;
}

bool HorizonPolygon::contains(const Vec2& p, double slack) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    if ((b - a).cross(p - a) < -slack) return false;
  }
  return true;
}

double HorizonPolygon::layer_y(int layer, double layer_ht, bool is_upper) const {
  const double half = is_upper ? half_height_upper : half_height_lower;
  const double off = std::max(0.0, half - layer * layer_ht);
  return is_upper ? off : -off;
}

std::optional<std::pair<Vec2, Vec2>> HorizonPolygon::layer_endpoints(double cur_y) const {
  std::vector<Vec2> hits;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % n];
    const double da = offset_of(a) - cur_y;
    const double db = offset_of(b) - cur_y;
    if (std::abs(da) <= kOnLineTol) hits.push_back(a);
    if ((da < -kOnLineTol && db > kOnLineTol) || (da > kOnLineTol && db < -kOnLineTol)) {
      const double t = da / (da - db);
      hits.push_back(a + (b - a) * t);
    }
  }
  if (hits.empty()) return std::nullopt;
  auto along = [&](const Vec2& p) { return axis_dir.dot(p - axis_point); };
  Vec2 lo = hits.front(), hi = hits.front();
  for (const Vec2& p : hits) {
    if (along(p) < along(lo)) lo = p;
    if (along(p) > along(hi)) hi = p;
  }
  return std::make_pair(lo, hi);
}

HorizonPolygon build_horizon_polygon(const FootprintTrapezoid& f_current,
                                     const FootprintTrapezoid& f_future, Vec2 axis_point,
                                     Vec2 axis_dir_hint) {
  const double len = axis_dir_hint.norm();
  if (!(len > 0.0)) throw std::invalid_argument("horizon polygon needs a nonzero axis direction");

  std::vector<Vec2> pts;
  pts.reserve(8);
  for (const Vec2& p : f_current.v) pts.push_back(p);
  for (const Vec2& p : f_future.v) pts.push_back(p);

  HorizonPolygon poly;
  poly.vertices = convex_hull(std::move(pts));
  poly.axis_point = axis_point;
  poly.axis_dir = axis_dir_hint * (1.0 / len);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : poly.vertices) {
    const double off = poly.offset_of(v);
    lo = std::min(lo, off);
    hi = std::max(hi, off);
  }
  poly.half_height_upper = std::max(0.0, hi);
  poly.half_height_lower = std::max(0.0, -lo);
  return poly;
}

std::vector<CellIndex> bresenham_cells(Vec2 a, Vec2 b, const BeliefGrid& grid) {
  const double cs = grid.cell_size();
  const Vec2 o = grid.origin();
  const double ax = (a.x - o.x) / cs, ay = (a.y - o.y) / cs;
  const double bx = (b.x - o.x) / cs, by = (b.y - o.y) / cs;

  long ci = static_cast<long>(std::floor(ax)), cj = static_cast<long>(std::floor(ay));
  const long ei = static_cast<long>(std::floor(bx)), ej = static_cast<long>(std::floor(by));
  const double dx = bx - ax, dy = by - ay;
  const int sx = dx > 0.0 ? 1 : -1;
  const int sy = dy > 0.0 ? 1 : -1;
  const double inf = std::numeric_limits<double>::infinity();
  const double tdx = dx != 0.0 ? std::abs(1.0 / dx) : inf;
  const double tdy = dy != 0.0 ? std::abs(1.0 / dy) : inf;
  double tmx = dx != 0.0 ? (sx > 0 ? (ci + 1 - ax) : (ax - ci)) * tdx : inf;
  double tmy = dy != 0.0 ? (sy > 0 ? (cj + 1 - ay) : (ay - cj)) * tdy : inf;

  std::vector<CellIndex> out;
  auto emit = [&](long i, long j) {
    if (i >= 0 && j >= 0 && i < grid.n_cols() && j < grid.n_rows()) {
      out.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  };
  emit(ci, cj);
  long guard = std::labs(ei - ci) + std::labs(ej - cj) + 4;
  while ((ci != ei || cj != ej) && guard-- > 0) {
    if (std::min(tmx, tmy) > 1.0 + 1e-12) break;  // rest of the segment stays in this cell
    if (tmx < tmy) {
      ci += sx;
      tmx += tdx;
    } else if (tmy < tmx) {
      cj += sy;
      tmy += tdy;
    } else {  // exact corner crossing: neither side cell is entered
      ci += sx;
      cj += sy;
      tmx += tdx;
      tmy += tdy;
    }
    emit(ci, cj);
  }
  return out;
}

std::vector<CellIndex> cells_in_footprint(const FootprintTrapezoid& fp, const BeliefGrid& grid) {
  double min_x = fp.v[0].x, max_x = fp.v[0].x, min_y = fp.v[0].y, max_y = fp.v[0].y;
  for (int i = 1; i < 4; ++i) {
    min_x = std::min(min_x, fp.v[i].x);
    max_x = std::max(max_x, fp.v[i].x);
    min_y = std::min(min_y, fp.v[i].y);
    max_y = std::max(max_y, fp.v[i].y);
  }
  const double cs = grid.cell_size();
  const Vec2 o = grid.origin();
  const auto clamp_col = [&](double x) {
    return std::clamp(static_cast<long>(std::floor((x - o.x) / cs)), 0L,
                      static_cast<long>(grid.n_cols()) - 1);
  };
  const auto clamp_row = [&](double y) {
    return std::clamp(static_cast<long>(std::floor((y - o.y) / cs)), 0L,
                      static_cast<long>(grid.n_rows()) - 1);
  };
  const long c0 = clamp_col(min_x), c1 = clamp_col(max_x);
  const long r0 = clamp_row(min_y), r1 = clamp_row(max_y);

  std::vector<CellIndex> out;
  for (long r = r0; r <= r1; ++r) {
    for (long c = c0; c <= c1; ++c) {
      const CellIndex idx{static_cast<int>(c), static_cast<int>(r)};
      if (fp.contains(grid.cell_center(idx))) out.push_back(idx);
    }
  }
  return out;
}

}  // namespace sweep
