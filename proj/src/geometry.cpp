#include "brittle/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace brittle {

namespace {

constexpr double kEdgeTol = 1e-13;

// Representative of x in [-1/2, 1/2).
double reduce_centered(double x) { return x - std::floor(x + 0.5); }

// Representative of x in [0, 1).
double reduce_unit(double x) { return x - std::floor(x); }

double cross(Point u, Point v) { return u.x * v.y - u.y * v.x; }

Point sub(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }

double signed_area(const std::vector<Point>& v) {
  double area = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    area += p.x * q.y - q.x * p.y;
  }
  return 0.5 * area;
}

Polygon make_polygon(std::vector<Point> v) {
  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
  return Polygon{std::move(v)};
}

Polygon rect(double x0, double y0, double x1, double y1) {
  return make_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Polygon mirrored(const Polygon& poly, double sx, double sy) {
  std::vector<Point> v;
  v.reserve(poly.vertices.size());
  for (const Point& p : poly.vertices) v.push_back({sx * p.x, sy * p.y});
  return make_polygon(std::move(v));
}

void check_rho(double rho, double upper, const char* what) {
  if (!(rho > 0.0 && rho < upper)) {
    throw std::invalid_argument(std::string(what) + ": rho must lie in (0, " +
                                std::to_string(upper) + "), got " + std::to_string(rho));
  }
}

// Parameter range of the segment p0 + s*d inside a convex polygon. With
// `open` set, a segment running along an edge gets nothing.
bool clip_convex(const Polygon& poly, Point p0, Point d, double& lo, double& hi, bool open) {
  const auto& v = poly.vertices;
  const double tol = open ? kEdgeTol : -kEdgeTol;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point e = sub(v[(i + 1) % v.size()], v[i]);
    const double num = cross(e, sub(p0, v[i]));
    const double den = cross(e, d);
    if (den == 0.0) {
      if (num < tol || (open && num <= tol)) return false;
      continue;
    }
    const double s = -num / den;
    if (den > 0.0) {
      lo = std::max(lo, s);
    } else {
      hi = std::min(hi, s);
    }
    if (lo > hi) return false;
  }
  return true;
}

IntervalList merge(IntervalList list) {
  std::sort(list.begin(), list.end());
  IntervalList out;
  for (const auto& iv : list) {
    if (iv.second <= iv.first) continue;
    if (!out.empty() && iv.first <= out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

IntervalList complement(const IntervalList& list) {
  IntervalList out;
  double cursor = 0.0;
  for (const auto& iv : list) {
    if (iv.first > cursor) out.emplace_back(cursor, iv.first);
    cursor = std::max(cursor, iv.second);
  }
  if (cursor < 1.0) out.emplace_back(cursor, 1.0);
  return out;
}

IntervalList intersect(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (hi > lo) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

// Parameters in (0,1) where coordinate c0 + s*dc crosses a half-integer.
void add_cell_breaks(double c0, double dc, std::vector<double>& breaks) {
  if (dc == 0.0) return;
  const double c1 = c0 + dc;
  const double lo = std::min(c0, c1);
  const double hi = std::max(c0, c1);
  for (double m = std::ceil(lo - 0.5); m + 0.5 <= hi; m += 1.0) {
    const double s = (m + 0.5 - c0) / dc;
    if (s > 0.0 && s < 1.0) breaks.push_back(s);
  }
}

std::vector<double> cell_breaks(const Segment& seg, bool split_y) {
  std::vector<double> breaks{0.0, 1.0};
  add_cell_breaks(seg.a.x, seg.b.x - seg.a.x, breaks);
  if (split_y) add_cell_breaks(seg.a.y, seg.b.y - seg.a.y, breaks);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

IntervalList clip_polygons(const Segment& seg, const std::vector<Polygon>& polys, bool open) {
  const Point d = sub(seg.b, seg.a);
  const std::vector<double> breaks = cell_breaks(seg, true);
  IntervalList out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double s0 = breaks[i];
    const double s1 = breaks[i + 1];
    const Point mid = seg.at(0.5 * (s0 + s1));
    const double cx = std::floor(mid.x + 0.5);
    const double cy = std::floor(mid.y + 0.5);
    const Point p0{seg.a.x - cx, seg.a.y - cy};
    for (const Polygon& poly : polys) {
      double lo = s0, hi = s1;
      if (clip_convex(poly, p0, d, lo, hi, open)) out.emplace_back(lo, hi);
    }
  }
  return merge(std::move(out));
}

IntervalList clip_columns(const Segment& seg, double rho) {
  const double dx = seg.b.x - seg.a.x;
  const std::vector<double> breaks = cell_breaks(seg, false);
  const double bands[2][2] = {{-0.5 + rho, -0.125 - rho}, {0.125 + rho, 0.5 - rho}};
  IntervalList out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double s0 = breaks[i];
    const double s1 = breaks[i + 1];
    const double cx = std::floor(seg.at(0.5 * (s0 + s1)).x + 0.5);
    const double x0 = seg.a.x - cx;
    for (const auto& band : bands) {
      if (dx == 0.0) {
        if (x0 > band[0] && x0 < band[1]) out.emplace_back(s0, s1);
        continue;
      }
      double lo = (band[0] - x0) / dx;
      double hi = (band[1] - x0) / dx;
      if (lo > hi) std::swap(lo, hi);
      lo = std::max(lo, s0);
      hi = std::min(hi, s1);
      if (hi > lo) out.emplace_back(lo, hi);
    }
  }
  return merge(std::move(out));
}

}  // namespace

double Segment::length() const { return std::hypot(b.x - a.x, b.y - a.y); }

bool Polygon::contains(Point p) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point e = sub(vertices[(i + 1) % vertices.size()], vertices[i]);
    if (cross(e, sub(p, vertices[i])) < -kEdgeTol) return false;
  }
  return true;
}

std::vector<Polygon> inclusion_polygons() {
  const double a = 0.125, b = 0.375, c = 0.5;
  return {rect(-a, -a, a, a), rect(b, b, c, c), rect(-c, b, -b, c), rect(-c, -c, -b, -b),
          rect(b, -c, c, -b)};
}

std::vector<Polygon> butterfly_polygons(double rho) {
  check_rho(rho, kMaxButterflyRho, "butterfly");
  const double a = 0.125, b = 0.375;
  // T1 is the union of two trapezoids sharing the short base (a,a)-(b,b),
  // a hexagon with reflex corners at both ends of that base. It is cut into
  // convex pieces along seams that are neither axis-parallel nor diagonal, so
  // clipping grid segments against the open pieces measures the open set.
  const Point p1{a, a}, p3{b, b};
  const Point lo{a, a - rho}, right{b + rho, b}, top{b, b + rho}, left{a - rho, a};
  const Polygon pieces[3] = {make_polygon({lo, right, p1}), make_polygon({p1, right, p3, left}),
                             make_polygon({p3, top, left})};
  std::vector<Polygon> out;
  for (const Polygon& piece : pieces) {
    out.push_back(piece);                        // T1
    out.push_back(mirrored(piece, -1.0, 1.0));   // T2
    out.push_back(mirrored(piece, -1.0, -1.0));  // T3
    out.push_back(mirrored(piece, 1.0, -1.0));   // T4
  }
  return out;
}

Polygon zigzag_trapezoid() {
  return make_polygon({{0.125, 0.125}, {0.875, 0.125}, {0.625, 0.375}, {0.375, 0.375}});
}

bool in_matrix(Point x) {
  const double px = std::abs(reduce_centered(x.x));
  const double py = std::abs(reduce_centered(x.y));
  const bool central = px <= 0.125 && py <= 0.125;
  const bool corner = px >= 0.375 && py >= 0.375;
  return !(central || corner);
}

bool in_butterfly(Point x, double rho) {
  const Point p{reduce_centered(x.x), reduce_centered(x.y)};
  for (const Polygon& poly : butterfly_polygons(rho)) {
    if (poly.contains(p)) return true;
  }
  return false;
}

bool in_column(Point x, double rho) {
  check_rho(rho, kMaxColumnRho, "column");
  const double px = reduce_centered(x.x);
  return (px > -0.5 + rho && px < -0.125 - rho) || (px > 0.125 + rho && px < 0.5 - rho);
}

bool in_zigzag_set(Point x) {
  if (x.y < 0.125) return false;
  static const Polygon trapezoid = zigzag_trapezoid();
  return !trapezoid.contains({reduce_unit(x.x), x.y});
}

bool in_lower_bridge(Point x, double t) {
  const double px = reduce_centered(x.x);
  const double top = 0.125;
  return std::abs(px) < 0.125 && x.y > top - t / std::sqrt(2.0) && x.y < top;
}

bool in_upper_bridge(Point x, double t) {
  const double px = reduce_unit(x.x);
  const double bottom = 0.375;
  return px > 0.375 && px < 0.625 && x.y > bottom && x.y < bottom + t / std::sqrt(2.0);
}

IntervalList clip_segment(const Segment& seg, Region region, double rho) {
  switch (region) {
    case Region::inclusion:
      return clip_polygons(seg, inclusion_polygons(), false);
    case Region::matrix:
      return complement(clip_polygons(seg, inclusion_polygons(), false));
    case Region::butterfly:
      return clip_polygons(seg, butterfly_polygons(rho), true);
    case Region::column:
      check_rho(rho, kMaxColumnRho, "column");
      return clip_columns(seg, rho);
  }
  return {};
}

double clip_segment_length(const Segment& seg, Region region, double rho) {
  return clip_segment_length(seg, {region}, rho);
}

double clip_segment_length(const Segment& seg, std::initializer_list<Region> all_of,
                           double rho) {
  IntervalList acc{{0.0, 1.0}};
  for (Region r : all_of) acc = intersect(acc, clip_segment(seg, r, rho));
  double total = 0.0;
  for (const auto& iv : acc) total += iv.second - iv.first;
  return total * seg.length();
}

std::vector<Point> zigzag_polyline() {
  return {{0.0, 0.125}, {0.125, 0.125}, {0.375, 0.375}, {0.625, 0.375}, {0.875, 0.125},
          {1.0, 0.125}};
}

double zigzag_height(double x) {
  const double u = reduce_unit(x);
  if (u <= 0.125 || u >= 0.875) return 0.125;
  if (u <= 0.375) return u;
  if (u <= 0.625) return 0.375;
  return 1.0 - u;
}

double inclusion_area_fraction() {
  double area = 0.0;
  for (const Polygon& p : inclusion_polygons()) area += signed_area(p.vertices);
  return area;
}

MicroGeometry::MicroGeometry(double rho) : rho_(rho) {
  check_rho(rho, kMaxButterflyRho, "MicroGeometry");
}

}  // namespace brittle
