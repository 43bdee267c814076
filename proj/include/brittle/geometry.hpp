#pragma once

// Periodic microstructure of the composite: the soft inclusion set D (closed),
// the stiff matrix P, and the auxiliary sets used to build and score cracks.
//
// All coordinates here are in units of the period (unit cell (-1/2,1/2)^2).
// Callers working on the eps-scaled body divide by eps first.

#include <initializer_list>
#include <utility>
#include <vector>

namespace brittle {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Segment {
  Point a;
  Point b;

  double length() const;
  Point at(double s) const { return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}; }
};

enum class Region { matrix, inclusion, butterfly, column };

// Closed parameter intervals along a segment, sorted and disjoint.
using IntervalList = std::vector<std::pair<double, double>>;

inline constexpr double kMaxButterflyRho = 1.0 / 7.0;
inline constexpr double kMaxColumnRho = 1.0 / 8.0;

// Membership in P. Points on the boundary of D count as inclusion.
bool in_matrix(Point x);
inline bool in_inclusion(Point x) { return !in_matrix(x); }

// x mod Z^2 in T(rho), the union of the four butterflies around the
// diagonal segments joining the central square to the corner squares.
bool in_butterfly(Point x, double rho);

// x mod (1,0)Z in U(rho).
bool in_column(Point x, double rho);

// The zig-zag set Z, 1-periodic in x only: [0,1)x[1/8,inf) minus the
// closed trapezoid (1/8,1/8) (3/8,3/8) (5/8,3/8) (7/8,1/8).
bool in_zigzag_set(Point x);

// Bridging strips of the bridging construction at load t (1-periodic in x).
bool in_lower_bridge(Point x, double t);
bool in_upper_bridge(Point x, double t);

// Length of seg intersected with every region in `all_of`. Regions are
// periodic. The inclusion set counts as closed (its boundary belongs to D);
// T(rho) and U(rho) are measured as open sets, so a segment running along
// their boundary contributes nothing.
// `rho` is only read for butterfly and column.
double clip_segment_length(const Segment& seg, Region region, double rho = 0.0);
double clip_segment_length(const Segment& seg, std::initializer_list<Region> all_of,
                           double rho = 0.0);

// Parameter intervals of seg inside one region.
IntervalList clip_segment(const Segment& seg, Region region, double rho = 0.0);

// One period of the zig-zag crack: (0,1/8) -> (1/8,1/8) -> (3/8,3/8)
// -> (5/8,3/8) -> (7/8,1/8) -> (1,1/8).
std::vector<Point> zigzag_polyline();

// Height of the zig-zag polyline over x (1-periodic).
double zigzag_height(double x);

struct Polygon {
  std::vector<Point> vertices;  // counter-clockwise, convex
  bool contains(Point p) const;
};

// Unit-cell building blocks, exposed for rendering.
std::vector<Polygon> inclusion_polygons();
std::vector<Polygon> butterfly_polygons(double rho);  // convex pieces of T
Polygon zigzag_trapezoid();

// Validated rho carrier; the free functions above take rho directly.
class MicroGeometry {
 public:
  explicit MicroGeometry(double rho = 0.05);

  double rho() const { return rho_; }

  bool in_matrix(Point x) const { return brittle::in_matrix(x); }
  bool in_butterfly(Point x) const { return brittle::in_butterfly(x, rho_); }
  bool in_column(Point x) const { return brittle::in_column(x, rho_); }
  double clip(const Segment& seg, Region region) const {
    return clip_segment_length(seg, region, rho_);
  }
  double clip(const Segment& seg, std::initializer_list<Region> all_of) const {
    return clip_segment_length(seg, all_of, rho_);
  }

 private:
  double rho_;
};

// Area of D inside one cell from rectangle arithmetic.
double inclusion_area_fraction();

}  // namespace brittle
