#pragma once

// Pixel discretization of the body Q = (-1/2,1/2)^2 at microstructure scale
// eps = 1/k. One scalar unknown sits at the center of each pixel; axis edges
// join edge-adjacent pixels and carry the bulk stiffness.
//
// A crack is a set of crack elements drawn from a fixed catalog:
//   * face element    - the shared face of two pixels (one axis edge opened),
//                       length h;
//   * diagonal element - a pixel diagonal (length h*sqrt2). The pixel's own
//                       value stays on one side, so exactly two perpendicular
//                       axis edges of the pixel are opened.
// Element ids: face element of edge e has id e; edge ids are 2*p (east edge
// of pixel p) and 2*p+1 (north edge). Diagonal elements follow at
// 2*P + 4*p + variant. Pixels are numbered row-major from the lower-left.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "brittle/geometry.hpp"

namespace brittle {

enum class Side : std::uint8_t { west, north, east, south };

// Diagonal variants, named by the two edges they open.
enum class Diagonal : std::uint8_t {
  west_north = 0,  // "/" diagonal, pixel value on the south-east side
  north_east = 1,  // "\" diagonal, pixel value on the south-west side
  east_south = 2,  // "/" diagonal, pixel value on the north-west side
  south_west = 3,  // "\" diagonal, pixel value on the north-east side
};

struct ElementInfo {
  enum class Kind : std::uint8_t { face, diagonal } kind;
  std::size_t pixel;     // pixel owning the edge or the diagonal
  Diagonal variant;      // diagonal elements only
  bool north;            // face elements: north edge (true) or east edge
};

class LatticeModel {
 public:
  LatticeModel(const MicroGeometry& geometry, int k, int n_per_period);

  int k() const { return k_; }
  int n_per_period() const { return n_; }
  int width() const { return width_; }
  double h() const { return h_; }
  double eps() const { return eps_; }
  const MicroGeometry& geometry() const { return geometry_; }

  std::size_t num_pixels() const { return static_cast<std::size_t>(width_) * width_; }
  std::size_t num_edges() const { return 2 * num_pixels(); }
  std::size_t num_elements() const { return 6 * num_pixels(); }

  std::size_t pixel(int i, int j) const { return static_cast<std::size_t>(j) * width_ + i; }
  int column_of(std::size_t p) const { return static_cast<int>(p % width_); }
  int row_of(std::size_t p) const { return static_cast<int>(p / width_); }
  Point pixel_center(std::size_t p) const;
  // Coordinate of pixel-corner line `index` (0..width).
  // Correctly rounded ratios, so mirrored lines and centres are exact negatives.
  double grid_line(int index) const { return (2.0 * index - width_) / (2.0 * width_); }
  double center_coord(int row) const { return (2.0 * row + 1 - width_) / (2.0 * width_); }

  bool pixel_in_inclusion(std::size_t p) const { return inclusion_[p] != 0; }

  // Axis edges. Missing edges (beyond the boundary) have conductance 0.
  std::size_t east_edge(std::size_t p) const { return 2 * p; }
  std::size_t north_edge(std::size_t p) const { return 2 * p + 1; }
  bool edge_exists(std::size_t e) const;
  std::size_t edge_from(std::size_t e) const { return e / 2; }
  std::size_t edge_to(std::size_t e) const;
  double conductance(std::size_t e) const { return conductance_[e]; }
  // Face midpoint in the closed inclusion set (also meaningful at k = 1).
  bool edge_soft(std::size_t e) const { return soft_[e] != 0; }

  // Edge of pixel p on a given side, or npos when the side is the boundary.
  std::size_t edge_on_side(std::size_t p, Side side) const;

  // Crack element catalog.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t face_element(std::size_t edge) const { return edge; }
  std::size_t diagonal_element(std::size_t p, Diagonal v) const {
    return num_edges() + 4 * p + static_cast<std::size_t>(v);
  }
  ElementInfo element_info(std::size_t id) const;
  bool element_exists(std::size_t id) const;
  double break_cost(std::size_t id) const;
  // Edges opened by an element (one or two; missing boundary edges omitted).
  std::vector<std::size_t> opened_edges(std::size_t id) const;
  // Crack segment of an element in body coordinates.
  Segment element_segment(std::size_t id) const;
  // True when the element lies in the closed inclusion set (scored 0 in the
  // perforation regime).
  bool element_in_inclusion(std::size_t id) const;

  // Cached per-pixel masks of the auxiliary sets, evaluated at pixel centers.
  bool pixel_in_butterfly(std::size_t p) const { return butterfly_[p] != 0; }
  bool pixel_in_column(std::size_t p) const { return column_[p] != 0; }

  // Scale helpers between body and cell coordinates.
  Point to_cell(Point body) const { return {body.x / eps_, body.y / eps_}; }
  Segment to_cell(const Segment& s) const { return {to_cell(s.a), to_cell(s.b)}; }
  // Same points computed from grid indices, exact on the 1/n grid.
  Point pixel_center_cell(std::size_t p) const;
  Segment element_segment_cell(std::size_t id) const;

  // Edge-averaged inclusion area: each axis edge carries half of each of its
  // two pixels. Converges to |D cap Q| at rate O(1/n).
  double inclusion_edge_fraction() const;
  // Fraction of axis edges carrying the soft conductance eps.
  double soft_edge_fraction() const;

  // Gzip-compressed CSV of the element catalog; returns false on I/O error.
  bool dump_csv_gz(const std::string& path) const;

 private:
  // Cell coordinate of half-grid index i2 (corners even, centers odd).
  double cell_coord(long i2) const {
    return static_cast<double>(i2 - width_) / static_cast<double>(2 * n_);
  }
  Segment segment_from_corners(std::size_t id, bool cell) const;

  MicroGeometry geometry_;
  int k_;
  int n_;
  int width_;
  double h_;
  double eps_;
  std::vector<std::uint8_t> inclusion_;
  std::vector<std::uint8_t> butterfly_;
  std::vector<std::uint8_t> column_;
  std::vector<std::uint8_t> soft_;
  std::vector<double> conductance_;
};

struct BoundaryCondition {
  double t = 0.0;      // imposed opening: u = t on the upper strip
  double delta = 0.25; // height of the free middle band |y| < delta/2

  void validate() const;
};

// Dirichlet layout: pixel rows [0, row_begin) are clamped to 0, rows
// [row_end, width) to t, rows in between are free. The clamp value is imposed
// on the strip boundary y = -+delta/2, so the edge joining a free pixel to a
// clamped one spans only the distance from the pixel center to that line.
struct ClampLayout {
  int row_begin = 0;
  int row_end = 0;
  double lower_value = 0.0;
  double upper_value = 0.0;
  double lower_weight = 1.0;  // h / (distance from first free center to -delta/2)
  double upper_weight = 1.0;  // h / (distance from last free center to +delta/2)

  int free_rows() const { return row_end - row_begin; }
  bool row_clamped(int row) const { return row < row_begin || row >= row_end; }
};

ClampLayout apply_bc(const LatticeModel& lattice, const BoundaryCondition& bc);

// Lattice plus loading: everything the solver and energy need.
class Problem {
 public:
  Problem(const LatticeModel& lattice, const BoundaryCondition& bc);

  const LatticeModel& lattice() const { return *lattice_; }
  const BoundaryCondition& bc() const { return bc_; }
  const ClampLayout& clamps() const { return clamps_; }

  bool pixel_clamped(std::size_t p) const { return clamps_.row_clamped(lattice_->row_of(p)); }
  double clamp_value(std::size_t p) const;
  // Bulk weight of an edge: conductance times the length factor at clamps.
  double edge_weight(std::size_t e) const;
  // Edges with both ends clamped and diagonals of clamped pixels stay intact.
  bool element_breakable(std::size_t id) const;

  Problem with_load(double t) const;

 private:
  const LatticeModel* lattice_;
  BoundaryCondition bc_;
  ClampLayout clamps_;
};

}  // namespace brittle
