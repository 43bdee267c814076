#include "brittle/lattice.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace brittle {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

Side first_side(Diagonal v) {
  switch (v) {
    case Diagonal::west_north: return Side::west;
    case Diagonal::north_east: return Side::north;
    case Diagonal::east_south: return Side::east;
    case Diagonal::south_west: return Side::south;
  }
  return Side::west;
}

Side second_side(Diagonal v) {
  switch (v) {
    case Diagonal::west_north: return Side::north;
    case Diagonal::north_east: return Side::east;
    case Diagonal::east_south: return Side::south;
    case Diagonal::south_west: return Side::west;
  }
  return Side::north;
}

}  // namespace

LatticeModel::LatticeModel(const MicroGeometry& geometry, int k, int n_per_period)
    : geometry_(geometry), k_(k), n_(n_per_period) {
  if (k < 1 || k % 2 == 0) {
    throw std::invalid_argument("lattice: k must be an odd positive integer, got " +
                                std::to_string(k));
  }
  if (n_per_period < 8) {
    throw std::invalid_argument(
        "lattice: n_per_period < 8 cannot resolve the 1/8-wide corner inclusions");
  }
  if (n_per_period % 2 != 0) {
    throw std::invalid_argument("lattice: n_per_period must be even so that y = 0 is a grid line");
  }
  width_ = k * n_per_period;
  h_ = 1.0 / width_;
  eps_ = 1.0 / k;

  const std::size_t np = num_pixels();
  inclusion_.assign(np, 0);
  butterfly_.assign(np, 0);
  column_.assign(np, 0);
  const bool columns_defined = geometry_.rho() < kMaxColumnRho;
  for (std::size_t p = 0; p < np; ++p) {
    const Point c = pixel_center_cell(p);
    inclusion_[p] = in_matrix(c) ? 0 : 1;
    butterfly_[p] = geometry_.in_butterfly(c) ? 1 : 0;
    column_[p] = columns_defined && geometry_.in_column(c) ? 1 : 0;
  }

  conductance_.assign(num_edges(), 0.0);
  soft_.assign(num_edges(), 0);
  for (std::size_t e = 0; e < num_edges(); ++e) {
    if (!edge_exists(e)) continue;
    const Segment face = element_segment_cell(face_element(e));
    const Point mid{0.5 * (face.a.x + face.b.x), 0.5 * (face.a.y + face.b.y)};
    soft_[e] = in_matrix(mid) ? 0 : 1;
    conductance_[e] = soft_[e] ? eps_ : 1.0;
  }
}

Point LatticeModel::pixel_center(std::size_t p) const {
  return {center_coord(column_of(p)), center_coord(row_of(p))};
}

bool LatticeModel::edge_exists(std::size_t e) const {
  const std::size_t p = e / 2;
  if (p >= num_pixels()) return false;
  return (e % 2 == 0) ? column_of(p) < width_ - 1 : row_of(p) < width_ - 1;
}

std::size_t LatticeModel::edge_to(std::size_t e) const {
  const std::size_t p = e / 2;
  return (e % 2 == 0) ? p + 1 : p + width_;
}

std::size_t LatticeModel::edge_on_side(std::size_t p, Side side) const {
  const int i = column_of(p);
  const int j = row_of(p);
  switch (side) {
    case Side::east: return i < width_ - 1 ? east_edge(p) : npos;
    case Side::north: return j < width_ - 1 ? north_edge(p) : npos;
    case Side::west: return i > 0 ? east_edge(p - 1) : npos;
    case Side::south: return j > 0 ? north_edge(p - width_) : npos;
  }
  return npos;
}

ElementInfo LatticeModel::element_info(std::size_t id) const {
  if (id < num_edges()) {
    return {ElementInfo::Kind::face, id / 2, Diagonal::west_north, id % 2 == 1};
  }
  const std::size_t q = id - num_edges();
  return {ElementInfo::Kind::diagonal, q / 4, static_cast<Diagonal>(q % 4), false};
}

bool LatticeModel::element_exists(std::size_t id) const {
  if (id < num_edges()) return edge_exists(id);
  return id < num_elements();
}

double LatticeModel::break_cost(std::size_t id) const {
  return id < num_edges() ? h_ : h_ * kSqrt2;
}

std::vector<std::size_t> LatticeModel::opened_edges(std::size_t id) const {
  if (id < num_edges()) return {id};
  const ElementInfo info = element_info(id);
  std::vector<std::size_t> out;
  for (Side s : {first_side(info.variant), second_side(info.variant)}) {
    const std::size_t e = edge_on_side(info.pixel, s);
    if (e != npos) out.push_back(e);
  }
  return out;
}

Point LatticeModel::pixel_center_cell(std::size_t p) const {
  return {cell_coord(2L * column_of(p) + 1), cell_coord(2L * row_of(p) + 1)};
}

Segment LatticeModel::segment_from_corners(std::size_t id, bool cell) const {
  const ElementInfo info = element_info(id);
  const int i = column_of(info.pixel);
  const int j = row_of(info.pixel);
  auto coord = [&](int index) { return cell ? cell_coord(2L * index) : grid_line(index); };
  const double x0 = coord(i), x1 = coord(i + 1);
  const double y0 = coord(j), y1 = coord(j + 1);
  if (info.kind == ElementInfo::Kind::face) {
    return info.north ? Segment{{x0, y1}, {x1, y1}} : Segment{{x1, y0}, {x1, y1}};
  }
  const bool rising = info.variant == Diagonal::west_north || info.variant == Diagonal::east_south;
  return rising ? Segment{{x0, y0}, {x1, y1}} : Segment{{x0, y1}, {x1, y0}};
}

Segment LatticeModel::element_segment(std::size_t id) const {
  return segment_from_corners(id, false);
}

Segment LatticeModel::element_segment_cell(std::size_t id) const {
  return segment_from_corners(id, true);
}

bool LatticeModel::element_in_inclusion(std::size_t id) const {
  const ElementInfo info = element_info(id);
  if (info.kind == ElementInfo::Kind::diagonal) return pixel_in_inclusion(info.pixel);
  return pixel_in_inclusion(edge_from(id)) || pixel_in_inclusion(edge_to(id));
}

double LatticeModel::inclusion_edge_fraction() const {
  // Each edge carries half of each adjacent pixel.
  double inside = 0.0;
  std::size_t count = 0;
  for (std::size_t e = 0; e < num_edges(); ++e) {
    if (!edge_exists(e)) continue;
    inside += 0.5 * (inclusion_[edge_from(e)] + inclusion_[edge_to(e)]);
    ++count;
  }
  return count ? inside / static_cast<double>(count) : 0.0;
}

double LatticeModel::soft_edge_fraction() const {
  std::size_t soft = 0, count = 0;
  for (std::size_t e = 0; e < num_edges(); ++e) {
    if (!edge_exists(e)) continue;
    soft += soft_[e];
    ++count;
  }
  return count ? static_cast<double>(soft) / static_cast<double>(count) : 0.0;
}

bool LatticeModel::dump_csv_gz(const std::string& path) const {
  gzFile out = gzopen(path.c_str(), "wb9");
  if (!out) return false;
  gzputs(out, "element,kind,pixel,variant,edge_a,edge_b,conductance,break_cost,"
              "inclusion,butterfly,column\n");
  const bool columns_defined = geometry_.rho() < kMaxColumnRho;
  char line[256];
  for (std::size_t id = 0; id < num_elements(); ++id) {
    if (!element_exists(id)) continue;
    const ElementInfo info = element_info(id);
    const std::vector<std::size_t> edges = opened_edges(id);
    const Segment seg = element_segment_cell(id);
    const bool in_t = geometry_.clip(seg, Region::butterfly) > 0.0;
    const bool in_u = columns_defined && geometry_.clip(seg, Region::column) > 0.0;
    const bool face = info.kind == ElementInfo::Kind::face;
    const long long edge_b = edges.size() > 1 ? static_cast<long long>(edges[1]) : -1;
    std::snprintf(line, sizeof line, "%zu,%s,%zu,%d,%zu,%lld,%.12g,%.12g,%d,%d,%d\n", id,
                  face ? (info.north ? "north" : "east") : "diagonal", info.pixel,
                  face ? -1 : static_cast<int>(info.variant), edges.empty() ? 0 : edges[0],
                  edge_b, face ? conductance_[id] : 0.0, break_cost(id),
                  element_in_inclusion(id) ? 1 : 0, in_t ? 1 : 0, in_u ? 1 : 0);
    gzputs(out, line);
  }
  return gzclose(out) == Z_OK;
}

void BoundaryCondition::validate() const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("bc: load t must be finite and >= 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("bc: delta must lie in (0, 1)");
  }
}

ClampLayout apply_bc(const LatticeModel& lattice, const BoundaryCondition& bc) {
  bc.validate();
  const int w = lattice.width();
  const double half = 0.5 * bc.delta;
  ClampLayout layout;
  layout.row_begin = w;
  layout.row_end = w;
  for (int j = 0; j < w; ++j) {
    const double y = lattice.center_coord(j);
    if (y > -half && layout.row_begin == w) layout.row_begin = j;
    if (y >= half) {
      layout.row_end = j;
      break;
    }
  }
  if (bc.delta < 2.0 * lattice.h() || layout.free_rows() < 2) {
    throw std::invalid_argument("bc: delta smaller than 2 grid rows");
  }
  if (layout.row_begin < 2 || w - layout.row_end < 2) {
    throw std::invalid_argument("bc: each clamped strip needs at least 2 grid rows");
  }
  const double y_first = lattice.center_coord(layout.row_begin);
  const double y_last = lattice.center_coord(layout.row_end - 1);
  layout.lower_weight = lattice.h() / (y_first + half);
  layout.upper_weight = lattice.h() / (half - y_last);
  layout.lower_value = 0.0;
  layout.upper_value = bc.t;
  return layout;
}

Problem::Problem(const LatticeModel& lattice, const BoundaryCondition& bc)
    : lattice_(&lattice), bc_(bc), clamps_(apply_bc(lattice, bc)) {}

double Problem::clamp_value(std::size_t p) const {
  return lattice_->row_of(p) < clamps_.row_begin ? clamps_.lower_value : clamps_.upper_value;
}

double Problem::edge_weight(std::size_t e) const {
  const double c = lattice_->conductance(e);
  if (c == 0.0) return 0.0;
  const bool a = pixel_clamped(lattice_->edge_from(e));
  const bool b = pixel_clamped(lattice_->edge_to(e));
  if (a == b) return c;
  const int row = lattice_->row_of(a ? lattice_->edge_from(e) : lattice_->edge_to(e));
  return c * (row < clamps_.row_begin ? clamps_.lower_weight : clamps_.upper_weight);
}

bool Problem::element_breakable(std::size_t id) const {
  if (!lattice_->element_exists(id)) return false;
  const ElementInfo info = lattice_->element_info(id);
  if (info.kind == ElementInfo::Kind::diagonal) return !pixel_clamped(info.pixel);
  return !(pixel_clamped(lattice_->edge_from(id)) && pixel_clamped(lattice_->edge_to(id)));
}

Problem Problem::with_load(double t) const {
  BoundaryCondition bc = bc_;
  bc.t = t;
  return Problem(*lattice_, bc);
}

}  // namespace brittle
