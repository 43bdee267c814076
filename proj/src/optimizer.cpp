#include "brittle/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

#include "brittle/parallel.hpp"

namespace brittle {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct LineRange {
  int lo;
  int hi;
  bool contains(int j) const { return j >= lo && j <= hi; }
};

LineRange line_range(const LatticeModel& lat, const Problem* problem) {
  if (problem) return {problem->clamps().row_begin, problem->clamps().row_end};
  return {1, lat.width() - 1};
}

// Element crossed by the dual step (i, j) -> (i + di, j + dj), or npos.
std::size_t move_element(const LatticeModel& lat, int i, int j, int di, int dj) {
  const int w = lat.width();
  const int ti = i + di, tj = j + dj;
  if (ti < 0 || ti > w || tj < 0 || tj > w) return LatticeModel::npos;
  if (dj == 0) {
    if (j < 1 || j > w - 1) return LatticeModel::npos;
    return lat.face_element(lat.north_edge(lat.pixel(std::min(i, ti), j - 1)));
  }
  if (di == 0) {
    if (i < 1 || i > w - 1) return LatticeModel::npos;
    return lat.face_element(lat.east_edge(lat.pixel(i - 1, std::min(j, tj))));
  }
  const int pi = std::min(i, ti), pj = std::min(j, tj);
  const bool rising = di == dj;
  return lat.diagonal_element(lat.pixel(pi, pj),
                              rising ? Diagonal::west_north : Diagonal::north_east);
}

// Same-orientation twin of a diagonal element (pixel on the other side).
std::size_t diagonal_twin(const LatticeModel& lat, std::size_t id) {
  const ElementInfo info = lat.element_info(id);
  const auto v = static_cast<int>(info.variant);
  return lat.diagonal_element(info.pixel, static_cast<Diagonal>((v + 2) % 4));
}

struct StepCost {
  CutLength units;
  std::size_t element;  // element to record (constraint's own if present)
};

StepCost step_cost(const LatticeModel& lat, const CutQuery& q, std::size_t id) {
  const bool diagonal = lat.element_info(id).kind == ElementInfo::Kind::diagonal;
  if (q.constraint) {
    if (q.constraint->contains(id)) return {{0, 0}, id};
    if (diagonal) {
      const std::size_t twin = diagonal_twin(lat, id);
      if (q.constraint->contains(twin)) return {{0, 0}, twin};
    }
  }
  if (q.mode == CutMode::perforation && lat.element_in_inclusion(id)) return {{0, 0}, id};
  return {diagonal ? CutLength{0, 1} : CutLength{1, 0}, id};
}

bool element_allowed(const CutQuery& q, std::size_t id) {
  if (id == LatticeModel::npos) return false;
  if (q.problem && !q.problem->element_breakable(id)) {
    return q.constraint && q.constraint->contains(id);
  }
  return true;
}

CutLength add(const CutLength& a, const CutLength& b) {
  return {a.axis_units + b.axis_units, a.diag_units + b.diag_units};
}

struct QueueKey {
  CutLength len;
  int hops;
  std::size_t node;
};

bool key_less(const QueueKey& a, const QueueKey& b) {
  if (cut_less(a.len, b.len)) return true;
  if (cut_less(b.len, a.len)) return false;
  if (a.hops != b.hops) return a.hops < b.hops;
  return a.node < b.node;
}

constexpr int kMoves[8][2] = {{1, 0}, {1, 1}, {1, -1}, {0, 1}, {0, -1}, {-1, 0}, {-1, 1}, {-1, -1}};

}  // namespace

double CutLength::value(int width) const {
  return (static_cast<double>(axis_units) + kSqrt2 * static_cast<double>(diag_units)) /
         static_cast<double>(width);
}

bool cut_less(const CutLength& a, const CutLength& b) {
  // a.axis + a.diag*sqrt2 < b.axis + b.diag*sqrt2  <=>  A < B*sqrt2
  using wide = __int128;
  const wide A = static_cast<wide>(a.axis_units) - b.axis_units;
  const wide B = static_cast<wide>(b.diag_units) - a.diag_units;
  if (A < 0) {
    if (B >= 0) return true;
    return A * A > 2 * B * B;
  }
  if (B <= 0) return false;
  return A * A < 2 * B * B;
}

CutResult min_cut(const LatticeModel& lattice, const CutQuery& query) {
  const int w = lattice.width();
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  const LineRange lines = line_range(lattice, query.problem);
  auto node_of = [&](int i, int j) { return static_cast<std::size_t>(j) * stride + i; };

  CutResult result;
  result.crack = CrackState(lattice);
  if (query.constraint) result.crack.add_all(*query.constraint);

  if (query.restrict_horizontal) {
    const int j = query.pinned_line.value_or(w / 2);
    if (!lines.contains(j) || j < 1 || j > w - 1) {
      throw std::invalid_argument("min_cut: horizontal line outside the admissible band");
    }
    for (int i = 0; i < w; ++i) {
      const std::size_t id = move_element(lattice, i, j, 1, 0);
      if (!element_allowed(query, id)) {
        throw std::invalid_argument("min_cut: horizontal line crosses unbreakable elements");
      }
      const StepCost c = step_cost(lattice, query, id);
      result.units = add(result.units, c.units);
      result.crack.add(c.element);
      result.corners.push_back(node_of(i, j));
    }
    result.corners.push_back(node_of(w, j));
    result.hops = w;
    result.length = result.units.value(w);
    return result;
  }

  if (query.pinned_line && !lines.contains(*query.pinned_line)) {
    throw std::invalid_argument("min_cut: pinned line outside the admissible band");
  }

  const std::size_t nodes = stride * stride;
  const CutLength inf{std::numeric_limits<long long>::max() / 4, 0};
  std::vector<CutLength> dist(nodes, inf);
  std::vector<int> hops(nodes, std::numeric_limits<int>::max());
  std::vector<std::size_t> prev(nodes, LatticeModel::npos);
  std::vector<std::uint8_t> done(nodes, 0);
  auto greater = [](const QueueKey& a, const QueueKey& b) { return key_less(b, a); };
  std::priority_queue<QueueKey, std::vector<QueueKey>, decltype(greater)> heap(greater);

  for (int j = lines.lo; j <= lines.hi; ++j) {
    if (query.pinned_line && j != *query.pinned_line) continue;
    const std::size_t s = node_of(0, j);
    dist[s] = {0, 0};
    hops[s] = 0;
    heap.push({dist[s], 0, s});
  }

  std::size_t target = LatticeModel::npos;
  while (!heap.empty()) {
    const QueueKey top = heap.top();
    heap.pop();
    if (done[top.node]) continue;
    done[top.node] = 1;
    const int i = static_cast<int>(top.node % stride);
    const int j = static_cast<int>(top.node / stride);
    if (i == w && (!query.pinned_line || j == *query.pinned_line)) {
      target = top.node;
      break;
    }
    for (const auto& mv : kMoves) {
      const int ti = i + mv[0], tj = j + mv[1];
      if (!lines.contains(tj)) continue;
      const std::size_t id = move_element(lattice, i, j, mv[0], mv[1]);
      if (!element_allowed(query, id)) continue;
      const std::size_t to = node_of(ti, tj);
      if (done[to]) continue;
      const QueueKey cand{add(top.len, step_cost(lattice, query, id).units), top.hops + 1, to};
      const QueueKey cur{dist[to], hops[to], to};
      if (key_less(cand, cur)) {
        dist[to] = cand.len;
        hops[to] = cand.hops;
        prev[to] = top.node;
        heap.push(cand);
      }
    }
  }
  if (target == LatticeModel::npos) throw std::runtime_error("min_cut: no separating path");

  std::vector<std::size_t> path{target};
  while (prev[path.back()] != LatticeModel::npos) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const int i = static_cast<int>(path[s] % stride), j = static_cast<int>(path[s] / stride);
    const int ti = static_cast<int>(path[s + 1] % stride);
    const int tj = static_cast<int>(path[s + 1] / stride);
    const StepCost c = step_cost(lattice, query, move_element(lattice, i, j, ti - i, tj - j));
    result.crack.add(c.element);
  }
  result.units = dist[target];
  result.hops = hops[target];
  result.length = result.units.value(w);
  result.corners = std::move(path);
  return result;
}

CutResult min_cut_perforation(const LatticeModel& lattice) {
  CutQuery q;
  q.mode = CutMode::perforation;
  q.pinned_line = lattice.width() / 2;
  return min_cut(lattice, q);
}

CrackState zigzag_crack(const LatticeModel& lattice) {
  const int n = lattice.n_per_period();
  if (n % 8 != 0) {
    throw std::invalid_argument("zigzag: n_per_period must be a multiple of 8");
  }
  const int w = lattice.width();
  const int half = w / 2;
  const int k = lattice.k();
  CrackState crack(lattice);
  for (int m = -(k + 1) / 2; m <= (k + 1) / 2; ++m) {
    // Rising diagonal from (m + 1/8, 1/8) to (m + 3/8, 3/8), cell units.
    const int i_rise = m * n + n / 8 + half;
    const int j_low = n / 8 + half;
    // Falling diagonal from (m + 5/8, 3/8) to (m + 7/8, 1/8).
    const int i_fall = m * n + 5 * n / 8 + half;
    const int j_high = 3 * n / 8 + half;
    for (int s = 0; s < n / 4; ++s) {
      if (i_rise >= 0 && i_rise + n / 4 <= w) {
        crack.add(lattice.diagonal_element(lattice.pixel(i_rise + s, j_low + s),
                                           Diagonal::west_north));
      }
      if (i_fall >= 0 && i_fall + n / 4 <= w) {
        crack.add(lattice.diagonal_element(lattice.pixel(i_fall + s, j_high - 1 - s),
                                           Diagonal::north_east));
      }
    }
  }
  return crack;
}

Construction zigzag_construction(const Problem& problem) {
  const LatticeModel& lat = problem.lattice();
  const double t = problem.bc().t;
  if (t > kMaxBridgingLoad + 1e-12) {
    throw std::invalid_argument("zigzag_construction: t must not exceed (sqrt2-1)/4");
  }
  Construction out;
  out.crack = zigzag_crack(lat);
  for (std::size_t id : out.crack.elements()) {
    if (!problem.element_breakable(id)) {
      throw std::invalid_argument("zigzag_construction: zig-zag leaves the free band");
    }
  }
  const double r2 = std::sqrt(2.0);
  out.u.values.assign(lat.num_pixels(), 0.0);
  for (std::size_t p = 0; p < lat.num_pixels(); ++p) {
    const Point c = lat.pixel_center_cell(p);
    double v = 0.0;
    if (in_lower_bridge(c, t)) {
      v = t - r2 / 8.0 + r2 * c.y;
    } else if (in_upper_bridge(c, t)) {
      v = -3.0 * r2 / 8.0 + r2 * c.y;
    } else if (in_zigzag_set(c)) {
      v = t;
    }
    if (problem.pixel_clamped(p)) {
      if (std::abs(v - problem.clamp_value(p)) > 1e-12) {
        throw std::invalid_argument("zigzag_construction: bridges do not fit in the free band");
      }
      v = problem.clamp_value(p);
    }
    out.u.values[p] = v;
  }
  out.energy = energy(problem, out.crack, out.u);
  return out;
}

Construction straight_crack_construction(const Problem& problem, double y_level) {
  const LatticeModel& lat = problem.lattice();
  const int w = lat.width();
  const int line = static_cast<int>(std::lround((y_level + 0.5) * w));
  const ClampLayout& cl = problem.clamps();
  if (line < cl.row_begin || line > cl.row_end) {
    throw std::invalid_argument("straight_crack_construction: y_level outside the free band");
  }
  Construction out;
  out.crack = CrackState(lat);
  for (int i = 0; i < w; ++i) {
    out.crack.add(lat.face_element(lat.north_edge(lat.pixel(i, line - 1))));
  }
  out.u.values.assign(lat.num_pixels(), 0.0);
  for (std::size_t p = 0; p < lat.num_pixels(); ++p) {
    out.u.values[p] = lat.row_of(p) < line ? cl.lower_value : cl.upper_value;
  }
  out.energy = energy(problem, out.crack, out.u);
  return out;
}

MinimizeResult alternate_minimize(const Problem& problem, const CrackState& init,
                                  const CrackState* constraint, const MinimizeOptions& options) {
  const LatticeModel& lat = problem.lattice();
  if (constraint && !constraint->subset_of(init)) {
    throw std::invalid_argument("alternate_minimize: constraint must be contained in init");
  }
  MinimizeResult res;
  res.crack = CrackState(lat);
  res.crack.add_all(init);
  SolveOptions so;
  so.tol = options.tol;
  so.kernels = options.kernels;
  res.u = solve_displacement(problem, res.crack, so);
  res.energy = energy(problem, res.crack, res.u);
  res.history.push_back(res.energy.total());

  const std::size_t np = lat.num_pixels();
  std::vector<std::uint32_t> stamp(np, 0);
  struct Candidate {
    double gain;
    std::size_t id;
  };
  std::vector<Candidate> cands;
  std::vector<double> ee(lat.num_edges(), 0.0);

  res.converged = false;
  for (int sweep = 1; sweep <= options.max_iterations + 1; ++sweep) {
    const std::vector<std::uint8_t> open = res.crack.opened_edges(lat);
    for (std::size_t e = 0; e < lat.num_edges(); ++e) {
      ee[e] = open[e] ? 0.0 : edge_energy(problem, res.u, e);
    }
    cands.clear();
    for (std::size_t id = 0; id < lat.num_elements(); ++id) {
      if (res.crack.contains(id) || !problem.element_breakable(id)) continue;
      double released = 0.0;
      if (id < lat.num_edges()) {
        released = ee[id];
      } else {
        for (std::size_t e : lat.opened_edges(id)) released += ee[e];
      }
      const double gain = released - lat.break_cost(id);
      if (gain > 1e-14) cands.push_back({gain, id});
    }
    if (cands.empty()) {
      res.converged = true;
      break;
    }
    if (sweep > options.max_iterations) break;
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.gain != b.gain ? a.gain > b.gain : a.id < b.id;
    });
    auto touched = [&](std::size_t id, std::size_t out[3]) {
      if (id < lat.num_edges()) {
        out[0] = lat.edge_from(id);
        out[1] = lat.edge_to(id);
        return 2;
      }
      const std::size_t p = lat.element_info(id).pixel;
      int count = 0;
      out[count++] = p;
      for (std::size_t e : lat.opened_edges(id)) {
        out[count++] = lat.edge_from(e) == p ? lat.edge_to(e) : lat.edge_from(e);
      }
      return count;
    };
    const auto mark = static_cast<std::uint32_t>(sweep);
    for (const Candidate& c : cands) {
      std::size_t px[3];
      const int count = touched(c.id, px);
      bool free = true;
      for (int q = 0; q < count; ++q) free = free && stamp[px[q]] != mark;
      if (!free) continue;
      for (int q = 0; q < count; ++q) stamp[px[q]] = mark;
      res.crack.add(c.id);
    }
    so.warm_start = &res.u;
    DisplacementField next = solve_displacement(problem, res.crack, so);
    so.warm_start = nullptr;
    const EnergyBreakdown e = energy(problem, res.crack, next);
    const double prev = res.energy.total();
    if (e.total() > prev + 1e-9 * (1.0 + prev)) {
      throw std::logic_error("alternate_minimize: energy increased across a sweep");
    }
    res.u = std::move(next);
    res.energy = e;
    res.history.push_back(e.total());
    res.iterations = sweep;
  }
  return res;
}

namespace {

void require_tiny(const Problem& problem) {
  const LatticeModel& lat = problem.lattice();
  if (lat.k() != 1 || lat.n_per_period() > 16) {
    throw std::invalid_argument("oracle: needs k = 1 and n_per_period <= 16");
  }
}

double binomial(int n, int r) {
  double v = 1.0;
  for (int q = 1; q <= r; ++q) v = v * (n - r + q) / q;
  return v;
}

// Pinned E/NE/SE paths on lines [lo, hi] from line l0 back to l0.
double count_pinned(int width, int lo, int hi, int l0) {
  std::vector<double> ways(hi - lo + 1, 0.0), next(ways.size());
  ways[l0 - lo] = 1.0;
  for (int step = 0; step < width; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int j = lo; j <= hi; ++j) {
      const double v = ways[j - lo];
      if (v == 0.0) continue;
      for (int dj : {-1, 0, 1}) {
        if (j + dj >= lo && j + dj <= hi) next[j + dj - lo] += v;
      }
    }
    ways.swap(next);
  }
  return ways[l0 - lo];
}

}  // namespace

std::size_t oracle_candidate_count(const Problem& problem, CutMode mode) {
  require_tiny(problem);
  const int w = problem.lattice().width();
  const int lo = problem.clamps().row_begin, hi = problem.clamps().row_end;
  double count = 0.0;
  if (mode == CutMode::full) {
    count = 1.0;  // empty crack
    for (int s = lo; s <= hi; ++s) {
      // E/NE climbing from s, plus E/SE descending from s, pure E counted once.
      for (int r = 1; r <= std::min(w, hi - s); ++r) count += binomial(w, r);
      for (int r = 1; r <= std::min(w, s - lo); ++r) count += binomial(w, r);
      count += 1.0;
    }
  } else {
    const int l0 = w / 2;
    if (l0 < lo || l0 > hi) throw std::invalid_argument("oracle: y = 0 outside the band");
    count = count_pinned(w, lo, hi, l0);
  }
  if (count > static_cast<double>(kOracleCap)) {
    throw std::length_error("oracle: candidate count exceeds the cap of 1e6");
  }
  return static_cast<std::size_t>(count);
}

OracleResult brute_force_oracle(const Problem& problem, CutMode mode) {
  const LatticeModel& lat = problem.lattice();
  OracleResult best;
  best.candidates = oracle_candidate_count(problem, mode);
  const int w = lat.width();
  const int lo = problem.clamps().row_begin, hi = problem.clamps().row_end;
  std::vector<std::size_t> path;
  path.reserve(w);

  if (mode == CutMode::perforation) {
    const int l0 = w / 2;
    CutLength best_len{std::numeric_limits<long long>::max() / 4, 0};
    std::vector<std::size_t> best_path;
    CutQuery q;
    q.mode = CutMode::perforation;
    std::function<void(int, int, CutLength)> walk = [&](int i, int j, CutLength len) {
      if (i == w) {
        if (j == l0 && cut_less(len, best_len)) {
          best_len = len;
          best_path = path;
        }
        return;
      }
      if (std::abs(j - l0) > w - i) return;
      for (int dj : {0, 1, -1}) {
        if (j + dj < lo || j + dj > hi) continue;
        const std::size_t id = move_element(lat, i, j, 1, dj);
        if (id == LatticeModel::npos || !problem.element_breakable(id)) continue;
        path.push_back(id);
        walk(i + 1, j + dj, add(len, step_cost(lat, q, id).units));
        path.pop_back();
      }
    };
    walk(0, l0, {0, 0});
    best.crack = CrackState(lat);
    for (std::size_t id : best_path) best.crack.add(id);
    best.length = best_len;
    return best;
  }

  SolveOptions so;
  double best_total = std::numeric_limits<double>::infinity();
  auto evaluate = [&](const std::vector<std::size_t>& elements) {
    CrackState c(lat);
    for (std::size_t id : elements) c.add(id);
    const DisplacementField u = solve_displacement(problem, c, so);
    const EnergyBreakdown e = energy(problem, c, u);
    if (e.total() < best_total) {
      best_total = e.total();
      best.energy = e;
      best.crack = c;
      best.length = {static_cast<long long>(0), 0};
    }
  };
  evaluate({});
  for (int dir : {1, -1}) {
    std::function<void(int, int, bool)> walk = [&](int i, int j, bool stepped) {
      if (i == w) {
        if (dir == 1 || stepped) evaluate(path);
        return;
      }
      for (int dj : {0, dir}) {
        if (j + dj < lo || j + dj > hi) continue;
        const std::size_t id = move_element(lat, i, j, 1, dj);
        if (id == LatticeModel::npos || !problem.element_breakable(id)) continue;
        path.push_back(id);
        walk(i + 1, j + dj, stepped || dj != 0);
        path.pop_back();
      }
    };
    for (int s = lo; s <= hi; ++s) walk(0, s, false);
  }
  return best;
}

std::vector<DensityEstimate> sweep_density(const LatticeModel& lattice, double delta,
                                           const std::vector<double>& t_grid,
                                           const SweepOptions& options) {
  if (t_grid.empty()) throw std::invalid_argument("sweep: t_grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw std::invalid_argument("sweep: loads must be >= 0");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument("sweep: t_grid must be strictly increasing");
    }
  }
  std::vector<DensityEstimate> rows(t_grid.size());
  std::vector<double> straight(t_grid.size(), 0.0);
  MinimizeOptions mo;
  mo.tol = options.tol;
  mo.kernels = options.kernels;

  parallel_for(t_grid.size(), options.workers, [&](std::size_t idx) {
    const double t = t_grid[idx];
    const Problem pb(lattice, {t, delta});
    DensityEstimate& row = rows[idx];
    row.t = t;
    row.g_upper = std::numeric_limits<double>::infinity();
    auto offer = [&](const char* tag, const EnergyBreakdown& e, const CrackState& c) {
      if (e.total() < row.g_upper) {
        row.g_upper = e.total();
        row.construction = tag;
        row.energy = e;
        row.crack = c;
      }
    };
    if (t <= kMaxBridgingLoad) {
      try {
        const Construction z = zigzag_construction(pb);
        offer("zigzag", z.energy, z.crack);
      } catch (const std::invalid_argument&) {
        // The bridges do not fit the free band at this k; other competitors remain.
      }
    }
    const Construction s = straight_crack_construction(pb, 0.0);
    straight[idx] = s.energy.total();
    offer("straight", s.energy, s.crack);
    bool have_zigzag = true;
    CrackState zz;
    try {
      zz = zigzag_crack(lattice);
      for (std::size_t id : zz.elements()) have_zigzag = have_zigzag && pb.element_breakable(id);
    } catch (const std::invalid_argument&) {
      have_zigzag = false;
    }
    if (have_zigzag) {
      const MinimizeResult r = alternate_minimize(pb, zz, nullptr, mo);
      offer("zigzag_relaxed", r.energy, r.crack);
    }
    const MinimizeResult r = alternate_minimize(pb, s.crack, nullptr, mo);
    offer("straight_relaxed", r.energy, r.crack);
  });

  double t0 = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (straight[i] - rows[i].g_upper <= options.straight_tol) {
      t0 = rows[i].t;
      break;
    }
  }
  for (DensityEstimate& row : rows) row.t0_estimate = t0;
  return rows;
}

}  // namespace brittle
