#include "brittle/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace brittle {

CrackState::CrackState(const LatticeModel& lattice) : flags_(lattice.num_elements(), 0) {}

void CrackState::add(std::size_t id) {
  if (id >= flags_.size()) throw std::out_of_range("crack: element id out of range");
  if (!flags_[id]) {
    flags_[id] = 1;
    ++count_;
  }
}

void CrackState::add_all(const CrackState& other) {
  if (flags_.size() < other.flags_.size()) flags_.resize(other.flags_.size(), 0);
  for (std::size_t id = 0; id < other.flags_.size(); ++id) {
    if (other.flags_[id]) add(id);
  }
}

std::vector<std::size_t> CrackState::elements() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t id = 0; id < flags_.size(); ++id) {
    if (flags_[id]) out.push_back(id);
  }
  return out;
}

bool CrackState::subset_of(const CrackState& other) const {
  for (std::size_t id = 0; id < flags_.size(); ++id) {
    if (flags_[id] && !other.contains(id)) return false;
  }
  return true;
}

double CrackState::length(const LatticeModel& lattice) const {
  double total = 0.0;
  for (std::size_t id = 0; id < flags_.size(); ++id) {
    if (flags_[id]) total += lattice.break_cost(id);
  }
  return total;
}

CrackLengths CrackState::lengths(const LatticeModel& lattice) const {
  CrackLengths out;
  const MicroGeometry& g = lattice.geometry();
  const bool columns = g.rho() < kMaxColumnRho;
  const double eps = lattice.eps();
  for (std::size_t id = 0; id < flags_.size(); ++id) {
    if (!flags_[id]) continue;
    out.total += lattice.break_cost(id);
    const Segment seg = lattice.element_segment_cell(id);
    const double inc = g.clip(seg, Region::inclusion) * eps;
    out.inclusion += inc;
    out.matrix += seg.length() * eps - inc;
    out.butterfly += g.clip(seg, Region::butterfly) * eps;
    if (columns) {
      out.column += g.clip(seg, Region::column) * eps;
      out.butterfly_and_column += g.clip(seg, {Region::butterfly, Region::column}) * eps;
    }
  }
  return out;
}

std::vector<std::uint8_t> CrackState::opened_edges(const LatticeModel& lattice) const {
  std::vector<std::uint8_t> open(lattice.num_edges(), 0);
  for (std::size_t id = 0; id < flags_.size(); ++id) {
    if (!flags_[id]) continue;
    for (std::size_t e : lattice.opened_edges(id)) open[e] = 1;
  }
  return open;
}

int cg_iteration_cap(std::size_t n) {
  return static_cast<int>(20.0 * std::sqrt(static_cast<double>(n))) + 500;
}

namespace {

// Free block of the Dirichlet problem in padded row-major storage.
struct FreeSystem {
  std::size_t width = 0;
  int row_begin = 0;
  int rows = 0;
  std::size_t base = 0;   // padded index of the first free pixel
  std::size_t size = 0;   // padded array length
  std::vector<double> diag, east, north, rhs;
  std::vector<std::uint8_t> floating;  // per free pixel (unpadded)

  std::size_t unknowns() const { return width * static_cast<std::size_t>(rows); }
  std::size_t slot(std::size_t p) const {
    return base + p - static_cast<std::size_t>(row_begin) * width;
  }
};

FreeSystem assemble(const Problem& problem, const std::vector<std::uint8_t>& open) {
  const LatticeModel& lat = problem.lattice();
  const ClampLayout& cl = problem.clamps();
  FreeSystem sys;
  sys.width = static_cast<std::size_t>(lat.width());
  sys.row_begin = cl.row_begin;
  sys.rows = cl.free_rows();
  sys.base = sys.width + 1;
  sys.size = sys.unknowns() + 2 * sys.width + 2;
  sys.diag.assign(sys.size, 0.0);
  sys.east.assign(sys.size, 0.0);
  sys.north.assign(sys.size, 0.0);
  sys.rhs.assign(sys.size, 0.0);

  const std::size_t first = static_cast<std::size_t>(cl.row_begin) * sys.width;
  const std::size_t last = static_cast<std::size_t>(cl.row_end) * sys.width;
  auto couple = [&](std::size_t e) {
    if (!lat.edge_exists(e) || open[e]) return;
    const double w = problem.edge_weight(e);
    const std::size_t a = lat.edge_from(e);
    const std::size_t b = lat.edge_to(e);
    const bool fa = !problem.pixel_clamped(a);
    const bool fb = !problem.pixel_clamped(b);
    if (fa && fb) {
      sys.diag[sys.slot(a)] += w;
      sys.diag[sys.slot(b)] += w;
      (e % 2 == 0 ? sys.east : sys.north)[sys.slot(a)] = w;
    } else if (fa) {
      sys.diag[sys.slot(a)] += w;
      sys.rhs[sys.slot(a)] += w * problem.clamp_value(b);
    } else if (fb) {
      sys.diag[sys.slot(b)] += w;
      sys.rhs[sys.slot(b)] += w * problem.clamp_value(a);
    }
  };
  // Row below the band (its north edges reach into the band).
  for (std::size_t p = first - sys.width; p < first; ++p) couple(lat.north_edge(p));
  for (std::size_t p = first; p < last; ++p) {
    couple(lat.east_edge(p));
    couple(lat.north_edge(p));
  }

  // Pieces without an intact path to a clamp are pinned at 0.
  const std::size_t m = sys.unknowns();
  sys.floating.assign(m, 1);
  std::vector<std::size_t> stack;
  for (std::size_t q = 0; q < m; ++q) {
    const std::size_t p = first + q;
    const int row = lat.row_of(p);
    bool touches = false;
    if (row == cl.row_begin) {
      const std::size_t e = lat.north_edge(p - sys.width);
      touches = touches || (!open[e]);
    }
    if (row == cl.row_end - 1) {
      const std::size_t e = lat.north_edge(p);
      touches = touches || (!open[e]);
    }
    if (touches && sys.floating[q]) {
      sys.floating[q] = 0;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    const std::size_t q = stack.back();
    stack.pop_back();
    const std::size_t s = sys.base + q;
    const std::size_t nb[4] = {sys.east[s] != 0.0 ? q + 1 : m, sys.east[s - 1] != 0.0 ? q - 1 : m,
                               sys.north[s] != 0.0 ? q + sys.width : m,
                               sys.north[s - sys.width] != 0.0 ? q - sys.width : m};
    for (std::size_t r : nb) {
      if (r < m && sys.floating[r]) {
        sys.floating[r] = 0;
        stack.push_back(r);
      }
    }
  }
  for (std::size_t q = 0; q < m; ++q) {
    if (!sys.floating[q]) continue;
    const std::size_t s = sys.base + q;
    sys.diag[s] = 1.0;
    sys.rhs[s] = 0.0;
    sys.east[s] = 0.0;
    sys.east[s - 1] = 0.0;
    sys.north[s] = 0.0;
    sys.north[s - sys.width] = 0.0;
  }
  return sys;
}

}  // namespace

DisplacementField solve_displacement(const Problem& problem, const CrackState& crack,
                                     const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve: tol must be > 0");
  const LatticeModel& lat = problem.lattice();
  const KernelTable& kt = options.kernels ? *options.kernels : active_kernels();
  const FreeSystem sys = assemble(problem, crack.opened_edges(lat));

  const std::size_t m = sys.unknowns();
  const std::size_t b0 = sys.base;
  const std::size_t first = static_cast<std::size_t>(sys.row_begin) * sys.width;
  std::vector<double> x(sys.size, 0.0), r(sys.size, 0.0), z(sys.size, 0.0), p(sys.size, 0.0),
      q(sys.size, 0.0), inv_diag(sys.size, 0.0);
  for (std::size_t i = 0; i < m; ++i) inv_diag[b0 + i] = 1.0 / sys.diag[b0 + i];
  if (options.warm_start && options.warm_start->values.size() == lat.num_pixels()) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!sys.floating[i]) x[b0 + i] = options.warm_start->values[first + i];
    }
  }

  const StencilView view{sys.diag.data(), sys.east.data(), sys.north.data(), sys.width};
  const double bnorm = std::sqrt(kt.dot(sys.rhs.data() + b0, sys.rhs.data() + b0, m));

  DisplacementField out;
  out.values.assign(lat.num_pixels(), 0.0);
  for (std::size_t pix = 0; pix < lat.num_pixels(); ++pix) {
    if (problem.pixel_clamped(pix)) out.values[pix] = problem.clamp_value(pix);
  }
  if (bnorm == 0.0) return out;  // zero data: u = 0 on the band

  kt.stencil_apply(view, x.data(), q.data(), b0, b0 + m);
  for (std::size_t i = 0; i < m; ++i) r[b0 + i] = sys.rhs[b0 + i] - q[b0 + i];
  kt.mul(inv_diag.data() + b0, r.data() + b0, z.data() + b0, m);
  std::copy(z.begin(), z.end(), p.begin());
  double rz = kt.dot(r.data() + b0, z.data() + b0, m);
  double rnorm = std::sqrt(kt.dot(r.data() + b0, r.data() + b0, m));

  const int cap = cg_iteration_cap(m);
  int it = 0;
  while (rnorm > options.tol * bnorm) {
    if (it >= cap) {
      throw SolverError("solve: no convergence after " + std::to_string(cap) +
                        " iterations (relative residual " + std::to_string(rnorm / bnorm) + ")");
    }
    kt.stencil_apply(view, p.data(), q.data(), b0, b0 + m);
    const double pq = kt.dot(p.data() + b0, q.data() + b0, m);
    if (!(pq > 0.0)) throw SolverError("solve: operator lost positive definiteness");
    const double alpha = rz / pq;
    kt.axpy(alpha, p.data() + b0, x.data() + b0, m);
    kt.axpy(-alpha, q.data() + b0, r.data() + b0, m);
    kt.mul(inv_diag.data() + b0, r.data() + b0, z.data() + b0, m);
    const double rz_next = kt.dot(r.data() + b0, z.data() + b0, m);
    kt.xpby(z.data() + b0, rz_next / rz, p.data() + b0, m);
    rz = rz_next;
    rnorm = std::sqrt(kt.dot(r.data() + b0, r.data() + b0, m));
    ++it;
  }

  for (std::size_t i = 0; i < m; ++i) out.values[first + i] = x[b0 + i];
  out.residual_norm = rnorm / bnorm;
  out.iterations = it;
  return out;
}

double edge_energy(const Problem& problem, const DisplacementField& u, std::size_t e) {
  const LatticeModel& lat = problem.lattice();
  if (!lat.edge_exists(e)) return 0.0;
  const double d = u.values[lat.edge_to(e)] - u.values[lat.edge_from(e)];
  return problem.edge_weight(e) * d * d;
}

EnergyBreakdown energy(const Problem& problem, const CrackState& crack,
                       const DisplacementField& u) {
  const LatticeModel& lat = problem.lattice();
  const std::vector<std::uint8_t> open = crack.opened_edges(lat);
  EnergyBreakdown out;
  for (std::size_t e = 0; e < lat.num_edges(); ++e) {
    if (open[e] || !lat.edge_exists(e)) continue;
    const double v = edge_energy(problem, u, e);
    (lat.edge_soft(e) ? out.bulk_soft : out.bulk_matrix) += v;
  }
  out.surface = crack.length(lat);
  return out;
}

std::vector<JumpSample> jump_profile(const Problem& problem, const CrackState& crack,
                                     const DisplacementField& u) {
  const LatticeModel& lat = problem.lattice();
  std::vector<JumpSample> out;
  for (std::size_t id : crack.elements()) {
    const ElementInfo info = lat.element_info(id);
    if (info.kind == ElementInfo::Kind::face) {
      out.push_back({id, u.values[lat.edge_to(id)] - u.values[lat.edge_from(id)]});
      continue;
    }
    // Average over the neighbors across the diagonal.
    double across = 0.0;
    int count = 0;
    for (std::size_t e : lat.opened_edges(id)) {
      const std::size_t other = lat.edge_from(e) == info.pixel ? lat.edge_to(e) : lat.edge_from(e);
      across += u.values[other];
      ++count;
    }
    if (count == 0) continue;
    across /= count;
    const double own = u.values[info.pixel];
    const bool own_lower =
        info.variant == Diagonal::west_north || info.variant == Diagonal::north_east;
    out.push_back({id, own_lower ? across - own : own - across});
  }
  return out;
}

}  // namespace brittle
