#include "brittle/evolution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace brittle {

void LoadProgram::validate() const {
  if (steps.empty()) throw std::invalid_argument("loads: at least one load step is required");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] >= 0.0) || !std::isfinite(steps[i])) {
      throw std::invalid_argument("loads: every load must be finite and >= 0");
    }
    if (i > 0 && !(steps[i] > steps[i - 1])) {
      throw std::invalid_argument("loads: steps must be strictly increasing");
    }
  }
  if (steps.front() > kMaxBridgingLoad) {
    throw std::invalid_argument("loads: the first load must not exceed (sqrt2-1)/4");
  }
}

LocalizationReport localize(const LatticeModel& lattice, const CrackState& crack, double rho,
                            double eta) {
  if (!(rho > 0.0)) throw std::invalid_argument("localize: rho must be > 0");
  LocalizationReport r;
  r.rho = rho;
  r.eta = eta;
  const CrackLengths len = crack.lengths(lattice);
  r.total_length = len.total;
  r.length_in_T = len.butterfly;
  r.length_in_T_and_U = len.butterfly_and_column;
  r.bound_T = 1.0 / std::sqrt(2.0) - eta / (4.0 * rho);
  r.bound_TU = r.bound_T - 4.0 * std::sqrt(2.0) * rho;
  r.outside_U_energy = std::numeric_limits<double>::quiet_NaN();
  return r;
}

double outside_U_energy(const Problem& problem, const CrackState& crack,
                        const DisplacementField& u) {
  const LatticeModel& lat = problem.lattice();
  const std::vector<std::uint8_t> open = crack.opened_edges(lat);
  double bulk = 0.0;
  for (std::size_t e = 0; e < lat.num_edges(); ++e) {
    if (open[e] || !lat.edge_exists(e)) continue;
    const double outside =
        0.5 * ((lat.pixel_in_column(lat.edge_from(e)) ? 0 : 1) +
               (lat.pixel_in_column(lat.edge_to(e)) ? 0 : 1));
    if (outside > 0.0) bulk += outside * edge_energy(problem, u, e);
  }
  double surface = 0.0;
  const MicroGeometry& g = lat.geometry();
  for (std::size_t id : crack.elements()) {
    const Segment seg = lat.element_segment_cell(id);
    const double inside =
        g.rho() < kMaxColumnRho ? g.clip(seg, Region::column) / seg.length() : 0.0;
    surface += lat.break_cost(id) * (1.0 - inside);
  }
  return bulk + surface;
}

namespace {

struct Candidate {
  MinimizeResult result;
  bool valid = false;
};

void keep_better(Candidate& best, MinimizeResult&& r) {
  if (!best.valid || r.energy.total() < best.result.energy.total()) {
    best.result = std::move(r);
    best.valid = true;
  }
}

CrackState completed(const Problem& pb, const CrackState& base) {
  CutQuery q;
  q.mode = CutMode::full;
  q.problem = &pb;
  q.constraint = &base;
  return min_cut(pb.lattice(), q).crack;
}

}  // namespace

EvolutionTrace run_evolution(const LatticeModel& lattice, const LoadProgram& program, double rho,
                             const EvolutionOptions& options) {
  program.validate();
  if (std::abs(rho - lattice.geometry().rho()) > 1e-15) {
    throw std::invalid_argument("evolve: rho differs from the lattice geometry");
  }
  EvolutionTrace trace;
  trace.rho = rho;
  trace.eta = options.eta < 0.0 ? 4.0 * rho * rho : options.eta;
  trace.delta = options.delta;
  trace.outside_U_bound = 0.5 + 4.0 * rho;

  MinimizeOptions mo;
  mo.tol = options.tol;
  mo.kernels = options.kernels;

  const CrackState zz = zigzag_crack(lattice);
  for (std::size_t s = 0; s < program.steps.size(); ++s) {
    const double t = program.steps[s];
    const Problem pb(lattice, {t, options.delta});
    if (s == 0) {
      for (std::size_t id : zz.elements()) {
        if (!pb.element_breakable(id)) {
          throw std::invalid_argument("evolve: zig-zag seed leaves the free band");
        }
      }
    }

    Candidate constrained;
    if (s == 0) {
      keep_better(constrained, alternate_minimize(pb, zz, nullptr, mo));
    } else {
      const CrackState& prev = trace.steps.back().crack;
      keep_better(constrained, alternate_minimize(pb, prev, &prev, mo));
      keep_better(constrained, alternate_minimize(pb, completed(pb, prev), &prev, mo));
    }

    // Unconstrained reference from the same seed family.
    double free_best = constrained.result.energy.total();
    if (s > 0) free_best = std::min(free_best, alternate_minimize(pb, zz, nullptr, mo).energy.total());
    free_best = std::min(free_best,
                         alternate_minimize(pb, completed(pb, zz), nullptr, mo).energy.total());
    const Construction straight = straight_crack_construction(pb, 0.0);
    free_best = std::min(
        free_best, alternate_minimize(pb, straight.crack, nullptr, mo).energy.total());

    MinimizeResult& r = constrained.result;
    EvolutionStep step;
    step.t = t;
    step.energy = r.energy;
    step.lengths = r.crack.lengths(lattice);
    step.g_eff_estimate = r.energy.total();
    step.localization = localize(lattice, r.crack, rho, trace.eta);
    step.localization.outside_U_energy = outside_U_energy(pb, r.crack, r.u);
    step.unconstrained_energy = free_best;
    step.converged = r.converged;
    step.crack = std::move(r.crack);
    if (s > 0 && !trace.steps.back().crack.subset_of(step.crack)) {
      throw std::logic_error("evolve: crack sets are not nested");
    }
    trace.steps.push_back(std::move(step));
  }
  trace.outside_U_flagged =
      trace.steps.size() > 1 &&
      trace.steps.back().localization.outside_U_energy < trace.outside_U_bound;
  return trace;
}

double toughening_gap(const EvolutionTrace& trace) {
  if (trace.steps.size() < 2) return 0.0;
  const EvolutionStep& last = trace.steps.back();
  return last.energy.total() - last.unconstrained_energy;
}

}  // namespace brittle
