#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "brittle/lattice.hpp"
#include "brittle/solver.hpp"

namespace brittle {

inline constexpr double kMaxBridgingLoad = 0.10355339059327377;  // (sqrt2 - 1) / 4

// Crack length as an exact count: axis_units faces and diag_units diagonals,
// i.e. (axis_units + sqrt2 * diag_units) * h.
struct CutLength {
  long long axis_units = 0;
  long long diag_units = 0;

  double value(int width) const;
  bool operator==(const CutLength&) const = default;
};

// Exact comparison of a + b*sqrt2 values.
bool cut_less(const CutLength& a, const CutLength& b);

enum class CutMode {
  perforation,  // elements inside the inclusions are free
  full,         // every element costs its length
};

// Dual paths run over pixel corners (i, j), 0 <= i, j <= width, from the
// left boundary i = 0 to the right boundary i = width. Grid lines are
// addressed by their corner row j (the line y = -1/2 + j*h).
struct CutQuery {
  CutMode mode = CutMode::perforation;
  const CrackState* constraint = nullptr;  // elements already broken: free, kept
  const Problem* problem = nullptr;        // if set: only breakable elements, band lines only
  std::optional<int> pinned_line;          // both endpoints on this line
  bool restrict_horizontal = false;        // stay on pinned_line (default: y = 0)
};

struct CutResult {
  double length = 0.0;  // cost of the path under the query's weighting
  CutLength units;
  int hops = 0;
  CrackState crack;     // path elements plus the constraint
  std::vector<std::size_t> corners;  // visited corner ids i + j*(width+1)
};

CutResult min_cut(const LatticeModel& lattice, const CutQuery& query);

// Cell-formula estimate: perforation weighting, endpoints pinned at y = 0.
CutResult min_cut_perforation(const LatticeModel& lattice);

struct Construction {
  DisplacementField u;
  CrackState crack;
  EnergyBreakdown energy;
};

// Matrix diagonals of the zig-zag path (one rising and one falling diagonal
// per period). Requires n_per_period divisible by 8.
CrackState zigzag_crack(const LatticeModel& lattice);

// Bridging competitor: u = t above the zig-zag, affine ramps across the two
// soft bridges, 0 elsewhere; crack on the matrix zig-zag.
Construction zigzag_construction(const Problem& problem);

// u = t above the grid line nearest y_level, 0 below; full straight cut.
Construction straight_crack_construction(const Problem& problem, double y_level = 0.0);

struct MinimizeOptions {
  double tol = 1e-10;
  int max_iterations = 200;
  const KernelTable* kernels = nullptr;
};

struct MinimizeResult {
  DisplacementField u;
  CrackState crack;
  EnergyBreakdown energy;
  std::vector<double> history;  // total energy after each solve
  int iterations = 0;
  bool converged = true;        // false: iteration cap hit, best iterate returned
};

// Weak-membrane alternation: solve at fixed crack, then break elements whose
// released bulk energy exceeds their length. Within one sweep accepted
// elements touch disjoint pixels, so each sweep strictly lowers the energy.
MinimizeResult alternate_minimize(const Problem& problem, const CrackState& init,
                                  const CrackState* constraint = nullptr,
                                  const MinimizeOptions& options = {});

struct OracleResult {
  CrackState crack;
  EnergyBreakdown energy;  // full mode
  CutLength length;        // perforation mode
  std::size_t candidates = 0;
};

inline constexpr std::size_t kOracleCap = 1000000;

// Exhaustive search on tiny lattices (k = 1, n <= 16).
//   full: the empty crack and every staircase crossing the free band from
//         left to right with steps E and NE, or E and SE; each candidate is
//         re-solved and its total energy compared.
//   perforation: every path of steps E, NE, SE inside the band pinned at
//         y = 0 on both sides; the perforation length is compared.
OracleResult brute_force_oracle(const Problem& problem, CutMode mode);

// Number of candidates the oracle would visit.
std::size_t oracle_candidate_count(const Problem& problem, CutMode mode);

struct DensityEstimate {
  double t = 0.0;
  double g_upper = 0.0;
  std::string construction;
  EnergyBreakdown energy;
  double t0_estimate = 0.0;  // NaN when the straight crack never wins
  CrackState crack;
};

struct SweepOptions {
  double tol = 1e-10;
  double straight_tol = 1e-9;  // "straight crack within tol of the minimum"
  int workers = 1;
  const KernelTable* kernels = nullptr;
};

std::vector<DensityEstimate> sweep_density(const LatticeModel& lattice, double delta,
                                           const std::vector<double>& t_grid,
                                           const SweepOptions& options = {});

}  // namespace brittle
