#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "brittle/kernels.hpp"
#include "brittle/lattice.hpp"

namespace brittle {

struct CrackLengths {
  double total = 0.0;      // sum of break costs
  double matrix = 0.0;     // geometric length in eps P
  double inclusion = 0.0;  // geometric length in eps D
  double butterfly = 0.0;  // in eps T(rho)
  double butterfly_and_column = 0.0;
  double column = 0.0;     // in U_eps (0 when rho >= 1/8)
};

// Set of broken crack elements. Cheap membership by element id.
class CrackState {
 public:
  CrackState() = default;
  explicit CrackState(const LatticeModel& lattice);

  bool contains(std::size_t id) const { return id < flags_.size() && flags_[id] != 0; }
  void add(std::size_t id);
  void add_all(const CrackState& other);
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t capacity() const { return flags_.size(); }

  // Sorted element ids.
  std::vector<std::size_t> elements() const;
  bool subset_of(const CrackState& other) const;

  double length(const LatticeModel& lattice) const;
  CrackLengths lengths(const LatticeModel& lattice) const;
  // Per-edge flag: edge opened by at least one element.
  std::vector<std::uint8_t> opened_edges(const LatticeModel& lattice) const;

  bool operator==(const CrackState& other) const { return flags_ == other.flags_; }

 private:
  std::vector<std::uint8_t> flags_;
  std::size_t count_ = 0;
};

struct DisplacementField {
  std::vector<double> values;  // one per pixel, clamped pixels included
  double residual_norm = 0.0;  // relative residual of the last solve
  int iterations = 0;
};

struct EnergyBreakdown {
  double bulk_matrix = 0.0;
  double bulk_soft = 0.0;
  double surface = 0.0;

  double bulk() const { return bulk_matrix + bulk_soft; }
  double total() const { return bulk_matrix + bulk_soft + surface; }
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  double tol = 1e-10;                 // relative residual
  const KernelTable* kernels = nullptr;  // null: active_kernels()
  const DisplacementField* warm_start = nullptr;
};

// Minimizes the bulk energy at fixed crack. Opened edges carry no stiffness.
// Pieces cut off from both clamps are set to 0.
DisplacementField solve_displacement(const Problem& problem, const CrackState& crack,
                                     const SolveOptions& options = {});

// Iteration cap for n unknowns.
int cg_iteration_cap(std::size_t n);

EnergyBreakdown energy(const Problem& problem, const CrackState& crack,
                       const DisplacementField& u);

// Bulk energy of one edge at the current field (zero if the crack opens it).
double edge_energy(const Problem& problem, const DisplacementField& u, std::size_t e);

struct JumpSample {
  std::size_t element;
  double jump;  // upper/right side minus lower/left side
};

// Face elements are oriented by +x (east faces) and +y (north faces);
// diagonal elements by their upward normal.
std::vector<JumpSample> jump_profile(const Problem& problem, const CrackState& crack,
                                     const DisplacementField& u);

}  // namespace brittle
