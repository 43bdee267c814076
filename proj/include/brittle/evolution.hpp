#pragma once

#include <vector>

#include "brittle/optimizer.hpp"

namespace brittle {

struct LoadProgram {
  std::vector<double> steps;  // strictly increasing; steps[0] is the small load

  double small_load() const { return steps.front(); }
  double large_load() const { return steps.back(); }
  // Throws std::invalid_argument unless nonempty, strictly increasing,
  // nonnegative and small_load <= (sqrt2 - 1)/4.
  void validate() const;
};

struct LocalizationReport {
  double rho = 0.0;
  double eta = 0.0;
  double total_length = 0.0;
  double length_in_T = 0.0;
  double length_in_T_and_U = 0.0;
  double bound_T = 0.0;   // 1/sqrt2 - eta/(4 rho)
  double bound_TU = 0.0;  // bound_T - 4 sqrt2 rho
  double outside_U_energy = 0.0;  // NaN when no field was supplied
};

// Lengths of the crack inside the butterflies T and inside T and the columns U.
LocalizationReport localize(const LatticeModel& lattice, const CrackState& crack, double rho,
                            double eta);

// Energy carried outside the columns U: bulk edges weighted by the share of
// their two pixels outside U, crack elements by their length fraction outside U.
double outside_U_energy(const Problem& problem, const CrackState& crack,
                        const DisplacementField& u);

struct EvolutionStep {
  double t = 0.0;
  EnergyBreakdown energy;
  CrackLengths lengths;
  double g_eff_estimate = 0.0;  // total energy per unit crack width
  LocalizationReport localization;
  double unconstrained_energy = 0.0;  // best run at the same load without the constraint
  bool converged = true;
  CrackState crack;
};

struct EvolutionTrace {
  double rho = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  std::vector<EvolutionStep> steps;
  double outside_U_bound = 0.0;  // 1/2 + 4 rho
  bool outside_U_flagged = false;  // terminal step fell below the bound
};

struct EvolutionOptions {
  double delta = 0.25;
  double tol = 1e-10;
  double eta = -1.0;  // negative: 4 rho^2
  const KernelTable* kernels = nullptr;
};

// Step 0 relaxes the zig-zag seed at the small load. Every later step keeps
// the previous crack as a hard constraint and takes the better of relaxing it
// as is or after completing it with the cheapest separating path.
EvolutionTrace run_evolution(const LatticeModel& lattice, const LoadProgram& program, double rho,
                             const EvolutionOptions& options = {});

// Constrained minus unconstrained energy at the last step; 0 with one step.
double toughening_gap(const EvolutionTrace& trace);

}  // namespace brittle
