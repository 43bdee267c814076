#include <cmath>
#include <stdexcept>

#include "brittle/evolution.hpp"
#include "doctest.h"

using namespace brittle;

namespace {

const double kR2 = std::sqrt(2.0);

void validate(std::vector<double> steps) { LoadProgram{std::move(steps)}.validate(); }

}  // namespace

TEST_CASE("load program validation") {
  CHECK_NOTHROW(validate({0.02, 1.0}));
  CHECK_THROWS_AS(validate({}), std::invalid_argument);
  CHECK_THROWS_AS(validate({0.02, 0.02}), std::invalid_argument);
  CHECK_THROWS_AS(validate({0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate({-0.01}), std::invalid_argument);
}

TEST_CASE("localization of reference cracks") {
  const double rho = 0.05;
  const LatticeModel lat(MicroGeometry(rho), 3, 32);
  const LocalizationReport zz = localize(lat, zigzag_crack(lat), rho, 4 * rho * rho);
  CHECK(zz.length_in_T == doctest::Approx(1.0 / kR2).epsilon(1e-12));
  CHECK(zz.length_in_T_and_U == doctest::Approx(1.0 / kR2 - 2.0 * kR2 * rho).epsilon(1e-12));
  CHECK(zz.bound_T == doctest::Approx(1.0 / kR2 - rho).epsilon(1e-15));
  CHECK(zz.bound_TU == doctest::Approx(1.0 / kR2 - rho - 4.0 * kR2 * rho).epsilon(1e-15));

  CutQuery q;
  q.restrict_horizontal = true;
  const LocalizationReport flat = localize(lat, min_cut(lat, q).crack, rho, 4 * rho * rho);
  CHECK(flat.length_in_T == 0.0);
  CHECK(flat.length_in_T_and_U == 0.0);
  CHECK(flat.total_length == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("localized lengths stay within the total") {
  for (double rho : {0.02, 0.05, 0.1}) {
    const LatticeModel lat(MicroGeometry(rho), 1, 32);
    const Problem pb(lat, {0.4, 0.5});
    const CrackState zz = zigzag_crack(lat);
    CutQuery q;
    q.mode = CutMode::full;
    q.problem = &pb;
    q.constraint = &zz;
    const CrackState c = min_cut(lat, q).crack;
    const LocalizationReport r = localize(lat, c, rho, 4 * rho * rho);
    CHECK(r.length_in_T_and_U >= 0.0);
    CHECK(r.length_in_T_and_U <= r.length_in_T + 1e-15);
    CHECK(r.length_in_T <= r.total_length + 1e-15);
  }
}

TEST_CASE("outside-column energy of a straight cut is its width outside U") {
  const double rho = 0.05;
  const LatticeModel lat(MicroGeometry(rho), 3, 40);
  const Problem pb(lat, {0.5, 0.25});
  const Construction s = straight_crack_construction(pb);
  // Per period the complement of U has width 1/4 + 4 rho.
  CHECK(outside_U_energy(pb, s.crack, s.u) == doctest::Approx(0.25 + 4 * rho).epsilon(1e-12));
}

TEST_CASE("one-step evolution stays close to the diagonal density") {
  const double rho = 0.05;
  const LatticeModel lat(MicroGeometry(rho), 5, 32);
  const EvolutionTrace tr = run_evolution(lat, {{0.02}}, rho);
  REQUIRE(tr.steps.size() == 1);
  CHECK(tr.steps[0].energy.total() < 1.0 / kR2 + 4 * rho * rho);
  CHECK(tr.steps[0].localization.length_in_T >= tr.steps[0].localization.bound_T);
  CHECK(toughening_gap(tr) == 0.0);
}

TEST_CASE("two-step evolution shows the toughening gap") {
  const double rho = 0.05;
  const LatticeModel lat(MicroGeometry(rho), 3, 32);
  const EvolutionTrace tr = run_evolution(lat, {{0.02, 1.0}}, rho);
  REQUIRE(tr.steps.size() == 2);
  CHECK(tr.steps[0].crack.subset_of(tr.steps[1].crack));
  CHECK(tr.steps[1].energy.surface >= tr.steps[0].energy.surface);
  for (const EvolutionStep& s : tr.steps) CHECK(s.energy.total() >= s.unconstrained_energy);
  CHECK(tr.steps[1].energy.total() == doctest::Approx(0.5 + 1.0 / kR2).epsilon(1e-9));
  CHECK(tr.steps[1].unconstrained_energy == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(toughening_gap(tr) == doctest::Approx(1.0 / kR2 - 0.5).epsilon(1e-9));
  CHECK(toughening_gap(tr) >= 0.0);
}

TEST_CASE("evolution rejects inconsistent input") {
  const LatticeModel lat(MicroGeometry(0.05), 3, 32);
  CHECK_THROWS_AS(run_evolution(lat, {{0.02, 1.0}}, 0.06), std::invalid_argument);
  CHECK_THROWS_AS(run_evolution(lat, {{0.2, 1.0}}, 0.05), std::invalid_argument);
}
