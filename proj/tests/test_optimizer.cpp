#include <cmath>
#include <stdexcept>

#include "brittle/optimizer.hpp"
#include "doctest.h"

using namespace brittle;

namespace {

const double kR2 = std::sqrt(2.0);

// Independent check that a crack separates the clamps: the solved field must
// be (numerically) rigid on each side, so no bulk energy survives.
double bulk_after_cut(const Problem& pb, const CrackState& c) {
  const DisplacementField u = solve_displacement(pb, c);
  return energy(pb, c, u).bulk();
}

}  // namespace

TEST_CASE("exact comparison of a + b*sqrt2") {
  CHECK(cut_less({1, 0}, {0, 1}));
  CHECK_FALSE(cut_less({0, 1}, {1, 0}));
  CHECK(cut_less({0, 2}, {3, 0}));   // 2.828 < 3
  CHECK(cut_less({3, 0}, {1, 2}));   // 3 < 3.828
  CHECK(cut_less({14, 0}, {0, 10}));  // 14 < 14.142
  CHECK_FALSE(cut_less({15, 0}, {0, 10}));
  CHECK_FALSE(cut_less({4, 2}, {4, 2}));
  CHECK(CutLength{3, 0}.value(4) == 0.75);
}

TEST_CASE("restricted horizontal cut measures 3/4 exactly") {
  for (int k : {1, 3, 5}) {
    const LatticeModel lat(MicroGeometry(0.05), k, 32);
    CutQuery q;
    q.restrict_horizontal = true;
    const CutResult r = min_cut(lat, q);
    CHECK(r.length == 0.75);
    CHECK(r.crack.size() == static_cast<std::size_t>(lat.width()));
  }
}

TEST_CASE("perforation cut lies between the diagonal bound and 3/4") {
  const LatticeModel lat(MicroGeometry(0.05), 5, 32);
  const CutResult r = min_cut_perforation(lat);
  CHECK(r.length >= 1.0 / kR2 - 0.014);
  CHECK(r.length <= 0.721);
  CHECK(r.corners.front() % (lat.width() + 1) == 0);
  CHECK(r.corners.back() % (lat.width() + 1) == static_cast<std::size_t>(lat.width()));
  // Path is connected: successive corners are king moves apart.
  const std::size_t s = lat.width() + 1;
  for (std::size_t q = 0; q + 1 < r.corners.size(); ++q) {
    const long di = static_cast<long>(r.corners[q + 1] % s) - static_cast<long>(r.corners[q] % s);
    const long dj = static_cast<long>(r.corners[q + 1] / s) - static_cast<long>(r.corners[q] / s);
    CHECK(std::abs(di) <= 1);
    CHECK(std::abs(dj) <= 1);
    CHECK((di != 0 || dj != 0));
  }
}

TEST_CASE("min cut separates the clamps") {
  const LatticeModel lat(MicroGeometry(0.05), 3, 16);
  const Problem pb(lat, {0.3, 0.25});
  CutQuery q;
  q.mode = CutMode::full;
  q.problem = &pb;
  const CutResult r = min_cut(lat, q);
  CHECK(r.length == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bulk_after_cut(pb, r.crack) < 1e-12);

  q.mode = CutMode::perforation;
  const CutResult p = min_cut(lat, q);
  CHECK(p.length < r.length);
  // Free inclusion crossings are still broken, so the cut separates too.
  CHECK(bulk_after_cut(pb, p.crack) < 1e-12);
}

TEST_CASE("constraint elements are free and kept") {
  const LatticeModel lat(MicroGeometry(0.05), 3, 32);
  const Problem pb(lat, {0.5, 0.25});
  const CrackState zz = zigzag_crack(lat);
  CutQuery q;
  q.mode = CutMode::full;
  q.problem = &pb;
  q.constraint = &zz;
  const CutResult r = min_cut(lat, q);
  CHECK(zz.subset_of(r.crack));
  CHECK(bulk_after_cut(pb, r.crack) < 1e-12);
  // Completing the zig-zag needs the flats between diagonals: 1/2 per period.
  CHECK(r.length == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.crack.length(lat) == doctest::Approx(0.5 + 1.0 / kR2).epsilon(1e-12));
}

TEST_CASE("zig-zag crack geometry") {
  for (int k : {1, 3, 5}) {
    const LatticeModel lat(MicroGeometry(0.05), k, 32);
    const CrackState zz = zigzag_crack(lat);
    CHECK(zz.size() == static_cast<std::size_t>(2 * k * 8));
    const CrackLengths len = zz.lengths(lat);
    CHECK(len.total == doctest::Approx(1.0 / kR2).epsilon(1e-12));
    CHECK(len.matrix == doctest::Approx(1.0 / kR2).epsilon(1e-12));
    CHECK(len.inclusion == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(zigzag_crack(LatticeModel(MicroGeometry(0.05), 3, 12)), std::invalid_argument);
}

TEST_CASE("bridging construction stays below the bound") {
  const LatticeModel lat(MicroGeometry(0.05), 5, 32);
  for (double t : {0.02, 0.05, 0.1}) {
    const Construction z = zigzag_construction(Problem(lat, {t, 0.25}));
    CHECK(z.energy.total() <= 1.0 / kR2 + 2.0 * kR2 * t + 0.03);
    CHECK(z.energy.surface == doctest::Approx(1.0 / kR2).epsilon(1e-12));
    CHECK(z.energy.bulk_matrix < 1e-20);
  }
  CHECK(zigzag_construction(Problem(lat, {0.02, 0.25})).energy.total() < 1.0);
  CHECK_THROWS_AS(zigzag_construction(Problem(lat, {0.2, 0.25})), std::invalid_argument);
}

TEST_CASE("bridging construction is no better than the solved field") {
  const LatticeModel lat(MicroGeometry(0.05), 5, 32);
  const Problem pb(lat, {0.05, 0.25});
  const Construction z = zigzag_construction(pb);
  const DisplacementField u = solve_displacement(pb, z.crack);
  CHECK(energy(pb, z.crack, u).total() <= z.energy.total() + 1e-12);
}

TEST_CASE("straight construction") {
  const LatticeModel lat(MicroGeometry(0.05), 3, 32);
  const Construction s = straight_crack_construction(Problem(lat, {0.7, 0.25}));
  CHECK(s.energy.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.energy.bulk() == 0.0);
  CHECK_THROWS_AS(straight_crack_construction(Problem(lat, {0.7, 0.25}), 0.3),
                  std::invalid_argument);
}

TEST_CASE("alternation lowers the energy and keeps the seed") {
  const LatticeModel lat(MicroGeometry(0.05), 3, 32);
  const Problem pb(lat, {0.6, 0.25});
  const CrackState zz = zigzag_crack(lat);
  const MinimizeResult r = alternate_minimize(pb, zz, &zz);
  CHECK(r.converged);
  CHECK(zz.subset_of(r.crack));
  for (std::size_t q = 1; q < r.history.size(); ++q) {
    CHECK(r.history[q] <= r.history[q - 1] * (1.0 + 1e-9));
  }
  CHECK(r.energy.total() <= r.history.front());
  // Each element left intact could not release more than it costs.
  const DisplacementField& u = r.u;
  const auto open = r.crack.opened_edges(lat);
  for (std::size_t e = 0; e < lat.num_edges(); ++e) {
    if (open[e] || !pb.element_breakable(e)) continue;
    CHECK(edge_energy(pb, u, e) <= lat.break_cost(e) + 1e-12);
  }
}

TEST_CASE("alternation rejects a seed missing the constraint") {
  const LatticeModel lat(MicroGeometry(0.05), 3, 16);
  const Problem pb(lat, {0.1, 0.25});
  CrackState c(lat);
  c.add(lat.face_element(lat.north_edge(lat.pixel(2, lat.width() / 2))));
  CHECK_THROWS_AS(alternate_minimize(pb, CrackState(lat), &c), std::invalid_argument);
}

TEST_CASE("alternation reports the iteration cap") {
  const LatticeModel lat(MicroGeometry(0.05), 1, 16);
  const Problem pb(lat, {3.0, 0.5});
  MinimizeOptions opt;
  opt.max_iterations = 0;
  const MinimizeResult r = alternate_minimize(pb, CrackState(lat), nullptr, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.crack.empty());
  opt.max_iterations = 200;
  const MinimizeResult full = alternate_minimize(pb, CrackState(lat), nullptr, opt);
  CHECK(full.converged);
  CHECK(full.energy.total() < r.energy.total());
}

TEST_CASE("oracle candidate counts") {
  const LatticeModel lat(MicroGeometry(0.05), 1, 8);
  const Problem pb(lat, {0.0, 0.25});
  // Two free rows: band lines 3..5 at W = 8.
  const std::size_t full = oracle_candidate_count(pb, CutMode::full);
  // Per start line s: climbs C(8, r) for r <= 5 - s, descents for r <= s - 3, plus pure E.
  const std::size_t expect = 1 + (8 + 28 + 1) + (8 + 8 + 1) + (28 + 8 + 1);
  CHECK(full == expect);
  CHECK_THROWS_AS(oracle_candidate_count(Problem(LatticeModel(MicroGeometry(0.05), 3, 8), {0, 0.25}),
                                         CutMode::full),
                  std::invalid_argument);
}

TEST_CASE("oracle agrees with the optimizer on tiny instances") {
  struct Instance {
    int n;
    double t;
    double delta;
  };
  for (const Instance& in : {Instance{8, 0.0, 0.25}, Instance{12, 0.05, 0.25}, Instance{16, 0.5, 0.125}}) {
    const LatticeModel lat(MicroGeometry(0.05), 1, in.n);
    const Problem pb(lat, {in.t, in.delta});
    const OracleResult full = brute_force_oracle(pb, CutMode::full);
    const MinimizeResult alt = alternate_minimize(pb, full.crack);
    CHECK(std::abs(alt.energy.total() - full.energy.total()) <= 1e-9);

    const OracleResult perf = brute_force_oracle(pb, CutMode::perforation);
    CutQuery q;
    q.mode = CutMode::perforation;
    q.problem = &pb;
    q.pinned_line = lat.width() / 2;
    CHECK(min_cut(lat, q).units == perf.length);
  }
}

TEST_CASE("density sweep properties") {
  const LatticeModel lat(MicroGeometry(0.05), 3, 32);
  SweepOptions opt;
  opt.workers = 2;
  const std::vector<double> grid{0.02, 0.05, 0.1, 0.3, 1.0};
  const auto rows = sweep_density(lat, 0.25, grid, opt);
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].g_upper <= 1.0 + 1e-9);
    CHECK(rows[i].g_upper >= 1.0 / kR2 - 0.02);
    if (i > 0) CHECK(rows[i].g_upper >= rows[i - 1].g_upper - 0.01);
  }
  CHECK(std::isfinite(rows.front().t0_estimate));
  CHECK(rows.back().g_upper == doctest::Approx(1.0).epsilon(1e-9));

  opt.workers = 1;
  const auto serial = sweep_density(lat, 0.25, grid, opt);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(serial[i].g_upper == rows[i].g_upper);
    CHECK(serial[i].construction == rows[i].construction);
  }
  CHECK_THROWS_AS(sweep_density(lat, 0.25, {}), std::invalid_argument);
  CHECK_THROWS_AS(sweep_density(lat, 0.25, {0.2, 0.1}), std::invalid_argument);
}
