#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <vector>

#include "brittle/lattice.hpp"
#include "doctest.h"

using namespace brittle;

TEST_CASE("lattice construction rejects bad parameters") {
  const MicroGeometry g(0.05);
  CHECK_THROWS_AS(LatticeModel(g, 2, 16), std::invalid_argument);
  CHECK_THROWS_AS(LatticeModel(g, 0, 16), std::invalid_argument);
  CHECK_THROWS_AS(LatticeModel(g, 3, 6), std::invalid_argument);
  CHECK_THROWS_AS(LatticeModel(g, 3, 17), std::invalid_argument);
  CHECK_NOTHROW(LatticeModel(g, 1, 8));
}

TEST_CASE("basic sizes and scales") {
  const LatticeModel lat(MicroGeometry(0.05), 1, 16);
  CHECK(lat.width() == 16);
  CHECK(lat.num_pixels() == 256);
  CHECK(lat.h() == 1.0 / 16);
  CHECK(lat.eps() == 1.0);
  const LatticeModel lat5(MicroGeometry(0.05), 5, 16);
  CHECK(lat5.eps() == doctest::Approx(0.2));
  double cmin = 1e9, cmax = 0;
  for (std::size_t e = 0; e < lat5.num_edges(); ++e) {
    if (!lat5.edge_exists(e)) {
      CHECK(lat5.conductance(e) == 0.0);
      continue;
    }
    const double c = lat5.conductance(e);
    REQUIRE((c == 1.0 || c == lat5.eps()));
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  CHECK(cmax / cmin == doctest::Approx(5.0));
}

TEST_CASE("inclusion edge fraction approximates the inclusion area") {
  const LatticeModel lat(MicroGeometry(0.05), 1, 16);
  CHECK(std::abs(lat.inclusion_edge_fraction() - 0.125) <= 0.1 * 0.125);
  // Frozen boundary-layer constant: |f(2n) - f(n)| <= C / n.
  const double C = 0.08;
  for (int n : {16, 32, 64}) {
    const double f1 = LatticeModel(MicroGeometry(0.05), 1, n).inclusion_edge_fraction();
    const double f2 = LatticeModel(MicroGeometry(0.05), 1, 2 * n).inclusion_edge_fraction();
    CHECK(std::abs(f2 - f1) <= C / n);
  }
}

TEST_CASE("conductance pattern has the microstructure period") {
  const LatticeModel lat(MicroGeometry(0.05), 5, 16);
  const int n = lat.n_per_period();
  for (int j = 0; j + n < lat.width() - 1; ++j) {
    for (int i = 0; i + n < lat.width() - 1; ++i) {
      const std::size_t p = lat.pixel(i, j);
      REQUIRE(lat.conductance(lat.east_edge(p)) ==
              lat.conductance(lat.east_edge(lat.pixel(i + n, j))));
      REQUIRE(lat.conductance(lat.north_edge(p)) ==
              lat.conductance(lat.north_edge(lat.pixel(i, j + n))));
    }
  }
}

TEST_CASE("inclusion masks are resolution exact at multiples of 16") {
  const LatticeModel a(MicroGeometry(0.05), 3, 16);
  const LatticeModel b(MicroGeometry(0.05), 3, 32);
  for (int j = 0; j < a.width(); ++j) {
    for (int i = 0; i < a.width(); ++i) {
      const bool in = a.pixel_in_inclusion(a.pixel(i, j));
      for (int di = 0; di < 2; ++di) {
        for (int dj = 0; dj < 2; ++dj) {
          REQUIRE(b.pixel_in_inclusion(b.pixel(2 * i + di, 2 * j + dj)) == in);
        }
      }
    }
  }
  std::size_t count = 0;
  for (std::size_t p = 0; p < a.num_pixels(); ++p) count += a.pixel_in_inclusion(p) ? 1 : 0;
  CHECK(static_cast<double>(count) / a.num_pixels() == 0.125);
}

TEST_CASE("edge graph is connected") {
  const LatticeModel lat(MicroGeometry(0.05), 3, 8);
  std::vector<char> seen(lat.num_pixels(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    for (Side s : {Side::west, Side::north, Side::east, Side::south}) {
      const std::size_t e = lat.edge_on_side(p, s);
      if (e == LatticeModel::npos) continue;
      const std::size_t q = lat.edge_from(e) == p ? lat.edge_to(e) : lat.edge_from(e);
      if (!seen[q]) {
        seen[q] = 1;
        ++reached;
        stack.push_back(q);
      }
    }
  }
  CHECK(reached == lat.num_pixels());
}

TEST_CASE("break costs add up to dual polyline lengths") {
  const LatticeModel lat(MicroGeometry(0.05), 5, 32);
  const int w = lat.width();
  double row = 0.0;
  for (int i = 0; i < w; ++i) row += lat.break_cost(lat.face_element(lat.north_edge(lat.pixel(i, w / 2 - 1))));
  CHECK(std::abs(row - 1.0) < 1e-12);

  // Staircase: 10 diagonals up, 20 faces along, 10 diagonals down.
  double stair = 0.0, poly = 0.0;
  for (int s = 0; s < 10; ++s) {
    const std::size_t id = lat.diagonal_element(lat.pixel(s, 40 + s), Diagonal::west_north);
    stair += lat.break_cost(id);
    poly += lat.element_segment(id).length();
  }
  for (int s = 0; s < 20; ++s) {
    const std::size_t id = lat.face_element(lat.north_edge(lat.pixel(10 + s, 49)));
    stair += lat.break_cost(id);
    poly += lat.element_segment(id).length();
  }
  CHECK(std::abs(stair - poly) < 1e-12);
  CHECK(std::abs(stair - (10 * std::sqrt(2.0) + 20) * lat.h()) < 1e-12);
}

TEST_CASE("diagonal elements open the two edges on the far side") {
  const LatticeModel lat(MicroGeometry(0.05), 1, 8);
  const std::size_t p = lat.pixel(3, 3);
  auto as_set = [](const std::vector<std::size_t>& v) { return std::set<std::size_t>(v.begin(), v.end()); };
  const std::size_t W = lat.edge_on_side(p, Side::west), N = lat.edge_on_side(p, Side::north),
                    E = lat.edge_on_side(p, Side::east), S = lat.edge_on_side(p, Side::south);
  CHECK(as_set(lat.opened_edges(lat.diagonal_element(p, Diagonal::west_north))) == std::set<std::size_t>{W, N});
  CHECK(as_set(lat.opened_edges(lat.diagonal_element(p, Diagonal::north_east))) == std::set<std::size_t>{N, E});
  CHECK(as_set(lat.opened_edges(lat.diagonal_element(p, Diagonal::east_south))) == std::set<std::size_t>{E, S});
  CHECK(as_set(lat.opened_edges(lat.diagonal_element(p, Diagonal::south_west))) == std::set<std::size_t>{S, W});
  CHECK(lat.opened_edges(lat.diagonal_element(lat.pixel(0, 0), Diagonal::south_west)).empty());
  const ElementInfo info = lat.element_info(lat.diagonal_element(p, Diagonal::east_south));
  CHECK(info.kind == ElementInfo::Kind::diagonal);
  CHECK(info.pixel == p);
  CHECK(info.variant == Diagonal::east_south);
  CHECK(lat.break_cost(lat.diagonal_element(p, Diagonal::east_south)) ==
        doctest::Approx(std::sqrt(2.0) / 8).epsilon(1e-15));
}

TEST_CASE("boundary layout") {
  const LatticeModel lat(MicroGeometry(0.05), 5, 32);
  const ClampLayout cl = apply_bc(lat, {0.05, 0.25});
  CHECK(cl.row_begin == 60);
  CHECK(cl.row_end == 100);
  CHECK(lat.pixel_center(lat.pixel(0, cl.row_begin - 1)).y < -0.125);
  CHECK(lat.pixel_center(lat.pixel(0, cl.row_end)).y > 0.125);
  CHECK(cl.lower_weight == doctest::Approx(2.0));
  CHECK(cl.upper_weight == doctest::Approx(2.0));
  CHECK(cl.upper_value == 0.05);
  // delta close to 1: clamps shrink to the boundary rows.
  const ClampLayout wide = apply_bc(lat, {0.0, 0.97});
  CHECK(wide.row_begin == 2);
  CHECK(wide.row_end == lat.width() - 2);
  CHECK_THROWS_AS(apply_bc(lat, {0.0, 0.01}), std::invalid_argument);
  CHECK_THROWS_AS(apply_bc(lat, {0.0, 0.995}), std::invalid_argument);
  CHECK_THROWS_AS(apply_bc(lat, {-0.1, 0.25}), std::invalid_argument);
  CHECK_THROWS_AS(apply_bc(lat, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("off-grid strip boundary weights") {
  const LatticeModel lat(MicroGeometry(0.05), 1, 16);
  const ClampLayout cl = apply_bc(lat, {0.0, 0.3});
  const double y0 = lat.pixel_center(lat.pixel(0, cl.row_begin)).y;
  CHECK(y0 > -0.15);
  CHECK(cl.lower_weight == doctest::Approx(lat.h() / (y0 + 0.15)));
}

TEST_CASE("clamped elements are unbreakable") {
  const LatticeModel lat(MicroGeometry(0.05), 1, 16);
  const Problem pb(lat, {0.1, 0.25});
  const int rb = pb.clamps().row_begin;
  const std::size_t below = lat.pixel(5, rb - 1);
  CHECK_FALSE(pb.element_breakable(lat.face_element(lat.east_edge(below))));
  CHECK_FALSE(pb.element_breakable(lat.diagonal_element(below, Diagonal::west_north)));
  CHECK(pb.element_breakable(lat.face_element(lat.north_edge(below))));
  CHECK(pb.element_breakable(lat.diagonal_element(lat.pixel(5, rb), Diagonal::south_west)));
  CHECK_FALSE(pb.element_breakable(lat.face_element(lat.east_edge(lat.pixel(15, rb)))));
  CHECK(pb.with_load(0.3).bc().t == 0.3);
  CHECK(pb.with_load(0.3).clamps().upper_value == 0.3);
}

TEST_CASE("lattice dump") {
  const LatticeModel lat(MicroGeometry(0.05), 1, 8);
  const auto path = std::filesystem::temp_directory_path() / "brittle_lattice_dump.csv.gz";
  REQUIRE(lat.dump_csv_gz(path.string()));
  gzFile in = gzopen(path.string().c_str(), "rb");
  REQUIRE(in != nullptr);
  char buf[512];
  std::size_t lines = 0;
  while (gzgets(in, buf, sizeof buf)) ++lines;
  gzclose(in);
  std::size_t expected = 1;
  for (std::size_t id = 0; id < lat.num_elements(); ++id) expected += lat.element_exists(id) ? 1 : 0;
  CHECK(lines == expected);
  std::filesystem::remove(path);
}

TEST_CASE("free band is symmetric about y = 0") {
  for (int k : {1, 3}) {
    for (int n : {8, 12, 16, 24}) {
      const LatticeModel lat(MicroGeometry(0.05), k, n);
      for (double delta : {0.125, 0.25, 0.3, 0.5}) {
        if (delta < 2.0 * lat.h()) continue;
        const ClampLayout c = apply_bc(lat, {0.1, delta});
        CHECK(c.row_begin == lat.width() - c.row_end);
        CHECK(c.lower_weight == c.upper_weight);
      }
    }
  }
}
