#include "brittle/app.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <random>

#include "brittle/evolution.hpp"
#include "brittle/kernels.hpp"
#include "brittle/optimizer.hpp"
#include "brittle/output.hpp"
#include "brittle/parallel.hpp"
#include "json.hpp"

namespace brittle {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Context {
  const RunConfig& config;
  const KernelTable* kernels;
  fs::path dir;
  std::ostream& log;

  std::string path(const std::string& name) const { return (dir / name).string(); }
  void write(const std::string& name, const std::string& content) const {
    write_file(path(name), content);
  }
  void write_json(const std::string& name, const ordered_json& j) const {
    write(name, j.dump(2) + "\n");
  }
};

// NaN and infinities become null.
ordered_json real(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["experiment"] = c.experiment;
  j["k"] = c.k;
  j["n_per_period"] = c.n_per_period;
  j["rho"] = c.rho;
  j["delta"] = c.delta;
  j["t"] = c.t;
  j["t_grid"] = c.t_grid;
  j["loads"] = c.loads;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["kernel"] = c.kernel;
  return j;
}

std::string indexed(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.%s", stem, i, ext);
  return buf;
}

// Monte Carlo estimate of the inclusion area fraction; the only consumer of
// the seed, kept as an independent check of the lattice mask.
double sampled_inclusion_area(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    // Top 53 bits give a uniform double in [0, 1) independent of the library.
    const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    const double y = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    hits += in_matrix({x, y}) ? 0 : 1;
  }
  return static_cast<double>(hits) / samples;
}

void run_cell(const Context& ctx, const LatticeModel& lat) {
  const CutResult cut = min_cut_perforation(lat);
  CutQuery q;
  q.restrict_horizontal = true;
  const CutResult flat = min_cut(lat, q);
  CsvTable csv({"k", "n_per_period", "rho", "g_hat", "axis_units", "diag_units", "horizontal",
                "diagonal_reference"});
  csv.cell(static_cast<long long>(lat.k()))
      .cell(static_cast<long long>(lat.n_per_period()))
      .cell(ctx.config.rho)
      .cell(cut.length)
      .cell(cut.units.axis_units)
      .cell(cut.units.diag_units)
      .cell(flat.length)
      .cell(1.0 / std::sqrt(2.0));
  csv.end_row();
  ctx.write("cell.csv", csv.str());
  ctx.write("cell.svg", crack_svg(lat, &cut.crack, "perforation cut"));
  ordered_json j;
  j["config"] = config_json(ctx.config);
  j["g_hat"] = cut.length;
  j["horizontal"] = flat.length;
  j["inclusion_edge_fraction"] = lat.inclusion_edge_fraction();
  j["inclusion_area_sampled"] = sampled_inclusion_area(ctx.config.seed, 200000);
  ctx.write_json("summary.json", j);
  ctx.log << "g_hat = " << format_real(cut.length) << ", horizontal = "
          << format_real(flat.length) << "\n";
}

void run_sweep(const Context& ctx, const LatticeModel& lat) {
  SweepOptions opt;
  opt.tol = ctx.config.tol;
  opt.workers = worker_count();
  opt.kernels = ctx.kernels;
  const auto rows = sweep_density(lat, ctx.config.delta, ctx.config.t_grid, opt);
  CsvTable csv({"t", "g_upper", "construction", "bulk_matrix", "bulk_soft", "surface"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const DensityEstimate& r = rows[i];
    csv.cell(r.t)
        .cell(r.g_upper)
        .cell(r.construction)
        .cell(r.energy.bulk_matrix)
        .cell(r.energy.bulk_soft)
        .cell(r.energy.surface);
    csv.end_row();
    ctx.write(indexed("sweep", i, "svg"),
              crack_svg(lat, &r.crack, "t=" + format_real(r.t) + " " + r.construction));
  }
  ctx.write("sweep.csv", csv.str());
  ordered_json j;
  j["config"] = config_json(ctx.config);
  j["t0_estimate"] = real(rows.front().t0_estimate);
  j["g_upper_min"] = rows.front().g_upper;
  j["g_upper_max"] = rows.back().g_upper;
  ctx.write_json("summary.json", j);
  ctx.log << "t0_estimate = " << format_real(rows.front().t0_estimate) << "\n";
}

void trace_rows(CsvTable& csv, const EvolutionTrace& tr) {
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const EvolutionStep& s = tr.steps[i];
    const LocalizationReport& l = s.localization;
    csv.cell(static_cast<long long>(i))
        .cell(s.t)
        .cell(s.energy.total())
        .cell(s.energy.bulk_matrix)
        .cell(s.energy.bulk_soft)
        .cell(s.energy.surface)
        .cell(s.lengths.total)
        .cell(s.lengths.matrix)
        .cell(s.lengths.inclusion)
        .cell(s.lengths.column)
        .cell(l.length_in_T)
        .cell(l.length_in_T_and_U)
        .cell(l.bound_T)
        .cell(l.bound_TU)
        .cell(l.outside_U_energy)
        .cell(s.g_eff_estimate)
        .cell(s.unconstrained_energy)
        .cell(static_cast<long long>(s.converged ? 1 : 0));
    csv.end_row();
  }
}

const std::vector<std::string> kTraceHeader{
    "step",         "t",           "total",         "bulk_matrix",   "bulk_soft",
    "surface",      "length_total", "length_matrix", "length_inclusion", "length_in_U",
    "length_in_T",  "length_in_T_and_U", "bound_T",  "bound_TU",      "outside_U_energy",
    "g_eff_estimate", "unconstrained", "converged"};

EvolutionTrace evolve(const Context& ctx, const LatticeModel& lat,
                      const std::vector<double>& loads) {
  EvolutionOptions opt;
  opt.delta = ctx.config.delta;
  opt.tol = ctx.config.tol;
  opt.kernels = ctx.kernels;
  return run_evolution(lat, {loads}, ctx.config.rho, opt);
}

void run_evolve(const Context& ctx, const LatticeModel& lat) {
  const EvolutionTrace tr = evolve(ctx, lat, ctx.config.loads);
  CsvTable csv(kTraceHeader);
  trace_rows(csv, tr);
  ctx.write("trace.csv", csv.str());
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    ctx.write(indexed("frame", i, "svg"),
              crack_svg(lat, &tr.steps[i].crack, "t=" + format_real(tr.steps[i].t)));
  }
  const EvolutionStep& last = tr.steps.back();
  ordered_json j;
  j["config"] = config_json(ctx.config);
  j["toughening_gap"] = toughening_gap(tr);
  j["constrained_terminal"] = last.energy.total();
  j["unconstrained_terminal"] = last.unconstrained_energy;
  j["outside_U_energy"] = real(last.localization.outside_U_energy);
  j["outside_U_bound"] = tr.outside_U_bound;
  j["outside_U_flagged"] = tr.outside_U_flagged;
  ctx.write_json("summary.json", j);
  ctx.log << "toughening_gap = " << format_real(toughening_gap(tr)) << "\n";
  if (tr.outside_U_flagged) {
    ctx.log << "note: energy outside the columns " << format_real(last.localization.outside_U_energy)
            << " is below 1/2 + 4 rho = " << format_real(tr.outside_U_bound) << "\n";
  }
}

void run_localize(const Context& ctx, const LatticeModel& lat) {
  const EvolutionTrace tr = evolve(ctx, lat, {ctx.config.t});
  const LocalizationReport& l = tr.steps.front().localization;
  CsvTable csv({"rho", "eta", "t", "total_length", "length_in_T", "length_in_T_and_U", "bound_T",
                "bound_TU", "outside_U_energy", "meets_bound_T", "meets_bound_TU"});
  csv.cell(l.rho)
      .cell(l.eta)
      .cell(ctx.config.t)
      .cell(l.total_length)
      .cell(l.length_in_T)
      .cell(l.length_in_T_and_U)
      .cell(l.bound_T)
      .cell(l.bound_TU)
      .cell(l.outside_U_energy)
      .cell(static_cast<long long>(l.length_in_T >= l.bound_T ? 1 : 0))
      .cell(static_cast<long long>(l.length_in_T_and_U >= l.bound_TU ? 1 : 0));
  csv.end_row();
  ctx.write("localization.csv", csv.str());
  ctx.write("localize.svg", crack_svg(lat, &tr.steps.front().crack, "small-load crack"));
  ctx.log << "length_in_T = " << format_real(l.length_in_T) << " (bound "
          << format_real(l.bound_T) << ")\n";
}

void run_oracle(const Context& ctx, const LatticeModel& lat) {
  const Problem pb(lat, {ctx.config.t, ctx.config.delta});
  MinimizeOptions mo;
  mo.tol = ctx.config.tol;
  mo.kernels = ctx.kernels;
  const OracleResult full = brute_force_oracle(pb, CutMode::full);
  const MinimizeResult alt = alternate_minimize(pb, full.crack, nullptr, mo);
  const OracleResult perf = brute_force_oracle(pb, CutMode::perforation);
  CutQuery q;
  q.mode = CutMode::perforation;
  q.problem = &pb;
  q.pinned_line = lat.width() / 2;
  const CutResult cut = min_cut(lat, q);

  CsvTable csv({"mode", "candidates", "oracle", "optimizer", "difference"});
  csv.cell("full")
      .cell(static_cast<long long>(full.candidates))
      .cell(full.energy.total())
      .cell(alt.energy.total())
      .cell(alt.energy.total() - full.energy.total());
  csv.end_row();
  const double pl = perf.length.value(lat.width());
  csv.cell("perforation")
      .cell(static_cast<long long>(perf.candidates))
      .cell(pl)
      .cell(cut.length)
      .cell(cut.length - pl);
  csv.end_row();
  ctx.write("oracle.csv", csv.str());
  ordered_json j;
  j["config"] = config_json(ctx.config);
  j["full_agree"] = std::abs(alt.energy.total() - full.energy.total()) <= 1e-9;
  j["perforation_exact"] = cut.units == perf.length;
  ctx.write_json("summary.json", j);
}

void run_render(const Context& ctx, const LatticeModel& lat) {
  ctx.write("geometry.svg", cell_svg(lat.geometry()));
  if (lat.n_per_period() % 8 == 0) {
    const CrackState zz = zigzag_crack(lat);
    ctx.write("lattice.svg", crack_svg(lat, &zz, "zig-zag crack"));
  } else {
    ctx.write("lattice.svg", crack_svg(lat, nullptr, "lattice"));
  }
}

}  // namespace

int run_experiment(const RunConfig& config, std::ostream& log) {
  const KernelTable* kernels = nullptr;
  try {
    validate(config);
    kernels = &select_kernels(parse_kernel_choice(config.kernel));
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.output);
    const Context ctx{config, kernels, fs::path(config.output), log};
    const LatticeModel lat(MicroGeometry(config.rho), config.k, config.n_per_period);
    ctx.write("config.txt", describe(config));
    if (!config.dump_lattice.empty() && !lat.dump_csv_gz(ctx.path(config.dump_lattice))) {
      throw std::runtime_error("cannot write lattice dump '" + config.dump_lattice + "'");
    }
    if (config.experiment == "cell") run_cell(ctx, lat);
    if (config.experiment == "sweep") run_sweep(ctx, lat);
    if (config.experiment == "evolve") run_evolve(ctx, lat);
    if (config.experiment == "localize") run_localize(ctx, lat);
    if (config.experiment == "oracle") run_oracle(ctx, lat);
    if (config.experiment == "render") run_render(ctx, lat);
    const auto files = write_manifest(config.output);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << config.experiment << ": " << files.size() << " files in " << config.output << " ("
        << format_real(secs) << " s, kernels " << kernels->name << ")\n";
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace brittle
