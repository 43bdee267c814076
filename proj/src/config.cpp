#include "brittle/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "brittle/evolution.hpp"
#include "brittle/kernels.hpp"
#include "brittle/output.hpp"

namespace brittle {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(field, "expected a finite number, got '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> to_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  if (trim(text).empty()) return out;
  while (std::getline(ss, item, ',')) out.push_back(to_real(field, item));
  return out;
}

void check_increasing(const std::string& field, const std::vector<double>& v) {
  if (v.empty()) throw ConfigError(field, "must not be empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0) throw ConfigError(field, "loads must be >= 0");
    if (i > 0 && !(v[i] > v[i - 1])) throw ConfigError(field, "must be strictly increasing");
  }
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_real(v[i]);
  }
  return out;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) { return to_list("list", text); }

void set_field(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    c.experiment = trim(value);
  } else if (key == "k") {
    c.k = static_cast<int>(to_integer(key, value));
  } else if (key == "n_per_period") {
    c.n_per_period = static_cast<int>(to_integer(key, value));
  } else if (key == "rho") {
    c.rho = to_real(key, value);
  } else if (key == "delta") {
    c.delta = to_real(key, value);
  } else if (key == "t") {
    c.t = to_real(key, value);
  } else if (key == "t_grid") {
    c.t_grid = to_list(key, value);
  } else if (key == "loads") {
    c.loads = to_list(key, value);
  } else if (key == "tol") {
    c.tol = to_real(key, value);
  } else if (key == "output") {
    c.output = trim(value);
  } else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw ConfigError(key, "must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "kernel") {
    c.kernel = trim(value);
  } else if (key == "dump_lattice") {
    c.dump_lattice = trim(value);
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  for (const auto& [key, value] : parse_config_text(ss.str())) set_field(config, key, value);
}

void validate(const RunConfig& c) {
  static const char* kExperiments[] = {"cell", "sweep", "evolve", "localize", "oracle", "render"};
  bool known = false;
  for (const char* e : kExperiments) known = known || c.experiment == e;
  if (!known) throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
  if (c.k < 1 || c.k % 2 == 0) throw ConfigError("k", "must be an odd integer >= 1");
  if (c.n_per_period < 8 || c.n_per_period % 2 != 0) {
    throw ConfigError("n_per_period", "must be an even integer >= 8");
  }
  const bool zigzag = c.experiment == "sweep" || c.experiment == "evolve" ||
                      c.experiment == "localize";
  if (zigzag && c.n_per_period % 8 != 0) {
    throw ConfigError("n_per_period", "must be a multiple of 8 for " + c.experiment);
  }
  if (!(c.rho > 0.0 && c.rho < 1.0 / 7.0)) throw ConfigError("rho", "must lie in (0, 1/7)");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta", "must lie in (0, 1)");
  if (!(c.t >= 0.0)) throw ConfigError("t", "must be >= 0");
  if (!(c.tol > 0.0 && c.tol <= 1e-3)) throw ConfigError("tol", "must lie in (0, 1e-3]");
  if (c.output.empty()) throw ConfigError("output", "must not be empty");
  try {
    parse_kernel_choice(c.kernel);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("kernel", e.what());
  }
  if (c.dump_lattice.find('/') != std::string::npos) {
    throw ConfigError("dump_lattice", "must be a plain file name");
  }
  if (c.experiment == "sweep") check_increasing("t_grid", c.t_grid);
  if (c.experiment == "evolve") {
    check_increasing("loads", c.loads);
    try {
      LoadProgram{c.loads}.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("loads", e.what());
    }
  }
  if (c.experiment == "localize" && c.t > kMaxBridgingLoad) {
    throw ConfigError("t", "localization needs a small load <= (sqrt2-1)/4");
  }
  if (c.experiment == "oracle" && (c.k != 1 || c.n_per_period > 16)) {
    throw ConfigError("k", "the oracle needs k = 1 and n_per_period <= 16");
  }
}

std::string describe(const RunConfig& c) {
  std::string out;
  auto line = [&](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  line("experiment", c.experiment);
  line("k", std::to_string(c.k));
  line("n_per_period", std::to_string(c.n_per_period));
  line("rho", format_real(c.rho));
  line("delta", format_real(c.delta));
  line("t", format_real(c.t));
  line("t_grid", join(c.t_grid));
  line("loads", join(c.loads));
  line("tol", format_real(c.tol));
  line("output", c.output);
  line("seed", std::to_string(c.seed));
  line("kernel", c.kernel);
  line("dump_lattice", c.dump_lattice);
  return out;
}

}  // namespace brittle
