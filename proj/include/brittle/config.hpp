#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace brittle {

// Validation failure naming the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::string experiment = "cell";  // cell, sweep, evolve, localize, oracle, render
  int k = 5;
  int n_per_period = 32;
  double rho = 0.05;
  double delta = 0.25;
  double t = 0.02;
  std::vector<double> t_grid{0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 0.75, 1.0};
  std::vector<double> loads{0.02, 1.0};
  double tol = 1e-10;
  std::string output = "out";
  std::uint64_t seed = 1;
  std::string kernel = "auto";
  std::string dump_lattice;  // file name inside output; empty: no dump
};

// Comma-separated reals; an empty string gives an empty list.
std::vector<double> parse_list(const std::string& text);

// Assigns one field from its text form. Unknown keys and malformed values
// throw ConfigError.
void set_field(RunConfig& config, const std::string& key, const std::string& value);

// Flat "key = value" lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);
void apply_config_file(RunConfig& config, const std::string& path);

void validate(const RunConfig& config);

// Canonical key=value listing, one per line, in declaration order.
std::string describe(const RunConfig& config);

}  // namespace brittle
