#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brittle/solver.hpp"

namespace brittle {

// "%.12g"; non-finite values print as nan, inf, -inf.
std::string format_real(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& cell(const std::string& text);
  CsvTable& cell(double v);
  CsvTable& cell(long long v);
  void end_row();
  std::string str() const;

 private:
  std::size_t columns_;
  std::vector<std::string> row_;
  std::string text_;
};

// Writes bytes verbatim (no newline translation). Throws std::runtime_error.
void write_file(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(const std::string& bytes);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::uintmax_t size = 0;
  std::uint64_t hash = 0;
};

// Every regular file under dir except manifest.txt, sorted by path.
std::vector<ManifestEntry> scan_directory(const std::string& dir);
// Writes dir/manifest.txt: "<fnv1a64 hex> <size> <path>" per line.
std::vector<ManifestEntry> write_manifest(const std::string& dir);

// Lattice picture: soft pixels shaded, crack elements drawn as segments.
std::string crack_svg(const LatticeModel& lattice, const CrackState* crack,
                      const std::string& title);

// One period cell: inclusion D, butterflies T, columns U, zig-zag path.
std::string cell_svg(const MicroGeometry& geometry);

}  // namespace brittle
