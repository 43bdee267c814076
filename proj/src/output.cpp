#include "brittle/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brittle {

namespace fs = std::filesystem;

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  row_ = std::move(header);
  end_row();
}

CsvTable& CsvTable::cell(const std::string& text) {
  if (text.find_first_of(",\"\n") != std::string::npos) {
    throw std::invalid_argument("csv: field needs quoting: " + text);
  }
  row_.push_back(text);
  return *this;
}

CsvTable& CsvTable::cell(double v) { return cell(format_real(v)); }

CsvTable& CsvTable::cell(long long v) { return cell(std::to_string(v)); }

void CsvTable::end_row() {
  if (row_.size() != columns_) throw std::logic_error("csv: row width mismatch");
  for (std::size_t i = 0; i < row_.size(); ++i) {
    if (i) text_ += ',';
    text_ += row_[i];
  }
  text_ += '\n';
  row_.clear();
}

std::string CsvTable::str() const { return text_; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<ManifestEntry> scan_directory(const std::string& dir) {
  std::vector<ManifestEntry> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), dir).generic_string();
    if (rel == "manifest.txt") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    out.push_back({rel, bytes.size(), fnv1a64(bytes)});
  }
  std::sort(out.begin(), out.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  return out;
}

std::vector<ManifestEntry> write_manifest(const std::string& dir) {
  std::vector<ManifestEntry> entries = scan_directory(dir);
  std::string text;
  for (const ManifestEntry& e : entries) {
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(e.hash));
    text += hex;
    text += ' ' + std::to_string(e.size) + ' ' + e.path + '\n';
  }
  write_file((fs::path(dir) / "manifest.txt").string(), text);
  return entries;
}

namespace {

constexpr double kScale = 600.0;  // pixels per unit length

struct Svg {
  std::string body;
  double size;

  // Maps y up to SVG y down; origin at the picture center.
  double X(double x) const { return (x + 0.5 * size / kScale) * kScale; }
  double Y(double y) const { return (0.5 * size / kScale - y) * kScale; }

  void polygon(const std::vector<Point>& pts, const char* fill, const char* extra = "") {
    body += "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body += ' ';
      body += format_real(X(pts[i].x)) + ',' + format_real(Y(pts[i].y));
    }
    body += "\" fill=\"";
    body += fill;
    body += '"';
    body += extra;
    body += "/>\n";
  }

  void line(Point a, Point b, const char* stroke, double width) {
    body += "<line x1=\"" + format_real(X(a.x)) + "\" y1=\"" + format_real(Y(a.y)) +
            "\" x2=\"" + format_real(X(b.x)) + "\" y2=\"" + format_real(Y(b.y)) +
            "\" stroke=\"" + stroke + "\" stroke-width=\"" + format_real(width) + "\"/>\n";
  }

  std::string finish(const std::string& title) const {
    const std::string s = format_real(size);
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + s + "\" height=\"" + s +
           "\" viewBox=\"0 0 " + s + ' ' + s + "\">\n<title>" + title +
           "</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body + "</svg>\n";
  }
};

std::vector<Point> scaled(const std::vector<Point>& pts, double eps, Point shift) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const Point& p : pts) out.push_back({eps * (p.x + shift.x), eps * (p.y + shift.y)});
  return out;
}

}  // namespace

std::string crack_svg(const LatticeModel& lattice, const CrackState* crack,
                      const std::string& title) {
  Svg svg{"", kScale};
  const double eps = lattice.eps();
  const int k = lattice.k();
  const int half = k / 2;
  for (int m = -half; m <= half; ++m) {
    for (int l = -half; l <= half; ++l) {
      for (const Polygon& poly : inclusion_polygons()) {
        svg.polygon(scaled(poly.vertices, eps, {double(m), double(l)}), "#b9d3ee");
      }
    }
  }
  // Free band outline is implied by the clamps; draw the unit square.
  svg.polygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}, "none",
              " stroke=\"#444\" stroke-width=\"1\"");
  if (crack) {
    const double w = std::max(1.0, 2.0 * kScale / lattice.width() / 4.0);
    for (std::size_t id : crack->elements()) {
      const Segment s = lattice.element_segment_cell(id);
      svg.line({eps * s.a.x, eps * s.a.y}, {eps * s.b.x, eps * s.b.y}, "#c0392b", w);
    }
  }
  return svg.finish(title);
}

std::string cell_svg(const MicroGeometry& geometry) {
  Svg svg{"", kScale};
  const double rho = geometry.rho();
  if (rho < kMaxColumnRho) {
    for (double sign : {-1.0, 1.0}) {
      const double a = sign * (0.125 + rho), b = sign * (0.5 - rho);
      svg.polygon({{std::min(a, b), -0.5}, {std::max(a, b), -0.5}, {std::max(a, b), 0.5},
                   {std::min(a, b), 0.5}},
                  "#e8f6e8");
    }
  }
  for (const Polygon& poly : butterfly_polygons(rho)) svg.polygon(poly.vertices, "#f9e0b0");
  for (const Polygon& poly : inclusion_polygons()) svg.polygon(poly.vertices, "#b9d3ee");
  const std::vector<Point> zz = zigzag_polyline();
  for (double shift : {-1.0, 0.0}) {  // the viewport clips the overhang
    for (std::size_t i = 0; i + 1 < zz.size(); ++i) {
      svg.line({zz[i].x + shift, zz[i].y}, {zz[i + 1].x + shift, zz[i + 1].y}, "#c0392b", 2.0);
    }
  }
  svg.polygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}, "none",
              " stroke=\"#444\" stroke-width=\"1\"");
  return svg.finish("cell rho=" + format_real(rho));
}

}  // namespace brittle
