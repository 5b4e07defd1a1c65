#include "nlwlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "nlwlab/config.hpp"
#include "nlwlab/errors.hpp"

namespace nlwlab::io {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

csv_writer::csv_writer(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), columns_(header.size()) {
  require(static_cast<bool>(out_), error_code::io, "cannot write " + path);
  row(header);
}

void csv_writer::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_real(v));
  row(cells);
}

void csv_writer::row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_, error_code::invalid_argument, path_ + ": row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  require(static_cast<bool>(out_), error_code::io, "write failed: " + path_);
}

void csv_writer::close() {
  out_.close();
  require(!out_.fail(), error_code::io, "close failed: " + path_);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), error_code::io, "cannot write " + path);
  out << text;
  out.close();
  require(!out.fail(), error_code::io, "write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), error_code::io, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_field(const std::string& path, const field_pair& p) {
  const auto& grid = p.grid();
  require(static_cast<bool>(grid), error_code::invalid_argument, "field pair has no grid");
  csv_writer csv(path, {"r", "f", "g"});
  for (std::size_t i = 0; i < grid->size(); ++i) csv.row({grid->r(i), p.f.values[i], p.g.values[i]});
  csv.close();
  write_text(path + ".meta", "N = " + std::to_string(grid->dim()) + "\nh = " + format_real(grid->h()) +
                                 "\nr_max = " + format_real(grid->r_max()) + "\n");
}

field_pair read_field(const std::string& path) {
  const auto meta = config::experiment_config::parse(read_text(path + ".meta"));
  const auto grid = make_grid(static_cast<int>(meta.integer("run.N")), meta.real("run.h"), meta.real("run.r_max"));
  field_pair p(grid);
  std::stringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  require(line == "r,f,g", error_code::io, path + ": unexpected header");
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    require(i < grid->size(), error_code::io, path + ": more rows than grid nodes");
    double r = 0, f = 0, g = 0;
    require(std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &f, &g) == 3, error_code::io, path + ": malformed row");
    require(std::abs(r - grid->r(i)) <= 1e-9 * std::max(1.0, r), error_code::io, path + ": node mismatch");
    p.f.values[i] = f;
    p.g.values[i] = g;
    ++i;
  }
  require(i == grid->size(), error_code::io, path + ": fewer rows than grid nodes");
  return p;
}

}  // namespace nlwlab::io
