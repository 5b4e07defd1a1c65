#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "nlwlab/radial.hpp"

namespace nlwlab::io {

// Shortest round-trip representation ("%.17g"); NaN and infinities as nan, inf, -inf.
std::string format_real(double x);

class csv_writer {
 public:
  csv_writer(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// r,f,g columns plus "<path>.meta" holding N, h and R_max.
void write_field(const std::string& path, const field_pair& p);
field_pair read_field(const std::string& path);

}  // namespace nlwlab::io
