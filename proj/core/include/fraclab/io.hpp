#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fraclab {

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);
double parse_double(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

// Columnar CSV with '#' comment header lines.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string str() const;
  static CsvTable parse(const std::string& text);
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace fraclab
