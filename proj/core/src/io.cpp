#include "fraclab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fraclab/error.hpp"

namespace fraclab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text == "nan") return NAN;
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  require(ec == std::errc() && ptr == text.data() + text.size() && !text.empty(),
          ErrorKind::malformed_input, "not a number: '" + std::string(text) + "'");
  return v;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4) s[k] = digits[h & 15];
  return s;
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (size_t k = 0; k < columns.size(); ++k) out += (k ? "," : "") + columns[k];
  out += "\n";
  for (const auto& r : rows) {
    for (size_t k = 0; k < r.size(); ++k) out += (k ? "," : "") + format_double(r[k]);
    out += "\n";
  }
  return out;
}

CsvTable CsvTable::parse(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!header) {
      t.columns = cells;
      header = true;
      continue;
    }
    require(cells.size() == t.columns.size(), ErrorKind::malformed_input, "csv: ragged row");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), ErrorKind::io, "cannot write '" + path + "'");
  out << contents;
  require(bool(out), ErrorKind::io, "write failed for '" + path + "'");
}

}  // namespace fraclab
