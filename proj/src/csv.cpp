#include "splitlv/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace splitlv {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) {
    throw std::runtime_error("failed to format a double");
  }
  return std::string(buf, res.ptr);
}

CsvFile::CsvFile(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot open output file: " + path);
}

void CsvFile::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("failed writing CSV row");
}

void CsvFile::numeric_row(const std::vector<double>& cells) {
  std::vector<std::string> formatted;
  formatted.reserve(cells.size());
  for (const double v : cells) formatted.push_back(format_double(v));
  row(formatted);
}

}  // namespace splitlv
