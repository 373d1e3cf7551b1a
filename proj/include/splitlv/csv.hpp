#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace splitlv {

// Shortest decimal form that parses back to the identical 8-byte float.
std::string format_double(double v);

// Minimal CSV emitter: comma separators, LF line endings, plain ASCII.
class CsvFile {
 public:
  explicit CsvFile(const std::string& path);

  void row(const std::vector<std::string>& cells);
  void numeric_row(const std::vector<double>& cells);

 private:
  std::ofstream out_;
};

}  // namespace splitlv
