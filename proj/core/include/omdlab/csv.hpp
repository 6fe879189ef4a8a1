#pragma once

#include <string>
#include <variant>
#include <vector>

namespace omdlab {

/// Comma-separated writer with a fixed header row; floating values are
/// printed with 17 significant digits so replays compare byte for byte.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<Cell>& cells);
  const std::string& str() const { return buffer_; }
  void write_file(const std::string& path) const;

  static std::string format(double v);

 private:
  std::string buffer_;
  size_t columns_;
};

}  // namespace omdlab
