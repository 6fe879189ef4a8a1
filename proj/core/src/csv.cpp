#include "omdlab/csv.hpp"

#include <cstdio>
#include <fstream>

#include "omdlab/errors.hpp"

namespace omdlab {

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw invalid_input("csv row width does not match the header");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    if (const auto* d = std::get_if<double>(&cells[i])) {
      buffer_ += format(*d);
    } else if (const auto* n = std::get_if<long long>(&cells[i])) {
      buffer_ += std::to_string(*n);
    } else {
      buffer_ += std::get<std::string>(cells[i]);
    }
  }
  buffer_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open '" + path + "' for writing");
  out << buffer_;
}

}  // namespace omdlab
