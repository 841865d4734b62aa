#include "qpf/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace qpf {

std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  // 17 significant digits round-trip any IEEE double.
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
  if (!out_) {
    throw std::runtime_error("CsvWriter: cannot open '" + path + "' for writing");
  }
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
  out_ << "# " << key << ": " << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ",";
    out_ << columns[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << format_double(cells[i]);
  }
  out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) {
    throw std::runtime_error("CsvWriter: write to '" + path_ + "' failed");
  }
  out_.close();
}

}  // namespace qpf
