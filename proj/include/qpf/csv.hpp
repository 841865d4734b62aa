#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace qpf {

inline constexpr const char* kCodeVersion = "1.0.0";

/// FNV-1a hash of a byte string; used to stamp output files with the
/// configuration they were produced from.
std::uint64_t fnv1a_hash(const std::string& bytes);

/// Formats a double with enough digits to round-trip exactly.
std::string format_double(double v);

/// Minimal CSV writer. Lines starting with '#' carry provenance metadata
/// (config hash, code version); numeric cells use round-trip formatting so
/// identical runs produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  /// Writes "# key: value".
  void comment(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& cells);
  /// Mixed row for tables with text cells.
  void raw_row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace qpf
