#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace saddle {

inline constexpr int kCsvSchemaVersion = 1;

/// Shortest round-trip decimal form, '.' separator, locale independent.
std::string format_number(double v);

/// Comma-separated writer with a header row and LF line endings.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

} // namespace saddle
