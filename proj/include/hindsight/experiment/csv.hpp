#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace hindsight::experiment {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// Comma-separated writer. Fields never contain commas or quotes here, so no
/// quoting is done.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::size_t width_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position of `name`, or throws std::runtime_error.
  std::size_t column(std::string_view name) const;
};

/// Throws std::runtime_error on unreadable files or ragged rows.
CsvTable read_csv(const std::filesystem::path& path);

double parse_number(const std::string& text);

}  // namespace hindsight::experiment
