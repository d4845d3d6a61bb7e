#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace firmdyn {

/// Decimal with 12 significant digits.
std::string format_number(double value);

/// Row-oriented CSV builder; cells are preformatted strings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Files staged in memory and published together: every file is written to
/// a temporary sibling first and renamed into place only once all writes
/// succeeded, so a failed run leaves no partial outputs behind.
class OutputBatch {
 public:
  explicit OutputBatch(std::filesystem::path dir);

  void add(const std::string& name, std::string content);
  /// Returns the published paths.
  std::vector<std::filesystem::path> commit();

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string read_file(const std::filesystem::path& path);

}  // namespace firmdyn
