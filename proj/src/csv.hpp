#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmw::detail {

/// Minimal reader for the bundled tables: comma separated, header row,
/// no quoting. Blank lines and lines starting with '#' are skipped.
class CsvTable {
 public:
  static CsvTable parse(std::string_view text, std::string_view name);

  std::size_t rows() const { return rows_.size(); }

  /// Cell text, trimmed. Throws DomainError for an unknown column.
  std::string_view cell(std::size_t row, std::string_view column) const;

  double number(std::size_t row, std::string_view column) const;
  std::optional<double> optional_number(std::size_t row, std::string_view column) const;

 private:
  std::string name_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;

  std::size_t column_index(std::string_view column) const;
  [[noreturn]] void fail(std::size_t row, const std::string& message) const;
};

}  // namespace mmw::detail
