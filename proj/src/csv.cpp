#include "csv.hpp"

#include <charconv>
#include <fmt/format.h>

#include "mmw/errors.hpp"

namespace mmw::detail {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text, std::string_view name) {
  CsvTable table;
  table.name_ = std::string(name);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line);
    if (table.header_.empty()) {
      table.header_ = std::move(fields);
      continue;
    }
    if (fields.size() != table.header_.size()) {
      throw DomainError(fmt::format("{}: line {} has {} fields, header has {}", name, line_no,
                                    fields.size(), table.header_.size()));
    }
    table.rows_.push_back(std::move(fields));
  }
  if (table.header_.empty()) throw DomainError(fmt::format("{}: missing header row", name));
  return table;
}

std::size_t CsvTable::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == column) return i;
  }
  throw DomainError(fmt::format("{}: missing column '{}'", name_, column));
}

std::string_view CsvTable::cell(std::size_t row, std::string_view column) const {
  return rows_.at(row)[column_index(column)];
}

double CsvTable::number(std::size_t row, std::string_view column) const {
  auto value = optional_number(row, column);
  if (!value) fail(row, fmt::format("column '{}' is empty", column));
  return *value;
}

std::optional<double> CsvTable::optional_number(std::size_t row, std::string_view column) const {
  const auto text = cell(row, column);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(row, fmt::format("column '{}' is not a number: '{}'", column, text));
  }
  return value;
}

void CsvTable::fail(std::size_t row, const std::string& message) const {
  throw DomainError(fmt::format("{}: data row {}: {}", name_, row + 1, message));
}

}  // namespace mmw::detail
