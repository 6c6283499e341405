#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "whl/sample.hpp"

namespace whl {

/// Malformed CSV input. line() is 1-based and counts the header.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses a CSV with header `value,weight`. Blank lines are skipped; CRLF and
/// a UTF-8 BOM are tolerated.
WeightedSample read_weighted_csv(std::istream& in);

/// Parses a CSV whose header contains a `weight` column; returns that column.
std::vector<double> read_weight_column(std::istream& in);

/// Rows of a CSV with the given header columns, in order. Extra columns are
/// rejected.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in,
                                                  const std::vector<std::string>& header);

/// Six significant digits, "." decimal separator regardless of locale.
std::string format_number(double value);

/// Splits one CSV line on commas (no quoting; the formats here never need it).
std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace whl
