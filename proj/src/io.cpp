#include "whl/io.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace whl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw CsvError(line, "not a finite number: '" + std::string(field) + "'");
  }
  return value;
}

// Reads the header and returns its trimmed column names.
std::vector<std::string> read_header(std::istream& in, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    std::vector<std::string> cols;
    for (auto f : split_csv_line(view)) cols.emplace_back(trim(f));
    return cols;
  }
  throw CsvError(line_no == 0 ? 1 : line_no, "missing header");
}

}  // namespace

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::vector<std::vector<double>> read_numeric_csv(std::istream& in,
                                                  const std::vector<std::string>& header) {
  std::size_t line_no = 0;
  const auto cols = read_header(in, line_no);
  if (cols != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw CsvError(line_no, "expected header '" + want + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw CsvError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_number(f, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

WeightedSample read_weighted_csv(std::istream& in) {
  std::size_t line_no = 0;
  const auto cols = read_header(in, line_no);
  if (cols != std::vector<std::string>{"value", "weight"}) {
    throw CsvError(line_no, "expected header 'value,weight'");
  }
  std::vector<double> values;
  std::vector<double> weights;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw CsvError(line_no, "expected 2 fields, got " + std::to_string(fields.size()));
    }
    values.push_back(parse_number(fields[0], line_no));
    const double w = parse_number(fields[1], line_no);
    if (!(w > 0.0)) throw CsvError(line_no, "weight must be > 0");
    weights.push_back(w);
  }
  if (values.empty()) throw CsvError(line_no + 1, "no observations");
  return WeightedSample(std::move(values), std::move(weights));
}

std::vector<double> read_weight_column(std::istream& in) {
  std::size_t line_no = 0;
  const auto cols = read_header(in, line_no);
  std::size_t col = cols.size();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "weight") col = i;
  }
  if (col == cols.size()) throw CsvError(line_no, "header has no 'weight' column");

  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != cols.size()) {
      throw CsvError(line_no, "expected " + std::to_string(cols.size()) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    const double w = parse_number(fields[col], line_no);
    if (!(w > 0.0)) throw CsvError(line_no, "weight must be > 0");
    out.push_back(w);
  }
  if (out.empty()) throw CsvError(line_no + 1, "no weights");
  return out;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

}  // namespace whl
