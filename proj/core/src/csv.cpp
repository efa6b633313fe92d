#include "loewner/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace loewner {

std::string format_double(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  if (result.ec != std::errc()) {
    throw std::runtime_error("failed to format floating-point value");
  }
  return std::string(buffer, result.ptr);
}

void write_csv(const std::string& path, const CsvTable& table) {
  if (table.header.empty()) {
    throw std::runtime_error("csv table needs at least one column: " + path);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) out << ',';
    out << table.header[i];
  }
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw std::runtime_error("csv row " + std::to_string(r + 1) +
                               " width disagrees with header: " + path);
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    // Trim surrounding whitespace so hand-edited files still parse.
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos ? std::string()
                                                : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_field(const std::string& field, const std::string& path, std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error("malformed numeric field '" + field + "' at line " +
                             std::to_string(line_no) + " of " + path);
  }
  return value;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file for reading: " + path);
  }
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      table.header = split_line(line);
      if (table.header.empty()) {
        throw std::runtime_error("empty csv header: " + path);
      }
      continue;
    }
    const auto fields = split_line(line);
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("ragged csv row at line " + std::to_string(line_no) +
                               " of " + path);
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& field : fields) {
      row.push_back(parse_field(field, path, line_no));
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) {
    throw std::runtime_error("csv file has no header line: " + path);
  }
  return table;
}

}  // namespace loewner
