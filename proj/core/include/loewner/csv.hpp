#pragma once

#include <string>
#include <vector>

namespace loewner {

/// A small numeric CSV table: one header row of column names followed by
/// rows of doubles. This covers every file the toolkit reads or writes;
/// there is no quoting and fields never contain commas.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Formats a double with the shortest representation that round-trips
/// exactly, so serialized tables reload bit-identically.
std::string format_double(double x);

/// Writes the table with '\n' line endings. Throws std::runtime_error if the
/// file cannot be opened or a row width disagrees with the header.
void write_csv(const std::string& path, const CsvTable& table);

/// Reads a table written by write_csv (or any plain numeric CSV with a
/// header line). Throws std::runtime_error on malformed numeric fields,
/// ragged rows, or a missing file.
CsvTable read_csv(const std::string& path);

}  // namespace loewner
