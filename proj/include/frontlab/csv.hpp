// SPDX-License-Identifier: Apache-2.0
// Minimal CSV and key-value text helpers.  Numbers are written with 17 significant digits.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace frontlab {

std::string fmt_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
  // Empty cells read as NaN.  Throws ParseError on malformed numbers.
  double number(std::size_t row, const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
};

// Throws ParseError on ragged rows.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

// "key = value" lines, as written by the report serialisers.
std::map<std::string, std::string> parse_key_values(const std::string& text);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace frontlab
