#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cryptoforecast::csv {

struct Row {
    std::size_t line_number = 0;  // 1-based, header is line 1
    std::vector<std::string> fields;
};

// Reads a whole file of comma-separated values. The formats handled here
// never quote fields, so a plain split is enough. Blank lines are skipped.
// Throws ParseError if the file is missing or the header does not match
// `expected_header` (comma-joined, case-sensitive).
std::vector<Row> read_file(const std::string& path, const std::string& expected_header);

double parse_number(const Row& row, std::size_t field, const std::string& path);

std::string format_number(double v);  // shortest round-trip representation

}  // namespace cryptoforecast::csv
