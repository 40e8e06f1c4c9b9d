#include "cryptoforecast/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "cryptoforecast/error.hpp"

namespace cryptoforecast::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

std::vector<Row> read_file(const std::string& path, const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);

    std::string line;
    std::size_t line_number = 0;
    std::vector<Row> rows;
    bool saw_header = false;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (!saw_header) {
            std::string joined;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i) joined.push_back(',');
                joined += fields[i];
            }
            if (joined != expected_header)
                throw ParseError(path + ": expected header '" + expected_header +
                                 "', got '" + joined + "'");
            width = fields.size();
            saw_header = true;
            continue;
        }
        if (fields.size() != width)
            throw ParseError(path + ":" + std::to_string(line_number) + ": expected " +
                             std::to_string(width) + " fields, got " +
                             std::to_string(fields.size()));
        rows.push_back(Row{line_number, std::move(fields)});
    }
    if (!saw_header) throw ParseError(path + ": empty file, missing header");
    return rows;
}

double parse_number(const Row& row, std::size_t field, const std::string& path) {
    const std::string& text = row.fields.at(field);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw ParseError(path + ":" + std::to_string(row.line_number) +
                         ": not a finite number: '" + text + "'");
    return v;
}

std::string format_number(double v) {
    char buf[40];
    // %.17g always round-trips a double; trim to the shortest form that does.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace cryptoforecast::csv
