// csv.hpp: fixed-format CSV tables

#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dispersive/error.hpp"

namespace dispersive {

/// 15 significant digits, '.' separator regardless of locale.
inline std::string format_real(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    std::string s(buf);
    for (char& c : s)
        if (c == ',') c = '.';
    return s;
}

inline std::string format_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) {
        if (row.size() != header.size()) throw InvalidArgument("csv row width does not match header");
        rows.push_back(std::move(row));
    }
};

/// Header line then rows, LF endings.
inline void write_csv(std::ostream& out, const CsvTable& t) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

}  // namespace dispersive
