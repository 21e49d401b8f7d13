#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lienard/errors.hpp"

namespace lienard {

/// Full round-trip formatting: 17 significant digits, C locale.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> comments; // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Writes atomically (temp file + rename). Comment lines first ("# ..."),
/// then the header row, then the data at full precision.
inline void write_csv(const std::string& path, const CsvTable& table) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw Error("write_csv: cannot open " + tmp);
        for (const auto& c : table.comments) os << "# " << c << "\n";
        for (size_t i = 0; i < table.header.size(); ++i)
            os << (i ? "," : "") << table.header[i];
        os << "\n";
        for (const auto& row : table.rows) {
            for (size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << format_full(row[i]);
            os << "\n";
        }
        if (!os) throw Error("write_csv: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("write_csv: rename to " + path + " failed");
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("read_csv: cannot open " + path);
    CsvTable table;
    std::string line;
    bool header_done = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            size_t start = line.find_first_not_of("# ");
            table.comments.push_back(start == std::string::npos ? "" : line.substr(start));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header_done) {
            while (std::getline(ss, cell, ',')) table.header.push_back(cell);
            header_done = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace lienard
