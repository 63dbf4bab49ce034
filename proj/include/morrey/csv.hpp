#pragma once

#include "errors.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace morrey {

/// Round-trip decimal form used in every table.
inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt(long long v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::size_t v) { return std::to_string(v); }

/// Column-named table of preformatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row)
    {
        detail::require(row.size() == columns.size(), "table row width differs from the header");
        rows.push_back(std::move(row));
    }

    static std::string quoted(const std::string& cell)
    {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string out = "\"";
        for (char c : cell) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    }

    void write_csv(std::ostream& os) const
    {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << quoted(cells[i]);
            os << '\n';
        };
        line(columns);
        for (const auto& r : rows) line(r);
    }

    void write_csv_file(const std::string& path) const
    {
        std::ofstream os(path, std::ios::binary);
        detail::require(static_cast<bool>(os), "cannot open " + path + " for writing");
        write_csv(os);
    }
};

} // namespace morrey
