#pragma once

#include "errors.hpp"
#include "grid.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace morrey::mgf {

// Text format, one header line then one value per cell, row-major:
//   MGF 1 dim=<n> rootlevel=<k> rootcoords=<m1[,m2]> depth=<L> flags=<nonneg|pos|none>

inline std::string format_value(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write(std::ostream& os, const GridFunction& f)
{
    const auto& g = f.geom;
    os << "MGF 1 dim=" << g.dim() << " rootlevel=" << g.root.level << " rootcoords=" << g.root.coords[0];
    if (g.dim() == 2) os << ',' << g.root.coords[1];
    os << " depth=" << g.depth << " flags=" << sign_name(f.sign) << '\n';
    for (double v : f.values) os << format_value(v) << '\n';
}

inline GridFunction read(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw parameter_error("MGF: empty input");
    std::istringstream hs(line);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "MGF" || version != "1") throw parameter_error("MGF: bad header '" + line + "'");
    std::map<std::string, std::string> kv;
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw parameter_error("MGF: bad header field '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    for (const char* key : {"dim", "rootlevel", "rootcoords", "depth", "flags"})
        if (!kv.count(key)) throw parameter_error(std::string("MGF: missing header field ") + key);

    GridGeometry g;
    try {
        g.root.dim = std::stoi(kv["dim"]);
        g.root.level = std::stoi(kv["rootlevel"]);
        g.depth = std::stoi(kv["depth"]);
        const std::string& rc = kv["rootcoords"];
        const auto comma = rc.find(',');
        g.root.coords[0] = std::stoll(rc.substr(0, comma));
        if (comma != std::string::npos) g.root.coords[1] = std::stoll(rc.substr(comma + 1));
        if ((g.root.dim == 2) != (comma != std::string::npos))
            throw parameter_error("MGF: rootcoords arity does not match dim");
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const parameter_error*>(&e)) throw;
        throw parameter_error("MGF: malformed numeric header field");
    }
    detail::require(g.root.dim == 1 || g.root.dim == 2, "MGF: dim must be 1 or 2");
    detail::require(g.depth >= 0 && g.depth <= (g.root.dim == 1 ? 24 : 12), "MGF: depth out of range");

    Sign s = Sign::none;
    if (kv["flags"] == "nonneg") s = Sign::nonneg;
    else if (kv["flags"] == "pos") s = Sign::pos;
    else if (kv["flags"] != "none") throw parameter_error("MGF: unknown flags '" + kv["flags"] + "'");

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(g.cell_count()));
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        try {
            std::size_t used = 0;
            values.push_back(std::stod(line, &used));
        } catch (const std::logic_error&) {
            throw parameter_error("MGF: bad value line '" + line + "'");
        }
    }
    return GridFunction(g, std::move(values), s);
}

inline void write_file(const std::string& path, const GridFunction& f)
{
    std::ofstream os(path);
    if (!os) throw parameter_error("cannot open '" + path + "' for writing");
    write(os, f);
}

inline GridFunction read_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw parameter_error("cannot open '" + path + "'");
    return read(is);
}

} // namespace morrey::mgf
