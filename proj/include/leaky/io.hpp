#pragma once

// Text formats for curves and field grids.
//
// CSV: '#'-prefixed metadata lines, one header row, comma-separated values.
// Complex data is written as re_/im_ column pairs. Numbers use the shortest
// representation that round-trips, so equal inputs give byte-identical files.
//
// JSON: {"metadata": {...}, "curve": {...}} and/or {"field": {...}} with
// the field stored as x, z and row-major re_E / im_E matrices (rows are z).

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "leaky/curve.hpp"
#include "leaky/errors.hpp"
#include "leaky/fields.hpp"

namespace leaky::io {

using json = nlohmann::ordered_json;
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

/// Parses "start:stop:count" (endpoints included).
inline std::vector<double> parse_grid(std::string_view text, const std::string& field)
{
    auto fail = [&](const std::string& why) {
        return ValidationError(field + ": " + why + " (expected start:stop:count, got '"
                               + std::string(text) + "')");
    };
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(':', pos);
        parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    if (parts.size() != 3) throw fail("need exactly three fields");

    auto number = [&](std::string_view s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
            throw fail("'" + std::string(s) + "' is not a number");
        return v;
    };
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    long long count = 0;
    const auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
    if (res.ec != std::errc() || res.ptr != parts[2].data() + parts[2].size() || count < 1)
        throw fail("count must be a positive integer");
    if (count > 1 && !(stop > start)) throw fail("stop must exceed start");
    return linspace(start, stop, static_cast<std::size_t>(count));
}

inline void write_metadata_csv(std::ostream& os, const Metadata& meta)
{
    for (const auto& [k, v] : meta) os << "# " << k << " = " << v << '\n';
}

inline void write_csv(std::ostream& os, const Curve& curve, const Metadata& meta = {})
{
    write_metadata_csv(os, meta);
    os << curve.abscissa_label;
    for (const auto& c : curve.columns) os << ',' << c.label;
    os << '\n';
    for (std::size_t i = 0; i < curve.size(); ++i) {
        os << format_number(curve.abscissa[i]);
        for (const auto& c : curve.columns) os << ',' << format_number(c.values[i]);
        os << '\n';
    }
}

enum class FieldPart { re, im, abs2, complex };

inline FieldPart parse_field_part(std::string_view s)
{
    if (s == "re") return FieldPart::re;
    if (s == "im") return FieldPart::im;
    if (s == "abs2") return FieldPart::abs2;
    if (s == "complex") return FieldPart::complex;
    throw ValidationError("part: expected re, im, abs2 or complex, got '" + std::string(s) + "'");
}

/// Long format: one row per (z, x) sample.
inline void write_csv(std::ostream& os, const FieldGrid& grid, FieldPart part, const Metadata& meta = {})
{
    write_metadata_csv(os, meta);
    switch (part) {
    case FieldPart::re: os << "x,z,re_E\n"; break;
    case FieldPart::im: os << "x,z,im_E\n"; break;
    case FieldPart::abs2: os << "x,z,abs2_E\n"; break;
    case FieldPart::complex: os << "x,z,re_E,im_E\n"; break;
    }
    for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
        for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
            const cplx v = grid.at(iz, ix);
            os << format_number(grid.x_grid[ix]) << ',' << format_number(grid.z_grid[iz]) << ',';
            switch (part) {
            case FieldPart::re: os << format_number(v.real()); break;
            case FieldPart::im: os << format_number(v.imag()); break;
            case FieldPart::abs2: os << format_number(std::norm(v)); break;
            case FieldPart::complex: os << format_number(v.real()) << ',' << format_number(v.imag()); break;
            }
            os << '\n';
        }
    }
}

inline json metadata_json(const Metadata& meta)
{
    json j = json::object();
    for (const auto& [k, v] : meta) j[k] = v;
    return j;
}

inline json to_json(const Curve& curve)
{
    json j;
    j["abscissa_label"] = curve.abscissa_label;
    j[curve.abscissa_label] = curve.abscissa;
    json cols = json::object();
    for (const auto& c : curve.columns) cols[c.label] = c.values;
    j["columns"] = std::move(cols);
    return j;
}

inline json to_json(const FieldGrid& grid, FieldPart part)
{
    json j;
    j["x"] = grid.x_grid;
    j["z"] = grid.z_grid;
    auto matrix = [&](auto&& pick) {
        json rows = json::array();
        for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
            std::vector<double> row(grid.nx());
            for (std::size_t ix = 0; ix < grid.nx(); ++ix) row[ix] = pick(grid.at(iz, ix));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    if (part == FieldPart::re || part == FieldPart::complex)
        j["re_E"] = matrix([](cplx v) { return v.real(); });
    if (part == FieldPart::im || part == FieldPart::complex)
        j["im_E"] = matrix([](cplx v) { return v.imag(); });
    if (part == FieldPart::abs2) j["abs2_E"] = matrix([](cplx v) { return std::norm(v); });
    return j;
}

/// Reads a field written with FieldPart::complex (both re_E and im_E).
inline FieldGrid field_from_json(const json& j)
{
    if (!j.contains("x") || !j.contains("z") || !j.contains("re_E") || !j.contains("im_E"))
        throw ValidationError("field json: need x, z, re_E and im_E");
    FieldGrid grid(j.at("x").get<std::vector<double>>(), j.at("z").get<std::vector<double>>());
    const auto& re = j.at("re_E");
    const auto& im = j.at("im_E");
    if (re.size() != grid.nz() || im.size() != grid.nz())
        throw ValidationError("field json: re_E/im_E row count does not match z");
    for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
        if (re[iz].size() != grid.nx() || im[iz].size() != grid.nx())
            throw ValidationError("field json: row length does not match x");
        for (std::size_t ix = 0; ix < grid.nx(); ++ix)
            grid.at(iz, ix) = {re[iz][ix].get<double>(), im[iz][ix].get<double>()};
    }
    return grid;
}

inline json read_json(std::istream& is)
{
    try {
        return json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("json input: ") + e.what());
    }
}

} // namespace leaky::io
