#pragma once

// Dataset CSV format: header `x1,..,xDx,a1,..,aDa,q`, one example per row,
// situation/parametrization columns in normalized units.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "suprb/core.hpp"
#include "suprb/errors.hpp"

namespace suprb {

/// Shortest form is not required; 17 significant digits round-trip any double.
inline std::string format_real(double v)
{
    return fmt::format("{:.17g}", v);
}

inline void write_dataset_csv(std::ostream& os, const Dataset& data)
{
    for (std::size_t i = 0; i < data.dx(); ++i) os << 'x' << i + 1 << ',';
    for (std::size_t k = 0; k < data.da(); ++k) os << 'a' << k + 1 << ',';
    os << "q\n";
    for (const auto& e : data) {
        for (double v : e.x) os << format_real(v) << ',';
        for (double v : e.a) os << format_real(v) << ',';
        os << format_real(e.q) << '\n';
    }
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    for (auto& f : out) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    }
    return out;
}

inline bool parse_double(std::string_view s, double& out)
{
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

} // namespace detail

inline Dataset read_dataset_csv(std::istream& is)
{
    std::string line;
    std::size_t offset = 0;
    if (!std::getline(is, line)) throw ParseError("dataset: missing header", 0);

    const auto header = detail::split_fields(line);
    std::size_t dx = 0, da = 0;
    std::size_t col = 0;
    for (; col < header.size() && header[col] == fmt::format("x{}", dx + 1); ++col) ++dx;
    for (; col < header.size() && header[col] == fmt::format("a{}", da + 1); ++col) ++da;
    if (dx == 0 || da == 0 || col + 1 != header.size() || header[col] != "q")
        throw ParseError(fmt::format("dataset: malformed header '{}'", line), 0);
    offset += line.size() + 1;

    Dataset data(dx, da);
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            offset += line.size() + 1;
            continue;
        }
        const auto fields = detail::split_fields(line);
        if (fields.size() != dx + da + 1)
            throw ParseError(fmt::format("dataset row {}: expected {} fields, got {}", row,
                                         dx + da + 1, fields.size()),
                             offset);
        std::vector<double> vals(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (!detail::parse_double(fields[i], vals[i]))
                throw ParseError(fmt::format("dataset row {}: bad number '{}'", row, fields[i]),
                                 offset + static_cast<std::size_t>(fields[i].data() - line.data()));
        Example e{Situation(std::vector<double>(vals.begin(), vals.begin() + dx)),
                  Parametrization(std::vector<double>(vals.begin() + dx, vals.end() - 1)), vals.back()};
        if (!in_unit_box(e.x.view()) || !in_unit_box(e.a.view()))
            throw ParseError(fmt::format("dataset row {}: value outside [-1, 1]", row), offset);
        data.add(std::move(e));
        offset += line.size() + 1;
    }
    return data;
}

inline Dataset load_dataset_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open dataset '{}'", path));
    return read_dataset_csv(in);
}

inline void save_dataset_csv(const std::string& path, const Dataset& data)
{
    std::ofstream out(path);
    if (!out) throw Error(fmt::format("cannot write dataset '{}'", path));
    write_dataset_csv(out, data);
}

} // namespace suprb
