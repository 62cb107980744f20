#pragma once

// Deterministic serialization: object keys keep insertion order and every
// floating-point value is printed with %.12e.

#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "superop/algebra.hpp"

namespace superop::cli {

using ordered_json = nlohmann::ordered_json;

inline std::string format_double(double x)
{
    if (std::isnan(x))
        return "null";
    if (std::isinf(x))
        return x > 0 ? "1e308" : "-1e308";
    if (x == 0.0)
        x = 0.0; // drop the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

inline ordered_json complex_pair(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

namespace detail {

inline void write_json(std::ostringstream& out, const ordered_json& j, int indent, int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case ordered_json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out << ",\n";
            first = false;
            out << pad << ordered_json(it.key()).dump() << ": ";
            write_json(out, it.value(), indent, depth + 1);
        }
        out << "\n" << close_pad << "}";
        return;
    }
    case ordered_json::value_t::array: {
        // arrays of scalars stay on one line
        bool flat = true;
        for (const auto& x : j)
            flat = flat && !x.is_structured();
        if (j.empty()) {
            out << "[]";
            return;
        }
        if (flat) {
            out << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    out << ", ";
                write_json(out, j[i], indent, depth + 1);
            }
            out << "]";
            return;
        }
        out << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out << ",\n";
            out << pad;
            write_json(out, j[i], indent, depth + 1);
        }
        out << "\n" << close_pad << "]";
        return;
    }
    case ordered_json::value_t::number_float:
        out << format_double(j.get<double>());
        return;
    default:
        out << j.dump();
    }
}

} // namespace detail

inline std::string dump_json(const ordered_json& j)
{
    std::ostringstream out;
    detail::write_json(out, j, 2, 0);
    out << "\n";
    return out.str();
}

} // namespace superop::cli
