#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace numeraire::detail {

// Serialises with every double at 17 significant digits so values round-trip
// exactly. Non-finite numbers become null. Object keys keep insertion order.
inline void write_json(const nlohmann::ordered_json& j, std::string& out, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case nlohmann::ordered_json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        case nlohmann::ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += nlohmann::ordered_json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                write_json(it.value(), out, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                write_json(e, out, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            return;
        }
        default:
            out += j.dump();
    }
}

inline std::string to_text(const nlohmann::ordered_json& j, int indent = 2) {
    std::string out;
    write_json(j, out, indent, 0);
    return out;
}

inline std::string number_text(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace numeraire::detail
