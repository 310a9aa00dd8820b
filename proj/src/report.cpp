#include "blab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace blab::report {

std::string formatDouble(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void escapeString(const std::string& s, std::ostringstream& os) {
    os << '"';
    for (char c : s) {
        switch (c) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\t': os << "\\t"; break;
            case '\r': os << "\\r"; break;
            default:
                if ((unsigned char)c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    os << buf;
                } else {
                    os << c;
                }
        }
    }
    os << '"';
}

void emit(const Json& j, std::ostringstream& os, int indent, int depth) {
    const std::string pad(indent * depth, ' ');
    const std::string padIn(indent * (depth + 1), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) { os << "{}"; return; }
            os << "{\n";
            size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                os << padIn;
                escapeString(it.key(), os);
                os << ": ";
                emit(it.value(), os, indent, depth + 1);
                if (i + 1 < j.size()) os << ',';
                os << '\n';
            }
            os << pad << '}';
            break;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) { os << "[]"; return; }
            os << "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                os << padIn;
                emit(j[i], os, indent, depth + 1);
                if (i + 1 < j.size()) os << ',';
                os << '\n';
            }
            os << pad << ']';
            break;
        }
        case nlohmann::json::value_t::string:
            escapeString(j.get<std::string>(), os);
            break;
        case nlohmann::json::value_t::boolean:
            os << (j.get<bool>() ? "true" : "false");
            break;
        case nlohmann::json::value_t::number_float:
            os << formatDouble(j.get<double>());
            break;
        case nlohmann::json::value_t::number_integer:
            os << j.get<long long>();
            break;
        case nlohmann::json::value_t::number_unsigned:
            os << j.get<unsigned long long>();
            break;
        default:
            os << "null";
    }
}

}  // namespace

std::string dumpJson(const Json& j, int indent) {
    std::ostringstream os;
    emit(j, os, indent, 0);
    os << '\n';
    return os.str();
}

std::string timestampUtc() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace blab::report
