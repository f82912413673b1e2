#ifndef SIMSEQL_COMMON_HPP
#define SIMSEQL_COMMON_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace simseql {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Source position of a token, 1-based. line == 0 means "no position".
struct SourcePos {
    int line = 0;
    int column = 0;
};

class Error : public std::runtime_error {
public:
    explicit Error(std::string msg, SourcePos pos = {})
        : std::runtime_error(pos.line > 0 ? msg + " (at line " + std::to_string(pos.line) +
                                                ", column " + std::to_string(pos.column) + ")"
                                          : msg),
          pos_(pos) {}
    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

// Lexing / grammar violations. Always carry a position.
class ParseError : public Error {
public:
    using Error::Error;
};

// Name resolution, typing and catalog violations found before execution.
class BindError : public Error {
public:
    using Error::Error;
};

// Failures while evaluating a bound plan (bad data, arity drift, io).
class RuntimeError : public Error {
public:
    using Error::Error;
};

inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; }

inline std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(ascii_lower(c));
    return out;
}

inline bool ci_equal(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
    return true;
}

// Shortest round-trip text for a double; integral values print without ".0".
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Distances are rendered with six significant digits.
inline std::string format_distance(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

}  // namespace simseql

#endif
