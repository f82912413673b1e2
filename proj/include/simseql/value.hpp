#ifndef SIMSEQL_VALUE_HPP
#define SIMSEQL_VALUE_HPP

#include <string>
#include <variant>
#include <vector>

#include "common.hpp"

namespace simseql {

// Raw RGB raster, 8 bits per channel, row-major. Wire format is binary PPM (P6).
struct ImageRaster {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> rgb;  // size == 3 * width * height

    bool operator==(const ImageRaster& o) const {
        return width == o.width && height == o.height && rgb == o.rgb;
    }
};

inline bool operator<(const ImageRaster& a, const ImageRaster& b) {
    if (a.width != b.width) return a.width < b.width;
    if (a.height != b.height) return a.height < b.height;
    return a.rgb < b.rgb;
}

enum class ValueKind : uint8_t {
    Null,
    Integer,
    Long,
    String,
    Date,  // days since 1970-01-01
    Float,
    NumberVector,
    ImageRasterKind,
};

inline const char* value_kind_name(ValueKind k) {
    switch (k) {
        case ValueKind::Null: return "null";
        case ValueKind::Integer: return "integer";
        case ValueKind::Long: return "long";
        case ValueKind::String: return "string";
        case ValueKind::Date: return "date";
        case ValueKind::Float: return "float";
        case ValueKind::NumberVector: return "number_vector";
        case ValueKind::ImageRasterKind: return "image_raster";
    }
    return "?";
}

// One cell of a tuple. Integer/Long/Date share int64 storage but keep distinct kinds.
class Value {
public:
    Value() : kind_(ValueKind::Null) {}

    static Value integer(int64_t v) { return Value(ValueKind::Integer, v); }
    static Value long_int(int64_t v) { return Value(ValueKind::Long, v); }
    static Value date(int64_t days) { return Value(ValueKind::Date, days); }
    static Value floating(double v) {
        Value out;
        out.kind_ = ValueKind::Float;
        out.data_ = v;
        return out;
    }
    static Value string(std::string s) {
        Value out;
        out.kind_ = ValueKind::String;
        out.data_ = std::move(s);
        return out;
    }
    static Value vector(std::vector<double> v) {
        Value out;
        out.kind_ = ValueKind::NumberVector;
        out.data_ = std::move(v);
        return out;
    }
    static Value raster(ImageRaster img) {
        if (img.rgb.size() != size_t(3) * img.width * img.height)
            throw RuntimeError("image raster byte count does not match its dimensions");
        Value out;
        out.kind_ = ValueKind::ImageRasterKind;
        out.data_ = std::move(img);
        return out;
    }

    ValueKind kind() const { return kind_; }
    bool is_null() const { return kind_ == ValueKind::Null; }

    int64_t as_int() const { return std::get<int64_t>(data_); }
    double as_float() const { return std::get<double>(data_); }
    const std::string& as_string() const { return std::get<std::string>(data_); }
    const std::vector<double>& as_vector() const { return std::get<std::vector<double>>(data_); }
    const ImageRaster& as_raster() const { return std::get<ImageRaster>(data_); }

    // Numeric view across Integer/Long/Date/Float; used by comparisons.
    double numeric() const {
        if (kind_ == ValueKind::Float) return as_float();
        return double(as_int());
    }
    bool is_numeric() const {
        return kind_ == ValueKind::Integer || kind_ == ValueKind::Long ||
               kind_ == ValueKind::Date || kind_ == ValueKind::Float;
    }

    // Structural equality; kinds must match exactly. Null equals nothing, not even Null
    // (three-valued comparisons are out of scope, predicates on Null are simply false).
    bool equals(const Value& o) const {
        if (kind_ != o.kind_ || kind_ == ValueKind::Null || o.kind_ == ValueKind::Null)
            return false;
        return data_ == o.data_;
    }

    // Total order over all values, for deterministic grouping and dedup. Null sorts first.
    // Distinct kinds order by kind rank; this is an engine convention, not SQL semantics.
    int order(const Value& o) const {
        if (kind_ != o.kind_) return kind_ < o.kind_ ? -1 : 1;
        if (kind_ == ValueKind::Null) return 0;
        if (data_ < o.data_) return -1;
        if (o.data_ < data_) return 1;
        return 0;
    }

private:
    Value(ValueKind k, int64_t v) : kind_(k), data_(v) {}

    ValueKind kind_;
    std::variant<int64_t, double, std::string, std::vector<double>, ImageRaster> data_;
};

struct ValueLess {
    bool operator()(const Value& a, const Value& b) const { return a.order(b) < 0; }
};

// Civil date <-> days since epoch (proleptic Gregorian).
inline int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = unsigned(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return int64_t(era) * 146097 + int64_t(doe) - 719468;
}

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

inline CivilDate civil_from_days(int64_t z) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = unsigned(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t y = int64_t(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {int(y + (m <= 2)), m, d};
}

inline std::string format_date(int64_t days) {
    CivilDate c = civil_from_days(days);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

// Parses YYYY-MM-DD; throws on malformed input.
inline int64_t parse_date(std::string_view s) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        std::sscanf(std::string(s).c_str(), "%d-%u-%u", &y, &m, &d) != 3 || m < 1 || m > 12 ||
        d < 1 || d > 31)
        throw RuntimeError("malformed date literal '" + std::string(s) + "', expected YYYY-MM-DD");
    return days_from_civil(y, m, d);
}

}  // namespace simseql

#endif
