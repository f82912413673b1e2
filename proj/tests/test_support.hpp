#ifndef SIMSEQL_TEST_SUPPORT_HPP
#define SIMSEQL_TEST_SUPPORT_HPP

// Shared helpers for the test binaries: catalog/relation builders, a seeded
// value generator, and result-table comparison with a distance tolerance.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "simseql/builtins.hpp"
#include "simseql/engine.hpp"

namespace simseql::test {

struct AttrSpec {
    std::string name;
    std::string type;
    std::vector<DistanceRef> distances{};
};

inline std::shared_ptr<Relation> make_relation(Catalog& cat, const std::string& name,
                                               std::vector<AttrSpec> attrs) {
    std::vector<AttributeDef> defs;
    defs.reserve(attrs.size());
    for (auto& a : attrs) {
        AttributeDef d;
        d.name = std::move(a.name);
        d.type = DataTypeId{std::move(a.type)};
        d.distances = std::move(a.distances);
        defs.push_back(std::move(d));
    }
    return cat.create_relation(name, std::move(defs));
}

// Planner options for the reference path: no rewrites, no index acceleration.
inline PlannerOptions sequential_only() {
    PlannerOptions o;
    o.enable_r1 = false;
    o.enable_r2 = false;
    o.use_indexes = false;
    return o;
}

inline ExecTable run(const Catalog& cat, std::string_view sql, const ParamBinding& params = {},
                     PlannerOptions opts = {}) {
    return Engine(cat).run(sql, params, opts).table;
}

inline int column_of(const ExecTable& t, std::string_view name) {
    for (size_t i = 0; i < t.schema.size(); ++i)
        if (ci_equal(t.schema.at(i).name, name)) return int(i);
    return -1;
}

inline bool floats_close(double x, double y, double rel_tol) {
    if (x == y) return true;  // covers equal infinities
    if (std::isinf(x) || std::isinf(y) || std::isnan(x) || std::isnan(y)) return false;
    return std::fabs(x - y) <= rel_tol * std::max(std::fabs(x), std::fabs(y));
}

inline std::string describe_cell(const Value& v) {
    switch (v.kind()) {
        case ValueKind::Null: return "null";
        case ValueKind::Integer:
        case ValueKind::Long: return std::to_string(v.as_int());
        case ValueKind::Date: return format_date(v.as_int());
        case ValueKind::Float: return format_double(v.as_float());
        case ValueKind::String: return "'" + v.as_string() + "'";
        case ValueKind::NumberVector: {
            std::string s = "[";
            for (size_t i = 0; i < v.as_vector().size(); ++i) {
                if (i) s += ",";
                s += format_double(v.as_vector()[i]);
            }
            return s + "]";
        }
        case ValueKind::ImageRasterKind:
            return "<image " + std::to_string(v.as_raster().width) + "x" +
                   std::to_string(v.as_raster().height) + ">";
    }
    return "?";
}

// Cell-by-cell comparison of ordered results. Float cells (distances) match
// within `rel_tol` relative error; every other kind must be exactly equal.
inline bool tables_match(const ExecTable& a, const ExecTable& b, double rel_tol = 0.0,
                         std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (a.schema.size() != b.schema.size())
        return fail("column counts differ: " + std::to_string(a.schema.size()) + " vs " +
                    std::to_string(b.schema.size()));
    if (a.rows.size() != b.rows.size())
        return fail("row counts differ: " + std::to_string(a.rows.size()) + " vs " +
                    std::to_string(b.rows.size()));
    for (size_t r = 0; r < a.rows.size(); ++r) {
        for (size_t c = 0; c < a.schema.size(); ++c) {
            const Value& x = a.rows[r][c];
            const Value& y = b.rows[r][c];
            if (x.is_null() && y.is_null()) continue;
            bool ok;
            if (x.kind() == ValueKind::Float && y.kind() == ValueKind::Float)
                ok = floats_close(x.as_float(), y.as_float(), rel_tol);
            else
                ok = x.equals(y);
            if (!ok)
                return fail("row " + std::to_string(r) + ", column " + std::to_string(c) + ": " +
                            describe_cell(x) + " vs " + describe_cell(y));
        }
    }
    return true;
}

// Seeded generator for randomized oracle runs.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(uint64_t seed) : gen(seed) {}

    int64_t up_to(int64_t n) {  // [0, n)
        return std::uniform_int_distribution<int64_t>(0, n - 1)(gen);
    }
    int64_t between(int64_t lo, int64_t hi) {  // [lo, hi]
        return std::uniform_int_distribution<int64_t>(lo, hi)(gen);
    }
    double real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    bool coin(double p = 0.5) { return real(0, 1) < p; }

    std::vector<double> vec(size_t dim, double lo = -10, double hi = 10) {
        std::vector<double> v(dim);
        for (auto& x : v) x = real(lo, hi);
        return v;
    }
    std::string word(size_t max_len, std::string_view alphabet = "abc") {
        std::string s;
        size_t len = size_t(up_to(int64_t(max_len) + 1));
        for (size_t i = 0; i < len; ++i) s += alphabet[size_t(up_to(int64_t(alphabet.size())))];
        return s;
    }
};

}  // namespace simseql::test

#endif
