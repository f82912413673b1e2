#ifndef SIMSEQL_DISTANCES_HPP
#define SIMSEQL_DISTANCES_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"
#include "text_corpus.hpp"
#include "value.hpp"

namespace simseql {

// Exact-match distance: 0 for structurally equal values, +inf otherwise.
inline double identity_distance(const Value& a, const Value& b) {
    if (a.kind() != b.kind())
        throw RuntimeError(std::string("identity distance operands differ in type: ") +
                           value_kind_name(a.kind()) + " vs " + value_kind_name(b.kind()));
    return a.equals(b) ? 0.0 : kInfinity;
}

inline void check_same_dimension(const std::vector<double>& a, const std::vector<double>& b,
                                 const char* fn) {
    if (a.size() != b.size())
        throw RuntimeError(std::string(fn) + ": vector dimensions differ (" +
                           std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

// Manhattan distance. Scalars (integer, long, date) are dimension-1 vectors.
inline double l1_distance(const Value& a, const Value& b) {
    if (a.kind() != b.kind())
        throw RuntimeError(std::string("l1_metric operands differ in type: ") +
                           value_kind_name(a.kind()) + " vs " + value_kind_name(b.kind()));
    if (a.kind() == ValueKind::NumberVector) {
        const auto& x = a.as_vector();
        const auto& y = b.as_vector();
        check_same_dimension(x, y, "l1_metric");
        double s = 0;
        for (size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
        return s;
    }
    if (a.is_numeric()) return std::abs(a.numeric() - b.numeric());
    throw RuntimeError(std::string("l1_metric does not accept ") + value_kind_name(a.kind()));
}

inline double weighted_l2_distance(const std::vector<double>& x, const std::vector<double>& y,
                                   const std::vector<double>& weights, const char* fn) {
    check_same_dimension(x, y, fn);
    if (!weights.empty() && weights.size() != x.size())
        throw RuntimeError(std::string(fn) + ": weight profile dimension mismatch");
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double w = weights.empty() ? 1.0 : weights[i];
        double d = x[i] - y[i];
        s += w * d * d;
    }
    return std::sqrt(s);
}

inline double l2_distance(const Value& a, const Value& b) {
    if (a.kind() != ValueKind::NumberVector || b.kind() != ValueKind::NumberVector)
        throw RuntimeError("l2_metric expects number_vector operands");
    return weighted_l2_distance(a.as_vector(), b.as_vector(), {}, "l2_metric");
}

// Levenshtein distance with unit costs, over bytes.
inline int64_t simple_edit_distance(std::string_view a, std::string_view b) {
    const size_t n = a.size(), m = b.size();
    std::vector<int64_t> row(m + 1);
    std::iota(row.begin(), row.end(), int64_t(0));
    for (size_t i = 1; i <= n; ++i) {
        int64_t diag = row[0];
        row[0] = int64_t(i);
        for (size_t j = 1; j <= m; ++j) {
            int64_t tmp = row[j];
            row[j] = std::min({diag + (a[i - 1] == b[j - 1] ? 0 : 1), row[j] + 1, row[j - 1] + 1});
            diag = tmp;
        }
    }
    return row[m];
}

// Minimal-cost transformation of a into b. Deleting a character of a costs
// w_delete, inserting a character of b costs w_insert, substitution w_substitute.
inline double weighted_edit_distance(std::string_view a, std::string_view b, double w_substitute,
                                     double w_insert, double w_delete) {
    if (w_substitute < 0 || w_insert < 0 || w_delete < 0)
        throw RuntimeError("weighted_edit_distance: weights must be non-negative");
    const size_t n = a.size(), m = b.size();
    std::vector<double> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = double(j) * w_insert;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = double(i) * w_delete;
        for (size_t j = 1; j <= m; ++j) {
            double sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0.0 : w_substitute);
            cur[j] = std::min({sub, prev[j] + w_delete, cur[j - 1] + w_insert});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// Cosine distance over tf-idf term vectors, clamped to [0,1]. Not a metric:
// the triangle inequality fails on suitable triples. Without a corpus every
// idf weight is zero and the distance degenerates to an equality test.
inline double tf_idf_distance(const std::string& x, const std::string& y,
                              const TextCorpus* corpus) {
    if (x == y) return 0.0;
    TextCorpus fallback;
    const TextCorpus& c = corpus ? *corpus : fallback;
    auto weigh = [&](const std::string& text, std::map<std::string, double>& vec) {
        for (const auto& t : tokenize_text(text)) vec[t] += 1.0;
        double norm_sq = 0;
        for (auto& [term, tf] : vec) {
            tf *= c.idf(term);
            norm_sq += tf * tf;
        }
        return norm_sq;
    };
    std::map<std::string, double> vx, vy;
    double nx = weigh(x, vx), ny = weigh(y, vy);
    if (nx == 0 || ny == 0) return 1.0;
    double dot = 0;
    for (const auto& [term, w] : vx) {
        auto it = vy.find(term);
        if (it != vy.end()) dot += w * it->second;
    }
    double d = 1.0 - dot / (std::sqrt(nx) * std::sqrt(ny));
    return std::clamp(d, 0.0, 1.0);
}

// Minimum over per-object element distances; the usual multi-object search rule.
inline double set_minimum(const std::vector<double>& element_distances) {
    if (element_distances.empty())
        throw RuntimeError("set distance 'minimum' needs at least one element distance");
    return *std::min_element(element_distances.begin(), element_distances.end());
}

// Weighted sum of distance parts. A zero weight drops its part entirely, so an
// unreachable (+inf) part only propagates when its weight is positive.
inline double weight_sum(const std::vector<std::pair<double, double>>& parts) {
    double s = 0;
    for (const auto& [d, w] : parts) {
        if (w < 0) throw RuntimeError("weight_sum: weights must be non-negative");
        if (w == 0) continue;
        if (std::isinf(d)) return kInfinity;
        s += w * d;
    }
    return s;
}

}  // namespace simseql

#endif
