#ifndef SIMSEQL_METHODS_HPP
#define SIMSEQL_METHODS_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "catalog.hpp"
#include "exec_types.hpp"
#include "vptree.hpp"

namespace simseql {

// Acceleration over a metric index when the search has a single query object
// and a single-attribute distance. fetch maps a row id back to the source row.
struct PointAccel {
    const MetricIndex* index = nullptr;
    Value query;
    std::function<Row(RowId)> fetch;
};

// Acceleration for pairwise joins: probe the right side's index with every
// left row's attribute value.
struct JoinAccel {
    const MetricIndex* right_index = nullptr;
    size_t left_attr_col = 0;
    std::function<Row(RowId)> fetch_right;
    std::function<size_t(RowId)> right_pos;
};

// Everything a search method sees. Single-candidate methods consume `rows`
// (already the Cartesian product when the search lists several sources);
// pairwise methods consume `left` and `right`.
struct MethodCall {
    const std::vector<Row>* rows = nullptr;
    const std::vector<Row>* left = nullptr;
    const std::vector<Row>* right = nullptr;
    std::function<double(const Row&)> distance;
    std::function<double(const Row&, const Row&)> pair_distance;
    std::vector<Value> args;
    std::optional<size_t> top_k;  // kNN pushdown for the default method
    Budget budget;
    EvalCounter evals;
    const PointAccel* point_accel = nullptr;
    const JoinAccel* join_accel = nullptr;
    int distinct_col = -1;   // distinctKnn group column within the row
    int self_attr_col = -1;  // single-attribute specs: that attribute's column
    const std::vector<RowId>* row_ids = nullptr;  // per-row ids for plain scans

    double numeric_arg(size_t i) const { return args.at(i).numeric(); }
};

namespace detail {

// Row-order scan evaluating exactly min(budget, |rows|) distances.
inline std::vector<ScoredRow> scored_scan(MethodCall& call) {
    std::vector<ScoredRow> out;
    out.reserve(call.rows->size());
    for (const auto& r : *call.rows) {
        if (call.budget.exhausted(call.evals)) break;
        ++call.evals.count;
        out.push_back({r, call.distance(r)});
    }
    return out;
}

// Ascending by distance; ties keep input (row id) order.
inline void sort_scored(std::vector<ScoredRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ScoredRow& a, const ScoredRow& b) { return a.distance < b.distance; });
}

inline std::vector<ScoredRow> from_hits(const std::vector<MetricIndex::Hit>& hits,
                                        const std::function<Row(RowId)>& fetch) {
    std::vector<ScoredRow> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back({fetch(h.id), h.distance});
    return out;
}

}  // namespace detail

// Default method: every candidate scored, ascending by distance. An upper
// bound pushed down from SELECT TOP n turns it into a k-nearest search.
inline std::vector<ScoredRow> method_nn(MethodCall& call) {
    if (call.point_accel && call.top_k) {
        auto hits = call.point_accel->index->knn(call.point_accel->query, *call.top_k, call.budget,
                                                 &call.evals);
        return detail::from_hits(hits, call.point_accel->fetch);
    }
    auto scored = detail::scored_scan(call);
    detail::sort_scored(scored);
    if (call.top_k && scored.size() > *call.top_k) scored.resize(*call.top_k);
    return scored;
}

// All candidates within the given radius, inclusive, ascending by distance.
inline std::vector<ScoredRow> method_range(MethodCall& call) {
    double radius = call.numeric_arg(0);
    if (radius < 0) throw RuntimeError("rangeQuery: radius must be non-negative");
    if (call.args.size() > 1) {
        double cap = call.numeric_arg(1);
        if (cap < 0) throw RuntimeError("range search: evaluation budget must be non-negative");
        call.budget = Budget::capped(uint64_t(cap));
    }
    if (call.point_accel) {
        auto hits =
            call.point_accel->index->range(call.point_accel->query, radius, call.budget, &call.evals);
        return detail::from_hits(hits, call.point_accel->fetch);
    }
    auto scored = detail::scored_scan(call);
    std::vector<ScoredRow> out;
    for (auto& s : scored)
        if (s.distance <= radius) out.push_back(std::move(s));
    detail::sort_scored(out);
    return out;
}

// Similarity join: all (left, right) pairs within the threshold, including
// self-pairs and both orientations of a matching pair. Ascending by
// (distance, left position, right position).
inline std::vector<ScoredRow> method_similarity_join(MethodCall& call) {
    double threshold = call.numeric_arg(0);
    if (threshold < 0) throw RuntimeError("MessifSimilarityJoin: threshold must be non-negative");
    struct Pair {
        size_t l, r;
        double d;
    };
    std::vector<Pair> pairs;
    if (call.join_accel) {
        const auto& accel = *call.join_accel;
        for (size_t li = 0; li < call.left->size(); ++li) {
            const Value& key = (*call.left)[li][accel.left_attr_col];
            auto hits = accel.right_index->range(key, threshold, call.budget, &call.evals);
            for (const auto& h : hits) pairs.push_back({li, accel.right_pos(h.id), h.distance});
        }
    } else {
        for (size_t li = 0; li < call.left->size(); ++li) {
            for (size_t ri = 0; ri < call.right->size(); ++ri) {
                if (call.budget.exhausted(call.evals)) break;
                ++call.evals.count;
                double d = call.pair_distance((*call.left)[li], (*call.right)[ri]);
                if (d <= threshold) pairs.push_back({li, ri, d});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.l != b.l) return a.l < b.l;
        return a.r < b.r;
    });
    std::vector<ScoredRow> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) {
        Row row = (*call.left)[p.l];
        const Row& r = (*call.right)[p.r];
        row.insert(row.end(), r.begin(), r.end());
        out.push_back({std::move(row), p.d});
    }
    return out;
}

// Reverse k-nearest-neighbor: a tuple qualifies when the query is at most as
// far as the tuple's k-th nearest other tuple. With k or fewer tuples stored,
// everything qualifies.
inline std::vector<ScoredRow> method_reverse_knn(MethodCall& call) {
    double kd = call.numeric_arg(0);
    if (kd < 1) throw RuntimeError("reverseKnn: k must be positive");
    size_t k = size_t(kd);
    const auto& rows = *call.rows;
    std::vector<ScoredRow> out;
    for (size_t i = 0; i < rows.size(); ++i) {
        ++call.evals.count;
        double dq = call.distance(rows[i]);
        double kth = kInfinity;
        if (call.point_accel && call.row_ids) {
            const Value& self = rows[i][call.self_attr_col];
            auto hits = call.point_accel->index->knn(self, k + 1, Budget::unlimited(), &call.evals);
            std::vector<double> others;
            for (const auto& h : hits)
                if (h.id != (*call.row_ids)[i]) others.push_back(h.distance);
            if (others.size() >= k) kth = others[k - 1];
        } else {
            std::vector<double> others;
            others.reserve(rows.size());
            for (size_t j = 0; j < rows.size(); ++j) {
                if (j == i) continue;
                ++call.evals.count;
                others.push_back(call.pair_distance(rows[i], rows[j]));
            }
            if (others.size() >= k) {
                std::nth_element(others.begin(), others.begin() + (k - 1), others.end());
                kth = others[k - 1];
            }
        }
        if (dq <= kth) out.push_back({rows[i], dq});
    }
    detail::sort_scored(out);
    return out;
}

// Greedy nearest-first sweep keeping only the first row of each value of the
// chosen attribute, until k distinct values are collected.
inline std::vector<ScoredRow> method_distinct_knn(MethodCall& call) {
    double kd = call.numeric_arg(0);
    if (kd < 1) throw RuntimeError("distinctKnn: k must be positive");
    size_t k = size_t(kd);
    std::vector<ScoredRow> scored;
    if (call.point_accel) {
        auto hits = call.point_accel->index->knn(call.point_accel->query, call.rows->size(),
                                                 call.budget, &call.evals);
        scored = detail::from_hits(hits, call.point_accel->fetch);
    } else {
        scored = detail::scored_scan(call);
        detail::sort_scored(scored);
    }
    std::set<Value, ValueLess> seen;
    std::vector<ScoredRow> out;
    for (auto& s : scored) {
        if (out.size() == k) break;
        const Value& g = s.row[call.distinct_col];
        if (seen.insert(g).second) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace simseql

#endif
