#ifndef SIMSEQL_VPTREE_HPP
#define SIMSEQL_VPTREE_HPP

#include <algorithm>
#include <functional>
#include <memory>
#include <queue>
#include <random>
#include <vector>

#include "exec_types.hpp"
#include "relation.hpp"
#include "value.hpp"

namespace simseql {

// Vantage-point tree over one attribute of a relation. Requires the bound
// distance to satisfy the metric postulates; pruning uses the triangle
// inequality. The distance must already apply the Null rule (Null -> +inf).
class MetricIndex {
public:
    using Dist = std::function<double(const Value&, const Value&)>;

    struct Hit {
        RowId id;
        double distance;
    };

    static constexpr size_t kLeafCapacity = 16;
    static constexpr size_t kPivotCandidates = 32;

    MetricIndex(Dist dist, uint64_t seed) : dist_(std::move(dist)), rng_(seed) {}

    void build(std::vector<std::pair<RowId, Value>> items) {
        count_ = items.size();
        std::vector<Entry> entries;
        entries.reserve(items.size());
        for (auto& [id, v] : items) entries.push_back(Entry{0.0, id, std::move(v)});
        root_ = build_node(std::move(entries));
    }

    void insert(RowId id, Value v) {
        ++count_;
        if (!root_) {
            root_ = std::make_unique<Node>();
            root_->seq = next_seq_++;
            root_->leaf = true;
            root_->bucket.push_back(Entry{0.0, id, std::move(v)});
            return;
        }
        Node* n = root_.get();
        while (!n->leaf) {
            double d = dist_(n->pivot, v);
            n = d <= n->radius ? n->inner.get() : n->outer.get();
        }
        n->bucket.push_back(Entry{0.0, id, std::move(v)});
        if (n->bucket.size() > kLeafCapacity) split_leaf(*n);
    }

    size_t size() const { return count_; }

    // k nearest rows, ascending by (distance, row id). With a finite budget the
    // result is the best among the first budgeted evaluations in traversal order.
    std::vector<Hit> knn(const Value& q, size_t k, Budget budget = {},
                         EvalCounter* counter = nullptr) const {
        EvalCounter local;
        EvalCounter& evals = counter ? *counter : local;
        std::vector<Hit> best;  // kept sorted ascending by (distance, id)
        auto tau = [&] { return best.size() == k ? best.back().distance : kInfinity; };
        auto offer = [&](RowId id, double d) {
            Hit h{id, d};
            auto pos = std::lower_bound(best.begin(), best.end(), h, hit_less);
            if (best.size() < k) {
                best.insert(pos, h);
            } else if (pos != best.end()) {
                best.insert(pos, h);
                best.pop_back();
            }
        };
        traverse(
            q, budget, evals, [&] { return tau(); }, offer);
        return best;
    }

    // All rows within radius (inclusive), ascending by (distance, row id).
    // A finite budget yields a subset of the exact answer.
    std::vector<Hit> range(const Value& q, double radius, Budget budget = {},
                           EvalCounter* counter = nullptr) const {
        EvalCounter local;
        EvalCounter& evals = counter ? *counter : local;
        std::vector<Hit> out;
        traverse(
            q, budget, evals, [&] { return radius; },
            [&](RowId id, double d) {
                if (d <= radius) out.push_back(Hit{id, d});
            });
        std::sort(out.begin(), out.end(), hit_less);
        return out;
    }

    // Structural check used by tests: every row sits in exactly one bucket or
    // pivot slot and the partition radii hold on both sides.
    bool validate() const {
        std::vector<RowId> seen;
        bool ok = root_ ? validate_node(*root_, seen) : true;
        std::sort(seen.begin(), seen.end());
        if (seen.size() != count_) return false;
        for (size_t i = 1; i < seen.size(); ++i)
            if (seen[i] == seen[i - 1]) return false;
        return ok;
    }

private:
    struct Entry {
        double d;
        RowId id;
        Value value;
    };

    struct Node {
        int seq = 0;
        bool leaf = false;
        RowId pivot_id = 0;
        Value pivot;
        double radius = 0.0;
        std::unique_ptr<Node> inner, outer;
        std::vector<Entry> bucket;
    };

    static bool hit_less(const Hit& a, const Hit& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.id < b.id;
    }

    std::unique_ptr<Node> build_node(std::vector<Entry> items) {
        if (items.empty()) return nullptr;
        auto node = std::make_unique<Node>();
        node->seq = next_seq_++;
        if (items.size() <= kLeafCapacity) {
            node->leaf = true;
            node->bucket = std::move(items);
            return node;
        }
        size_t pivot_at = select_pivot(items);
        std::swap(items[pivot_at], items.back());
        node->pivot_id = items.back().id;
        node->pivot = std::move(items.back().value);
        items.pop_back();

        for (auto& e : items) e.d = dist_(node->pivot, e.value);
        size_t m = items.size() / 2;
        std::nth_element(items.begin(), items.begin() + m, items.end(),
                         [](const Entry& a, const Entry& b) { return a.d < b.d; });
        node->radius = items[m].d;
        std::vector<Entry> inner(std::make_move_iterator(items.begin()),
                                 std::make_move_iterator(items.begin() + m));
        std::vector<Entry> outer(std::make_move_iterator(items.begin() + m),
                                 std::make_move_iterator(items.end()));
        node->inner = build_node(std::move(inner));
        node->outer = build_node(std::move(outer));
        return node;
    }

    // Pivot with the largest spread of distances to a sample of the node's
    // items; ill-conditioned (infinite) spreads are never preferred.
    size_t select_pivot(const std::vector<Entry>& items) {
        size_t n = items.size();
        size_t candidates = std::min(kPivotCandidates, n);
        size_t best = 0;
        double best_var = -1.0;
        std::uniform_int_distribution<size_t> pick(0, n - 1);
        for (size_t c = 0; c < candidates; ++c) {
            size_t i = pick(rng_);
            size_t samples = std::min(kPivotCandidates, n - 1);
            double sum = 0, sumsq = 0;
            size_t taken = 0;
            for (size_t s = 0; s < samples; ++s) {
                size_t j = pick(rng_);
                if (j == i) continue;
                double d = dist_(items[i].value, items[j].value);
                sum += d;
                sumsq += d * d;
                ++taken;
            }
            if (taken == 0) continue;
            double mean = sum / double(taken);
            double var = sumsq / double(taken) - mean * mean;
            if (std::isfinite(var) && var > best_var) {
                best_var = var;
                best = i;
            }
        }
        return best;
    }

    void split_leaf(Node& n) {
        std::vector<Entry> items = std::move(n.bucket);
        auto rebuilt = build_node(std::move(items));
        n.leaf = rebuilt->leaf;
        n.pivot_id = rebuilt->pivot_id;
        n.pivot = std::move(rebuilt->pivot);
        n.radius = rebuilt->radius;
        n.inner = std::move(rebuilt->inner);
        n.outer = std::move(rebuilt->outer);
        n.bucket = std::move(rebuilt->bucket);
    }

    // Best-first traversal shared by knn and range. threshold() is the current
    // pruning bound; offer() receives each evaluated row.
    template <class Threshold, class Offer>
    void traverse(const Value& q, Budget budget, EvalCounter& evals, Threshold threshold,
                  Offer offer) const {
        if (!root_) return;
        struct Item {
            double lb;
            int seq;
            const Node* node;
        };
        auto cmp = [](const Item& a, const Item& b) {
            if (a.lb != b.lb) return a.lb > b.lb;
            return a.seq > b.seq;
        };
        std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
        pq.push(Item{0.0, root_->seq, root_.get()});
        while (!pq.empty()) {
            Item it = pq.top();
            pq.pop();
            if (it.lb > threshold()) break;  // min bound already too far
            const Node* n = it.node;
            if (n->leaf) {
                for (const auto& e : n->bucket) {
                    if (budget.exhausted(evals)) return;
                    ++evals.count;
                    offer(e.id, dist_(q, e.value));
                }
                continue;
            }
            if (budget.exhausted(evals)) return;
            ++evals.count;
            double d = dist_(q, n->pivot);
            offer(n->pivot_id, d);
            bool bounded = std::isfinite(d) && std::isfinite(n->radius);
            double lb_inner = bounded ? std::max(0.0, d - n->radius) : 0.0;
            double lb_outer = bounded ? std::max(0.0, n->radius - d) : 0.0;
            if (n->inner) pq.push(Item{std::max(it.lb, lb_inner), n->inner->seq, n->inner.get()});
            if (n->outer) pq.push(Item{std::max(it.lb, lb_outer), n->outer->seq, n->outer.get()});
        }
    }

    bool validate_node(const Node& n, std::vector<RowId>& seen) const {
        if (n.leaf) {
            if (n.bucket.size() > kLeafCapacity) return false;
            for (const auto& e : n.bucket) seen.push_back(e.id);
            return true;
        }
        seen.push_back(n.pivot_id);
        bool ok = true;
        if (n.inner) {
            ok = ok && check_side(*n.inner, n.pivot, n.radius, true, seen);
        }
        if (n.outer) {
            ok = ok && check_side(*n.outer, n.pivot, n.radius, false, seen);
        }
        return ok;
    }

    bool check_side(const Node& child, const Value& pivot, double radius, bool inner,
                    std::vector<RowId>& seen) const {
        bool ok = true;
        for_each_value(child, [&](RowId, const Value& v) {
            double d = dist_(pivot, v);
            if (inner ? d > radius : d < radius) ok = false;
        });
        return validate_node(child, seen) && ok;
    }

    template <class F>
    void for_each_value(const Node& n, F f) const {
        if (n.leaf) {
            for (const auto& e : n.bucket) f(e.id, e.value);
            return;
        }
        f(n.pivot_id, n.pivot);
        if (n.inner) for_each_value(*n.inner, f);
        if (n.outer) for_each_value(*n.outer, f);
    }

    Dist dist_;
    std::mt19937_64 rng_;
    std::unique_ptr<Node> root_;
    size_t count_ = 0;
    int next_seq_ = 0;
};

}  // namespace simseql

#endif
