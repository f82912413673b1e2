#ifndef SIMSEQL_ORDERED_INDEX_HPP
#define SIMSEQL_ORDERED_INDEX_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include "relation.hpp"
#include "value.hpp"

namespace simseql {

enum class OrderedOp { Eq, Lt, Le, Gt, Ge };

// Sorted array over one attribute under a registered comparison function.
// Null cells are never indexed; comparisons against Null are false anyway.
class OrderedIndex {
public:
    // cmp returns <0, 0, >0 like strcmp.
    using Cmp = std::function<int(const Value&, const Value&)>;

    explicit OrderedIndex(Cmp cmp) : cmp_(std::move(cmp)) {}

    void build(const std::vector<std::pair<RowId, Value>>& items) {
        entries_.clear();
        for (const auto& [id, v] : items)
            if (!v.is_null()) entries_.push_back({id, v});
        std::sort(entries_.begin(), entries_.end(), [&](const Entry& a, const Entry& b) {
            int c = cmp_(a.value, b.value);
            if (c != 0) return c < 0;
            return a.id < b.id;
        });
    }

    void insert(RowId id, const Value& v) {
        if (v.is_null()) return;
        Entry e{id, v};
        auto pos = std::lower_bound(entries_.begin(), entries_.end(), e,
                                    [&](const Entry& a, const Entry& b) {
                                        int c = cmp_(a.value, b.value);
                                        if (c != 0) return c < 0;
                                        return a.id < b.id;
                                    });
        entries_.insert(pos, std::move(e));
    }

    size_t size() const { return entries_.size(); }

    // Row ids matching `op` against v, ascending by row id.
    std::vector<RowId> lookup(OrderedOp op, const Value& v) const {
        auto below = [&](const Entry& e) { return cmp_(e.value, v) < 0; };
        auto at_or_below = [&](const Entry& e) { return cmp_(e.value, v) <= 0; };
        auto lo = std::partition_point(entries_.begin(), entries_.end(), below);
        auto hi = std::partition_point(entries_.begin(), entries_.end(), at_or_below);
        std::vector<RowId> out;
        auto take = [&](auto first, auto last) {
            for (auto it = first; it != last; ++it) out.push_back(it->id);
        };
        switch (op) {
            case OrderedOp::Eq: take(lo, hi); break;
            case OrderedOp::Lt: take(entries_.begin(), lo); break;
            case OrderedOp::Le: take(entries_.begin(), hi); break;
            case OrderedOp::Gt: take(hi, entries_.end()); break;
            case OrderedOp::Ge: take(lo, entries_.end()); break;
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    struct Entry {
        RowId id;
        Value value;
    };

    Cmp cmp_;
    std::vector<Entry> entries_;
};

}  // namespace simseql

#endif
