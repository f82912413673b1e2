#ifndef SIMSEQL_EXEC_TYPES_HPP
#define SIMSEQL_EXEC_TYPES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "value.hpp"

namespace simseql {

// A materialized execution row. Column meaning is carried by the plan schema.
using Row = std::vector<Value>;

struct ScoredRow {
    Row row;
    double distance = 0.0;
};

// Counts distance evaluations for one search invocation.
struct EvalCounter {
    uint64_t count = 0;
};

// Upper bound on distance evaluations. Unset means exact (unlimited) search.
struct Budget {
    std::optional<uint64_t> max_evaluations;

    bool exhausted(const EvalCounter& c) const {
        return max_evaluations && c.count >= *max_evaluations;
    }
    static Budget unlimited() { return {}; }
    static Budget capped(uint64_t n) { return Budget{n}; }
};

}  // namespace simseql

#endif
