#ifndef SIMSEQL_EXEC_HPP
#define SIMSEQL_EXEC_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exec_types.hpp"
#include "relation.hpp"
#include "schema.hpp"
#include "value.hpp"

namespace simseql {

enum class ColumnKind { Attr, Distance, Rank };

// One column of an intermediate result. Distance and rank columns are carried
// alongside the data but stay invisible to '*' and to NATURAL JOIN matching;
// they are reachable only through DISTANCE / alias.DISTANCE / alias.rank.
struct ExecColumn {
    std::string qualifier;
    std::vector<std::string> extra_qualifiers;  // e.g. source aliases of a simsearch
    std::string name;
    ColumnKind ckind = ColumnKind::Attr;
    DataTypeId type;
    ValueKind vkind = ValueKind::Null;
    // Where the values physically come from, when they are a plain relation
    // attribute. Text distances resolve their document corpus through this.
    std::shared_ptr<Relation> origin_rel;
    int origin_attr = -1;

    bool answers_to(std::string_view q) const {
        if (ci_equal(qualifier, q)) return true;
        for (const auto& e : extra_qualifiers)
            if (ci_equal(e, q)) return true;
        return false;
    }
};

struct ExecSchema {
    std::vector<ExecColumn> columns;

    size_t size() const { return columns.size(); }
    const ExecColumn& at(size_t i) const { return columns.at(i); }

    static ExecSchema concat(const ExecSchema& a, const ExecSchema& b) {
        ExecSchema out = a;
        out.columns.insert(out.columns.end(), b.columns.begin(), b.columns.end());
        return out;
    }
};

struct ExecTable {
    ExecSchema schema;
    std::vector<Row> rows;
};

// Three-valued-free comparison: any Null operand yields "no result", which
// predicates treat as false. Mixed numeric kinds compare numerically; other
// kind mixes are a type error caught at bind time, this throws as a backstop.
inline std::optional<int> compare_values(const Value& a, const Value& b) {
    if (a.is_null() || b.is_null()) return std::nullopt;
    if (a.kind() == b.kind()) return a.order(b);
    if (a.is_numeric() && b.is_numeric()) {
        double x = a.numeric(), y = b.numeric();
        if (x < y) return -1;
        if (y < x) return 1;
        return 0;
    }
    throw RuntimeError(std::string("cannot compare ") + value_kind_name(a.kind()) + " with " +
                       value_kind_name(b.kind()));
}

inline bool values_equal_numeric(const Value& a, const Value& b) {
    auto c = compare_values(a, b);
    return c && *c == 0;
}

}  // namespace simseql

#endif
