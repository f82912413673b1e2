#ifndef SIMSEQL_SCHEMA_HPP
#define SIMSEQL_SCHEMA_HPP

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "value.hpp"

namespace simseql {

// Name of a registered data type. Compared case-insensitively.
struct DataTypeId {
    std::string name;

    bool operator==(const DataTypeId& o) const { return ci_equal(name, o.name); }
};

// A distance function reference with the argument values it was declared with,
// e.g. weighted_edit_distance(1,2,2). Args are part of the identity.
struct DistanceRef {
    std::string function;
    std::vector<double> args;

    bool operator==(const DistanceRef& o) const {
        return ci_equal(function, o.function) && args == o.args;
    }

    std::string display() const {
        if (args.empty()) return function;
        std::string s = function + "(";
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) s += ",";
            s += format_double(args[i]);
        }
        return s + ")";
    }
};

struct AttributeDef {
    std::string name;
    DataTypeId type;
    // Representation of the type, resolved against the catalog when the
    // relation is created.
    ValueKind kind = ValueKind::Null;
    // First entry is the default distance for this attribute; the rest are
    // additional declared distances. Empty means the identity fallback applies.
    std::vector<DistanceRef> distances;

    std::optional<DistanceRef> default_distance() const {
        if (distances.empty()) return std::nullopt;
        return distances.front();
    }
};

class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<AttributeDef> attrs) : attrs_(std::move(attrs)) {
        for (size_t i = 0; i < attrs_.size(); ++i)
            for (size_t j = i + 1; j < attrs_.size(); ++j)
                if (ci_equal(attrs_[i].name, attrs_[j].name))
                    throw BindError("duplicate attribute name '" + attrs_[j].name + "' in schema");
    }

    size_t size() const { return attrs_.size(); }
    const AttributeDef& at(size_t i) const { return attrs_.at(i); }
    const std::vector<AttributeDef>& attributes() const { return attrs_; }

    std::optional<size_t> find(std::string_view name) const {
        for (size_t i = 0; i < attrs_.size(); ++i)
            if (ci_equal(attrs_[i].name, name)) return i;
        return std::nullopt;
    }

    size_t require(std::string_view name) const {
        auto i = find(name);
        if (!i) throw BindError("unknown attribute '" + std::string(name) + "'");
        return *i;
    }

private:
    std::vector<AttributeDef> attrs_;
};

}  // namespace simseql

#endif
