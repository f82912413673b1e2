#ifndef SIMSEQL_CATALOG_HPP
#define SIMSEQL_CATALOG_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "exec_types.hpp"
#include "ordered_index.hpp"
#include "relation.hpp"
#include "schema.hpp"
#include "text_corpus.hpp"
#include "value.hpp"
#include "vptree.hpp"

namespace simseql {

// Well-known distance property keys. The property map is open: third-party
// functions may declare anything, indexes state what they require.
inline constexpr const char* kMetricPostulates = "metric_postulates";
inline constexpr const char* kMonotonicity = "monotonicity";

struct DataTypeEntry {
    std::string name;
    ValueKind representation = ValueKind::Null;
    // Used by DISTANCE(x,y) resolution when neither operand has a schema default.
    std::optional<std::string> default_distance;
};

struct DistanceContext {
    std::shared_ptr<const TextCorpus> corpus;
};

using DistanceImpl = std::function<double(const Value&, const Value&,
                                          const std::vector<double>&, const DistanceContext&)>;

struct DistanceFunctionEntry {
    std::string name;
    std::vector<DataTypeId> operand_types;  // both operands must share one of these
    size_t param_count = 0;
    std::map<std::string, bool> properties;
    // Overrides `properties` when declarations depend on the bound arguments
    // (weighted edit costs, for example).
    std::function<std::map<std::string, bool>(const std::vector<double>&)> properties_for;
    std::vector<std::string> lower_bounds;  // functions this one lower-bounds
    bool needs_corpus = false;
    DistanceImpl impl;

    std::map<std::string, bool> effective_properties(const std::vector<double>& args) const {
        return properties_for ? properties_for(args) : properties;
    }
    bool has_property(const std::string& key, const std::vector<double>& args) const {
        auto props = effective_properties(args);
        auto it = props.find(key);
        return it != props.end() && it->second;
    }
    bool accepts(const DataTypeId& type) const {
        for (const auto& t : operand_types)
            if (t == type) return true;
        return false;
    }
};

struct ComparisonFunctionEntry {
    std::string name;
    DataTypeId operand_type;
    std::function<int(const Value&, const Value&)> impl;  // <0, 0, >0
};

struct ExtractorEntry {
    std::string name;
    DataTypeId input_type;
    DataTypeId output_type;
    std::function<Value(const Value&)> impl;
};

// Combines the element distances of one candidate against a set of query
// objects into a single distance.
struct SetDistanceEntry {
    std::string name;
    std::function<double(const std::vector<double>&)> fold;

    double evaluate(const std::vector<Value>& queries, const Value& candidate,
                    const std::function<double(const Value&, const Value&)>& element) const {
        std::vector<double> ds;
        ds.reserve(queries.size());
        for (const auto& q : queries) ds.push_back(element(q, candidate));
        return fold(ds);
    }
};

// Combines (distance, numeric argument) parts, e.g. a weighted sum.
struct AggregatedDistanceEntry {
    std::string name;
    std::function<double(const std::vector<std::pair<double, double>>&)> combine;
};

enum class ObjectCardinality { Zero, Singleton, Any };
enum class MethodParamKind { Numeric, Attribute };

struct MethodCall;  // defined in methods.hpp
using MethodImpl = std::function<std::vector<ScoredRow>(MethodCall&)>;

struct SearchMethodEntry {
    std::string name;
    ObjectCardinality objects = ObjectCardinality::Any;
    std::optional<int> relation_count;  // unset: any positive number of sources
    std::vector<MethodParamKind> params;
    // Join-style methods score (left, right) pairs instead of single candidates.
    bool pairwise = false;
    // Needs distances between two stored tuples (reverse kNN), which only a
    // single-attribute distance specification can provide.
    bool needs_self_pairs = false;
    MethodImpl impl;
};

struct IndexKindEntry {
    std::string name;
    std::vector<std::string> required_properties;  // demanded of the distance
    bool requires_comparison = false;              // demanded of the attribute type
};

struct Eligibility {
    bool ok = false;
    std::string reason;
};

// One index instance attached to a relation attribute.
struct AttachedIndex {
    std::string name;
    std::shared_ptr<Relation> relation;
    size_t attr = 0;
    std::string kind;      // index kind name
    DistanceRef distance;  // metric indexes only
    std::shared_ptr<MetricIndex> metric;
    std::shared_ptr<OrderedIndex> ordered;
};

// All registries plus the relation store. Names resolve case-insensitively.
class Catalog {
public:
    Catalog() = default;

    void set_seed(uint64_t seed) { seed_ = seed; }
    uint64_t seed() const { return seed_; }

    // -- data types ---------------------------------------------------------
    void register_data_type(DataTypeEntry e) {
        DataTypeId id{e.name};
        add(data_types_, std::move(e), "data type");
        // The identity fallback applies to every registered type.
        auto it = distances_.find("identity_distance");
        if (it != distances_.end()) it->second.operand_types.push_back(std::move(id));
    }
    const DataTypeEntry* find_data_type(std::string_view n) const { return get(data_types_, n); }
    const DataTypeEntry& require_data_type(std::string_view n) const {
        return require(data_types_, n, "data type");
    }
    std::vector<const DataTypeEntry*> data_types() const { return sorted(data_types_); }

    // -- distance functions -------------------------------------------------
    void register_distance(DistanceFunctionEntry e) {
        add(distances_, std::move(e), "distance function");
    }
    const DistanceFunctionEntry* find_distance(std::string_view n) const {
        return get(distances_, n);
    }
    const DistanceFunctionEntry& require_distance(std::string_view n) const {
        return require(distances_, n, "distance function");
    }
    std::vector<const DistanceFunctionEntry*> distance_functions() const {
        return sorted(distances_);
    }

    // -- comparison functions -----------------------------------------------
    void register_comparison(ComparisonFunctionEntry e) {
        add(comparisons_, std::move(e), "comparison function");
    }
    const ComparisonFunctionEntry* find_comparison_for(const DataTypeId& type) const {
        for (const auto& [k, e] : comparisons_)
            if (e.operand_type == type) return &e;
        return nullptr;
    }
    std::vector<const ComparisonFunctionEntry*> comparison_functions() const {
        return sorted(comparisons_);
    }

    // -- extractors -----------------------------------------------------------
    void register_extractor(ExtractorEntry e) { add(extractors_, std::move(e), "extractor"); }
    const ExtractorEntry* find_extractor(std::string_view n) const { return get(extractors_, n); }
    std::vector<const ExtractorEntry*> extractors() const { return sorted(extractors_); }

    // -- set / aggregated distances -------------------------------------------
    void register_set_distance(SetDistanceEntry e) {
        add(set_distances_, std::move(e), "set distance");
    }
    const SetDistanceEntry* find_set_distance(std::string_view n) const {
        return get(set_distances_, n);
    }
    void register_aggregated_distance(AggregatedDistanceEntry e) {
        add(aggregated_, std::move(e), "aggregated distance");
    }
    const AggregatedDistanceEntry* find_aggregated_distance(std::string_view n) const {
        return get(aggregated_, n);
    }
    std::vector<const SetDistanceEntry*> set_distances() const { return sorted(set_distances_); }
    std::vector<const AggregatedDistanceEntry*> aggregated_distances() const {
        return sorted(aggregated_);
    }

    // -- search methods --------------------------------------------------------
    void register_method(SearchMethodEntry e) { add(methods_, std::move(e), "search method"); }
    const SearchMethodEntry* find_method(std::string_view n) const { return get(methods_, n); }
    const SearchMethodEntry& require_method(std::string_view n) const {
        return require(methods_, n, "search method");
    }
    std::vector<const SearchMethodEntry*> methods() const { return sorted(methods_); }

    // -- index kinds -------------------------------------------------------------
    void register_index_kind(IndexKindEntry e) { add(index_kinds_, std::move(e), "index kind"); }
    const IndexKindEntry* find_index_kind(std::string_view n) const {
        return get(index_kinds_, n);
    }
    std::vector<const IndexKindEntry*> index_kinds() const { return sorted(index_kinds_); }

    // -- relations ------------------------------------------------------------
    std::shared_ptr<Relation> create_relation(const std::string& name,
                                              std::vector<AttributeDef> attrs) {
        if (relations_.count(to_lower(name)))
            throw BindError("relation '" + name + "' already exists");
        if (attrs.empty()) throw BindError("relation '" + name + "' needs at least one attribute");
        for (auto& a : attrs) {
            const auto& type = require_data_type(a.type.name);
            a.kind = type.representation;
            for (const auto& d : a.distances) validate_distance_ref(d, a);
        }
        auto rel = std::make_shared<Relation>(name, Schema(std::move(attrs)));
        relations_[to_lower(name)] = rel;
        relation_order_.push_back(rel);
        return rel;
    }

    std::shared_ptr<Relation> find_relation(std::string_view n) const {
        auto it = relations_.find(to_lower(n));
        return it == relations_.end() ? nullptr : it->second;
    }
    std::shared_ptr<Relation> require_relation(std::string_view n) const {
        auto rel = find_relation(n);
        if (!rel) throw BindError("unknown relation '" + std::string(n) + "'");
        return rel;
    }
    const std::vector<std::shared_ptr<Relation>>& relations() const { return relation_order_; }

    void drop_all_relations() {
        relations_.clear();
        relation_order_.clear();
        indexes_.clear();
    }

    // Default distance of an attribute: schema declaration first, then the
    // data type's declared default, then the identity fallback. Never fails.
    DistanceRef resolve_default_distance(const Relation& rel, size_t attr) const {
        const auto& def = rel.schema().at(attr);
        if (auto d = def.default_distance()) return *d;
        if (const auto* type = find_data_type(def.type.name))
            if (type->default_distance) return DistanceRef{*type->default_distance, {}};
        return DistanceRef{"identity_distance", {}};
    }

    // -- index instances ---------------------------------------------------------
    Eligibility check_index_eligibility(const IndexKindEntry& kind, const DataTypeId& attr_type,
                                        const DistanceFunctionEntry* dist,
                                        const std::vector<double>& dist_args) const {
        if (kind.requires_comparison && !find_comparison_for(attr_type))
            return {false, "no comparison function registered for data type '" + attr_type.name +
                               "'"};
        for (const auto& prop : kind.required_properties) {
            if (!dist) return {false, "index kind '" + kind.name + "' needs a distance function"};
            if (!dist->has_property(prop, dist_args))
                return {false, "distance function '" + dist->name + "' does not declare " + prop};
        }
        return {true, ""};
    }

    const AttachedIndex& create_index(const std::string& rel_name, const std::string& attr_name,
                                      const std::string& kind_name,
                                      std::optional<DistanceRef> dist_ref,
                                      std::optional<std::string> index_name = {}) {
        auto rel = require_relation(rel_name);
        size_t attr = rel->schema().require(attr_name);
        const auto* kind = find_index_kind(kind_name);
        if (!kind) throw BindError("unknown index kind '" + kind_name + "'");

        const DataTypeId& attr_type = rel->schema().at(attr).type;
        DistanceRef dist = dist_ref ? *dist_ref : resolve_default_distance(*rel, attr);
        const DistanceFunctionEntry* entry = nullptr;
        if (!kind->required_properties.empty() || dist_ref) {
            entry = &require_distance(dist.function);
            if (!entry->accepts(attr_type))
                throw BindError("distance function '" + entry->name + "' does not accept '" +
                                attr_type.name + "'");
            if (dist.args.size() != entry->param_count)
                throw BindError("distance function '" + entry->name + "' expects " +
                                std::to_string(entry->param_count) + " argument(s)");
        }
        auto elig = check_index_eligibility(*kind, attr_type, entry, dist.args);
        if (!elig.ok)
            throw BindError("cannot build " + kind_name + " index on " + rel_name + "(" +
                            attr_name + "): " + elig.reason);

        auto ai = std::make_shared<AttachedIndex>();
        ai->name = index_name.value_or(rel_name + "_" + attr_name + "_" + kind_name + "_" +
                                       std::to_string(indexes_.size() + 1));
        ai->relation = rel;
        ai->attr = attr;
        ai->kind = to_lower(kind_name);
        ai->distance = dist;

        std::vector<std::pair<RowId, Value>> items;
        for (const auto& t : rel->tuples()) items.emplace_back(t.id, t.values[attr]);

        if (ai->kind == "ordered" || kind->requires_comparison) {
            const auto* cmp = find_comparison_for(attr_type);
            ai->ordered = std::make_shared<OrderedIndex>(cmp->impl);
            ai->ordered->build(items);
            struct Maint : IndexMaintenance {
                std::shared_ptr<OrderedIndex> idx;
                size_t a;
                void on_append(RowId id, const Value& v) override { idx->insert(id, v); }
                size_t attribute() const override { return a; }
            };
            auto m = std::make_shared<Maint>();
            m->idx = ai->ordered;
            m->a = attr;
            rel->attach_maintenance(m);
        } else {
            if (!entry) entry = &require_distance(dist.function);
            ai->metric = std::make_shared<MetricIndex>(bound_distance(*entry, dist.args, rel, attr),
                                                       seed_ + indexes_.size());
            ai->metric->build(std::move(items));
            struct Maint : IndexMaintenance {
                std::shared_ptr<MetricIndex> idx;
                size_t a;
                void on_append(RowId id, const Value& v) override { idx->insert(id, v); }
                size_t attribute() const override { return a; }
            };
            auto m = std::make_shared<Maint>();
            m->idx = ai->metric;
            m->a = attr;
            rel->attach_maintenance(m);
        }
        indexes_.push_back(ai);
        return *indexes_.back();
    }

    std::shared_ptr<const AttachedIndex> find_metric_index(const Relation* rel, size_t attr,
                                                           const DistanceRef& dist) const {
        for (const auto& ai : indexes_)
            if (ai->relation.get() == rel && ai->attr == attr && ai->metric &&
                ai->distance == dist)
                return ai;
        return nullptr;
    }
    std::shared_ptr<const AttachedIndex> find_ordered_index(const Relation* rel,
                                                            size_t attr) const {
        for (const auto& ai : indexes_)
            if (ai->relation.get() == rel && ai->attr == attr && ai->ordered) return ai;
        return nullptr;
    }
    const std::vector<std::shared_ptr<AttachedIndex>>& indexes() const { return indexes_; }

    // Evaluates one distance function over plain values, applying the Null rule
    // and resolving the corpus lazily from the relation column, if any.
    std::function<double(const Value&, const Value&)> bound_distance(
        const DistanceFunctionEntry& entry, std::vector<double> args,
        std::shared_ptr<Relation> corpus_rel = nullptr, size_t corpus_attr = 0) const {
        bool needs = entry.needs_corpus;
        return [&entry, args = std::move(args), corpus_rel, corpus_attr,
                needs](const Value& a, const Value& b) -> double {
            if (a.is_null() || b.is_null()) return kInfinity;
            DistanceContext ctx;
            if (needs && corpus_rel) ctx.corpus = corpus_rel->text_corpus(corpus_attr);
            return entry.impl(a, b, args, ctx);
        };
    }

private:
    template <class T>
    void add(std::map<std::string, T>& reg, T entry, const char* what) {
        std::string key = to_lower(entry.name);
        if (reg.count(key))
            throw BindError(std::string(what) + " '" + entry.name + "' already registered");
        reg.emplace(std::move(key), std::move(entry));
    }
    template <class T>
    const T* get(const std::map<std::string, T>& reg, std::string_view n) const {
        auto it = reg.find(to_lower(n));
        return it == reg.end() ? nullptr : &it->second;
    }
    template <class T>
    const T& require(const std::map<std::string, T>& reg, std::string_view n,
                     const char* what) const {
        const T* e = get(reg, n);
        if (!e) throw BindError(std::string("unknown ") + what + " '" + std::string(n) + "'");
        return *e;
    }
    template <class T>
    std::vector<const T*> sorted(const std::map<std::string, T>& reg) const {
        std::vector<const T*> out;
        for (const auto& [k, e] : reg) out.push_back(&e);
        return out;  // std::map iterates in name order already
    }

    void validate_distance_ref(const DistanceRef& d, const AttributeDef& attr) const {
        const auto& entry = require_distance(d.function);
        if (!entry.accepts(attr.type))
            throw BindError("distance function '" + entry.name + "' does not accept attribute '" +
                            attr.name + "' of type '" + attr.type.name + "'");
        if (d.args.size() != entry.param_count)
            throw BindError("distance function '" + entry.name + "' expects " +
                            std::to_string(entry.param_count) + " argument(s), got " +
                            std::to_string(d.args.size()));
    }

    std::map<std::string, DataTypeEntry> data_types_;
    std::map<std::string, DistanceFunctionEntry> distances_;
    std::map<std::string, ComparisonFunctionEntry> comparisons_;
    std::map<std::string, ExtractorEntry> extractors_;
    std::map<std::string, SetDistanceEntry> set_distances_;
    std::map<std::string, AggregatedDistanceEntry> aggregated_;
    std::map<std::string, SearchMethodEntry> methods_;
    std::map<std::string, IndexKindEntry> index_kinds_;
    std::map<std::string, std::shared_ptr<Relation>> relations_;
    std::vector<std::shared_ptr<Relation>> relation_order_;
    std::vector<std::shared_ptr<AttachedIndex>> indexes_;
    uint64_t seed_ = 1234;
};

}  // namespace simseql

#endif
