#ifndef SIMSEQL_RELATION_HPP
#define SIMSEQL_RELATION_HPP

#include <algorithm>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "schema.hpp"
#include "text_corpus.hpp"
#include "value.hpp"

namespace simseql {

using RowId = int64_t;

struct Tuple {
    RowId id = 0;  // hidden, monotone per relation; never reused
    std::vector<Value> values;
};

// Maintenance hook implemented by attached indexes. Appends flow into every
// attached index so that a query issued right after append sees the new row.
class IndexMaintenance {
public:
    virtual ~IndexMaintenance() = default;
    virtual void on_append(RowId id, const Value& attr_value) = 0;
    virtual size_t attribute() const = 0;
};

// An in-memory multiset of tuples. Appends only; duplicate rows are kept.
// Concurrent readers are safe; writers take the exclusive lock.
class Relation {
public:
    Relation(std::string name, Schema schema) : name_(std::move(name)), schema_(std::move(schema)) {}

    const std::string& name() const { return name_; }
    const Schema& schema() const { return schema_; }

    RowId append(std::vector<Value> values) {
        std::unique_lock lock(mutex_);
        if (values.size() != schema_.size())
            throw RuntimeError("tuple arity " + std::to_string(values.size()) +
                               " does not match schema of '" + name_ + "' (" +
                               std::to_string(schema_.size()) + " attributes)");
        for (size_t i = 0; i < values.size(); ++i) check_kind(i, values[i]);
        RowId id = next_row_id_++;
        // Index maintenance first: a dimension mismatch must not leave a row
        // visible to scans but missing from the index.
        for (auto& m : maintenance_) m->on_append(id, values[m->attribute()]);
        tuples_.push_back(Tuple{id, std::move(values)});
        for (auto& c : corpus_cache_) c.reset();
        return id;
    }

    size_t row_count() const {
        std::shared_lock lock(mutex_);
        return tuples_.size();
    }

    // Rows in insertion (row id) order. The reference stays valid while no
    // writer runs; callers that need isolation should copy.
    const std::vector<Tuple>& tuples() const { return tuples_; }

    const Tuple& row_by_id(RowId id) const {
        auto it = std::lower_bound(tuples_.begin(), tuples_.end(), id,
                                   [](const Tuple& t, RowId v) { return t.id < v; });
        if (it == tuples_.end() || it->id != id)
            throw RuntimeError("row id " + std::to_string(id) + " not present in '" + name_ + "'");
        return *it;
    }

    void attach_maintenance(std::shared_ptr<IndexMaintenance> m) {
        std::unique_lock lock(mutex_);
        maintenance_.push_back(std::move(m));
    }

    // Document-frequency table over a string attribute, rebuilt after appends.
    std::shared_ptr<const TextCorpus> text_corpus(size_t attr) const {
        std::unique_lock lock(mutex_);
        if (corpus_cache_.size() < schema_.size()) corpus_cache_.resize(schema_.size());
        if (!corpus_cache_[attr]) {
            auto corpus = std::make_shared<TextCorpus>();
            for (const auto& t : tuples_)
                if (t.values[attr].kind() == ValueKind::String)
                    corpus->add_document(t.values[attr].as_string());
            corpus_cache_[attr] = std::move(corpus);
        }
        return corpus_cache_[attr];
    }

    std::shared_mutex& mutex() const { return mutex_; }

private:
    void check_kind(size_t i, const Value& v) const {
        if (v.is_null()) return;  // any cell may be Null
        ValueKind want = schema_.at(i).kind;
        if (want != ValueKind::Null && v.kind() != want)
            throw RuntimeError("attribute '" + schema_.at(i).name + "' of '" + name_ +
                               "' expects " + value_kind_name(want) + ", got " +
                               value_kind_name(v.kind()));
    }

    std::string name_;
    Schema schema_;
    std::vector<Tuple> tuples_;
    RowId next_row_id_ = 1;
    std::vector<std::shared_ptr<IndexMaintenance>> maintenance_;
    mutable std::vector<std::shared_ptr<const TextCorpus>> corpus_cache_;
    mutable std::shared_mutex mutex_;
};

}  // namespace simseql

#endif
