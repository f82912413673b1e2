#ifndef SIMSEQL_EXECUTOR_HPP
#define SIMSEQL_EXECUTOR_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "binder.hpp"
#include "methods.hpp"

namespace simseql {

struct RowLess {
    bool operator()(const Row& a, const Row& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), ValueLess{});
    }
};

// Evaluates optimized plans. One executor instance serves one query run;
// notices (budget shortfalls and the like) accumulate on the side.
class Executor {
public:
    explicit Executor(const Catalog& catalog) : cat_(catalog) {}

    ExecTable run(const BoundSelect& bs) {
        notices_.clear();
        insub_cache_.clear();
        return eval_select(bs);
    }

    const std::vector<std::string>& notices() const { return notices_; }

private:
    const Catalog& cat_;
    std::vector<std::string> notices_;
    std::map<const BoundSelect*, std::shared_ptr<std::vector<Value>>> insub_cache_;

    // rows of one search source, with ids and the backing relation when the
    // source is a bare scan (the only shape index acceleration applies to)
    struct SourceData {
        ExecTable table;
        std::shared_ptr<Relation> rel;
        std::vector<RowId> ids;
    };

    ExecTable eval_select(const BoundSelect& bs) { return eval_node(*bs.root); }

    ExecTable eval_node(const PlanNode& n) {
        using K = PlanNode::Kind;
        switch (n.kind) {
            case K::Scan: return eval_scan(n);
            case K::SubqueryScan: {
                ExecTable inner = eval_select(*n.sub);
                ExecTable t;
                t.schema = n.out;
                t.rows = std::move(inner.rows);
                return t;
            }
            case K::Cross:
            case K::Join: return eval_join(n);
            case K::Sim: return eval_sim(n);
            case K::Filter: {
                ExecTable t = eval_node(*n.child);
                if (!n.pred) return t;
                std::vector<Row> kept;
                kept.reserve(t.rows.size());
                for (auto& r : t.rows)
                    if (eval_pred(*n.pred, r)) kept.push_back(std::move(r));
                t.rows = std::move(kept);
                return t;
            }
            case K::Group: return eval_group(n);
            case K::Append: {
                ExecTable t = eval_node(*n.child);
                ExecTable out;
                out.schema = n.out;
                out.rows.reserve(t.rows.size());
                for (auto& r : t.rows) {
                    Row nr = std::move(r);
                    nr.reserve(n.out.size());
                    for (const auto& e : n.exprs) nr.push_back(eval_expr(*e, nr));
                    out.rows.push_back(std::move(nr));
                }
                return out;
            }
            case K::Sort: return eval_sort(n);
            case K::Project: {
                ExecTable t = eval_node(*n.child);
                ExecTable out;
                out.schema = n.out;
                out.rows.reserve(t.rows.size());
                for (const auto& r : t.rows) {
                    Row nr;
                    nr.reserve(n.keep.size());
                    for (int i : n.keep) nr.push_back(r[size_t(i)]);
                    out.rows.push_back(std::move(nr));
                }
                return out;
            }
            case K::Distinct: {
                ExecTable t = eval_node(*n.child);
                std::set<Row, RowLess> seen;
                std::vector<Row> kept;
                for (auto& r : t.rows)
                    if (seen.insert(r).second) kept.push_back(std::move(r));
                t.rows = std::move(kept);
                return t;
            }
            case K::Top: {
                ExecTable t = eval_node(*n.child);
                if (t.rows.size() > n.top_n) t.rows.resize(n.top_n);
                return t;
            }
        }
        throw RuntimeError("unsupported plan node");
    }

    // --- leaves ------------------------------------------------------------------

    static OrderedOp to_ordered_op(ast::BinOp op) {
        switch (op) {
            case ast::BinOp::Eq: return OrderedOp::Eq;
            case ast::BinOp::Lt: return OrderedOp::Lt;
            case ast::BinOp::Le: return OrderedOp::Le;
            case ast::BinOp::Gt: return OrderedOp::Gt;
            case ast::BinOp::Ge: return OrderedOp::Ge;
            default: throw RuntimeError("operator not supported by ordered index");
        }
    }

    ExecTable eval_scan(const PlanNode& n) {
        ExecTable t;
        t.schema = n.out;
        std::shared_lock lock(n.rel->mutex());
        if (n.scan_index) {
            for (RowId id :
                 n.scan_index->ordered->lookup(to_ordered_op(n.scan_filter_op), n.scan_filter_value))
                t.rows.push_back(n.rel->row_by_id(id).values);
        } else {
            t.rows.reserve(n.rel->tuples().size());
            for (const auto& tu : n.rel->tuples()) t.rows.push_back(tu.values);
        }
        return t;
    }

    ExecTable eval_join(const PlanNode& n) {
        ExecTable l = eval_node(*n.left);
        ExecTable r = eval_node(*n.right);
        ExecTable t;
        t.schema = n.out;
        bool natural = n.kind == PlanNode::Kind::Join && n.join_kind == ast::JoinKind::Natural;
        for (const auto& lr : l.rows) {
            for (const auto& rr : r.rows) {
                if (natural && !natural_match(n, lr, rr)) continue;
                Row row = lr;
                row.insert(row.end(), rr.begin(), rr.end());
                if (n.kind == PlanNode::Kind::Join && n.on && !eval_pred(*n.on, row)) continue;
                t.rows.push_back(std::move(row));
            }
        }
        return t;
    }

    static bool natural_match(const PlanNode& n, const Row& l, const Row& r) {
        size_t lw = l.size();
        for (const auto& [li, ri] : n.natural_pairs) {
            auto c = compare_values(l[size_t(li)], r[size_t(ri) - lw]);
            if (!c || *c != 0) return false;  // Null keys never join
        }
        return true;
    }

    // --- similarity search ----------------------------------------------------------

    SourceData materialize(const PlanNode& src) {
        SourceData d;
        if (src.kind == PlanNode::Kind::Scan && !src.scan_index) {
            d.rel = src.rel;
            d.table.schema = src.out;
            std::shared_lock lock(src.rel->mutex());
            d.table.rows.reserve(src.rel->tuples().size());
            for (const auto& tu : src.rel->tuples()) {
                d.table.rows.push_back(tu.values);
                d.ids.push_back(tu.id);
            }
        } else {
            d.table = eval_node(src);
        }
        return d;
    }

    SourceData materialize_sources(const PlanNode& n) {
        if (n.sources.size() == 1) return materialize(*n.sources[0]);
        SourceData acc = materialize(*n.sources[0]);
        acc.rel.reset();
        acc.ids.clear();
        for (size_t i = 1; i < n.sources.size(); ++i) {
            ExecTable next = eval_node(*n.sources[i]);
            std::vector<Row> crossed;
            crossed.reserve(acc.table.rows.size() * next.rows.size());
            for (const auto& a : acc.table.rows) {
                for (const auto& b : next.rows) {
                    Row row = a;
                    row.insert(row.end(), b.begin(), b.end());
                    crossed.push_back(std::move(row));
                }
            }
            acc.table.rows = std::move(crossed);
        }
        return acc;
    }

    Value eval_object(const BoundObject& o) {
        switch (o.kind) {
            case BoundObject::Kind::Literal: return o.literal;
            case BoundObject::Kind::Extract: {
                Value in = eval_object(*o.child);
                if (in.is_null()) return Value();
                return o.extractor->impl(in);
            }
            case BoundObject::Kind::Sub: {
                ExecTable t = eval_select(*o.sub);
                if (t.rows.size() != 1)
                    throw RuntimeError("query object subquery returned " +
                                       std::to_string(t.rows.size()) + " rows; expected exactly 1");
                return t.rows[0][0];
            }
        }
        return Value();
    }

    std::vector<ScoredRow> run_method(const PlanNode& n, MethodCall& call) {
        try {
            return n.method.entry->impl(call);
        } catch (const RuntimeError& e) {
            if (n.alias.empty()) throw;
            throw RuntimeError("simsearch " + n.alias + ": " + e.what());
        }
    }

    ExecTable eval_sim(const PlanNode& n) {
        std::vector<Value> qobjs;
        qobjs.reserve(n.objects.size());
        for (const auto& o : n.objects) qobjs.push_back(eval_object(o));

        MethodCall call;
        call.args = n.method.numeric_args;
        call.top_k = n.push_top_k;
        call.budget = Budget::unlimited();
        if (!n.method.attr_args.empty()) call.distinct_col = n.method.attr_args[0];

        std::vector<ScoredRow> scored;
        size_t candidates = 0;

        if (n.method.entry->pairwise) {
            SourceData lt = materialize(*n.sources[0]);
            SourceData rt = materialize(*n.sources[1]);
            call.left = &lt.table.rows;
            call.right = &rt.table.rows;
            candidates = lt.table.rows.size() * rt.table.rows.size();
            size_t lw = n.sources[0]->out.size();
            {
                auto fn = n.by.fn;
                int x = n.by.x_col, y = n.by.y_col;
                call.pair_distance = [fn, x, y, lw](const Row& l, const Row& r) {
                    const Value& vx = size_t(x) < lw ? l[size_t(x)] : r[size_t(x) - lw];
                    const Value& vy = size_t(y) < lw ? l[size_t(y)] : r[size_t(y) - lw];
                    return fn(vx, vy);
                };
            }
            JoinAccel accel;
            if (n.join_index && rt.rel) {
                accel.right_index = n.join_index->metric.get();
                accel.left_attr_col = size_t(n.by.left_col);
                auto rel = rt.rel;
                accel.fetch_right = [rel](RowId id) { return rel->row_by_id(id).values; };
                accel.right_pos = [rel](RowId id) -> size_t {
                    const auto& ts = rel->tuples();
                    auto it = std::lower_bound(
                        ts.begin(), ts.end(), id,
                        [](const Tuple& t, RowId v) { return t.id < v; });
                    return size_t(it - ts.begin());
                };
                call.join_accel = &accel;
            }
            scored = run_method(n, call);
        } else {
            SourceData src = materialize_sources(n);
            call.rows = &src.table.rows;
            candidates = src.table.rows.size();
            if (!src.ids.empty()) call.row_ids = &src.ids;

            if (n.by.form == BoundBySpec::Form::Attribute) {
                call.self_attr_col = n.by.attr_col;
                auto fn = n.by.fn;
                int col = n.by.attr_col;
                Value q = qobjs.at(0);
                check_object_kind(n, q, n.out.at(size_t(col)));
                call.distance = [fn, col, q](const Row& r) { return fn(q, r[size_t(col)]); };
                call.pair_distance = [fn, col](const Row& a, const Row& b) {
                    return fn(a[size_t(col)], b[size_t(col)]);
                };
            } else {
                const BoundDist* expr = n.by.expr.get();
                const std::vector<Value>* qs = &qobjs;
                call.distance = [this, expr, qs](const Row& r) {
                    return eval_dist(*expr, r, *qs);
                };
            }
            PointAccel pa;
            if (n.sim_index && src.rel) {
                pa.index = n.sim_index->metric.get();
                pa.query = qobjs.at(0);
                auto rel = src.rel;
                pa.fetch = [rel](RowId id) { return rel->row_by_id(id).values; };
                call.point_accel = &pa;
            }
            scored = run_method(n, call);
        }

        // method_range may have installed a cap from its own arguments
        if (call.budget.max_evaluations && candidates > *call.budget.max_evaluations)
            notices_.push_back("warning: approximation budget " +
                               std::to_string(*call.budget.max_evaluations) + " is below the " +
                               std::to_string(candidates) +
                               " candidate evaluations; results may be incomplete");

        ExecTable t;
        t.schema = n.out;
        t.rows.reserve(scored.size());
        for (size_t i = 0; i < scored.size(); ++i) {
            Row r = std::move(scored[i].row);
            r.push_back(Value::floating(scored[i].distance));
            r.push_back(Value::long_int(int64_t(i) + 1));
            t.rows.push_back(std::move(r));
        }
        return t;
    }

    // Subquery-produced objects dodge the bind-time check; fail with a clear
    // message rather than inside a distance function.
    static void check_object_kind(const PlanNode& n, const Value& q, const ExecColumn& col) {
        if (q.is_null() || col.vkind == ValueKind::Null) return;
        if (q.kind() == col.vkind) return;
        auto num = [](ValueKind k) {
            return k == ValueKind::Integer || k == ValueKind::Long || k == ValueKind::Float ||
                   k == ValueKind::Date;
        };
        if (num(q.kind()) && num(col.vkind)) return;
        throw RuntimeError("query object of type '" + std::string(kind_type_name(q.kind())) +
                           "' is not compatible with attribute '" + col.name + "'" +
                           (n.alias.empty() ? "" : " in simsearch " + n.alias));
    }

    double eval_dist(const BoundDist& d, const Row& row, const std::vector<Value>& qobjs) {
        switch (d.kind) {
            case BoundDist::Kind::Const: return d.constant;
            case BoundDist::Kind::Add: {
                double s = 0;
                for (const auto& c : d.children) s += eval_dist(*c, row, qobjs);
                return s;
            }
            case BoundDist::Kind::Mul: {
                double p = 1;
                for (const auto& c : d.children) p *= eval_dist(*c, row, qobjs);
                return p;
            }
            case BoundDist::Kind::ColumnVal: {
                const Value& v = row[size_t(d.column)];
                return v.is_null() ? kInfinity : v.numeric();
            }
            case BoundDist::Kind::DistCall:
                return d.fn(operand_value(d.x, row, qobjs), operand_value(d.y, row, qobjs));
            case BoundDist::Kind::SetCall: {
                std::vector<double> ds;
                ds.reserve(d.children.size());
                for (const auto& c : d.children) ds.push_back(eval_dist(*c, row, qobjs));
                return d.set_entry->fold(ds);
            }
            case BoundDist::Kind::AggCall: {
                std::vector<std::pair<double, double>> parts;
                parts.reserve(d.children.size());
                for (size_t i = 0; i < d.children.size(); ++i)
                    parts.emplace_back(eval_dist(*d.children[i], row, qobjs), d.weights[i]);
                return d.agg_entry->combine(parts);
            }
        }
        throw RuntimeError("unsupported distance expression");
    }

    static const Value& operand_value(const DistOperand& op, const Row& row,
                                      const std::vector<Value>& qobjs) {
        switch (op.kind) {
            case DistOperand::Kind::Column: return row[size_t(op.index)];
            case DistOperand::Kind::Object: return qobjs[size_t(op.index)];
            case DistOperand::Kind::Literal: return op.literal;
        }
        return op.literal;
    }

    // --- grouping, sorting -----------------------------------------------------------

    ExecTable eval_group(const PlanNode& n) {
        ExecTable c = eval_node(*n.child);
        std::map<Row, size_t, RowLess> index;
        std::vector<Row> keys;                      // first-appearance order
        std::vector<std::vector<int64_t>> counts;   // per group, per aggregate

        for (const auto& r : c.rows) {
            Row key;
            key.reserve(n.keys.size());
            for (const auto& k : n.keys) key.push_back(eval_expr(*k, r));
            auto [it, fresh] = index.emplace(key, keys.size());
            if (fresh) {
                keys.push_back(std::move(key));
                counts.emplace_back(n.agg_args.size(), 0);
            }
            auto& cnt = counts[it->second];
            for (size_t a = 0; a < n.agg_args.size(); ++a) {
                if (!n.agg_args[a])
                    ++cnt[a];  // count(*)
                else if (!eval_expr(*n.agg_args[a], r).is_null())
                    ++cnt[a];
            }
        }

        ExecTable t;
        t.schema = n.out;
        t.rows.reserve(keys.size());
        for (size_t g = 0; g < keys.size(); ++g) {
            Row row = std::move(keys[g]);
            for (int64_t v : counts[g]) row.push_back(Value::long_int(v));
            t.rows.push_back(std::move(row));
        }
        return t;
    }

    ExecTable eval_sort(const PlanNode& n) {
        ExecTable t = eval_node(*n.child);
        std::vector<Row> keyed(t.rows.size());
        for (size_t i = 0; i < t.rows.size(); ++i) {
            keyed[i].reserve(n.sort_keys.size());
            for (const auto& [e, desc] : n.sort_keys) keyed[i].push_back(eval_expr(*e, t.rows[i]));
        }
        std::vector<size_t> order(t.rows.size());
        std::iota(order.begin(), order.end(), size_t(0));
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            for (size_t k = 0; k < n.sort_keys.size(); ++k) {
                int c = sort_cmp(keyed[a][k], keyed[b][k]);
                if (n.sort_keys[k].second) c = -c;
                if (c != 0) return c < 0;
            }
            return false;
        });
        std::vector<Row> sorted;
        sorted.reserve(t.rows.size());
        for (size_t i : order) sorted.push_back(std::move(t.rows[i]));
        t.rows = std::move(sorted);
        return t;
    }

    // Nulls sort after everything ascending (before everything descending).
    static int sort_cmp(const Value& a, const Value& b) {
        if (a.is_null() && b.is_null()) return 0;
        if (a.is_null()) return 1;
        if (b.is_null()) return -1;
        auto c = compare_values(a, b);
        return c ? *c : 0;
    }

    // --- expressions ---------------------------------------------------------------

    bool eval_pred(const BoundExpr& e, const Row& row) {
        switch (e.kind) {
            case BoundExpr::Kind::And:
                return eval_pred(*e.children[0], row) && eval_pred(*e.children[1], row);
            case BoundExpr::Kind::Or:
                return eval_pred(*e.children[0], row) || eval_pred(*e.children[1], row);
            case BoundExpr::Kind::Not: return !eval_pred(*e.children[0], row);
            case BoundExpr::Kind::Cmp: {
                Value l = eval_expr(*e.children[0], row);
                Value r = eval_expr(*e.children[1], row);
                auto c = compare_values(l, r);
                if (!c) return false;  // comparisons against Null never hold
                switch (e.op) {
                    case ast::BinOp::Eq: return *c == 0;
                    case ast::BinOp::Ne: return *c != 0;
                    case ast::BinOp::Lt: return *c < 0;
                    case ast::BinOp::Le: return *c <= 0;
                    case ast::BinOp::Gt: return *c > 0;
                    case ast::BinOp::Ge: return *c >= 0;
                    default: return false;
                }
            }
            case BoundExpr::Kind::InSub: {
                Value v = eval_expr(*e.children[0], row);
                if (v.is_null()) return false;
                const auto& pool = insub_values(e);
                for (const auto& cand : pool) {
                    auto c = compare_values(v, cand);
                    if (c && *c == 0) return true;
                }
                return false;
            }
            default: throw RuntimeError("expression is not a condition");
        }
    }

    const std::vector<Value>& insub_values(const BoundExpr& e) {
        auto it = insub_cache_.find(e.sub.get());
        if (it == insub_cache_.end()) {
            ExecTable t = eval_select(*e.sub);
            auto vals = std::make_shared<std::vector<Value>>();
            vals->reserve(t.rows.size());
            for (const auto& r : t.rows) vals->push_back(r[0]);
            it = insub_cache_.emplace(e.sub.get(), std::move(vals)).first;
        }
        return *it->second;
    }

    Value eval_expr(const BoundExpr& e, const Row& row) {
        switch (e.kind) {
            case BoundExpr::Kind::Literal: return e.literal;
            case BoundExpr::Kind::Column: return row[size_t(e.column)];
            case BoundExpr::Kind::Add:
            case BoundExpr::Kind::Mul: {
                Value l = eval_expr(*e.children[0], row);
                Value r = eval_expr(*e.children[1], row);
                if (l.is_null() || r.is_null()) return Value();
                bool add = e.kind == BoundExpr::Kind::Add;
                if (e.vkind == ValueKind::Float) {
                    double x = l.numeric(), y = r.numeric();
                    return Value::floating(add ? x + y : x * y);
                }
                int64_t x = l.as_int(), y = r.as_int();
                int64_t v = add ? x + y : x * y;
                return e.vkind == ValueKind::Long ? Value::long_int(v) : Value::integer(v);
            }
            default: return Value::integer(eval_pred(e, row) ? 1 : 0);
        }
    }
};

}  // namespace simseql

#endif
