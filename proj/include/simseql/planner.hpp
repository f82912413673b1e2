#ifndef SIMSEQL_PLANNER_HPP
#define SIMSEQL_PLANNER_HPP

#include <string>
#include <vector>

#include "binder.hpp"

namespace simseql {

struct PlannerOptions {
    bool enable_r1 = true;  // distance filter -> range pushdown
    bool enable_r2 = true;  // TOP n over a bare search -> kNN pushdown
    bool use_indexes = true;
};

// Rule-based optimizer. Mutates the bound plan in place: swaps search methods
// when a rewrite guard holds, then attaches eligible index access paths.
// Never fails; when in doubt it declines and the sequential path stands.
class Planner {
public:
    explicit Planner(const Catalog& catalog, PlannerOptions opts = {})
        : cat_(catalog), opts_(opts) {}

    void optimize(BoundSelect& bs) const {
        for (BoundSelect* sub : nested_selects(bs)) optimize(*sub);
        if (opts_.enable_r1) apply_r1(bs);
        if (opts_.enable_r2) apply_r2(bs);
        if (opts_.use_indexes) {
            push_ordered_scan(bs);
            for_each_node(bs.root.get(), [&](PlanNode& n) {
                if (n.kind == PlanNode::Kind::Sim) attach_sim_index(n);
            });
        }
    }

private:
    const Catalog& cat_;
    PlannerOptions opts_;

    // --- plan traversal ---------------------------------------------------------

    template <class F>
    static void for_each_node(PlanNode* n, const F& f) {
        if (!n) return;
        f(*n);
        for_each_node(n->child.get(), f);
        for_each_node(n->left.get(), f);
        for_each_node(n->right.get(), f);
        for (auto& s : n->sources) for_each_node(s.get(), f);
    }

    static void collect_expr_subs(const BoundExprPtr& e, std::vector<BoundSelect*>& out) {
        if (!e) return;
        if (e->sub) out.push_back(e->sub.get());
        for (const auto& c : e->children) collect_expr_subs(c, out);
    }

    static void collect_object_subs(const BoundObject& o, std::vector<BoundSelect*>& out) {
        if (o.sub) out.push_back(o.sub.get());
        if (o.child) collect_object_subs(*o.child, out);
    }

    static std::vector<BoundSelect*> nested_selects(BoundSelect& bs) {
        std::vector<BoundSelect*> out;
        for_each_node(bs.root.get(), [&](PlanNode& n) {
            if (n.sub) out.push_back(n.sub.get());
            collect_expr_subs(n.pred, out);
            collect_expr_subs(n.on, out);
            for (const auto& e : n.exprs) collect_expr_subs(e, out);
            for (const auto& e : n.keys) collect_expr_subs(e, out);
            for (const auto& e : n.agg_args) collect_expr_subs(e, out);
            for (const auto& [e, desc] : n.sort_keys) collect_expr_subs(e, out);
            for (const auto& o : n.objects) collect_object_subs(o, out);
        });
        return out;
    }

    // --- conjunct handling --------------------------------------------------------

    static void flatten_and(const BoundExprPtr& e, std::vector<BoundExprPtr>& out) {
        if (e->kind == BoundExpr::Kind::And) {
            flatten_and(e->children[0], out);
            flatten_and(e->children[1], out);
        } else {
            out.push_back(e);
        }
    }

    static BoundExprPtr rebuild_and(const std::vector<BoundExprPtr>& cs) {
        if (cs.empty()) return nullptr;
        BoundExprPtr acc = cs[0];
        for (size_t i = 1; i < cs.size(); ++i) {
            auto n = std::make_shared<BoundExpr>();
            n->kind = BoundExpr::Kind::And;
            n->children = {acc, cs[i]};
            n->display = acc->display + " AND " + cs[i]->display;
            acc = n;
        }
        return acc;
    }

    // column-vs-literal comparison, returned with the column on the left
    struct ColCmp {
        int column;
        ast::BinOp op;
        Value value;
    };
    static std::optional<ColCmp> as_col_cmp(const BoundExpr& e) {
        if (e.kind != BoundExpr::Kind::Cmp) return std::nullopt;
        const BoundExpr& l = *e.children[0];
        const BoundExpr& r = *e.children[1];
        if (l.kind == BoundExpr::Kind::Column && r.kind == BoundExpr::Kind::Literal)
            return ColCmp{l.column, e.op, r.literal};
        if (l.kind == BoundExpr::Kind::Literal && r.kind == BoundExpr::Kind::Column)
            return ColCmp{r.column, flip(e.op), l.literal};
        return std::nullopt;
    }
    static ast::BinOp flip(ast::BinOp op) {
        switch (op) {
            case ast::BinOp::Lt: return ast::BinOp::Gt;
            case ast::BinOp::Le: return ast::BinOp::Ge;
            case ast::BinOp::Gt: return ast::BinOp::Lt;
            case ast::BinOp::Ge: return ast::BinOp::Le;
            default: return op;
        }
    }

    // --- R1: distance range pushdown ------------------------------------------------

    void apply_r1(BoundSelect& bs) const {
        if (!bs.where_filter || !bs.where_filter->pred) return;
        std::vector<BoundExprPtr> conjuncts;
        flatten_and(bs.where_filter->pred, conjuncts);
        bool changed = false;

        for (PlanNode* sim : bs.sims) {
            if (!ci_equal(sim->method.entry->name, "NN")) continue;
            for (size_t i = 0; i < conjuncts.size(); ++i) {
                auto cc = as_col_cmp(*conjuncts[i]);
                if (!cc || cc->column != sim->global_distance_col) continue;
                if (cc->op != ast::BinOp::Le && cc->op != ast::BinOp::Lt) continue;
                if (!cc->value.is_numeric()) continue;
                double r = cc->value.numeric();
                if (r < 0) continue;

                // execution switches to the range method; the display keeps
                // the query's own method plus the rewrite tag
                sim->method.entry = &cat_.require_method("rangeQuery");
                sim->method.numeric_args = {Value::floating(r)};
                sim->rewrite_tag = "R1";
                // radius <= keeps exactly the range result; strict < still
                // needs the filter to trim the boundary
                if (cc->op == ast::BinOp::Le) {
                    conjuncts.erase(conjuncts.begin() + long(i));
                    changed = true;
                }
                break;
            }
        }
        if (changed) bs.where_filter->pred = rebuild_and(conjuncts);
    }

    // --- R2: TOP n -> kNN pushdown ----------------------------------------------------

    void apply_r2(BoundSelect& bs) const {
        if (!bs.top_n || *bs.top_n < 1) return;
        if (bs.has_distinct || bs.group) return;
        if (bs.where_filter && bs.where_filter->pred) return;
        if (bs.from_root->kind != PlanNode::Kind::Sim) return;
        PlanNode* sim = bs.from_root.get();
        if (!ci_equal(sim->method.entry->name, "NN")) return;
        if (bs.sort) {
            const auto& keys = bs.sort->sort_keys;
            if (keys.size() != 1 || keys[0].second) return;
            const BoundExpr& k = *keys[0].first;
            if (k.kind != BoundExpr::Kind::Column) return;
            int col = k.column;
            // The key may have resolved to the select-list copy of the
            // distance column; map it back through the pass-through.
            if (bs.append) {
                size_t base = bs.append->child->out.size();
                if (col >= int(base)) {
                    const BoundExpr& src = *bs.append->exprs.at(size_t(col) - base);
                    if (src.kind != BoundExpr::Kind::Column) return;
                    col = src.column;
                }
            }
            if (col != sim->global_distance_col) return;
        }
        sim->push_top_k = size_t(*bs.top_n);
        sim->rewrite_tag = "R2";
    }

    // --- access paths ---------------------------------------------------------------

    // WHERE directly over a single scan: one attr-vs-literal conjunct moves
    // into the scan when an ordered index covers the attribute.
    void push_ordered_scan(BoundSelect& bs) const {
        if (!bs.where_filter || !bs.where_filter->pred) return;
        if (bs.from_root->kind != PlanNode::Kind::Scan) return;
        PlanNode& scan = *bs.from_root;
        std::vector<BoundExprPtr> conjuncts;
        flatten_and(bs.where_filter->pred, conjuncts);
        for (size_t i = 0; i < conjuncts.size(); ++i) {
            auto cc = as_col_cmp(*conjuncts[i]);
            if (!cc || cc->op == ast::BinOp::Ne) continue;
            const ExecColumn& col = scan.out.at(size_t(cc->column));
            if (col.origin_rel.get() != scan.rel.get() || col.origin_attr < 0) continue;
            // The index's comparison function needs the column's exact
            // representation; widen integer literals, otherwise decline.
            Value v = cc->value;
            if (v.kind() != col.vkind) {
                if (col.vkind == ValueKind::Float && v.is_numeric())
                    v = Value::floating(v.numeric());
                else if (col.vkind == ValueKind::Long && v.kind() == ValueKind::Integer)
                    v = Value::long_int(v.as_int());
                else if (col.vkind == ValueKind::Integer && v.kind() == ValueKind::Long)
                    v = Value::integer(v.as_int());
                else
                    continue;
            }
            auto idx = cat_.find_ordered_index(scan.rel.get(), size_t(col.origin_attr));
            if (!idx) continue;
            scan.scan_filter_col = cc->column;
            scan.scan_filter_op = cc->op;
            scan.scan_filter_value = std::move(v);
            scan.scan_index = idx;
            conjuncts.erase(conjuncts.begin() + long(i));
            bs.where_filter->pred = rebuild_and(conjuncts);
            return;
        }
    }

    void attach_sim_index(PlanNode& sim) const {
        if (sim.by.form == BoundBySpec::Form::Attribute && sim.sources.size() == 1 &&
            sim.sources[0]->kind == PlanNode::Kind::Scan &&
            sim.sources[0]->scan_filter_col < 0) {
            const ExecColumn& col = sim.sources[0]->out.at(size_t(sim.by.attr_col));
            if (col.origin_attr >= 0)
                sim.sim_index = cat_.find_metric_index(sim.sources[0]->rel.get(),
                                                       size_t(col.origin_attr), sim.by.ref);
        }
        if (sim.by.form == BoundBySpec::Form::Pair && sim.by.right_col >= 0 &&
            sim.sources[1]->kind == PlanNode::Kind::Scan &&
            sim.sources[1]->scan_filter_col < 0) {
            const ExecColumn& col = sim.sources[1]->out.at(size_t(sim.by.right_col));
            if (col.origin_attr >= 0)
                sim.join_index = cat_.find_metric_index(sim.sources[1]->rel.get(),
                                                        size_t(col.origin_attr), sim.by.ref);
        }
    }
};

// --- EXPLAIN -----------------------------------------------------------------------

namespace detail {

inline void explain_node(const PlanNode& n, std::string& out, int depth);

inline void indent_line(std::string& out, int depth, const std::string& line) {
    out.append(size_t(depth) * 2, ' ');
    out += line;
    out += '\n';
}

inline std::string index_ref(const AttachedIndex& ai) {
    return ai.relation->name() + "." + ai.relation->schema().at(ai.attr).name;
}

inline std::string literal_text(const Value& v) {
    switch (v.kind()) {
        case ValueKind::Null: return "null";
        case ValueKind::Integer:
        case ValueKind::Long: return std::to_string(v.as_int());
        case ValueKind::Float: return format_double(v.as_float());
        case ValueKind::Date: return "'" + format_date(v.as_int()) + "'";
        case ValueKind::String: {
            std::string s = "'";
            for (char c : v.as_string()) {
                s += c;
                if (c == '\'') s += '\'';
            }
            return s + "'";
        }
        case ValueKind::NumberVector: {
            std::string s = "[";
            const auto& xs = v.as_vector();
            for (size_t i = 0; i < xs.size(); ++i) {
                if (i) s += ",";
                s += format_double(xs[i]);
            }
            return s + "]";
        }
        case ValueKind::ImageRasterKind: {
            const auto& img = v.as_raster();
            return "<image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                   ">";
        }
    }
    return "?";
}

inline std::string sim_line(const PlanNode& n) {
    std::string s = "simsearch";
    if (!n.alias.empty()) s += " as " + n.alias;
    s += " by " + n.by_display;
    s += " method ";
    s += n.method.is_default ? "nn" : n.method.name + n.method.args_display;
    if (n.rewrite_tag == "R1")
        s += " rewrite:R1 range(" + format_double(n.method.numeric_args[0].numeric()) + ")";
    else if (n.rewrite_tag == "R2")
        s += " rewrite:R2 knn(" + std::to_string(*n.push_top_k) + ")";
    if (n.sim_index)
        s += " via metric-index(" + index_ref(*n.sim_index) + ", " +
             n.sim_index->distance.function + ")";
    else if (n.join_index)
        s += " via metric-index(" + index_ref(*n.join_index) + ", " +
             n.join_index->distance.function + ")";
    else
        s += " seq-scan";
    return s;
}

inline void explain_node(const PlanNode& n, std::string& out, int depth) {
    using K = PlanNode::Kind;
    switch (n.kind) {
        case K::Scan:
            if (n.scan_index) {
                const ExecColumn& c = n.out.at(size_t(n.scan_filter_col));
                indent_line(out, depth,
                            "ordered-index-scan " + n.label + "." + c.name + " " +
                                ast::bin_op_text(n.scan_filter_op) + " " +
                                literal_text(n.scan_filter_value));
            } else {
                indent_line(out, depth, "seq-scan " + n.label);
            }
            return;
        case K::SubqueryScan:
            indent_line(out, depth,
                        n.label.empty() ? "subquery" : "subquery as " + n.label);
            explain_node(*n.sub->root, out, depth + 1);
            return;
        case K::Cross:
            indent_line(out, depth, "cross-join");
            explain_node(*n.left, out, depth + 1);
            explain_node(*n.right, out, depth + 1);
            return;
        case K::Join: {
            if (n.join_kind == ast::JoinKind::Inner) {
                indent_line(out, depth, "inner-join on " + n.on->display);
            } else {
                std::string cols;
                for (const auto& [l, r] : n.natural_pairs) {
                    if (!cols.empty()) cols += ", ";
                    cols += n.out.at(size_t(l)).name;
                }
                indent_line(out, depth,
                            cols.empty() ? "natural-join (cross)" : "natural-join (" + cols + ")");
            }
            explain_node(*n.left, out, depth + 1);
            explain_node(*n.right, out, depth + 1);
            return;
        }
        case K::Sim:
            indent_line(out, depth, sim_line(n));
            for (const auto& s : n.sources) explain_node(*s, out, depth + 1);
            return;
        case K::Filter:
            if (n.pred) indent_line(out, depth, "filter " + n.pred->display);
            explain_node(*n.child, out, n.pred ? depth + 1 : depth);
            return;
        case K::Group: {
            std::string keys, aggs;
            for (size_t i = 0; i < n.keys.size(); ++i) {
                if (i) keys += ", ";
                keys += n.out.at(i).name;
            }
            for (size_t i = n.keys.size(); i < n.out.size(); ++i) {
                if (!aggs.empty()) aggs += ", ";
                aggs += n.out.at(i).name;
            }
            std::string line = "group-by " + keys;
            if (!aggs.empty()) line += " agg " + aggs;
            indent_line(out, depth, line);
            explain_node(*n.child, out, depth + 1);
            return;
        }
        case K::Append:
            explain_node(*n.child, out, depth);
            return;
        case K::Sort: {
            std::string keys;
            for (const auto& [e, desc] : n.sort_keys) {
                if (!keys.empty()) keys += ", ";
                keys += e->display;
                if (desc) keys += " desc";
            }
            indent_line(out, depth, "sort " + keys);
            explain_node(*n.child, out, depth + 1);
            return;
        }
        case K::Project: {
            std::string cols;
            for (const auto& c : n.out.columns) {
                if (!cols.empty()) cols += ", ";
                cols += c.name;
            }
            indent_line(out, depth, "project " + cols);
            explain_node(*n.child, out, depth + 1);
            return;
        }
        case K::Distinct:
            indent_line(out, depth, "distinct");
            explain_node(*n.child, out, depth + 1);
            return;
        case K::Top:
            indent_line(out, depth, "top " + std::to_string(n.top_n));
            explain_node(*n.child, out, depth + 1);
            return;
    }
}

}  // namespace detail

inline std::string explain_text(const BoundSelect& bs) {
    std::string out;
    detail::explain_node(*bs.root, out, 0);
    return out;
}

}  // namespace simseql

#endif
