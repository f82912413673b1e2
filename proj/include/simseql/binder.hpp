#ifndef SIMSEQL_BINDER_HPP
#define SIMSEQL_BINDER_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ast.hpp"
#include "catalog.hpp"
#include "exec.hpp"

namespace simseql {

// Query parameters (:name). Names are case-sensitive, unlike catalog names.
using ParamBinding = std::map<std::string, Value>;

struct CiLess {
    bool operator()(const std::string& a, const std::string& b) const {
        return to_lower(a) < to_lower(b);
    }
};

inline const char* kind_type_name(ValueKind k) {
    switch (k) {
        case ValueKind::Integer: return "integer";
        case ValueKind::Long: return "long";
        case ValueKind::String: return "string";
        case ValueKind::Date: return "date";
        case ValueKind::Float: return "float";
        case ValueKind::NumberVector: return "number_vector";
        case ValueKind::ImageRasterKind: return "binary_image";
        case ValueKind::Null: return "null";
    }
    return "?";
}

struct BoundSelect;

// Row-level scalar or predicate expression over a fixed schema; columns are
// resolved to positions at bind time.
struct BoundExpr {
    enum class Kind { Literal, Column, Cmp, And, Or, Not, Add, Mul, InSub };
    Kind kind = Kind::Literal;
    Value literal;
    int column = -1;
    ast::BinOp op = ast::BinOp::Eq;
    std::vector<std::shared_ptr<BoundExpr>> children;
    std::shared_ptr<BoundSelect> sub;
    ValueKind vkind = ValueKind::Null;
    std::string display;  // source spelling, for EXPLAIN
};
using BoundExprPtr = std::shared_ptr<BoundExpr>;

// One input of a distance evaluation: a source column, one of the search's
// query objects, or a fixed value.
struct DistOperand {
    enum class Kind { Column, Object, Literal };
    Kind kind = Kind::Literal;
    int index = -1;
    Value literal;
};

// Distance expression: constants, + and *, distance calls, set folds and
// weighted aggregations, all evaluated per candidate row.
struct BoundDist {
    enum class Kind { Const, Add, Mul, ColumnVal, DistCall, SetCall, AggCall };
    Kind kind = Kind::Const;
    double constant = 0;
    int column = -1;  // ColumnVal: a passthrough distance column
    std::vector<std::shared_ptr<BoundDist>> children;
    // DistCall
    std::function<double(const Value&, const Value&)> fn;
    DistOperand x, y;
    DistanceRef ref;
    // SetCall / AggCall
    const SetDistanceEntry* set_entry = nullptr;
    const AggregatedDistanceEntry* agg_entry = nullptr;
    std::vector<double> weights;  // parallel to children for AggCall
};
using BoundDistPtr = std::shared_ptr<BoundDist>;

struct BoundBySpec {
    enum class Form { Attribute, Expr, Pair };
    Form form = Form::Expr;
    // Attribute (and the per-side function of Pair)
    int attr_col = -1;
    DistanceRef ref;
    const DistanceFunctionEntry* entry = nullptr;
    std::function<double(const Value&, const Value&)> fn;
    // Expr
    BoundDistPtr expr;
    // Pair: operand columns in the concatenated (left ++ right) schema, in the
    // order the query wrote them. left_col/right_col are side-local positions
    // when x is a left column and y a right column, else -1.
    int x_col = -1, y_col = -1;
    int left_col = -1, right_col = -1;
    std::string display;
};

struct BoundMethod {
    const SearchMethodEntry* entry = nullptr;
    std::string name;
    std::vector<Value> numeric_args;
    std::vector<int> attr_args;
    std::string args_display;  // "(0.1,15000)"
    bool is_default = false;   // no METHOD clause in the query
};

struct BoundObject {
    enum class Kind { Literal, Extract, Sub };
    Kind kind = Kind::Literal;
    Value literal;
    const ExtractorEntry* extractor = nullptr;
    std::shared_ptr<BoundObject> child;
    std::shared_ptr<BoundSelect> sub;
    std::string alias;
    SourcePos pos;
};

// Logical plan node. One struct covers every operator; `kind` says which
// fields apply. The planner mutates nodes in place (rewrites, access paths).
struct PlanNode {
    enum class Kind {
        Scan,
        SubqueryScan,
        Cross,
        Join,
        Sim,
        Filter,
        Group,
        Append,
        Sort,
        Project,
        Distinct,
        Top
    };
    Kind kind = Kind::Scan;
    ExecSchema out;

    // Scan
    std::shared_ptr<Relation> rel;
    std::string label;
    // ordered-index pushdown, set by the planner
    int scan_filter_col = -1;
    ast::BinOp scan_filter_op = ast::BinOp::Eq;
    Value scan_filter_value;
    std::shared_ptr<const AttachedIndex> scan_index;

    // SubqueryScan
    std::shared_ptr<BoundSelect> sub;

    // Cross / Join
    std::shared_ptr<PlanNode> left, right;
    ast::JoinKind join_kind = ast::JoinKind::Inner;
    BoundExprPtr on;
    std::vector<std::pair<int, int>> natural_pairs;  // concat-schema indexes

    // Sim
    std::vector<std::shared_ptr<PlanNode>> sources;
    std::vector<std::string> source_labels;
    std::vector<BoundObject> objects;
    BoundBySpec by;
    BoundMethod method;
    std::string alias;
    std::string by_display;
    std::optional<size_t> push_top_k;  // planner: kNN pushdown
    std::string rewrite_tag;           // planner: "R1" or "R2"
    std::shared_ptr<const AttachedIndex> sim_index;   // planner: point access path
    std::shared_ptr<const AttachedIndex> join_index;  // planner: pairwise access path
    int global_distance_col = -1;  // within the enclosing FROM schema, top-level sims only

    // Filter / Group / Append / Sort / Project / Distinct / Top
    std::shared_ptr<PlanNode> child;
    BoundExprPtr pred;                                     // Filter; null = pass-through
    std::vector<BoundExprPtr> keys;                        // Group
    std::vector<BoundExprPtr> agg_args;                    // Group; null entry = count(*)
    std::vector<BoundExprPtr> exprs;                       // Append
    std::vector<std::pair<BoundExprPtr, bool>> sort_keys;  // Sort; bool = descending
    std::vector<int> keep;                                 // Project
    size_t top_n = 0;                                      // Top
};
using PlanPtr = std::shared_ptr<PlanNode>;

struct BoundSelect {
    PlanPtr root;
    ExecSchema output;
    // Pipeline stages, for the planner; raw pointers into the root chain.
    PlanPtr from_root;
    PlanNode* where_filter = nullptr;
    PlanNode* group = nullptr;
    PlanNode* having_filter = nullptr;
    PlanNode* append = nullptr;
    PlanNode* sort = nullptr;
    PlanNode* top_node = nullptr;
    bool has_distinct = false;
    std::optional<int64_t> top_n;
    std::vector<PlanNode*> sims;  // sims in this FROM tree, nested ones excluded
};

class Binder {
public:
    Binder(const Catalog& catalog, const ParamBinding& params)
        : cat_(catalog), params_(params) {}

    std::shared_ptr<BoundSelect> bind(const ast::SelectStmt& stmt) {
        auto bs = std::make_shared<BoundSelect>();
        std::set<std::string> labels;

        PlanPtr from = bind_from_item(*stmt.from[0], labels);
        for (size_t i = 1; i < stmt.from.size(); ++i)
            from = make_cross(from, bind_from_item(*stmt.from[i], labels));
        bs->from_root = from;
        collect_sims(from.get(), 0, bs->sims);

        PlanPtr cur = from;
        if (stmt.where) {
            auto f = std::make_shared<PlanNode>();
            f->kind = PlanNode::Kind::Filter;
            f->child = cur;
            f->out = cur->out;
            f->pred = bind_bool(*stmt.where, Env{&cur->out});
            bs->where_filter = f.get();
            cur = f;
        }

        GroupCtx gctx;
        if (!stmt.group_by.empty()) {
            cur = bind_group(stmt, cur, gctx);
            bs->group = cur.get();
        } else if (stmt.having) {
            throw BindError("HAVING requires GROUP BY", stmt.having->pos);
        }

        // Select items are appended to the working rows so that HAVING and
        // ORDER BY can reference both source columns and select aliases.
        auto append = std::make_shared<PlanNode>();
        append->kind = PlanNode::Kind::Append;
        append->child = cur;
        size_t base_width = cur->out.size();
        std::map<std::string, int, CiLess> aliases;
        append->out = cur->out;
        bind_select_items(stmt, cur->out, gctx, *append, aliases, base_width);
        bs->append = append.get();
        cur = append;

        Env post_env{&cur->out, &aliases, &gctx, base_width};
        if (stmt.having) {
            auto f = std::make_shared<PlanNode>();
            f->kind = PlanNode::Kind::Filter;
            f->child = cur;
            f->out = cur->out;
            f->pred = bind_bool(*stmt.having, post_env);
            bs->having_filter = f.get();
            cur = f;
        }
        if (!stmt.order_by.empty()) {
            auto srt = std::make_shared<PlanNode>();
            srt->kind = PlanNode::Kind::Sort;
            srt->child = cur;
            srt->out = cur->out;
            for (const auto& key : stmt.order_by) {
                BoundExprPtr e = bind_value(*key.expr, post_env);
                srt->sort_keys.emplace_back(std::move(e), key.desc);
            }
            bs->sort = srt.get();
            cur = srt;
        }

        auto proj = std::make_shared<PlanNode>();
        proj->kind = PlanNode::Kind::Project;
        proj->child = cur;
        for (size_t i = base_width; i < append->out.size(); ++i) {
            proj->keep.push_back(int(i));
            proj->out.columns.push_back(append->out.at(i));
        }
        cur = proj;

        if (stmt.distinct) {
            auto d = std::make_shared<PlanNode>();
            d->kind = PlanNode::Kind::Distinct;
            d->child = cur;
            d->out = cur->out;
            bs->has_distinct = true;
            cur = d;
        }
        if (stmt.top) {
            auto t = std::make_shared<PlanNode>();
            t->kind = PlanNode::Kind::Top;
            t->child = cur;
            t->out = cur->out;
            t->top_n = size_t(*stmt.top);
            bs->top_n = *stmt.top;
            bs->top_node = t.get();
            cur = t;
        }
        bs->root = cur;
        bs->output = cur->out;
        return bs;
    }

private:
    const Catalog& cat_;
    const ParamBinding& params_;

    // Grouped binding context: select/having/order expressions must be built
    // from the group keys (matched by their printed form) and count() calls.
    struct GroupCtx {
        bool active = false;
        std::vector<std::string> key_texts;  // printed group-by expressions
        std::map<std::string, int> agg_cols;  // printed count(...) -> column
        int n_keys = 0;
    };

    struct Env {
        const ExecSchema* schema;
        const std::map<std::string, int, CiLess>* aliases = nullptr;
        const GroupCtx* group = nullptr;
        // HAVING and ORDER BY see source columns plus the select list; names
        // resolve against the select list first so that a selected copy of a
        // source column is not reported as ambiguous with its original.
        size_t select_start = 0;
    };

    static PlanPtr make_cross(PlanPtr l, PlanPtr r) {
        auto n = std::make_shared<PlanNode>();
        n->kind = PlanNode::Kind::Cross;
        n->out = ExecSchema::concat(l->out, r->out);
        n->left = std::move(l);
        n->right = std::move(r);
        return n;
    }

    // Sims directly in a FROM tree; offsets locate their distance columns in
    // the tree's output schema. Sims nested inside another SIMSEARCH or a
    // derived table are not collected.
    static void collect_sims(PlanNode* n, size_t offset, std::vector<PlanNode*>& out) {
        switch (n->kind) {
            case PlanNode::Kind::Cross:
            case PlanNode::Kind::Join:
                collect_sims(n->left.get(), offset, out);
                collect_sims(n->right.get(), offset + n->left->out.size(), out);
                return;
            case PlanNode::Kind::Sim:
                n->global_distance_col = int(offset + n->out.size() - 2);
                out.push_back(n);
                return;
            default: return;
        }
    }

    // --- name resolution ----------------------------------------------------

    static bool is_named_column(const ExecColumn& c, std::string_view qual,
                                std::string_view name) {
        if (c.ckind == ColumnKind::Distance) return false;
        if (!ci_equal(c.name, name)) return false;
        return qual.empty() || c.answers_to(qual);
    }

    static int find_named(const ExecSchema& s, size_t lo, size_t hi, const std::string& qual,
                          const std::string& name, SourcePos pos) {
        int found = -1;
        for (size_t i = lo; i < hi; ++i) {
            if (!is_named_column(s.at(i), qual, name)) continue;
            if (found >= 0)
                throw BindError("ambiguous column reference '" + display_name(qual, name) + "'",
                                pos);
            found = int(i);
        }
        return found;
    }

    static int resolve_column(const ExecSchema& s, const std::string& qual,
                              const std::string& name, SourcePos pos,
                              size_t select_start = 0) {
        if (select_start > 0) {
            int got = find_named(s, select_start, s.size(), qual, name, pos);
            if (got >= 0) return got;
        }
        int got = find_named(s, 0, select_start ? select_start : s.size(), qual, name, pos);
        if (got < 0)
            throw BindError("unknown column '" + display_name(qual, name) + "'", pos);
        return got;
    }

    static int find_distance(const ExecSchema& s, size_t lo, size_t hi, const std::string& qual,
                             SourcePos pos) {
        int found = -1;
        for (size_t i = lo; i < hi; ++i) {
            const auto& c = s.at(i);
            if (c.ckind != ColumnKind::Distance) continue;
            if (!qual.empty() && !c.answers_to(qual)) continue;
            if (found >= 0)
                throw BindError(qual.empty()
                                    ? "ambiguous DISTANCE reference; qualify it with an alias"
                                    : "ambiguous DISTANCE reference '" + qual + ".DISTANCE'",
                                pos);
            found = int(i);
        }
        return found;
    }

    static int resolve_distance_col(const ExecSchema& s, const std::string& qual,
                                    SourcePos pos, size_t select_start = 0) {
        if (select_start > 0) {
            int got = find_distance(s, select_start, s.size(), qual, pos);
            if (got >= 0) return got;
        }
        int found = find_distance(s, 0, select_start ? select_start : s.size(), qual, pos);
        if (found < 0)
            throw BindError(qual.empty() ? "no similarity search in scope for DISTANCE"
                                         : "no similarity search named '" + qual +
                                               "' in scope for DISTANCE",
                            pos);
        return found;
    }

    static std::string display_name(const std::string& qual, const std::string& name) {
        return qual.empty() ? name : qual + "." + name;
    }

    // --- scalar / predicate expressions --------------------------------------

    Value param_value(const ast::Expr& e) const {
        auto it = params_.find(e.text);
        if (it == params_.end()) throw BindError("unbound parameter :" + e.text, e.pos);
        return it->second;
    }

    BoundExprPtr make_literal(Value v) {
        auto b = std::make_shared<BoundExpr>();
        b->kind = BoundExpr::Kind::Literal;
        b->vkind = v.kind();
        b->literal = std::move(v);
        return b;
    }

    BoundExprPtr make_column(const ExecSchema& s, int idx) {
        auto b = std::make_shared<BoundExpr>();
        b->kind = BoundExpr::Kind::Column;
        b->column = idx;
        b->vkind = s.at(size_t(idx)).vkind;
        return b;
    }

    BoundExprPtr bind_value(const ast::Expr& e, const Env& env) {
        BoundExprPtr b = bind_value_impl(e, env);
        if (b->display.empty()) b->display = ast::print(e);
        return b;
    }

    BoundExprPtr bind_value_impl(const ast::Expr& e, const Env& env) {
        using K = ast::Expr::Kind;
        // Inside GROUP BY, any expression spelled like a group key denotes
        // that key's column.
        if (env.group && env.group->active) {
            std::string text = ast::print(e);
            for (size_t i = 0; i < env.group->key_texts.size(); ++i)
                if (ci_equal(env.group->key_texts[i], text)) return make_column(*env.schema, int(i));
            auto it = env.group->agg_cols.find(to_lower(text));
            if (it != env.group->agg_cols.end()) return make_column(*env.schema, it->second);
        }
        switch (e.kind) {
            case K::IntLiteral: return make_literal(Value::integer(e.int_value));
            case K::FloatLiteral: return make_literal(Value::floating(e.float_value));
            case K::StringLiteral: return make_literal(Value::string(e.text));
            case K::Param: return make_literal(param_value(e));
            case K::ColumnRef: {
                if (e.qualifier.empty() && env.aliases) {
                    auto it = env.aliases->find(e.text);
                    if (it != env.aliases->end()) return make_column(*env.schema, it->second);
                }
                if (env.group && env.group->active)
                    throw BindError("column '" + display_name(e.qualifier, e.text) +
                                        "' must appear in GROUP BY or inside count()",
                                    e.pos);
                return make_column(*env.schema,
                                   resolve_column(*env.schema, e.qualifier, e.text, e.pos,
                                                  env.select_start));
            }
            case K::DistanceRef:
                return make_column(*env.schema,
                                   resolve_distance_col(*env.schema, e.qualifier, e.pos,
                                                        env.select_start));
            case K::Call:
                if (ci_equal(e.text, "count"))
                    throw BindError(env.group && env.group->active
                                        ? "count(...) must be listed before HAVING/ORDER BY "
                                          "binding; this occurrence was not seen in the "
                                          "select list or group context"
                                        : "count(...) requires GROUP BY",
                                    e.pos);
                throw BindError("unknown function '" + e.text + "' in this context", e.pos);
            case K::Binary:
                if (e.op == ast::BinOp::Add || e.op == ast::BinOp::Mul) {
                    auto l = bind_value(*e.children[0], env);
                    auto r = bind_value(*e.children[1], env);
                    auto b = std::make_shared<BoundExpr>();
                    b->kind = e.op == ast::BinOp::Add ? BoundExpr::Kind::Add
                                                      : BoundExpr::Kind::Mul;
                    b->vkind = arith_kind(*l, *r, e.pos);
                    b->children = {std::move(l), std::move(r)};
                    return b;
                }
                throw BindError("condition not allowed here", e.pos);
            case K::Not:
            case K::InSubquery: throw BindError("condition not allowed here", e.pos);
            case K::Subquery:
                throw BindError("subquery is only allowed with IN or as a query object", e.pos);
            case K::Pair:
                throw BindError("pair syntax is only allowed inside an aggregated distance",
                                e.pos);
            case K::Star: throw BindError("'*' is only allowed inside count()", e.pos);
        }
        throw BindError("unsupported expression", e.pos);
    }

    static ValueKind arith_kind(const BoundExpr& l, const BoundExpr& r, SourcePos pos) {
        auto num = [](ValueKind k) {
            return k == ValueKind::Integer || k == ValueKind::Long || k == ValueKind::Float;
        };
        if (!num(l.vkind) || !num(r.vkind))
            throw BindError(std::string("arithmetic needs numeric operands, got '") +
                                kind_type_name(l.vkind) + "' and '" + kind_type_name(r.vkind) +
                                "'",
                            pos);
        if (l.vkind == ValueKind::Float || r.vkind == ValueKind::Float) return ValueKind::Float;
        if (l.vkind == ValueKind::Long || r.vkind == ValueKind::Long) return ValueKind::Long;
        return ValueKind::Integer;
    }

    BoundExprPtr bind_bool(const ast::Expr& e, const Env& env) {
        BoundExprPtr b = bind_bool_impl(e, env);
        if (b->display.empty()) b->display = ast::print(e);
        return b;
    }

    BoundExprPtr bind_bool_impl(const ast::Expr& e, const Env& env) {
        using K = ast::Expr::Kind;
        switch (e.kind) {
            case K::Binary:
                switch (e.op) {
                    case ast::BinOp::And:
                    case ast::BinOp::Or: {
                        auto b = std::make_shared<BoundExpr>();
                        b->kind = e.op == ast::BinOp::And ? BoundExpr::Kind::And
                                                          : BoundExpr::Kind::Or;
                        b->children = {bind_bool(*e.children[0], env),
                                       bind_bool(*e.children[1], env)};
                        return b;
                    }
                    case ast::BinOp::Add:
                    case ast::BinOp::Mul:
                        throw BindError("expected a condition, found an arithmetic expression",
                                        e.pos);
                    default: return bind_cmp(e, env);
                }
            case K::Not: {
                auto b = std::make_shared<BoundExpr>();
                b->kind = BoundExpr::Kind::Not;
                b->children = {bind_bool(*e.children[0], env)};
                return b;
            }
            case K::InSubquery: {
                auto b = std::make_shared<BoundExpr>();
                b->kind = BoundExpr::Kind::InSub;
                b->children = {bind_value(*e.children[0], env)};
                Binder inner(cat_, params_);
                b->sub = inner.bind(*e.subquery);
                check_comparable(b->children[0]->vkind, b->sub->output.at(0).vkind,
                                 ast::BinOp::Eq, e.pos);
                return b;
            }
            default: throw BindError("expected a condition", e.pos);
        }
    }

    BoundExprPtr bind_cmp(const ast::Expr& e, const Env& env) {
        auto l = bind_value(*e.children[0], env);
        auto r = bind_value(*e.children[1], env);
        // A string literal compared against a date column reads as a date.
        coerce_date(l, r);
        coerce_date(r, l);
        check_comparable(l->vkind, r->vkind, e.op, e.pos);
        auto b = std::make_shared<BoundExpr>();
        b->kind = BoundExpr::Kind::Cmp;
        b->op = e.op;
        b->children = {std::move(l), std::move(r)};
        return b;
    }

    static void coerce_date(BoundExprPtr& lit, const BoundExprPtr& other) {
        if (other->vkind == ValueKind::Date && lit->kind == BoundExpr::Kind::Literal &&
            lit->vkind == ValueKind::String) {
            lit->literal = Value::date(parse_date(lit->literal.as_string()));
            lit->vkind = ValueKind::Date;
        }
    }

    static void check_comparable(ValueKind l, ValueKind r, ast::BinOp op, SourcePos pos) {
        auto num = [](ValueKind k) {
            return k == ValueKind::Integer || k == ValueKind::Long || k == ValueKind::Float;
        };
        bool same = l == r;
        bool ok = (num(l) && num(r)) || (same && l != ValueKind::Null);
        if (!ok)
            throw BindError(std::string("cannot compare '") + kind_type_name(l) + "' with '" +
                                kind_type_name(r) + "'",
                            pos);
        bool ordering = op != ast::BinOp::Eq && op != ast::BinOp::Ne;
        if (ordering && same &&
            (l == ValueKind::NumberVector || l == ValueKind::ImageRasterKind))
            throw BindError(std::string("ordering is not defined for '") + kind_type_name(l) +
                                "'",
                            pos);
    }

    // --- FROM items -----------------------------------------------------------

    void claim_label(const std::string& label, std::set<std::string>& labels, SourcePos pos) {
        if (label.empty()) return;
        if (!labels.insert(to_lower(label)).second)
            throw BindError("duplicate alias '" + label + "' in FROM", pos);
    }

    PlanPtr bind_from_item(const ast::FromItem& f, std::set<std::string>& labels) {
        switch (f.kind) {
            case ast::FromItem::Kind::Relation: {
                auto rel = cat_.require_relation(f.relation);
                auto n = std::make_shared<PlanNode>();
                n->kind = PlanNode::Kind::Scan;
                n->rel = rel;
                n->label = f.alias.empty() ? f.relation : f.alias;
                claim_label(n->label, labels, f.pos);
                const Schema& s = rel->schema();
                for (size_t i = 0; i < s.size(); ++i) {
                    const AttributeDef& a = s.at(i);
                    ExecColumn c;
                    c.qualifier = n->label;
                    c.name = a.name;
                    c.type = a.type;
                    c.vkind = a.kind;
                    c.origin_rel = rel;
                    c.origin_attr = int(i);
                    n->out.columns.push_back(std::move(c));
                }
                return n;
            }
            case ast::FromItem::Kind::Subquery: {
                Binder inner(cat_, params_);
                auto n = std::make_shared<PlanNode>();
                n->kind = PlanNode::Kind::SubqueryScan;
                n->sub = inner.bind(*f.subquery);
                n->label = f.alias;
                claim_label(n->label, labels, f.pos);
                for (const auto& col : n->sub->output.columns) {
                    ExecColumn c = col;
                    c.qualifier = n->label;
                    c.extra_qualifiers.clear();
                    n->out.columns.push_back(std::move(c));
                }
                return n;
            }
            case ast::FromItem::Kind::Sim: return bind_sim(*f.sim, labels);
            case ast::FromItem::Kind::Join: {
                PlanPtr l = bind_from_item(*f.left, labels);
                PlanPtr r = bind_from_item(*f.right, labels);
                auto n = std::make_shared<PlanNode>();
                n->kind = PlanNode::Kind::Join;
                n->join_kind = f.join;
                n->out = ExecSchema::concat(l->out, r->out);
                if (f.join == ast::JoinKind::Natural)
                    n->natural_pairs = natural_pairs(l->out, r->out, f.pos);
                n->left = std::move(l);
                n->right = std::move(r);
                if (f.join == ast::JoinKind::Inner) n->on = bind_bool(*f.on, Env{&n->out});
                return n;
            }
        }
        throw BindError("unsupported FROM item", f.pos);
    }

    // Attribute columns sharing a name join; both copies stay addressable via
    // their qualifiers. Distance and rank columns never participate.
    static std::vector<std::pair<int, int>> natural_pairs(const ExecSchema& l,
                                                          const ExecSchema& r, SourcePos pos) {
        std::vector<std::pair<int, int>> pairs;
        for (size_t li = 0; li < l.size(); ++li) {
            if (l.at(li).ckind != ColumnKind::Attr) continue;
            int match = -1;
            for (size_t ri = 0; ri < r.size(); ++ri) {
                if (r.at(ri).ckind != ColumnKind::Attr) continue;
                if (!ci_equal(l.at(li).name, r.at(ri).name)) continue;
                if (match >= 0)
                    throw BindError("ambiguous NATURAL JOIN column '" + l.at(li).name + "'",
                                    pos);
                match = int(ri);
            }
            if (match < 0) continue;
            ValueKind lk = l.at(li).vkind, rk = r.at(size_t(match)).vkind;
            auto num = [](ValueKind k) {
                return k == ValueKind::Integer || k == ValueKind::Long || k == ValueKind::Float;
            };
            if (lk != rk && !(num(lk) && num(rk)))
                throw BindError("NATURAL JOIN column '" + l.at(li).name +
                                    "' has incompatible types '" + kind_type_name(lk) +
                                    "' and '" + kind_type_name(rk) + "'",
                                pos);
            pairs.emplace_back(int(li), int(l.size()) + match);
        }
        return pairs;
    }

    // --- SIMSEARCH ------------------------------------------------------------

    PlanPtr bind_sim(const ast::SimSearch& s, std::set<std::string>& labels) {
        auto n = std::make_shared<PlanNode>();
        n->kind = PlanNode::Kind::Sim;
        n->alias = s.alias;

        ExecSchema src;
        for (const auto& item : s.sources) {
            PlanPtr p = bind_from_item(*item, labels);
            std::string label;
            if (p->kind == PlanNode::Kind::Scan || p->kind == PlanNode::Kind::SubqueryScan)
                label = p->label;
            else if (p->kind == PlanNode::Kind::Sim)
                label = p->alias;
            if (!label.empty()) n->source_labels.push_back(label);
            src = ExecSchema::concat(src, p->out);
            n->sources.push_back(std::move(p));
        }
        claim_label(s.alias, labels, s.pos);

        std::map<std::string, int, CiLess> object_aliases;
        for (size_t i = 0; i < s.objects.size(); ++i) {
            n->objects.push_back(bind_object(*s.objects[i].expr));
            n->objects.back().alias = s.objects[i].alias;
            if (!s.objects[i].alias.empty() &&
                !object_aliases.emplace(s.objects[i].alias, int(i)).second)
                throw BindError("duplicate query object alias '" + s.objects[i].alias + "'",
                                s.pos);
        }

        const SearchMethodEntry& entry =
            s.method ? cat_.require_method(s.method->name) : cat_.require_method("NN");
        n->method.entry = &entry;
        n->method.name = entry.name;
        n->method.is_default = !s.method.has_value();
        check_cardinality(entry, n->objects.size(), s.pos);
        if (entry.relation_count && int(s.sources.size()) != *entry.relation_count)
            throw BindError("search method '" + entry.name + "' needs exactly " +
                                std::to_string(*entry.relation_count) + " source(s), got " +
                                std::to_string(s.sources.size()),
                            s.pos);
        bind_method_args(s, entry, src, *n);

        n->by_display = ast::print(s.by);
        if (entry.pairwise) {
            if (s.by.kind != ast::BySpec::Kind::Expression)
                throw BindError(
                    "a pairwise search method needs a distance expression over one attribute "
                    "from each source",
                    s.by.pos);
            bind_pair_by(*s.by.expr, *n, object_aliases);
        } else if (s.by.kind == ast::BySpec::Kind::Expression) {
            if (entry.needs_self_pairs)
                throw BindError("search method '" + entry.name +
                                    "' needs a single-attribute distance specification",
                                s.by.pos);
            n->by.form = BoundBySpec::Form::Expr;
            n->by.expr = bind_dist(*s.by.expr, src, object_aliases, n->objects);
            n->by.display = n->by_display;
        } else {
            bind_attr_by(s.by, src, *n);
        }

        n->out = src;
        ExecColumn d;
        d.qualifier = s.alias;
        d.extra_qualifiers = n->source_labels;
        d.name = "distance";
        d.ckind = ColumnKind::Distance;
        d.type = DataTypeId{"float"};
        d.vkind = ValueKind::Float;
        ExecColumn rk = d;
        rk.name = "rank";
        rk.ckind = ColumnKind::Rank;
        rk.type = DataTypeId{"long"};
        rk.vkind = ValueKind::Long;
        n->out.columns.push_back(std::move(d));
        n->out.columns.push_back(std::move(rk));
        return n;
    }

    static void check_cardinality(const SearchMethodEntry& entry, size_t n_objects,
                                  SourcePos pos) {
        switch (entry.objects) {
            case ObjectCardinality::Zero:
                if (n_objects != 0)
                    throw BindError("search method '" + entry.name + "' takes no query objects",
                                    pos);
                return;
            case ObjectCardinality::Singleton:
                if (n_objects != 1)
                    throw BindError("search method '" + entry.name +
                                        "' needs exactly one query object",
                                    pos);
                return;
            case ObjectCardinality::Any: return;
        }
    }

    void bind_method_args(const ast::SimSearch& s, const SearchMethodEntry& entry,
                          const ExecSchema& src, PlanNode& n) {
        size_t given = s.method ? s.method->args.size() : 0;
        if (s.method && given != entry.params.size())
            throw BindError("search method '" + entry.name + "' expects " +
                                std::to_string(entry.params.size()) + " argument(s), got " +
                                std::to_string(given),
                            s.method->pos);
        if (!s.method) return;
        std::string disp = "(";
        for (size_t i = 0; i < entry.params.size(); ++i) {
            const ast::Expr& a = *s.method->args[i];
            if (i) disp += ",";
            if (entry.params[i] == MethodParamKind::Numeric) {
                Value v = numeric_arg_value(a);
                disp += format_double(v.numeric());
                n.method.numeric_args.push_back(std::move(v));
            } else {
                if (a.kind != ast::Expr::Kind::ColumnRef)
                    throw BindError("search method '" + entry.name +
                                        "' expects an attribute name here",
                                    a.pos);
                int col = resolve_column(src, a.qualifier, a.text, a.pos);
                disp += display_name(a.qualifier, a.text);
                n.method.attr_args.push_back(col);
            }
        }
        n.method.args_display = disp + ")";
    }

    Value numeric_arg_value(const ast::Expr& a) {
        Value v;
        if (a.kind == ast::Expr::Kind::IntLiteral)
            v = Value::integer(a.int_value);
        else if (a.kind == ast::Expr::Kind::FloatLiteral)
            v = Value::floating(a.float_value);
        else if (a.kind == ast::Expr::Kind::Param)
            v = param_value(a);
        else
            throw BindError("expected a numeric argument", a.pos);
        if (!v.is_numeric()) throw BindError("expected a numeric argument", a.pos);
        return v;
    }

    double numeric_const(const ast::Expr& a) {
        return numeric_arg_value(a).numeric();
    }

    // --- query objects ----------------------------------------------------------

    BoundObject bind_object(const ast::Expr& e) {
        BoundObject o;
        o.pos = e.pos;
        switch (e.kind) {
            case ast::Expr::Kind::IntLiteral: o.literal = Value::integer(e.int_value); return o;
            case ast::Expr::Kind::FloatLiteral:
                o.literal = Value::floating(e.float_value);
                return o;
            case ast::Expr::Kind::StringLiteral: o.literal = Value::string(e.text); return o;
            case ast::Expr::Kind::Param: o.literal = param_value(e); return o;
            case ast::Expr::Kind::Call: {
                const ExtractorEntry* ex = cat_.find_extractor(e.text);
                if (!ex)
                    throw BindError("unknown extractor '" + e.text + "'", e.pos);
                if (e.children.size() != 1)
                    throw BindError("extractor '" + ex->name + "' takes one argument", e.pos);
                o.kind = BoundObject::Kind::Extract;
                o.extractor = ex;
                o.child = std::make_shared<BoundObject>(bind_object(*e.children[0]));
                ValueKind got = object_kind(*o.child);
                ValueKind want = cat_.require_data_type(ex->input_type.name).representation;
                if (got != ValueKind::Null && got != want)
                    throw BindError("extractor '" + ex->name + "' expects '" +
                                        ex->input_type.name + "', got '" + kind_type_name(got) +
                                        "'",
                                    e.pos);
                return o;
            }
            case ast::Expr::Kind::Subquery: {
                o.kind = BoundObject::Kind::Sub;
                Binder inner(cat_, params_);
                o.sub = inner.bind(*e.subquery);
                if (o.sub->output.size() != 1)
                    throw BindError("a query object subquery must produce exactly one column, got " +
                                        std::to_string(o.sub->output.size()),
                                    e.pos);
                return o;
            }
            default: throw BindError("invalid query object", e.pos);
        }
    }

    // Null when only execution can tell (subquery objects keep their column kind).
    ValueKind object_kind(const BoundObject& o) const {
        switch (o.kind) {
            case BoundObject::Kind::Literal: return o.literal.kind();
            case BoundObject::Kind::Extract:
                return cat_.require_data_type(o.extractor->output_type.name).representation;
            case BoundObject::Kind::Sub: return o.sub->output.at(0).vkind;
        }
        return ValueKind::Null;
    }

    std::string object_type_name(const BoundObject& o) const {
        switch (o.kind) {
            case BoundObject::Kind::Literal: return kind_type_name(o.literal.kind());
            case BoundObject::Kind::Extract: return o.extractor->output_type.name;
            case BoundObject::Kind::Sub: return o.sub->output.at(0).type.name;
        }
        return "?";
    }

    // --- by-spec: attribute forms --------------------------------------------

    void bind_attr_by(const ast::BySpec& by, const ExecSchema& src, PlanNode& n) {
        int col = resolve_column(src, by.qualifier, by.attr, by.pos);
        const ExecColumn& c = src.at(size_t(col));
        if (c.ckind != ColumnKind::Attr)
            throw BindError("BY must name a relation attribute", by.pos);

        DistanceRef ref;
        if (by.kind == ast::BySpec::Kind::AttrNamed) {
            ref.function = by.function;
            for (const auto& a : by.function_args) ref.args.push_back(numeric_const(*a));
        } else {
            ref = default_distance_for(c);
        }
        const DistanceFunctionEntry& entry = cat_.require_distance(ref.function);
        if (!entry.accepts(c.type))
            throw BindError("distance function '" + entry.name + "' does not accept attribute '" +
                                c.name + "' of type '" + c.type.name + "'",
                            by.pos);
        if (ref.args.size() != entry.param_count)
            throw BindError("distance function '" + entry.name + "' expects " +
                                std::to_string(entry.param_count) + " argument(s), got " +
                                std::to_string(ref.args.size()),
                            by.pos);

        if (n.objects.size() != 1) {
            if (n.objects.empty() && n.method.entry->objects == ObjectCardinality::Zero)
                throw BindError("search method '" + n.method.entry->name +
                                    "' cannot use an attribute distance specification",
                                by.pos);
            throw BindError(n.objects.empty()
                                ? "an attribute distance specification needs a query object"
                                : "one query object expected for an attribute distance; use a "
                                  "set distance over DISTANCE(...) terms for several",
                            by.pos);
        }
        ValueKind ok = object_kind(n.objects[0]);
        if (ok != ValueKind::Null && ok != c.vkind)
            throw BindError("query object of type '" + object_type_name(n.objects[0]) +
                                "' is not compatible with attribute '" + c.name + "' of type '" +
                                c.type.name + "'",
                            n.objects[0].pos);

        n.by.form = BoundBySpec::Form::Attribute;
        n.by.attr_col = col;
        n.by.ref = ref;
        n.by.entry = &entry;
        n.by.fn = cat_.bound_distance(entry, ref.args, c.origin_rel,
                                      c.origin_attr < 0 ? 0 : size_t(c.origin_attr));
        n.by.display = n.by_display;
    }

    DistanceRef default_distance_for(const ExecColumn& c) const {
        if (c.origin_rel && c.origin_attr >= 0)
            return cat_.resolve_default_distance(*c.origin_rel, size_t(c.origin_attr));
        if (const auto* type = cat_.find_data_type(c.type.name))
            if (type->default_distance) return DistanceRef{*type->default_distance, {}};
        return DistanceRef{"identity_distance", {}};
    }

    // --- by-spec: distance expressions -----------------------------------------

    using ObjectAliases = std::map<std::string, int, CiLess>;

    BoundDistPtr bind_dist(const ast::Expr& e, const ExecSchema& src, const ObjectAliases& objs,
                           const std::vector<BoundObject>& objects) {
        using K = ast::Expr::Kind;
        auto node = [&](BoundDist::Kind k) {
            auto d = std::make_shared<BoundDist>();
            d->kind = k;
            return d;
        };
        switch (e.kind) {
            case K::IntLiteral: {
                auto d = node(BoundDist::Kind::Const);
                d->constant = double(e.int_value);
                return d;
            }
            case K::FloatLiteral: {
                auto d = node(BoundDist::Kind::Const);
                d->constant = e.float_value;
                return d;
            }
            case K::Param: {
                Value v = param_value(e);
                if (!v.is_numeric())
                    throw BindError("parameter :" + e.text + " is not a number", e.pos);
                auto d = node(BoundDist::Kind::Const);
                d->constant = v.numeric();
                return d;
            }
            case K::Binary: {
                if (e.op != ast::BinOp::Add && e.op != ast::BinOp::Mul)
                    throw BindError("only + and * are allowed in a distance expression", e.pos);
                auto d = node(e.op == ast::BinOp::Add ? BoundDist::Kind::Add
                                                      : BoundDist::Kind::Mul);
                d->children.push_back(bind_dist(*e.children[0], src, objs, objects));
                d->children.push_back(bind_dist(*e.children[1], src, objs, objects));
                return d;
            }
            case K::DistanceRef: {
                auto d = node(BoundDist::Kind::ColumnVal);
                d->column = resolve_distance_col(src, e.qualifier, e.pos);
                return d;
            }
            case K::Call: return bind_dist_call(e, src, objs, objects);
            case K::ColumnRef:
                throw BindError("a bare attribute is not a distance term; wrap it in "
                                "DISTANCE(...) or a distance function",
                                e.pos);
            default:
                throw BindError("invalid distance expression", e.pos);
        }
    }

    BoundDistPtr bind_dist_call(const ast::Expr& e, const ExecSchema& src,
                                const ObjectAliases& objs,
                                const std::vector<BoundObject>& objects) {
        if (e.text == "DISTANCE") return bind_distance_apply(e, src, objs, objects);
        if (const auto* set = cat_.find_set_distance(e.text)) {
            auto d = std::make_shared<BoundDist>();
            d->kind = BoundDist::Kind::SetCall;
            d->set_entry = set;
            if (e.children.empty())
                throw BindError("set distance '" + set->name + "' needs at least one term",
                                e.pos);
            for (const auto& c : e.children)
                d->children.push_back(bind_dist(*c, src, objs, objects));
            return d;
        }
        if (const auto* agg = cat_.find_aggregated_distance(e.text)) {
            auto d = std::make_shared<BoundDist>();
            d->kind = BoundDist::Kind::AggCall;
            d->agg_entry = agg;
            for (const auto& c : e.children) {
                if (c->kind != ast::Expr::Kind::Pair)
                    throw BindError("aggregated distance '" + agg->name +
                                        "' takes (distance, weight) pairs",
                                    c->pos);
                d->children.push_back(bind_dist(*c->children[0], src, objs, objects));
                d->weights.push_back(numeric_const(*c->children[1]));
            }
            return d;
        }
        if (cat_.find_distance(e.text)) return bind_named_distance(e, src, objs, objects);
        if (cat_.find_extractor(e.text))
            throw BindError("extractor '" + e.text +
                                "' is not allowed in a distance expression; apply it to a "
                                "query object",
                            e.pos);
        throw BindError("unknown function '" + e.text + "'", e.pos);
    }

    DistOperand bind_operand(const ast::Expr& e, const ExecSchema& src,
                             const ObjectAliases& objs) {
        DistOperand op;
        switch (e.kind) {
            case ast::Expr::Kind::ColumnRef: {
                if (e.qualifier.empty()) {
                    auto it = objs.find(e.text);
                    if (it != objs.end()) {
                        op.kind = DistOperand::Kind::Object;
                        op.index = it->second;
                        return op;
                    }
                }
                op.kind = DistOperand::Kind::Column;
                op.index = resolve_column(src, e.qualifier, e.text, e.pos);
                return op;
            }
            case ast::Expr::Kind::IntLiteral: op.literal = Value::integer(e.int_value); return op;
            case ast::Expr::Kind::FloatLiteral:
                op.literal = Value::floating(e.float_value);
                return op;
            case ast::Expr::Kind::StringLiteral: op.literal = Value::string(e.text); return op;
            case ast::Expr::Kind::Param: op.literal = param_value(e); return op;
            default: throw BindError("invalid distance operand", e.pos);
        }
    }

    ValueKind operand_kind(const DistOperand& op, const ExecSchema& src,
                           const std::vector<BoundObject>& objects) const {
        switch (op.kind) {
            case DistOperand::Kind::Column: return src.at(size_t(op.index)).vkind;
            case DistOperand::Kind::Object: return object_kind(objects[size_t(op.index)]);
            case DistOperand::Kind::Literal: return op.literal.kind();
        }
        return ValueKind::Null;
    }

    // DISTANCE(x, y): the function comes from the operands. Schema-declared
    // defaults win, then data-type defaults, then the identity fallback.
    BoundDistPtr bind_distance_apply(const ast::Expr& e, const ExecSchema& src,
                                     const ObjectAliases& objs,
                                     const std::vector<BoundObject>& objects) {
        DistOperand x = bind_operand(*e.children[0], src, objs);
        DistOperand y = bind_operand(*e.children[1], src, objs);

        const ExecColumn* xc =
            x.kind == DistOperand::Kind::Column ? &src.at(size_t(x.index)) : nullptr;
        const ExecColumn* yc =
            y.kind == DistOperand::Kind::Column ? &src.at(size_t(y.index)) : nullptr;
        std::optional<DistanceRef> ref;
        auto schema_default = [&](const ExecColumn* c) -> std::optional<DistanceRef> {
            if (c && c->origin_rel && c->origin_attr >= 0)
                return c->origin_rel->schema().at(size_t(c->origin_attr)).default_distance();
            return std::nullopt;
        };
        auto type_default = [&](const ExecColumn* c) -> std::optional<DistanceRef> {
            if (!c) return std::nullopt;
            if (const auto* type = cat_.find_data_type(c->type.name))
                if (type->default_distance) return DistanceRef{*type->default_distance, {}};
            return std::nullopt;
        };
        if (auto d = schema_default(xc))
            ref = d;
        else if (auto d2 = schema_default(yc))
            ref = d2;
        else if (auto d3 = type_default(xc))
            ref = d3;
        else if (auto d4 = type_default(yc))
            ref = d4;
        else
            ref = DistanceRef{"identity_distance", {}};

        return make_dist_call(e, src, objects, std::move(x), std::move(y), *ref);
    }

    BoundDistPtr bind_named_distance(const ast::Expr& e, const ExecSchema& src,
                                     const ObjectAliases& objs,
                                     const std::vector<BoundObject>& objects) {
        if (e.children.size() < 2)
            throw BindError("distance function '" + e.text + "' needs two operands", e.pos);
        DistOperand x = bind_operand(*e.children[0], src, objs);
        DistOperand y = bind_operand(*e.children[1], src, objs);
        DistanceRef ref;
        ref.function = e.text;
        for (size_t i = 2; i < e.children.size(); ++i)
            ref.args.push_back(numeric_const(*e.children[i]));
        return make_dist_call(e, src, objects, std::move(x), std::move(y), ref);
    }

    BoundDistPtr make_dist_call(const ast::Expr& e, const ExecSchema& src,
                                const std::vector<BoundObject>& objects, DistOperand x,
                                DistOperand y, DistanceRef ref) {
        const DistanceFunctionEntry& entry = cat_.require_distance(ref.function);
        if (ref.args.size() != entry.param_count)
            throw BindError("distance function '" + entry.name + "' expects " +
                                std::to_string(entry.param_count) + " argument(s), got " +
                                std::to_string(ref.args.size()),
                            e.pos);
        for (const DistOperand* op : {&x, &y}) {
            if (op->kind != DistOperand::Kind::Column) continue;
            const auto& c = src.at(size_t(op->index));
            if (!entry.accepts(c.type))
                throw BindError("distance function '" + entry.name +
                                    "' does not accept attribute '" + c.name + "' of type '" +
                                    c.type.name + "'",
                                e.pos);
        }
        ValueKind xk = operand_kind(x, src, objects), yk = operand_kind(y, src, objects);
        auto num = [](ValueKind k) {
            return k == ValueKind::Integer || k == ValueKind::Long || k == ValueKind::Float ||
                   k == ValueKind::Date;
        };
        if (xk != ValueKind::Null && yk != ValueKind::Null && xk != yk && !(num(xk) && num(yk)))
            throw BindError(std::string("distance operands of type '") + kind_type_name(xk) +
                                "' and '" + kind_type_name(yk) + "' are not compatible",
                            e.pos);

        const ExecColumn* corpus_col = nullptr;
        for (const DistOperand* op : {&x, &y})
            if (op->kind == DistOperand::Kind::Column && !corpus_col)
                corpus_col = &src.at(size_t(op->index));
        auto d = std::make_shared<BoundDist>();
        d->kind = BoundDist::Kind::DistCall;
        d->ref = std::move(ref);
        d->x = std::move(x);
        d->y = std::move(y);
        d->fn = cat_.bound_distance(
            entry, d->ref.args, corpus_col ? corpus_col->origin_rel : nullptr,
            corpus_col && corpus_col->origin_attr >= 0 ? size_t(corpus_col->origin_attr) : 0);
        return d;
    }

    // --- by-spec: pairwise methods ---------------------------------------------

    void bind_pair_by(const ast::Expr& e, PlanNode& n, const ObjectAliases& objs) {
        const ExecSchema& left = n.sources[0]->out;
        const ExecSchema& right = n.sources[1]->out;
        ExecSchema both = ExecSchema::concat(left, right);

        if (e.kind != ast::Expr::Kind::Call)
            throw BindError(
                "a pairwise search method needs a single distance call over one attribute "
                "from each source",
                e.pos);
        BoundDistPtr call = e.text == "DISTANCE" ? bind_distance_apply(e, both, objs, n.objects)
                                                 : bind_named_distance_checked(e, both, objs, n);
        if (call->kind != BoundDist::Kind::DistCall)
            throw BindError("a pairwise search method needs a plain distance call", e.pos);
        if (call->x.kind != DistOperand::Kind::Column ||
            call->y.kind != DistOperand::Kind::Column)
            throw BindError("pairwise distances take one attribute from each source", e.pos);

        int lw = int(left.size());
        bool x_left = call->x.index < lw, y_left = call->y.index < lw;
        if (x_left == y_left)
            throw BindError("pairwise distances take one attribute from each source", e.pos);

        n.by.form = BoundBySpec::Form::Pair;
        n.by.x_col = call->x.index;
        n.by.y_col = call->y.index;
        n.by.ref = call->ref;
        n.by.entry = &cat_.require_distance(call->ref.function);
        n.by.fn = call->fn;
        if (x_left) {
            n.by.left_col = call->x.index;
            n.by.right_col = call->y.index - lw;
        }
        n.by.display = n.by_display;
    }

    BoundDistPtr bind_named_distance_checked(const ast::Expr& e, const ExecSchema& src,
                                             const ObjectAliases& objs, PlanNode& n) {
        if (!cat_.find_distance(e.text))
            throw BindError(cat_.find_set_distance(e.text) || cat_.find_aggregated_distance(e.text)
                                ? "a pairwise search method needs a plain distance call"
                                : "unknown distance function '" + e.text + "'",
                            e.pos);
        return bind_named_distance(e, src, objs, n.objects);
    }

    // --- GROUP BY ---------------------------------------------------------------

    PlanPtr bind_group(const ast::SelectStmt& stmt, PlanPtr child, GroupCtx& gctx) {
        auto g = std::make_shared<PlanNode>();
        g->kind = PlanNode::Kind::Group;
        g->child = child;
        Env env{&child->out};

        gctx.active = true;
        for (const auto& key : stmt.group_by) {
            gctx.key_texts.push_back(ast::print(*key));
            g->keys.push_back(bind_value_plain(*key, env));
            ExecColumn c;
            if (g->keys.back()->kind == BoundExpr::Kind::Column) {
                c = child->out.at(size_t(g->keys.back()->column));
            } else {
                c.name = gctx.key_texts.back();
                c.vkind = g->keys.back()->vkind;
                c.type = DataTypeId{kind_type_name(c.vkind)};
            }
            g->out.columns.push_back(std::move(c));
        }
        gctx.n_keys = int(g->keys.size());

        // Every count(...) in the select list, HAVING, and ORDER BY becomes an
        // aggregate column; later binding finds them by their printed form.
        std::vector<const ast::Expr*> roots;
        for (const auto& item : stmt.items)
            if (!item.star) roots.push_back(item.expr.get());
        if (stmt.having) roots.push_back(stmt.having.get());
        for (const auto& key : stmt.order_by) roots.push_back(key.expr.get());
        for (const auto* r : roots) collect_aggs(*r, child->out, *g, gctx, env);
        return g;
    }

    // bind_value without the group-context interception, for the keys themselves.
    BoundExprPtr bind_value_plain(const ast::Expr& e, const Env& env) {
        return bind_value(e, Env{env.schema, env.aliases, nullptr});
    }

    void collect_aggs(const ast::Expr& e, const ExecSchema& src, PlanNode& g, GroupCtx& gctx,
                      const Env& env) {
        if (e.kind == ast::Expr::Kind::Call) {
            if (!ci_equal(e.text, "count"))
                throw BindError("unknown aggregate '" + e.text + "'", e.pos);
            if (e.children.size() != 1)
                throw BindError("count(...) takes one argument", e.pos);
            std::string text = to_lower(ast::print(e));
            if (gctx.agg_cols.count(text)) return;
            BoundExprPtr arg;
            if (e.children[0]->kind != ast::Expr::Kind::Star)
                arg = bind_value_plain(*e.children[0], env);
            int col = int(g.out.columns.size());
            gctx.agg_cols.emplace(text, col);
            g.agg_args.push_back(std::move(arg));
            ExecColumn c;
            c.name = ast::print(e);
            c.vkind = ValueKind::Long;
            c.type = DataTypeId{"long"};
            g.out.columns.push_back(std::move(c));
            return;
        }
        for (const auto& c : e.children) collect_aggs(*c, src, g, gctx, env);
    }

    // --- select items -------------------------------------------------------------

    void bind_select_items(const ast::SelectStmt& stmt, const ExecSchema& src, GroupCtx& gctx,
                           PlanNode& append, std::map<std::string, int, CiLess>& aliases,
                           size_t base_width) {
        Env env{&src, nullptr, gctx.active ? &gctx : nullptr};
        for (const auto& item : stmt.items) {
            if (item.star) {
                if (gctx.active)
                    throw BindError("SELECT * cannot be combined with GROUP BY", stmt.pos);
                for (size_t i = 0; i < src.size(); ++i) {
                    if (src.at(i).ckind != ColumnKind::Attr) continue;
                    append.exprs.push_back(make_column(src, int(i)));
                    append.out.columns.push_back(src.at(i));
                }
                continue;
            }
            BoundExprPtr e = bind_value(*item.expr, env);
            ExecColumn c;
            if (e->kind == BoundExpr::Kind::Column) {
                c = src.at(size_t(e->column));
                c.extra_qualifiers.clear();
            } else {
                c.vkind = e->vkind;
                c.type = DataTypeId{kind_type_name(c.vkind)};
            }
            if (!item.alias.empty()) {
                c.name = item.alias;
                c.qualifier.clear();
                int idx = int(append.out.columns.size());
                if (!aliases.emplace(item.alias, idx).second)
                    throw BindError("duplicate column alias '" + item.alias + "'",
                                    item.expr->pos);
            } else if (e->kind != BoundExpr::Kind::Column) {
                c.name = ast::print(*item.expr);
            }
            append.exprs.push_back(std::move(e));
            append.out.columns.push_back(std::move(c));
        }
        if (append.out.columns.size() == base_width)
            throw BindError("empty select list", stmt.pos);
    }
};

}  // namespace simseql

#endif
