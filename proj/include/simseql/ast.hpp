#ifndef SIMSEQL_AST_HPP
#define SIMSEQL_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace simseql::ast {

struct SelectStmt;
struct FromItem;

enum class BinOp { Eq, Ne, Lt, Le, Gt, Ge, And, Or, Add, Mul };

inline const char* bin_op_text(BinOp op) {
    switch (op) {
        case BinOp::Eq: return "=";
        case BinOp::Ne: return "<>";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::And: return "AND";
        case BinOp::Or: return "OR";
        case BinOp::Add: return "+";
        case BinOp::Mul: return "*";
    }
    return "?";
}

struct Expr {
    enum class Kind {
        IntLiteral,
        FloatLiteral,
        StringLiteral,
        Param,
        ColumnRef,    // [qualifier.]name; also covers rank columns (plain idents)
        DistanceRef,  // [qualifier.]DISTANCE
        Call,         // name(args); children are the arguments
        Binary,
        Not,
        InSubquery,  // children[0] IN (subquery)
        Subquery,    // scalar/object-producing subquery
        Pair,        // (children[0], children[1])
        Star,        // '*' as an aggregate argument, count(*)
    };
    Kind kind;
    int64_t int_value = 0;
    double float_value = 0;
    std::string text;  // literal text / param / call or column name
    std::string qualifier;
    BinOp op = BinOp::Eq;
    std::vector<std::shared_ptr<Expr>> children;
    std::shared_ptr<SelectStmt> subquery;
    SourcePos pos;
};

using ExprPtr = std::shared_ptr<Expr>;

struct OrderKey {
    ExprPtr expr;
    bool desc = false;
};

struct MethodCallAst {
    std::string name;
    std::vector<ExprPtr> args;
    SourcePos pos;
};

struct BySpec {
    enum class Kind { AttrDefault, AttrNamed, Expression };
    Kind kind = Kind::AttrDefault;
    std::string qualifier;  // attribute forms
    std::string attr;
    std::string function;  // AttrNamed
    std::vector<ExprPtr> function_args;
    ExprPtr expr;  // Expression
    SourcePos pos;
};

struct QueryObject {
    ExprPtr expr;
    std::string alias;
};

struct SimSearch {
    std::vector<QueryObject> objects;
    std::vector<std::shared_ptr<FromItem>> sources;
    BySpec by;
    std::optional<MethodCallAst> method;
    std::string alias;
    SourcePos pos;
};

enum class JoinKind { Inner, Natural };

struct FromItem {
    enum class Kind { Relation, Subquery, Sim, Join };
    Kind kind = Kind::Relation;
    std::string relation;
    std::string alias;
    std::shared_ptr<SelectStmt> subquery;
    std::shared_ptr<SimSearch> sim;
    std::shared_ptr<FromItem> left, right;
    JoinKind join = JoinKind::Inner;
    ExprPtr on;
    SourcePos pos;
};

struct SelectItem {
    bool star = false;
    ExprPtr expr;
    std::string alias;
};

struct SelectStmt {
    std::optional<int64_t> top;
    bool top_all = false;  // SELECT ALL ...: explicit no-truncation
    bool distinct = false;
    std::vector<SelectItem> items;
    std::vector<std::shared_ptr<FromItem>> from;
    ExprPtr where;
    std::vector<ExprPtr> group_by;
    ExprPtr having;
    std::vector<OrderKey> order_by;
    SourcePos pos;
};

// ---------------------------------------------------------------------------
// Canonical printer. parse(print(ast)) reproduces the tree; parentheses are
// emitted wherever reparsing under precedence would otherwise reshape it.

namespace detail {

inline int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary:
            switch (e.op) {
                case BinOp::Or: return 1;
                case BinOp::And: return 2;
                case BinOp::Add: return 5;
                case BinOp::Mul: return 6;
                default: return 4;  // comparisons
            }
        case Expr::Kind::Not: return 3;
        case Expr::Kind::InSubquery: return 4;
        default: return 7;
    }
}

}  // namespace detail

inline std::string print(const SelectStmt& s);

inline std::string quote_string(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "''";
        out.push_back(c);
    }
    out += "'";
    return out;
}

inline std::string print(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::IntLiteral: return std::to_string(e.int_value);
        case K::FloatLiteral: return format_double(e.float_value);
        case K::StringLiteral: return quote_string(e.text);
        case K::Param: return ":" + e.text;
        case K::ColumnRef: return e.qualifier.empty() ? e.text : e.qualifier + "." + e.text;
        case K::DistanceRef:
            return e.qualifier.empty() ? "DISTANCE" : e.qualifier + ".DISTANCE";
        case K::Call: {
            std::string out = e.text + "(";
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += ", ";
                out += print(*e.children[i]);
            }
            return out + ")";
        }
        case K::Binary: {
            int p = detail::precedence(e);
            const Expr& l = *e.children[0];
            const Expr& r = *e.children[1];
            std::string ls = print(l), rs = print(r);
            if (detail::precedence(l) < p) ls = "(" + ls + ")";
            if (detail::precedence(r) <= p) rs = "(" + rs + ")";
            return ls + " " + bin_op_text(e.op) + " " + rs;
        }
        case K::Not: {
            const Expr& c = *e.children[0];
            std::string cs = print(c);
            if (detail::precedence(c) < detail::precedence(e)) cs = "(" + cs + ")";
            return "NOT " + cs;
        }
        case K::InSubquery: {
            const Expr& c = *e.children[0];
            std::string cs = print(c);
            if (detail::precedence(c) <= detail::precedence(e)) cs = "(" + cs + ")";
            return cs + " IN (" + print(*e.subquery) + ")";
        }
        case K::Subquery: return "(" + print(*e.subquery) + ")";
        case K::Pair: return "(" + print(*e.children[0]) + ", " + print(*e.children[1]) + ")";
        case K::Star: return "*";
    }
    return "?";
}

inline std::string print(const BySpec& b) {
    switch (b.kind) {
        case BySpec::Kind::AttrDefault:
            return b.qualifier.empty() ? b.attr : b.qualifier + "." + b.attr;
        case BySpec::Kind::AttrNamed: {
            std::string out = (b.qualifier.empty() ? b.attr : b.qualifier + "." + b.attr) +
                              " DISTANCE FUNCTION " + b.function;
            if (!b.function_args.empty()) {
                out += "(";
                for (size_t i = 0; i < b.function_args.size(); ++i) {
                    if (i) out += ", ";
                    out += print(*b.function_args[i]);
                }
                out += ")";
            }
            return out;
        }
        case BySpec::Kind::Expression: return print(*b.expr);
    }
    return "?";
}

inline std::string print(const FromItem& f);

inline std::string print(const SimSearch& s) {
    std::string out = "SIMSEARCH";
    for (size_t i = 0; i < s.objects.size(); ++i) {
        out += i ? ", " : " ";
        out += print(*s.objects[i].expr);
        if (!s.objects[i].alias.empty()) out += " AS " + s.objects[i].alias;
    }
    out += " IN ";
    for (size_t i = 0; i < s.sources.size(); ++i) {
        if (i) out += ", ";
        out += print(*s.sources[i]);
    }
    out += " BY " + print(s.by);
    if (s.method) {
        out += " METHOD " + s.method->name + "(";
        for (size_t i = 0; i < s.method->args.size(); ++i) {
            if (i) out += ", ";
            out += print(*s.method->args[i]);
        }
        out += ")";
    }
    if (!s.alias.empty()) out += " AS " + s.alias;
    return out;
}

inline std::string print(const FromItem& f) {
    switch (f.kind) {
        case FromItem::Kind::Relation:
            return f.alias.empty() ? f.relation : f.relation + " AS " + f.alias;
        case FromItem::Kind::Subquery: {
            std::string out = "(" + print(*f.subquery) + ")";
            if (!f.alias.empty()) out += " AS " + f.alias;
            return out;
        }
        case FromItem::Kind::Sim: return print(*f.sim);
        case FromItem::Kind::Join: {
            std::string out = print(*f.left);
            if (f.join == JoinKind::Inner)
                out += " INNER JOIN " + print(*f.right) + " ON (" + print(*f.on) + ")";
            else
                out += " NATURAL JOIN " + print(*f.right);
            return out;
        }
    }
    return "?";
}

inline std::string print(const SelectStmt& s) {
    std::string out = "SELECT ";
    if (s.top) out += "TOP " + std::to_string(*s.top) + " ";
    if (s.top_all) out += "ALL ";
    if (s.distinct) out += "DISTINCT ";
    for (size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += ", ";
        const auto& it = s.items[i];
        out += it.star ? "*" : print(*it.expr);
        if (!it.alias.empty()) out += " AS " + it.alias;
    }
    out += " FROM ";
    for (size_t i = 0; i < s.from.size(); ++i) {
        if (i) out += ", ";
        out += print(*s.from[i]);
    }
    if (s.where) out += " WHERE " + print(*s.where);
    if (!s.group_by.empty()) {
        out += " GROUP BY ";
        for (size_t i = 0; i < s.group_by.size(); ++i) {
            if (i) out += ", ";
            out += print(*s.group_by[i]);
        }
    }
    if (s.having) out += " HAVING " + print(*s.having);
    if (!s.order_by.empty()) {
        out += " ORDER BY ";
        for (size_t i = 0; i < s.order_by.size(); ++i) {
            if (i) out += ", ";
            out += print(*s.order_by[i].expr);
            if (s.order_by[i].desc) out += " DESC";
        }
    }
    return out;
}

}  // namespace simseql::ast

#endif
