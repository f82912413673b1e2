#ifndef SIMSEQL_PARSER_HPP
#define SIMSEQL_PARSER_HPP

#include <charconv>
#include <memory>
#include <string>
#include <string_view>

#include "ast.hpp"
#include "token.hpp"

namespace simseql {

// Recursive-descent parser for a single SELECT statement. Precedence, loosest
// to tightest: OR, AND, NOT, comparison/IN (non-associative), +, *, unary -.
class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    ast::SelectStmt parse_statement() {
        ast::SelectStmt s = parse_select();
        accept_punct(";");
        if (!cur().is_end()) fail("unexpected trailing input");
        return s;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token& peek(size_t k = 0) const {
        size_t i = pos_ + k;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& cur() const { return peek(0); }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool accept_punct(std::string_view p) {
        if (!cur().is_punct(p)) return false;
        take();
        return true;
    }
    bool accept_keyword(std::string_view kw) {
        if (!cur().is_keyword(kw)) return false;
        take();
        return true;
    }
    void expect_punct(std::string_view p) {
        if (!accept_punct(p)) fail("expected '" + std::string(p) + "', found " + cur().describe());
    }
    void expect_keyword(std::string_view kw) {
        if (!accept_keyword(kw))
            fail("expected " + std::string(kw) + ", found " + cur().describe());
    }
    std::string expect_ident(const char* what) {
        if (cur().type != TokenType::Ident)
            fail("expected " + std::string(what) + ", found " + cur().describe());
        return take().text;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur().pos); }

    static ast::ExprPtr make(ast::Expr::Kind kind, SourcePos pos) {
        auto e = std::make_shared<ast::Expr>();
        e->kind = kind;
        e->pos = pos;
        return e;
    }

    int64_t parse_int(const char* what) {
        if (cur().type != TokenType::Number || cur().text.find('.') != std::string::npos)
            fail("expected integer " + std::string(what) + ", found " + cur().describe());
        Token t = take();
        int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            throw ParseError("number out of range", t.pos);
        return v;
    }

    ast::ExprPtr number_literal(const Token& t, bool negative) {
        auto e = make(ast::Expr::Kind::IntLiteral, t.pos);
        if (t.text.find('.') == std::string::npos) {
            int64_t v = 0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc() || p != t.text.data() + t.text.size())
                throw ParseError("number out of range", t.pos);
            e->int_value = negative ? -v : v;
        } else {
            double v = 0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc() || p != t.text.data() + t.text.size())
                throw ParseError("malformed number", t.pos);
            e->kind = ast::Expr::Kind::FloatLiteral;
            e->float_value = negative ? -v : v;
        }
        return e;
    }

    // --- statements -------------------------------------------------------

    ast::SelectStmt parse_select() {
        ast::SelectStmt s;
        s.pos = cur().pos;
        expect_keyword("SELECT");
        if (accept_keyword("TOP")) {
            SourcePos np = cur().pos;
            int64_t n = parse_int("after TOP");
            if (n < 1) throw ParseError("TOP n requires n >= 1", np);
            s.top = n;
        } else if (accept_keyword("ALL")) {
            s.top_all = true;
        }
        if (accept_keyword("DISTINCT")) s.distinct = true;
        do {
            ast::SelectItem item;
            if (cur().is_punct("*")) {
                take();
                item.star = true;
            } else {
                item.expr = parse_expr();
                if (accept_keyword("AS")) item.alias = expect_ident("alias after AS");
            }
            s.items.push_back(std::move(item));
        } while (accept_punct(","));
        expect_keyword("FROM");
        do {
            s.from.push_back(std::make_shared<ast::FromItem>(parse_from_item()));
        } while (accept_punct(","));
        if (accept_keyword("WHERE")) s.where = parse_expr();
        if (accept_keyword("GROUP")) {
            expect_keyword("BY");
            do {
                s.group_by.push_back(parse_expr());
            } while (accept_punct(","));
        }
        if (accept_keyword("HAVING")) s.having = parse_expr();
        if (accept_keyword("ORDER")) {
            expect_keyword("BY");
            do {
                ast::OrderKey key;
                key.expr = parse_expr();
                if (accept_keyword("DESC"))
                    key.desc = true;
                else
                    accept_keyword("ASC");
                s.order_by.push_back(std::move(key));
            } while (accept_punct(","));
        }
        return s;
    }

    // --- from items -------------------------------------------------------

    ast::FromItem parse_from_item() {
        ast::FromItem left = parse_from_primary();
        for (;;) {
            ast::JoinKind join;
            if (accept_keyword("INNER")) {
                expect_keyword("JOIN");
                join = ast::JoinKind::Inner;
            } else if (accept_keyword("NATURAL")) {
                expect_keyword("JOIN");
                join = ast::JoinKind::Natural;
            } else {
                break;
            }
            ast::FromItem node;
            node.kind = ast::FromItem::Kind::Join;
            node.join = join;
            node.pos = left.pos;
            node.left = std::make_shared<ast::FromItem>(std::move(left));
            node.right = std::make_shared<ast::FromItem>(parse_from_primary());
            if (join == ast::JoinKind::Inner) {
                expect_keyword("ON");
                node.on = parse_expr();
            }
            left = std::move(node);
        }
        return left;
    }

    ast::FromItem parse_from_primary() {
        ast::FromItem f;
        f.pos = cur().pos;
        if (cur().is_keyword("SIMSEARCH")) {
            f.kind = ast::FromItem::Kind::Sim;
            f.sim = std::make_shared<ast::SimSearch>(parse_simsearch());
            return f;
        }
        if (cur().is_punct("(")) {
            take();
            f.kind = ast::FromItem::Kind::Subquery;
            f.subquery = std::make_shared<ast::SelectStmt>(parse_select());
            expect_punct(")");
            if (accept_keyword("AS")) f.alias = expect_ident("alias after AS");
            return f;
        }
        f.kind = ast::FromItem::Kind::Relation;
        f.relation = expect_ident("relation name");
        if (accept_keyword("AS")) f.alias = expect_ident("alias after AS");
        return f;
    }

    ast::SimSearch parse_simsearch() {
        ast::SimSearch s;
        s.pos = cur().pos;
        expect_keyword("SIMSEARCH");
        if (!cur().is_keyword("IN")) {
            // Additive level, not full boolean: the IN keyword closes the
            // object list rather than starting a membership test.
            do {
                ast::QueryObject obj;
                obj.expr = parse_add();
                if (accept_keyword("AS")) obj.alias = expect_ident("alias after AS");
                s.objects.push_back(std::move(obj));
            } while (accept_punct(","));
        }
        expect_keyword("IN");
        do {
            s.sources.push_back(std::make_shared<ast::FromItem>(parse_from_item()));
        } while (accept_punct(","));
        expect_keyword("BY");
        s.by = parse_by_spec();
        if (accept_keyword("METHOD")) {
            ast::MethodCallAst m;
            m.pos = cur().pos;
            m.name = expect_ident("method name");
            if (cur().is_punct("(")) m.args = parse_call_args();
            s.method = std::move(m);
        }
        if (accept_keyword("AS")) s.alias = expect_ident("alias after AS");
        return s;
    }

    ast::BySpec parse_by_spec() {
        ast::BySpec by;
        by.pos = cur().pos;
        ast::ExprPtr expr = parse_expr();
        bool plain_attr = expr->kind == ast::Expr::Kind::ColumnRef;
        if (cur().is_keyword("DISTANCE") && peek(1).is_keyword("FUNCTION")) {
            if (!plain_attr)
                fail("DISTANCE FUNCTION must follow a plain attribute reference");
            take();
            take();
            by.kind = ast::BySpec::Kind::AttrNamed;
            by.qualifier = expr->qualifier;
            by.attr = expr->text;
            by.function = expect_ident("distance function name");
            if (cur().is_punct("(")) by.function_args = parse_call_args();
            return by;
        }
        if (plain_attr) {
            by.kind = ast::BySpec::Kind::AttrDefault;
            by.qualifier = expr->qualifier;
            by.attr = expr->text;
            return by;
        }
        by.kind = ast::BySpec::Kind::Expression;
        by.expr = std::move(expr);
        return by;
    }

    // --- expressions ------------------------------------------------------

    ast::ExprPtr parse_expr() { return parse_or(); }

    ast::ExprPtr binary(ast::BinOp op, ast::ExprPtr l, ast::ExprPtr r) {
        auto e = make(ast::Expr::Kind::Binary, l->pos);
        e->op = op;
        e->children = {std::move(l), std::move(r)};
        return e;
    }

    ast::ExprPtr parse_or() {
        ast::ExprPtr l = parse_and();
        while (accept_keyword("OR")) l = binary(ast::BinOp::Or, std::move(l), parse_and());
        return l;
    }

    ast::ExprPtr parse_and() {
        ast::ExprPtr l = parse_not();
        while (accept_keyword("AND")) l = binary(ast::BinOp::And, std::move(l), parse_not());
        return l;
    }

    ast::ExprPtr parse_not() {
        if (cur().is_keyword("NOT")) {
            SourcePos pos = take().pos;
            auto e = make(ast::Expr::Kind::Not, pos);
            e->children.push_back(parse_not());
            return e;
        }
        return parse_cmp();
    }

    ast::ExprPtr parse_cmp() {
        ast::ExprPtr l = parse_add();
        static constexpr std::pair<std::string_view, ast::BinOp> ops[] = {
            {"=", ast::BinOp::Eq},  {"<>", ast::BinOp::Ne}, {"<=", ast::BinOp::Le},
            {">=", ast::BinOp::Ge}, {"<", ast::BinOp::Lt},  {">", ast::BinOp::Gt}};
        for (auto [text, op] : ops)
            if (cur().is_punct(text)) {
                take();
                return binary(op, std::move(l), parse_add());
            }
        if (cur().is_keyword("IN")) {
            SourcePos pos = take().pos;
            expect_punct("(");
            auto e = make(ast::Expr::Kind::InSubquery, pos);
            e->children.push_back(std::move(l));
            e->subquery = std::make_shared<ast::SelectStmt>(parse_select());
            expect_punct(")");
            return e;
        }
        return l;
    }

    ast::ExprPtr parse_add() {
        ast::ExprPtr l = parse_mul();
        while (accept_punct("+")) l = binary(ast::BinOp::Add, std::move(l), parse_mul());
        return l;
    }

    ast::ExprPtr parse_mul() {
        ast::ExprPtr l = parse_unary();
        while (accept_punct("*")) l = binary(ast::BinOp::Mul, std::move(l), parse_unary());
        return l;
    }

    ast::ExprPtr parse_unary() {
        if (cur().is_punct("-")) {
            take();
            if (cur().type != TokenType::Number)
                fail("expected number after '-', found " + cur().describe());
            return number_literal(take(), true);
        }
        return parse_primary();
    }

    ast::ExprPtr parse_primary() {
        const Token& t = cur();
        switch (t.type) {
            case TokenType::Number: return number_literal(take(), false);
            case TokenType::String: {
                auto e = make(ast::Expr::Kind::StringLiteral, t.pos);
                e->text = take().text;
                return e;
            }
            case TokenType::Param: {
                auto e = make(ast::Expr::Kind::Param, t.pos);
                e->text = take().text;
                return e;
            }
            case TokenType::Keyword:
                if (t.text == "DISTANCE") {
                    SourcePos pos = take().pos;
                    if (cur().is_punct("(")) {
                        auto e = make(ast::Expr::Kind::Call, pos);
                        e->text = "DISTANCE";
                        e->children = parse_call_args();
                        if (e->children.size() != 2)
                            throw ParseError("DISTANCE takes exactly two arguments", pos);
                        return e;
                    }
                    auto e = make(ast::Expr::Kind::DistanceRef, pos);
                    return e;
                }
                fail("expected expression, found " + t.describe());
            case TokenType::Ident: {
                std::string name = take().text;
                SourcePos pos = t.pos;
                if (accept_punct(".")) {
                    if (cur().is_keyword("DISTANCE")) {
                        take();
                        auto e = make(ast::Expr::Kind::DistanceRef, pos);
                        e->qualifier = std::move(name);
                        return e;
                    }
                    auto e = make(ast::Expr::Kind::ColumnRef, pos);
                    e->qualifier = std::move(name);
                    e->text = expect_ident("attribute name after '.'");
                    return e;
                }
                if (cur().is_punct("(")) {
                    auto e = make(ast::Expr::Kind::Call, pos);
                    e->text = std::move(name);
                    e->children = parse_call_args();
                    return e;
                }
                auto e = make(ast::Expr::Kind::ColumnRef, pos);
                e->text = std::move(name);
                return e;
            }
            case TokenType::Punct:
                if (t.text == "(") {
                    take();
                    if (cur().is_keyword("SELECT")) {
                        auto e = make(ast::Expr::Kind::Subquery, t.pos);
                        e->subquery = std::make_shared<ast::SelectStmt>(parse_select());
                        expect_punct(")");
                        return e;
                    }
                    ast::ExprPtr first = parse_expr();
                    if (accept_punct(",")) {
                        auto e = make(ast::Expr::Kind::Pair, t.pos);
                        e->children.push_back(std::move(first));
                        e->children.push_back(parse_expr());
                        expect_punct(")");
                        return e;
                    }
                    expect_punct(")");
                    return first;
                }
                [[fallthrough]];
            default: fail("expected expression, found " + t.describe());
        }
    }

    std::vector<ast::ExprPtr> parse_call_args() {
        expect_punct("(");
        std::vector<ast::ExprPtr> args;
        if (accept_punct(")")) return args;
        do {
            if (cur().is_punct("*")) {
                args.push_back(make(ast::Expr::Kind::Star, take().pos));
            } else {
                args.push_back(parse_expr());
            }
        } while (accept_punct(","));
        expect_punct(")");
        return args;
    }
};

inline ast::SelectStmt parse_query(std::string_view text) {
    return Parser(text).parse_statement();
}

}  // namespace simseql

#endif
