#ifndef SIMSEQL_TOKEN_HPP
#define SIMSEQL_TOKEN_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"

namespace simseql {

enum class TokenType { End, Ident, Keyword, Number, String, Param, Punct };

struct Token {
    TokenType type = TokenType::End;
    std::string text;  // keywords normalized to upper case, punct verbatim
    SourcePos pos;

    bool is_keyword(std::string_view kw) const {
        return type == TokenType::Keyword && text == kw;
    }
    bool is_punct(std::string_view p) const { return type == TokenType::Punct && text == p; }
    bool is_end() const { return type == TokenType::End; }

    std::string describe() const {
        switch (type) {
            case TokenType::End: return "end of input";
            case TokenType::String: return "string literal";
            default: return "'" + text + "'";
        }
    }
};

inline bool is_reserved_word(std::string_view up) {
    static constexpr std::array<std::string_view, 25> kw = {
        "SELECT", "TOP",  "ALL",    "DISTINCT", "FROM",      "WHERE", "GROUP", "BY",
        "HAVING", "ORDER", "ASC",   "DESC",     "SIMSEARCH", "IN",    "AS",    "METHOD",
        "DISTANCE", "FUNCTION", "INNER", "JOIN", "NATURAL",  "ON",    "AND",   "OR", "NOT"};
    for (auto k : kw)
        if (k == up) return true;
    return up == "OR" || up == "NOT";
}

// Splits query text into tokens. Comments (/* */ and -- to end of line) and
// whitespace disappear; keywords are case-insensitive.
inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto pos_here = [&] { return SourcePos{line, col}; };
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    auto is_ident_start = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    };
    auto is_ident_char = [&](char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            SourcePos start = pos_here();
            advance(2);
            while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
            if (i + 1 >= src.size()) throw ParseError("unterminated comment", start);
            advance(2);
            continue;
        }
        if (c == '\'') {
            SourcePos start = pos_here();
            advance(1);
            std::string text;
            bool closed = false;
            while (i < src.size()) {
                if (src[i] == '\'') {
                    if (i + 1 < src.size() && src[i + 1] == '\'') {
                        text.push_back('\'');
                        advance(2);
                        continue;
                    }
                    advance(1);
                    closed = true;
                    break;
                }
                text.push_back(src[i]);
                advance(1);
            }
            if (!closed) throw ParseError("unterminated string literal", start);
            out.push_back({TokenType::String, std::move(text), start});
            continue;
        }
        if (c >= '0' && c <= '9') {
            SourcePos start = pos_here();
            std::string text;
            bool dot = false;
            while (i < src.size() &&
                   ((src[i] >= '0' && src[i] <= '9') || (src[i] == '.' && !dot))) {
                // A dot must be followed by a digit, else it is a qualifier dot.
                if (src[i] == '.') {
                    if (i + 1 >= src.size() || src[i + 1] < '0' || src[i + 1] > '9') break;
                    dot = true;
                }
                text.push_back(src[i]);
                advance(1);
            }
            out.push_back({TokenType::Number, std::move(text), start});
            continue;
        }
        if (is_ident_start(c)) {
            SourcePos start = pos_here();
            std::string text;
            while (i < src.size() && is_ident_char(src[i])) {
                text.push_back(src[i]);
                advance(1);
            }
            std::string up;
            up.reserve(text.size());
            for (char ch : text) up.push_back(char(ch >= 'a' && ch <= 'z' ? ch - 'a' + 'A' : ch));
            if (is_reserved_word(up))
                out.push_back({TokenType::Keyword, std::move(up), start});
            else
                out.push_back({TokenType::Ident, std::move(text), start});
            continue;
        }
        if (c == ':') {
            SourcePos start = pos_here();
            advance(1);
            if (i >= src.size() || !is_ident_start(src[i]))
                throw ParseError("expected parameter name after ':'", start);
            std::string text;
            while (i < src.size() && is_ident_char(src[i])) {
                text.push_back(src[i]);
                advance(1);
            }
            out.push_back({TokenType::Param, std::move(text), start});
            continue;
        }
        SourcePos start = pos_here();
        if ((c == '<' && i + 1 < src.size() && (src[i + 1] == '=' || src[i + 1] == '>')) ||
            (c == '>' && i + 1 < src.size() && src[i + 1] == '=')) {
            out.push_back({TokenType::Punct, std::string(src.substr(i, 2)), start});
            advance(2);
            continue;
        }
        if (std::string_view("(),.;*+=<>-\\").find(c) != std::string_view::npos) {
            out.push_back({TokenType::Punct, std::string(1, c), start});
            advance(1);
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({TokenType::End, "", pos_here()});
    return out;
}

}  // namespace simseql

#endif
