#ifndef SIMSEQL_SESSION_HPP
#define SIMSEQL_SESSION_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "builtins.hpp"
#include "dataio.hpp"
#include "engine.hpp"

// Interactive and batch front end. Statements terminate at ';'; backslash
// directives are line-oriented. Word directives (CREATE, LOAD, SAVE, RESTORE,
// EXPLAIN) share the statement form; everything else is a query.

namespace simseql {

enum class OutputMode { Table, Tsv, Records };

inline std::optional<OutputMode> parse_output_mode(std::string_view s) {
    if (ci_equal(s, "table")) return OutputMode::Table;
    if (ci_equal(s, "tsv")) return OutputMode::Tsv;
    if (ci_equal(s, "records")) return OutputMode::Records;
    return std::nullopt;
}

// --- result rendering -------------------------------------------------------

inline std::string render_result_cell(const ExecColumn& c, const Value& v) {
    if (v.is_null()) return "";
    if (c.ckind == ColumnKind::Distance) return format_distance(v.as_float());
    switch (v.kind()) {
        case ValueKind::Integer:
        case ValueKind::Long: return std::to_string(v.as_int());
        case ValueKind::Float: return format_double(v.as_float());
        case ValueKind::Date: return format_date(v.as_int());
        case ValueKind::String: return v.as_string();
        case ValueKind::NumberVector: return render_vector(v.as_vector());
        case ValueKind::ImageRasterKind: {
            const auto& img = v.as_raster();
            return "<image " + std::to_string(img.width) + "x" + std::to_string(img.height) + ">";
        }
        case ValueKind::Null: break;
    }
    return "";
}

inline std::string render_result(const ExecTable& t, OutputMode mode) {
    const size_t ncols = t.schema.size();
    std::string out;

    if (mode == OutputMode::Tsv) {
        // Mirrors the relation file layout so scalar results reload via LOAD.
        for (size_t c = 0; c < ncols; ++c) {
            if (c) out += '\t';
            out += t.schema.at(c).name;
        }
        out += '\n';
        for (size_t c = 0; c < ncols; ++c) {
            if (c) out += '\t';
            out += t.schema.at(c).type.name;
        }
        out += '\n';
        for (const auto& row : t.rows) {
            for (size_t c = 0; c < ncols; ++c) {
                if (c) out += '\t';
                out += render_result_cell(t.schema.at(c), row[c]);
            }
            out += '\n';
        }
        return out;
    }

    std::vector<std::vector<std::string>> cells;
    cells.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        std::vector<std::string> line(ncols);
        for (size_t c = 0; c < ncols; ++c) line[c] = render_result_cell(t.schema.at(c), row[c]);
        cells.push_back(std::move(line));
    }

    auto footer = [&] {
        return "(" + std::to_string(t.rows.size()) + (t.rows.size() == 1 ? " row)" : " rows)") +
               "\n";
    };

    if (mode == OutputMode::Records) {
        size_t w = 0;
        for (size_t c = 0; c < ncols; ++c) w = std::max(w, t.schema.at(c).name.size());
        for (size_t r = 0; r < cells.size(); ++r) {
            out += "-[ RECORD " + std::to_string(r + 1) + " ]-\n";
            for (size_t c = 0; c < ncols; ++c) {
                out += t.schema.at(c).name;
                out.append(w - t.schema.at(c).name.size(), ' ');
                out += " | " + cells[r][c] + "\n";
            }
        }
        out += footer();
        return out;
    }

    std::vector<size_t> width(ncols);
    for (size_t c = 0; c < ncols; ++c) width[c] = t.schema.at(c).name.size();
    for (const auto& line : cells)
        for (size_t c = 0; c < ncols; ++c) width[c] = std::max(width[c], line[c].size());

    auto pad_row = [&](const std::vector<std::string>& line) {
        std::string s;
        for (size_t c = 0; c < ncols; ++c) {
            if (c) s += " | ";
            s += line[c];
            if (c + 1 < ncols) s.append(width[c] - line[c].size(), ' ');
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s + "\n";
    };

    std::vector<std::string> header(ncols);
    for (size_t c = 0; c < ncols; ++c) header[c] = t.schema.at(c).name;
    out += pad_row(header);
    for (size_t c = 0; c < ncols; ++c) {
        if (c) out += "-+-";
        out.append(width[c], '-');
    }
    out += '\n';
    for (const auto& line : cells) out += pad_row(line);
    out += footer();
    return out;
}

// --- statement splitting ------------------------------------------------------

// Index just past the terminating ';' of the first complete statement, or
// npos. Quotes and both comment forms hide semicolons.
inline size_t statement_end(std::string_view s) {
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '\'') {
            ++i;
            while (i < s.size()) {
                if (s[i] == '\'') {
                    if (i + 1 < s.size() && s[i + 1] == '\'') {
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                ++i;
            }
            continue;
        }
        if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
            i += 2;
            while (i + 1 < s.size() && !(s[i] == '*' && s[i + 1] == '/')) ++i;
            i = std::min(i + 2, s.size());
            continue;
        }
        if (c == ';') return i + 1;
        ++i;
    }
    return std::string_view::npos;
}

struct ScriptUnit {
    std::string text;
    int line = 1;
    int column = 1;
    bool directive = false;  // backslash line
};

inline std::vector<ScriptUnit> split_script(std::string_view src) {
    std::vector<ScriptUnit> units;
    size_t i = 0;
    int line = 1, column = 1;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            size_t j = src.find('\n', i);
            advance((j == std::string_view::npos ? src.size() : j) - i);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            size_t j = src.find("*/", i + 2);
            advance((j == std::string_view::npos ? src.size() : j + 2) - i);
            continue;
        }
        if (c == '\\') {
            size_t j = src.find('\n', i);
            size_t end = j == std::string_view::npos ? src.size() : j;
            std::string text(src.substr(i, end - i));
            while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.pop_back();
            units.push_back({std::move(text), line, column, true});
            advance(end - i);
            continue;
        }
        size_t rel = statement_end(src.substr(i));
        size_t len = rel == std::string_view::npos ? src.size() - i : rel;
        std::string text(src.substr(i, len));
        if (rel != std::string_view::npos) text.pop_back();  // the ';'
        units.push_back({std::move(text), line, column, false});
        advance(len);
    }
    return units;
}

inline std::string message_without_pos(const Error& e) {
    std::string m = e.what();
    if (e.pos().line > 0) {
        size_t k = m.rfind(" (at line ");
        if (k != std::string::npos) m.erase(k);
    }
    return m;
}

// --- session -----------------------------------------------------------------------

struct SessionConfig {
    OutputMode output = OutputMode::Table;
    bool explain_all = false;
    std::filesystem::path data_dir = ".";
    uint64_t seed = 1234;
};

class Session {
public:
    explicit Session(SessionConfig cfg = {}) : cfg_(std::move(cfg)) {
        cat_.set_seed(cfg_.seed);
        bootstrap_catalog(cat_);
    }

    Catalog& catalog() { return cat_; }
    ParamBinding& params() { return params_; }
    SessionConfig& config() { return cfg_; }

    // One ';'-terminated statement (terminator already stripped).
    void execute_statement(const std::string& text, std::ostream& out, std::ostream& err) {
        auto toks = lex(text);
        if (toks.empty() || toks[0].is_end()) return;
        const Token& t0 = toks[0];
        if (t0.type == TokenType::Ident) {
            if (ci_equal(t0.text, "CREATE")) return exec_create(toks);
            if (ci_equal(t0.text, "LOAD")) return exec_load(toks);
            if (ci_equal(t0.text, "SAVE")) return exec_save(toks);
            if (ci_equal(t0.text, "RESTORE")) return exec_restore(toks);
            if (ci_equal(t0.text, "EXPLAIN")) {
                // Blank the leading word so error positions still match the text.
                std::string rest = text;
                for (size_t k = 0; k < rest.size() && k < t0.text.size(); ++k) rest[k] = ' ';
                Engine eng(cat_);
                out << eng.explain(rest, params_);
                return;
            }
        }
        Engine eng(cat_);
        if (cfg_.explain_all) out << eng.explain(text, params_);
        QueryResult res = eng.run(text, params_);
        for (const auto& n : res.notices) err << n << "\n";
        out << render_result(res.table, cfg_.output);
    }

    // One backslash directive line. Returns false when the session should end.
    bool execute_directive(const std::string& raw, std::ostream& out) {
        std::string_view line = raw;
        size_t i = 1;  // past the backslash
        std::string word;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') word.push_back(line[i++]);
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::string_view rest = line.substr(i);

        if (ci_equal(word, "q") || ci_equal(word, "quit")) return false;
        if (ci_equal(word, "set")) {
            directive_set(rest);
            return true;
        }
        if (ci_equal(word, "list")) {
            directive_list(rest, out);
            return true;
        }
        if (ci_equal(word, "output")) {
            auto mode = parse_output_mode(rest);
            if (!mode)
                throw BindError("\\output expects table, tsv, or records; got '" +
                                std::string(rest) + "'");
            cfg_.output = *mode;
            return true;
        }
        throw BindError("unknown directive \\" + word);
    }

    // Batch runner; stops at the first error. Exit codes: 0 success,
    // 2 parse/bind error, 3 runtime error.
    int run_script(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
        std::ifstream in(path);
        if (!in) {
            err << "cannot open script '" << path.string() << "'\n";
            return 3;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        return run_units(split_script(ss.str()), path.filename().string(), out, err);
    }

    int repl(std::istream& in, std::ostream& out, std::ostream& err, bool interactive) {
        std::string buf, line;
        auto buf_blank = [&] { return buf.find_first_not_of(" \t\r\n") == std::string::npos; };
        auto prompt = [&] {
            if (interactive) {
                out << (buf_blank() ? "simseql> " : "......-> ");
                out.flush();
            }
        };
        auto try_statement = [&](const std::string& text) {
            try {
                execute_statement(text, out, err);
            } catch (const Error& e) {
                err << e.what() << "\n";
            }
        };
        while (prompt(), std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (buf_blank()) {
                buf.clear();
                size_t p = line.find_first_not_of(" \t");
                if (p == std::string::npos) continue;
                if (line[p] == '\\') {
                    try {
                        if (!execute_directive(line.substr(p), out)) return 0;
                    } catch (const Error& e) {
                        err << e.what() << "\n";
                    }
                    continue;
                }
            }
            buf += line;
            buf += '\n';
            size_t end;
            while ((end = statement_end(buf)) != std::string::npos) {
                std::string stmt = buf.substr(0, end - 1);
                buf.erase(0, end);
                try_statement(stmt);
            }
        }
        if (!buf_blank()) try_statement(buf);
        if (interactive) out << "\n";
        return 0;
    }

private:
    Catalog cat_;
    ParamBinding params_;
    SessionConfig cfg_;

    int run_units(const std::vector<ScriptUnit>& units, const std::string& file,
                  std::ostream& out, std::ostream& err) {
        for (const auto& u : units) {
            try {
                if (u.directive) {
                    if (!execute_directive(u.text, out)) return 0;
                } else {
                    execute_statement(u.text, out, err);
                }
            } catch (const Error& e) {
                report(err, file, u, e);
                bool user_error = dynamic_cast<const ParseError*>(&e) ||
                                  dynamic_cast<const BindError*>(&e);
                return user_error ? 2 : 3;
            }
        }
        return 0;
    }

    static void report(std::ostream& err, const std::string& file, const ScriptUnit& u,
                       const Error& e) {
        SourcePos rel = e.pos();
        if (rel.line > 0) {
            int abs_line = u.line + rel.line - 1;
            int abs_col = rel.line == 1 ? u.column + rel.column - 1 : rel.column;
            err << file << " line " << abs_line << ", column " << abs_col << ": "
                << message_without_pos(e) << "\n";
        } else {
            err << file << " line " << u.line << ": " << e.what() << "\n";
        }
    }

    std::filesystem::path resolve_path(std::string_view p) const {
        std::filesystem::path path{std::string(p)};
        return path.is_relative() ? cfg_.data_dir / path : path;
    }

    // --- word directives --------------------------------------------------------

    struct Cur {
        const std::vector<Token>& t;
        size_t i = 0;

        const Token& peek() const { return t[i]; }
        const Token& take() {
            const Token& tok = t[i];
            if (i + 1 < t.size()) ++i;
            return tok;
        }
        bool accept_punct(std::string_view p) {
            if (t[i].is_punct(p)) {
                take();
                return true;
            }
            return false;
        }
        bool accept_ident(std::string_view word) {
            if (t[i].type == TokenType::Ident && ci_equal(t[i].text, word)) {
                take();
                return true;
            }
            return false;
        }
        std::string expect_ident(const char* what) {
            if (t[i].type != TokenType::Ident)
                throw ParseError(std::string("expected ") + what + ", got " + t[i].describe(),
                                 t[i].pos);
            return take().text;
        }
        void expect_punct(std::string_view p) {
            if (!t[i].is_punct(p))
                throw ParseError("expected '" + std::string(p) + "', got " + t[i].describe(),
                                 t[i].pos);
        }
        void expect_end() {
            if (!t[i].is_end())
                throw ParseError("unexpected " + t[i].describe() + " after statement", t[i].pos);
        }
        std::string expect_string(const char* what) {
            if (t[i].type != TokenType::String)
                throw ParseError(std::string("expected quoted ") + what + ", got " +
                                     t[i].describe(),
                                 t[i].pos);
            return take().text;
        }
        double expect_number() {
            bool neg = accept_punct("-");
            if (t[i].type != TokenType::Number)
                throw ParseError("expected a number, got " + t[i].describe(), t[i].pos);
            double v = std::stod(take().text);
            return neg ? -v : v;
        }
    };

    DistanceRef parse_distance_ref(Cur& c) {
        DistanceRef ref;
        ref.function = c.expect_ident("a distance function name");
        if (c.accept_punct("(")) {
            if (!c.accept_punct(")")) {
                ref.args.push_back(c.expect_number());
                while (c.accept_punct(",")) ref.args.push_back(c.expect_number());
                c.expect_punct(")");
                c.take();
            }
        }
        return ref;
    }

    void exec_create(const std::vector<Token>& toks) {
        Cur c{toks, 1};
        if (c.accept_ident("TYPE")) return exec_create_type(c);
        if (c.accept_ident("RELATION")) return exec_create_relation(c);
        if (c.accept_ident("INDEX")) return exec_create_index(c);
        throw ParseError("expected TYPE, RELATION, or INDEX after CREATE, got " +
                             c.peek().describe(),
                         c.peek().pos);
    }

    void exec_create_type(Cur& c) {
        std::string name = c.expect_ident("a type name");
        if (!c.peek().is_keyword("AS"))
            throw ParseError("expected AS <existing type>, got " + c.peek().describe(),
                             c.peek().pos);
        c.take();
        std::string base = c.expect_ident("an existing type name");
        DataTypeEntry entry;
        entry.name = name;
        entry.representation = cat_.require_data_type(base).representation;
        if (c.peek().is_keyword("DISTANCE")) {
            c.take();
            entry.default_distance = cat_.require_distance(c.expect_ident("a distance name")).name;
        }
        c.expect_end();
        cat_.register_data_type(std::move(entry));
    }

    void exec_create_relation(Cur& c) {
        std::string name = c.expect_ident("a relation name");
        c.expect_punct("(");
        c.take();
        std::vector<AttributeDef> attrs;
        while (true) {
            AttributeDef a;
            a.name = c.expect_ident("an attribute name");
            a.type = DataTypeId{c.expect_ident("a type name")};
            if (c.peek().is_keyword("DISTANCE")) {
                c.take();
                if (c.accept_punct("(")) {
                    a.distances.push_back(parse_distance_ref(c));
                    while (c.accept_punct(",")) a.distances.push_back(parse_distance_ref(c));
                    c.expect_punct(")");
                    c.take();
                } else {
                    a.distances.push_back(parse_distance_ref(c));
                }
            }
            attrs.push_back(std::move(a));
            if (c.accept_punct(",")) continue;
            break;
        }
        c.expect_punct(")");
        c.take();
        c.expect_end();
        cat_.create_relation(name, std::move(attrs));
    }

    void exec_create_index(Cur& c) {
        std::optional<std::string> name;
        std::optional<std::string> rel, attr, kind;
        std::optional<DistanceRef> dist;
        if (c.peek().type == TokenType::Ident && !ci_equal(c.peek().text, "USING") &&
            !ci_equal(c.peek().text, "WITH"))
            name = c.take().text;
        while (!c.peek().is_end()) {
            if (c.peek().is_keyword("ON")) {
                c.take();
                rel = c.expect_ident("a relation name");
                c.expect_punct("(");
                c.take();
                attr = c.expect_ident("an attribute name");
                c.expect_punct(")");
                c.take();
                continue;
            }
            if (c.accept_ident("USING")) {
                kind = c.expect_ident("an index kind");
                continue;
            }
            if (c.accept_ident("WITH")) {
                if (!c.peek().is_keyword("DISTANCE"))
                    throw ParseError("expected DISTANCE after WITH, got " + c.peek().describe(),
                                     c.peek().pos);
                c.take();
                dist = parse_distance_ref(c);
                continue;
            }
            throw ParseError("expected ON, USING, or WITH, got " + c.peek().describe(),
                             c.peek().pos);
        }
        if (!rel) throw ParseError("CREATE INDEX needs ON relation(attribute)", c.peek().pos);
        if (!kind) throw ParseError("CREATE INDEX needs USING <kind>", c.peek().pos);
        cat_.create_index(*rel, *attr, *kind, dist, name);
    }

    void exec_load(const std::vector<Token>& toks) {
        Cur c{toks, 1};
        std::string rel = c.expect_ident("a relation name");
        if (!c.peek().is_keyword("FROM"))
            throw ParseError("expected FROM, got " + c.peek().describe(), c.peek().pos);
        c.take();
        std::string file = c.expect_string("file path");
        c.expect_end();
        load_relation_tsv(*cat_.require_relation(rel), resolve_path(file));
    }

    void exec_save(const std::vector<Token>& toks) {
        Cur c{toks, 1};
        std::string dir = c.expect_string("directory path");
        c.expect_end();
        save_snapshot(resolve_path(dir));
    }

    void exec_restore(const std::vector<Token>& toks) {
        Cur c{toks, 1};
        std::string dir = c.expect_string("directory path");
        c.expect_end();
        restore_snapshot(resolve_path(dir));
    }

    // --- snapshots ------------------------------------------------------------------

    static std::string distance_clause(const std::vector<DistanceRef>& ds) {
        if (ds.empty()) return "";
        std::string s = " DISTANCE ";
        if (ds.size() == 1) return s + ds[0].display();
        s += "(";
        for (size_t i = 0; i < ds.size(); ++i) {
            if (i) s += ", ";
            s += ds[i].display();
        }
        return s + ")";
    }

    void save_snapshot(const std::filesystem::path& dir) {
        std::filesystem::create_directories(dir);
        std::string manifest;
        for (const auto& rel : cat_.relations()) {
            manifest += "CREATE RELATION " + rel->name() + " (";
            const Schema& s = rel->schema();
            for (size_t i = 0; i < s.size(); ++i) {
                const auto& a = s.at(i);
                if (i) manifest += ", ";
                manifest += a.name + " " + a.type.name + distance_clause(a.distances);
            }
            manifest += ");\n";
            save_relation_tsv(*rel, dir / (rel->name() + ".tsv"));
            manifest += "LOAD " + rel->name() + " FROM '" + rel->name() + ".tsv';\n";
        }
        for (const auto& ai : cat_.indexes()) {
            manifest += "CREATE INDEX " + ai->name + " ON " + ai->relation->name() + "(" +
                        ai->relation->schema().at(ai->attr).name + ") USING " + ai->kind;
            if (ai->metric) manifest += " WITH DISTANCE " + ai->distance.display();
            manifest += ";\n";
        }
        std::ofstream out(dir / "snapshot.simseql", std::ios::binary);
        if (!out) throw RuntimeError("cannot write snapshot manifest in '" + dir.string() + "'");
        out << manifest;
    }

    void restore_snapshot(const std::filesystem::path& dir) {
        std::ifstream in(dir / "snapshot.simseql");
        if (!in)
            throw RuntimeError("no snapshot manifest in '" + dir.string() + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        cat_.drop_all_relations();
        auto saved = cfg_.data_dir;
        cfg_.data_dir = dir;
        try {
            std::ostringstream sink;
            for (const auto& u : split_script(ss.str())) {
                if (u.directive)
                    execute_directive(u.text, sink);
                else
                    execute_statement(u.text, sink, sink);
            }
        } catch (...) {
            cfg_.data_dir = saved;
            throw;
        }
        cfg_.data_dir = saved;
    }

    // --- backslash directives ----------------------------------------------------------

    void directive_set(std::string_view rest) {
        if (rest.empty() || rest[0] != ':')
            throw BindError("usage: \\set :name value");
        size_t i = 1;
        std::string name;
        while (i < rest.size() && rest[i] != ' ' && rest[i] != '\t') name.push_back(rest[i++]);
        if (name.empty()) throw BindError("usage: \\set :name value");
        while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
        std::string_view value = rest.substr(i);
        if (value.empty()) throw BindError("\\set :" + name + " needs a value");
        params_[name] = parse_param_value(value);
    }

    Value parse_param_value(std::string_view v) const {
        if (v[0] == '\'') {
            std::string s;
            size_t i = 1;
            bool closed = false;
            while (i < v.size()) {
                if (v[i] == '\'') {
                    if (i + 1 < v.size() && v[i + 1] == '\'') {
                        s.push_back('\'');
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                s.push_back(v[i++]);
            }
            if (!closed || i != v.size())
                throw BindError("malformed string value " + std::string(v));
            return Value::string(std::move(s));
        }
        if (v.rfind("vector:", 0) == 0) return Value::vector(parse_vector_text(v.substr(7)));
        if (v.rfind("ppm:", 0) == 0) return Value::raster(read_ppm(resolve_path(v.substr(4))));
        if (v.rfind("date:", 0) == 0) return Value::date(parse_date(v.substr(5)));
        int64_t iv = 0;
        auto ri = std::from_chars(v.data(), v.data() + v.size(), iv);
        if (ri.ec == std::errc{} && ri.ptr == v.data() + v.size()) return Value::integer(iv);
        double dv = 0;
        auto rd = std::from_chars(v.data(), v.data() + v.size(), dv);
        if (rd.ec == std::errc{} && rd.ptr == v.data() + v.size()) return Value::floating(dv);
        throw BindError("cannot parse value '" + std::string(v) +
                        "'; use a number, 'string', vector:[...], ppm:path, or date:YYYY-MM-DD");
    }

    void directive_list(std::string_view what, std::ostream& out) const {
        if (ci_equal(what, "types")) {
            for (const auto* t : cat_.data_types()) {
                out << t->name << " (" << value_kind_name(t->representation);
                if (t->default_distance) out << ", default " << *t->default_distance;
                out << ")\n";
            }
            return;
        }
        if (ci_equal(what, "distances")) {
            for (const auto* d : cat_.distance_functions()) {
                out << d->name << "/" << d->param_count;
                std::string props;
                for (const auto& [k, v] : d->properties)
                    if (v) props += (props.empty() ? "" : ",") + k;
                if (d->properties_for) props += (props.empty() ? "" : ",") + std::string("(argument-dependent)");
                if (!props.empty()) out << " {" << props << "}";
                out << "\n";
            }
            for (const auto* s : cat_.set_distances()) out << s->name << " (set)\n";
            for (const auto* a : cat_.aggregated_distances()) out << a->name << " (aggregated)\n";
            return;
        }
        if (ci_equal(what, "extractors")) {
            for (const auto* e : cat_.extractors())
                out << e->name << ": " << e->input_type.name << " -> " << e->output_type.name
                    << "\n";
            return;
        }
        if (ci_equal(what, "methods")) {
            for (const auto* m : cat_.methods()) {
                out << m->name << "(";
                for (size_t i = 0; i < m->params.size(); ++i)
                    out << (i ? ", " : "")
                        << (m->params[i] == MethodParamKind::Numeric ? "number" : "attribute");
                out << ")";
                if (m->pairwise) out << " [join]";
                out << "\n";
            }
            return;
        }
        if (ci_equal(what, "indexes")) {
            for (const auto& ai : cat_.indexes()) {
                out << ai->name << ": " << ai->kind << " on " << ai->relation->name() << "("
                    << ai->relation->schema().at(ai->attr).name << ")";
                if (ai->metric) out << " distance " << ai->distance.display();
                out << "\n";
            }
            return;
        }
        if (ci_equal(what, "relations")) {
            for (const auto& rel : cat_.relations()) {
                out << rel->name() << "(";
                const Schema& s = rel->schema();
                for (size_t i = 0; i < s.size(); ++i)
                    out << (i ? ", " : "") << s.at(i).name << " " << s.at(i).type.name;
                out << ") -- " << rel->row_count()
                    << (rel->row_count() == 1 ? " row\n" : " rows\n");
            }
            return;
        }
        throw BindError(
            "unknown \\list target '" + std::string(what) +
            "'; one of types, distances, extractors, methods, indexes, relations");
    }
};

}  // namespace simseql

#endif
