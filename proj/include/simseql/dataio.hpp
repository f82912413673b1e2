#ifndef SIMSEQL_DATAIO_HPP
#define SIMSEQL_DATAIO_HPP

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "relation.hpp"
#include "value.hpp"

// Relation files are UTF-8 and tab-separated: line 1 attribute names, line 2
// data type names, then one row per line. Vector cells read "[v1,v2,...]",
// raster cells "ppm:relative/path" (resolved against the file's directory),
// and an empty cell is Null. The empty string is written as "" to keep it
// apart from Null.

namespace simseql {

namespace fs = std::filesystem;

// --- binary PPM (P6), 8 bits per channel -------------------------------------

inline ImageRaster read_ppm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open '" + path.string() + "'");

    auto next_field = [&]() -> std::string {
        // Whitespace-separated header field; '#' starts a comment to end of line.
        std::string f;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {
                while ((c = in.get()) != EOF && c != '\n') {}
                continue;
            }
            if (std::isspace(c)) {
                if (!f.empty()) break;
                continue;
            }
            f.push_back(char(c));
        }
        return f;
    };

    if (next_field() != "P6")
        throw RuntimeError("'" + path.string() + "' is not a binary PPM (P6) file");
    ImageRaster img;
    int maxval = 0;
    try {
        img.width = std::stoi(next_field());
        img.height = std::stoi(next_field());
        maxval = std::stoi(next_field());
    } catch (const std::exception&) {
        throw RuntimeError("malformed PPM header in '" + path.string() + "'");
    }
    if (img.width <= 0 || img.height <= 0 || maxval != 255)
        throw RuntimeError("unsupported PPM geometry in '" + path.string() +
                           "' (needs positive size, maxval 255)");
    img.rgb.resize(size_t(3) * img.width * img.height);
    in.read(reinterpret_cast<char*>(img.rgb.data()), std::streamsize(img.rgb.size()));
    if (size_t(in.gcount()) != img.rgb.size())
        throw RuntimeError("truncated pixel data in '" + path.string() + "'");
    return img;
}

inline void write_ppm(const fs::path& path, const ImageRaster& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RuntimeError("cannot write '" + path.string() + "'");
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()), std::streamsize(img.rgb.size()));
    if (!out) throw RuntimeError("failed writing '" + path.string() + "'");
}

// --- cell text ------------------------------------------------------------------

inline std::string render_vector(const std::vector<double>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s + "]";
}

inline std::vector<double> parse_vector_text(std::string_view s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw RuntimeError("malformed vector '" + std::string(s) + "', expected [v1,v2,...]");
    std::vector<double> out;
    size_t i = 1;
    const size_t end = s.size() - 1;
    while (i < end) {
        size_t j = s.find(',', i);
        if (j == std::string_view::npos || j > end) j = end;
        std::string_view piece = s.substr(i, j - i);
        double v = 0;
        auto res = std::from_chars(piece.data(), piece.data() + piece.size(), v);
        if (res.ec != std::errc{} || res.ptr != piece.data() + piece.size())
            throw RuntimeError("malformed vector element '" + std::string(piece) + "'");
        out.push_back(v);
        i = j + 1;
    }
    return out;
}

inline Value parse_cell(const std::string& text, ValueKind kind, const fs::path& base_dir) {
    if (text.empty()) return Value();
    switch (kind) {
        case ValueKind::Integer:
        case ValueKind::Long: {
            int64_t v = 0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
                throw RuntimeError("malformed integer '" + text + "'");
            return kind == ValueKind::Integer ? Value::integer(v) : Value::long_int(v);
        }
        case ValueKind::Float: {
            double v = 0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
                throw RuntimeError("malformed number '" + text + "'");
            return Value::floating(v);
        }
        case ValueKind::Date: return Value::date(parse_date(text));
        case ValueKind::String: return Value::string(text == "\"\"" ? "" : text);
        case ValueKind::NumberVector: return Value::vector(parse_vector_text(text));
        case ValueKind::ImageRasterKind: {
            if (text.rfind("ppm:", 0) != 0)
                throw RuntimeError("raster cell must read ppm:relative/path, got '" + text + "'");
            return Value::raster(read_ppm(base_dir / text.substr(4)));
        }
        case ValueKind::Null: break;
    }
    throw RuntimeError("cannot parse cell '" + text + "'");
}

// Renders one cell; rasters are delegated since they live in side files.
template <class RasterNamer>
std::string render_cell(const Value& v, const RasterNamer& name_raster) {
    if (v.is_null()) return "";
    switch (v.kind()) {
        case ValueKind::Integer:
        case ValueKind::Long: return std::to_string(v.as_int());
        case ValueKind::Float: return format_double(v.as_float());
        case ValueKind::Date: return format_date(v.as_int());
        case ValueKind::String: {
            const std::string& s = v.as_string();
            if (s.find('\t') != std::string::npos || s.find('\n') != std::string::npos)
                throw RuntimeError("string cell contains a tab or newline");
            return s.empty() ? "\"\"" : s;
        }
        case ValueKind::NumberVector: return render_vector(v.as_vector());
        case ValueKind::ImageRasterKind: return name_raster(v.as_raster());
        case ValueKind::Null: break;
    }
    return "";
}

// --- relation files -----------------------------------------------------------------

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t i = 0;
    while (true) {
        size_t j = line.find('\t', i);
        if (j == std::string::npos) {
            out.push_back(line.substr(i));
            return out;
        }
        out.push_back(line.substr(i, j - i));
        i = j + 1;
    }
}

inline void load_relation_tsv(Relation& rel, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw RuntimeError("cannot open '" + path.string() + "'");
    const fs::path base = path.parent_path();
    const Schema& schema = rel.schema();

    auto fail = [&](int line, const std::string& msg) -> void {
        throw RuntimeError(path.filename().string() + " line " + std::to_string(line) + ": " + msg);
    };

    std::string line;
    auto read_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    if (!read_line()) fail(1, "missing attribute-name header");
    std::vector<std::string> names = split_tabs(line);
    if (!read_line()) fail(2, "missing data-type header");
    std::vector<std::string> types = split_tabs(line);
    if (names.size() != types.size()) fail(2, "header line lengths differ");

    // File columns may come in any order but must cover the schema exactly.
    std::vector<size_t> to_schema(names.size());
    std::vector<bool> seen(schema.size(), false);
    for (size_t c = 0; c < names.size(); ++c) {
        auto idx = schema.find(names[c]);
        if (!idx) fail(1, "'" + names[c] + "' is not an attribute of '" + rel.name() + "'");
        if (seen[*idx]) fail(1, "attribute '" + names[c] + "' listed twice");
        seen[*idx] = true;
        to_schema[c] = *idx;
        if (!ci_equal(types[c], schema.at(*idx).type.name))
            fail(2, "attribute '" + names[c] + "' is declared '" + schema.at(*idx).type.name +
                        "', file says '" + types[c] + "'");
    }
    for (size_t i = 0; i < schema.size(); ++i)
        if (!seen[i]) fail(1, "attribute '" + schema.at(i).name + "' missing from file");

    int lineno = 2;
    while (read_line()) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells = split_tabs(line);
        if (cells.size() != names.size())
            fail(lineno, "expected " + std::to_string(names.size()) + " cells, got " +
                             std::to_string(cells.size()));
        std::vector<Value> row(schema.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            size_t s = to_schema[c];
            try {
                row[s] = parse_cell(cells[c], schema.at(s).kind, base);
            } catch (const Error& e) {
                fail(lineno, std::string(e.what()));
            }
        }
        rel.append(std::move(row));
    }
}

inline void save_relation_tsv(const Relation& rel, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RuntimeError("cannot write '" + path.string() + "'");
    const Schema& schema = rel.schema();

    for (size_t i = 0; i < schema.size(); ++i)
        out << (i ? "\t" : "") << schema.at(i).name;
    out << "\n";
    for (size_t i = 0; i < schema.size(); ++i)
        out << (i ? "\t" : "") << schema.at(i).type.name;
    out << "\n";

    // Raster cells spill into a sibling directory named after the file.
    const std::string stem = path.stem().string();
    const fs::path raster_dir = path.parent_path() / (stem + "_ppm");
    size_t n_rasters = 0;

    std::shared_lock lock(rel.mutex());
    for (const auto& t : rel.tuples()) {
        for (size_t i = 0; i < t.values.size(); ++i) {
            std::string cell = render_cell(t.values[i], [&](const ImageRaster& img) {
                if (n_rasters == 0) fs::create_directories(raster_dir);
                std::string file = schema.at(i).name + "_" + std::to_string(t.id) + ".ppm";
                write_ppm(raster_dir / file, img);
                ++n_rasters;
                return "ppm:" + stem + "_ppm/" + file;
            });
            out << (i ? "\t" : "") << cell;
        }
        out << "\n";
    }
    if (!out) throw RuntimeError("failed writing '" + path.string() + "'");
}

}  // namespace simseql

#endif
