#ifndef SIMSEQL_TEXT_CORPUS_HPP
#define SIMSEQL_TEXT_CORPUS_HPP

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"

namespace simseql {

// Lowercases and splits on anything that is not a letter or digit.
inline std::vector<std::string> tokenize_text(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) {
            cur.push_back(ascii_lower(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Document frequencies of one text column. Query strings are scored against this
// table as out-of-corpus documents: they never contribute to df.
struct TextCorpus {
    int64_t documents = 0;
    std::map<std::string, int64_t> df;

    void add_document(std::string_view text) {
        ++documents;
        auto toks = tokenize_text(text);
        std::map<std::string, bool> seen;
        for (auto& t : toks) {
            if (!seen.count(t)) {
                seen[t] = true;
                ++df[t];
            }
        }
    }

    double idf(const std::string& term) const {
        int64_t n = documents > 0 ? documents : 1;
        auto it = df.find(term);
        int64_t d = it == df.end() ? 0 : it->second;
        return std::log(double(n) / double(1 + d));
    }
};

}  // namespace simseql

#endif
