#pragma once

#include <string>
#include <vector>

#include "valence/graph.hpp"
#include "valence/matrix.hpp"

namespace valence {

// A signed vertex symbol: +v or the formal inverse -v.
struct Letter {
    std::size_t vertex;
    int sign;  // +1 or -1

    bool operator==(const Letter& o) const = default;
    auto operator<=>(const Letter& o) const = default;
};

using Word = std::vector<Letter>;

inline Word word_inverse(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back({it->vertex, -it->sign});
    return out;
}

inline Word word_concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// Signed letter counts per vertex.
inline IntVec abelianize(const Graph& g, const Word& w) {
    IntVec v(g.size(), 0);
    for (const auto& l : w) {
        require(l.vertex < g.size(), "abelianize: unknown vertex symbol");
        v[l.vertex] += l.sign;
    }
    return v;
}

inline std::string word_to_string(const Graph& g, const Word& w) {
    if (w.empty()) return "eps";
    std::string out;
    for (const auto& l : w) {
        if (!out.empty()) out += ' ';
        if (l.sign < 0) out += '-';
        out += g.names[l.vertex];
    }
    return out;
}

// Token form: `x` or `-x`.
inline Word parse_word(const Graph& g, const std::vector<std::string>& toks) {
    Word w;
    for (const auto& t : toks) {
        require(!t.empty(), "empty word token");
        if (t[0] == '-')
            w.push_back({g.vertex(t.substr(1)), -1});
        else
            w.push_back({g.vertex(t), +1});
    }
    return w;
}

}  // namespace valence
