#pragma once

#include <deque>
#include <map>
#include <set>

#include "valence/word.hpp"

namespace valence {

// Foata normal form of the trace class of w: a complete invariant for
// equivalence under the commutation rules alone. Letters are grouped into
// levels (a letter's level is one past the deepest earlier dependent letter)
// and sorted within each level.
inline Word trace_canonical(const Graph& g, const Word& w) {
    std::vector<int> level(w.size(), 1);
    int maxlevel = w.empty() ? 0 : 1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (!g.independent(w[i].vertex, w[j].vertex))
                level[i] = std::max(level[i], level[j] + 1);
        maxlevel = std::max(maxlevel, level[i]);
    }
    Word out;
    out.reserve(w.size());
    for (int lv = 1; lv <= maxlevel; ++lv) {
        Word block;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (level[i] == lv) block.push_back(w[i]);
        std::sort(block.begin(), block.end());
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

enum class Verdict { Yes, No, Exhausted };

struct IdentityResult {
    Verdict verdict;
    // on Yes: words from w down to the empty word, one cancellation apart
    std::vector<Word> derivation;
};

namespace detail {
// Cancellable pairs (i, j), i < j: same vertex, opposite signs in an order
// admitted by the rules (v vbar always; vbar v only for looped v), with every
// letter in between independent of the vertex.
inline std::vector<std::pair<std::size_t, std::size_t>> cancellable_pairs(
    const Graph& g, const Word& w) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j < w.size(); ++j) {
            if (w[j].vertex != w[i].vertex) {
                if (g.independent(w[i].vertex, w[j].vertex)) continue;
                break;  // a dependent letter blocks everything further right
            }
            if (w[j].sign != -w[i].sign) {
                if (g.looped[w[i].vertex]) continue;  // same letter, keep looking
                break;
            }
            if (w[i].sign == +1 || g.looped[w[i].vertex]) out.emplace_back(i, j);
            break;
        }
    }
    return out;
}

inline Word erase_pair(const Word& w, std::size_t i, std::size_t j) {
    Word out;
    out.reserve(w.size() - 2);
    for (std::size_t k = 0; k < w.size(); ++k)
        if (k != i && k != j) out.push_back(w[k]);
    return out;
}
}  // namespace detail

// Decides [w] = 1 by BFS over trace-canonical representatives under
// cancellation steps. Deletions strictly shorten the word, so the space is
// finite; No is definitive once it is exhausted.
inline IdentityResult word_is_identity(const Graph& g, const Word& w,
                                       std::size_t budget = 1 << 20) {
    for (const auto& l : w)
        require(l.vertex < g.size(), "word_is_identity: unknown vertex symbol");
    Word start = trace_canonical(g, w);
    if (start.empty()) return {Verdict::Yes, {w}};
    std::map<Word, Word> parent;  // canonical word -> predecessor
    std::deque<Word> queue;
    parent[start] = Word{{std::size_t(0), 0}};  // sentinel marker
    queue.push_back(start);
    std::size_t visited = 0;
    while (!queue.empty()) {
        if (++visited > budget) return {Verdict::Exhausted, {}};
        Word cur = queue.front();
        queue.pop_front();
        for (auto [i, j] : detail::cancellable_pairs(g, cur)) {
            Word next = trace_canonical(g, detail::erase_pair(cur, i, j));
            if (parent.count(next)) continue;
            parent[next] = cur;
            if (next.empty()) {
                std::vector<Word> chain{next};
                Word at = cur;
                for (;;) {
                    chain.push_back(at);
                    const Word& p = parent[at];
                    if (p.size() == 1 && p[0].sign == 0) break;
                    at = p;
                }
                std::reverse(chain.begin(), chain.end());
                return {Verdict::Yes, chain};
            }
            queue.push_back(next);
        }
    }
    return {Verdict::No, {}};
}

// Verifies that consecutive words in a derivation differ by one legal
// cancellation (modulo commutation); used to replay witnesses.
inline bool replay_derivation(const Graph& g, const std::vector<Word>& chain) {
    if (chain.empty()) return false;
    if (!chain.back().empty()) return false;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        const Word cur = trace_canonical(g, chain[k]);
        const Word next = trace_canonical(g, chain[k + 1]);
        bool found = false;
        for (auto [i, j] : detail::cancellable_pairs(g, cur)) {
            if (trace_canonical(g, detail::erase_pair(cur, i, j)) == next) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace valence
