#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "valence/int.hpp"

namespace valence {

// Commutative semigroup presentation: elements are multisets over the
// alphabet (Parikh vectors), so the commutation rules are implicit.
struct SemigroupPresentation {
    std::vector<std::string> symbols;
    // (lhs, rhs) as count vectors over symbols
    std::vector<std::pair<std::vector<long>, std::vector<long>>> rules;

    std::size_t rule_size(std::size_t i) const {
        std::size_t n = 0;
        for (long c : rules[i].first) n += static_cast<std::size_t>(c);
        for (long c : rules[i].second) n += static_cast<std::size_t>(c);
        return n;
    }

    // |R| * max |xy|
    std::size_t norm() const {
        std::size_t mx = 0;
        for (std::size_t i = 0; i < rules.size(); ++i)
            mx = std::max(mx, rule_size(i));
        return rules.size() * mx;
    }
};

// The cap above which exhausting the search space decides equivalence.
inline Int csg_complete_cap(const SemigroupPresentation& p, std::size_t usize,
                            std::size_t vsize) {
    Int r(p.norm());
    Int pow = 1;
    Int exp = Int(1) << p.symbols.size();
    // r^(2^|Sigma|), computed lazily; caps out once it exceeds a huge sentinel
    const Int sentinel = Int(1) << 256;
    for (Int i = 0; i < exp; ++i) {
        pow *= r;
        if (pow > sentinel) {
            pow = sentinel;
            break;
        }
    }
    return Int(std::max(usize, vsize)) + pow + r;
}

struct CsgStep {
    std::size_t rule;
    bool forward;
};

struct CsgResult {
    enum Kind { Yes, No, Exhausted } kind;
    std::vector<CsgStep> derivation;  // on Yes, from u to v
};

// BFS over Parikh vectors of total size <= length_cap, applying rules in both
// directions. No means the bounded space holds no witness; it is definitive
// only when length_cap reaches the completeness bound.
inline CsgResult csg_equiv(const SemigroupPresentation& p,
                           const std::vector<long>& u, const std::vector<long>& v,
                           std::size_t length_cap, std::size_t node_budget) {
    require(u.size() == p.symbols.size() && v.size() == p.symbols.size(),
            "csg_equiv: arity mismatch");
    if (u == v) return {CsgResult::Yes, {}};
    std::map<std::vector<long>, std::pair<std::vector<long>, CsgStep>> parent;
    std::deque<std::vector<long>> queue{u};
    parent[u] = {u, {0, true}};
    std::size_t visited = 0;
    auto total = [](const std::vector<long>& m) {
        long t = 0;
        for (long c : m) t += c;
        return static_cast<std::size_t>(t);
    };
    while (!queue.empty()) {
        if (++visited > node_budget) return {CsgResult::Exhausted, {}};
        auto cur = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < p.rules.size(); ++i) {
            for (bool fwd : {true, false}) {
                const auto& from = fwd ? p.rules[i].first : p.rules[i].second;
                const auto& to = fwd ? p.rules[i].second : p.rules[i].first;
                std::vector<long> next = cur;
                bool ok = true;
                for (std::size_t s = 0; s < next.size(); ++s) {
                    next[s] += to[s] - from[s];
                    if (cur[s] < from[s] || next[s] < 0) {
                        ok = false;
                        break;
                    }
                }
                if (!ok || total(next) > length_cap) continue;
                if (parent.count(next)) continue;
                parent[next] = {cur, {i, fwd}};
                if (next == v) {
                    std::vector<CsgStep> steps;
                    for (auto at = next; at != u; at = parent[at].first)
                        steps.push_back(parent[at].second);
                    std::reverse(steps.begin(), steps.end());
                    return {CsgResult::Yes, steps};
                }
                queue.push_back(next);
            }
        }
    }
    return {CsgResult::No, {}};
}

}  // namespace valence
