#pragma once

#include <optional>

#include "valence/coset.hpp"
#include "valence/semigroup.hpp"
#include "valence/system.hpp"

namespace valence {

struct CliqueCaps {
    std::size_t csg_extra = 48;        // slack added to the adaptive length cap
    std::size_t csg_budget = 500000;   // node budget for semigroup searches
    int c_margin = 2;                  // hidden constant in the bound b
    std::size_t state_cap = 200000;    // lazily built counter-automaton states
    std::size_t validate_budget = 20000;
};

// Presentation over U' = U + {alpha, beta} obtained by eliminating the states
// of a single-letter bidirected clique system.
struct CliquePresentation {
    SemigroupPresentation pres;
    std::vector<std::size_t> rule_transition;  // rule index -> transition index
    std::vector<std::size_t> unlooped;         // vertex ids of U, symbol order
    std::size_t k = 0;                         // number of states
};

namespace detail {
inline std::vector<long> state_token(std::size_t state, std::size_t k,
                                     std::size_t usize) {
    std::vector<long> m(usize + 2, 0);
    m[usize] = static_cast<long>(state + 1);          // alpha
    m[usize + 1] = static_cast<long>(k - state - 1);  // beta
    return m;
}
}  // namespace detail

// Requires every transition word to consist of unlooped negatives followed by
// unlooped positives (single-letter transitions qualify); looped letters are
// carried by the Z-counter machinery, not the presentation.
inline CliquePresentation to_presentation(const ValenceSystem& a) {
    require(a.graph.is_clique(), "to_presentation: graph must be a clique");
    CliquePresentation out;
    out.k = a.states();
    std::map<std::size_t, std::size_t> uidx;
    for (std::size_t v = 0; v < a.graph.size(); ++v)
        if (!a.graph.looped[v]) {
            uidx[v] = out.unlooped.size();
            out.unlooped.push_back(v);
        }
    const std::size_t usize = out.unlooped.size();
    for (auto v : out.unlooped) out.pres.symbols.push_back(a.graph.names[v]);
    out.pres.symbols.push_back("_alpha");
    out.pres.symbols.push_back("_beta");
    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
        const auto& t = a.transitions[i];
        auto lhs = detail::state_token(t.src, out.k, usize);
        auto rhs = detail::state_token(t.dst, out.k, usize);
        bool seen_positive = false;
        for (const auto& l : t.label) {
            if (a.graph.looped[l.vertex]) continue;
            if (l.sign < 0) {
                require(!seen_positive,
                        "to_presentation: word not in normal form (split first)");
                lhs[uidx[l.vertex]] += 1;
            } else {
                seen_positive = true;
                rhs[uidx[l.vertex]] += 1;
            }
        }
        out.pres.rules.emplace_back(std::move(lhs), std::move(rhs));
        out.rule_transition.push_back(i);
    }
    return out;
}

struct PathResult {
    enum Kind { Yes, No, Exhausted } kind;
    std::vector<std::size_t> run;  // transition indices
    Word word;
};

namespace detail {
inline std::size_t reverse_of(const ValenceSystem& a, std::size_t i) {
    Transition rev{a.transitions[i].dst, a.transitions[i].src,
                   word_inverse(a.transitions[i].label)};
    for (std::size_t j = 0; j < a.transitions.size(); ++j)
        if (a.transitions[j] == rev) return j;
    throw std::invalid_argument("system is not bidirected");
}
}  // namespace detail

// Search for a run s -> t whose effect on the unlooped vertices is neutral as
// N-counters; realized through the commutative semigroup word problem.
inline PathResult rev_vass_path(const ValenceSystem& a, std::size_t s, std::size_t t,
                                const CliqueCaps& caps = {}) {
    auto cp = to_presentation(a);
    auto u = detail::state_token(s, cp.k, cp.unlooped.size());
    auto v = detail::state_token(t, cp.k, cp.unlooped.size());
    std::size_t cap = cp.k + cp.pres.norm() + caps.csg_extra;
    auto res = csg_equiv(cp.pres, u, v, cap, caps.csg_budget);
    if (res.kind == CsgResult::Exhausted) return {PathResult::Exhausted, {}, {}};
    if (res.kind == CsgResult::No) return {PathResult::No, {}, {}};
    PathResult out{PathResult::Yes, {}, {}};
    for (const auto& step : res.derivation) {
        std::size_t tr = cp.rule_transition[step.rule];
        if (!step.forward) tr = detail::reverse_of(a, tr);
        out.run.push_back(tr);
        const auto& lbl = a.transitions[tr].label;
        out.word.insert(out.word.end(), lbl.begin(), lbl.end());
    }
    return out;
}

struct ReachSummary {
    std::vector<std::size_t> bounded;  // B: unlooped vertices bounded on Reach(s, .)
    Int bound;                         // b
    bool exhausted = false;
    bool validation_failed = false;
    std::string diagnostic;
};

// B is found through the bottom-state gadget; b follows the stated bound with
// the configurable margin and is then validated against a bounded search.
inline ReachSummary compute_B_and_b(const ValenceSystem& a, std::size_t s,
                                    const CliqueCaps& caps = {}) {
    ReachSummary out;
    std::vector<std::size_t> unlooped;
    for (std::size_t v = 0; v < a.graph.size(); ++v)
        if (!a.graph.looped[v]) unlooped.push_back(v);
    for (auto u : unlooped) {
        ValenceSystem gadget = a;
        std::size_t bot = gadget.add_state("_bot");
        gadget.add_transition(s, bot, {{u, -1}});
        gadget.add_transition(bot, s, {{u, 1}});
        for (auto v : unlooped) {
            gadget.add_transition(bot, bot, {{v, 1}});
            gadget.add_transition(bot, bot, {{v, -1}});
        }
        auto res = rev_vass_path(gadget, s, bot, caps);
        if (res.kind == PathResult::Exhausted) {
            out.exhausted = true;
            return out;
        }
        if (res.kind == PathResult::No) out.bounded.push_back(u);
    }
    Int norm_a = 0;
    for (const auto& t : a.transitions) {
        auto eff = abelianize(a.graph, t.label);
        for (auto u : unlooped) norm_a = std::max(norm_a, abs_int(eff[u]));
    }
    auto cp = to_presentation(a);
    Int b = (norm_a + Int(a.states()) + Int(cp.pres.norm()));
    b <<= static_cast<unsigned>(caps.c_margin * static_cast<int>(unlooped.size()));
    out.bound = b;

    // desk-scale validation: no reachable counter vector may exceed b on a
    // B coordinate within the explored bound
    std::set<std::size_t> bset(out.bounded.begin(), out.bounded.end());
    std::map<std::pair<std::size_t, std::vector<long>>, bool> seen;
    std::deque<std::pair<std::size_t, std::vector<long>>> queue;
    std::vector<long> zero(unlooped.size(), 0);
    long cap = out.bound > Int(1000000) ? 1000000 : static_cast<long>(out.bound);
    queue.push_back({s, zero});
    seen[{s, zero}] = true;
    std::size_t visited = 0;
    std::map<std::size_t, std::size_t> upos;
    for (std::size_t i = 0; i < unlooped.size(); ++i) upos[unlooped[i]] = i;
    while (!queue.empty() && visited++ < caps.validate_budget) {
        auto [st, cnt] = queue.front();
        queue.pop_front();
        for (const auto& t : a.transitions) {
            if (t.src != st) continue;
            auto next = cnt;
            bool ok = true;
            for (const auto& l : t.label) {
                if (a.graph.looped[l.vertex]) continue;
                auto& c = next[upos[l.vertex]];
                c += l.sign;
                if (c < 0 || c > cap + 1) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (auto u : out.bounded)
                if (Int(next[upos[u]]) > out.bound) {
                    out.validation_failed = true;
                    out.diagnostic = "reachable value " + std::to_string(next[upos[u]]) +
                                     " on bounded counter " + a.graph.names[u] +
                                     " exceeds b; raise c_margin";
                    return out;
                }
            auto key = std::make_pair(t.dst, next);
            if (seen.emplace(key, true).second) queue.push_back(key);
        }
    }
    return out;
}

struct EffResult {
    enum Kind { Ok, Exhausted, CapExceeded, ValidationFailed } kind;
    std::vector<IntVec> gens;           // lattice generators over Z^L
    std::vector<std::size_t> looped;    // vertex ids of L, coordinate order
    std::string diagnostic;
};

// Lattice of effects on the looped vertices of neutral s -> s runs: keeps the
// B counters in the state, turns the remaining unlooped counters into
// Z-counters, and extracts cycle effects from a spanning tree.
inline EffResult compute_eff(const ValenceSystem& a, std::size_t s,
                             const CliqueCaps& caps = {}) {
    EffResult out;
    for (std::size_t v = 0; v < a.graph.size(); ++v)
        if (a.graph.looped[v]) out.looped.push_back(v);
    auto summary = compute_B_and_b(a, s, caps);
    if (summary.exhausted) {
        out.kind = EffResult::Exhausted;
        return out;
    }
    if (summary.validation_failed) {
        out.kind = EffResult::ValidationFailed;
        out.diagnostic = summary.diagnostic;
        return out;
    }
    std::set<std::size_t> bset(summary.bounded.begin(), summary.bounded.end());

    // the looped clique over L' = (U \ B) + L, in original vertex order
    std::vector<std::size_t> lprime;
    for (std::size_t v = 0; v < a.graph.size(); ++v)
        if (a.graph.looped[v] || !bset.count(v)) lprime.push_back(v);
    Graph gp;
    for (auto v : lprime) gp.add_vertex(a.graph.names[v], true);
    for (std::size_t i = 0; i < lprime.size(); ++i)
        for (std::size_t j = i + 1; j < lprime.size(); ++j) gp.add_edge(i, j);
    std::map<std::size_t, std::size_t> lpos;
    for (std::size_t i = 0; i < lprime.size(); ++i) lpos[lprime[i]] = i;
    std::vector<std::size_t> border(summary.bounded);

    // lazily explore Q x [0,b]^B
    long bcap = summary.bound > Int(1000000) ? 1000000
                                             : static_cast<long>(summary.bound);
    std::map<std::size_t, std::size_t> bpos;
    for (std::size_t i = 0; i < border.size(); ++i) bpos[border[i]] = i;
    using Config = std::pair<std::size_t, std::vector<long>>;
    std::map<Config, std::size_t> id;
    std::vector<Config> configs;
    auto intern = [&](const Config& c) {
        auto it = id.find(c);
        if (it != id.end()) return it->second;
        std::size_t n = configs.size();
        id[c] = n;
        configs.push_back(c);
        return n;
    };
    ValenceSystem ap;
    ap.graph = gp;
    Config start{s, std::vector<long>(border.size(), 0)};
    intern(start);
    ap.add_state("c0");
    for (std::size_t qi = 0; qi < configs.size(); ++qi) {
        if (configs.size() > caps.state_cap) {
            out.kind = EffResult::CapExceeded;
            out.diagnostic = "counter automaton exceeded the state cap";
            return out;
        }
        auto [st, cnt] = configs[qi];
        for (const auto& t : a.transitions) {
            if (t.src != st) continue;
            auto next = cnt;
            Word lbl;
            bool ok = true;
            for (const auto& l : t.label) {
                if (bset.count(l.vertex)) {
                    auto& c = next[bpos[l.vertex]];
                    c += l.sign;
                    if (c < 0 || Int(c) > Int(bcap)) {
                        ok = false;
                        break;
                    }
                } else {
                    lbl.push_back({lpos[l.vertex], l.sign});
                }
            }
            if (!ok) continue;
            Config dst{t.dst, next};
            std::size_t before = configs.size();
            std::size_t di = intern(dst);
            if (di == before) ap.add_state("c" + std::to_string(di));
            ap.add_transition(qi, di, lbl);
        }
    }
    auto cw = compute_coset(ap, 0, 0);
    check(cw.has_value(), "compute_eff: start disconnected from itself");
    std::vector<IntVec> raw;
    for (const auto& g : cw->gens) raw.push_back(abelianize(gp, g));
    std::vector<std::size_t> zero_coords;
    for (std::size_t i = 0; i < lprime.size(); ++i)
        if (!a.graph.looped[lprime[i]]) zero_coords.push_back(i);
    out.gens = lattice_section_project(raw, lprime.size(), zero_coords);
    out.kind = EffResult::Ok;
    return out;
}

struct CliqueCosetResult {
    enum Kind { Ok, EmptyEff, Exhausted, Failed } kind;
    CanonicalCoset coset;               // over Z^L on Ok
    std::vector<std::size_t> looped;    // coordinate order (vertex ids of L)
    std::string diagnostic;
};

// Eff(s,t) as u + Eff(s,s), canonicalized; EmptyEff when no neutral-on-U run
// from s to t exists within the bounded search.
inline CliqueCosetResult compute_coset_cliques(const ValenceSystem& a0,
                                               std::size_t s, std::size_t t,
                                               const CliqueCaps& caps = {}) {
    CliqueCosetResult out;
    ValenceSystem a = bidirected_closure(split_letters(a0));
    auto path = rev_vass_path(a, s, t, caps);
    if (path.kind == PathResult::Exhausted) {
        out.kind = CliqueCosetResult::Exhausted;
        return out;
    }
    if (path.kind == PathResult::No) {
        out.kind = CliqueCosetResult::EmptyEff;
        return out;
    }
    auto eff = compute_eff(a, s, caps);
    if (eff.kind == EffResult::Exhausted) {
        out.kind = CliqueCosetResult::Exhausted;
        return out;
    }
    if (eff.kind != EffResult::Ok) {
        out.kind = CliqueCosetResult::Failed;
        out.diagnostic = eff.diagnostic;
        return out;
    }
    out.looped = eff.looped;
    auto full = abelianize(a.graph, path.word);
    IntVec u(out.looped.size());
    for (std::size_t i = 0; i < out.looped.size(); ++i) u[i] = full[out.looped[i]];
    out.coset = canonical_from_origin_gens(u, eff.gens);
    out.kind = CliqueCosetResult::Ok;
    return out;
}

enum class Decision { Reachable, Unreachable, Refused };

struct CliqueDecision {
    Decision decision;
    std::string reason;
    CliqueCosetResult coset;
};

// Reachable iff 0 lies in Eff(s,t), equivalently -u in Eff(s,s).
inline CliqueDecision decide_clique(const ValenceSystem& a, std::size_t s,
                                    std::size_t t, const CliqueCaps& caps = {}) {
    require(a.graph.is_clique(), "decide_clique: graph must be a clique");
    require(check_bidirected(a).empty(), "decide_clique: system must be bidirected");
    CliqueDecision out;
    out.coset = compute_coset_cliques(a, s, t, caps);
    switch (out.coset.kind) {
        case CliqueCosetResult::EmptyEff:
            out.decision = Decision::Unreachable;
            out.reason = "no neutral-on-counters run within the bounded search";
            return out;
        case CliqueCosetResult::Exhausted:
            out.decision = Decision::Refused;
            out.reason = "semigroup search budget exhausted";
            return out;
        case CliqueCosetResult::Failed:
            out.decision = Decision::Refused;
            out.reason = out.coset.diagnostic;
            return out;
        case CliqueCosetResult::Ok:
            break;
    }
    IntVec zero(out.coset.looped.size(), 0);
    bool member = canonical_member(out.coset.coset, zero);
    out.decision = member ? Decision::Reachable : Decision::Unreachable;
    out.reason = member ? "0 lies in the effect coset" : "0 outside the effect coset";
    return out;
}

}  // namespace valence
