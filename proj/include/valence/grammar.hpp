#pragma once

#include <array>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "valence/int.hpp"
#include "valence/matrix.hpp"

namespace valence {

// Stable symbol encoding: nonterminals count up from 0, terminals live in a
// high index range, so adding symbols never shifts existing indices.
constexpr std::size_t kTerminalBase = std::size_t(1) << 62;

// Sparse vector over the grammar's symbols.
struct ConfigVector {
    std::map<std::size_t, Int> coords;

    Int get(std::size_t sym) const {
        auto it = coords.find(sym);
        return it == coords.end() ? Int(0) : it->second;
    }
    void add(std::size_t sym, const Int& delta) {
        auto it = coords.find(sym);
        if (it == coords.end()) {
            if (delta != 0) coords[sym] = delta;
            return;
        }
        it->second += delta;
        if (it->second == 0) coords.erase(it);
    }
    ConfigVector plus(const ConfigVector& o) const {
        ConfigVector out = *this;
        for (const auto& [s, c] : o.coords) out.add(s, c);
        return out;
    }
    bool operator==(const ConfigVector& o) const = default;
    auto operator<=>(const ConfigVector& o) const = default;
};

// Leveled grammar deriving vectors in N^N + Z^T.
struct KGrammar {
    int k = 0;
    std::vector<std::string> nt_names;
    std::map<std::string, std::size_t> nt_index;
    std::vector<int> nt_level;
    std::vector<std::size_t> involution;
    std::vector<bool> synthetic;  // normalization intermediates

    std::vector<std::string> t_names;
    std::map<std::string, std::size_t> t_index;
    std::vector<int> t_level;

    struct Rewrite {
        std::size_t lhs;  // in N_0
        ConfigVector rhs;  // nonnegative on nonterminals, support in N_0 + T
    };
    struct Cross {
        std::size_t from, to;
    };
    std::vector<Rewrite> rewrites;
    std::vector<Cross> crosses;

    std::size_t nts() const { return nt_names.size(); }
    std::size_t terminals() const { return t_names.size(); }
    std::size_t symbols() const { return nts() + terminals(); }
    static bool is_terminal(std::size_t sym) { return sym >= kTerminalBase; }
    static std::size_t terminal_sym(std::size_t tidx) { return kTerminalBase + tidx; }
    bool valid_symbol(std::size_t sym) const {
        return is_terminal(sym) ? sym - kTerminalBase < terminals() : sym < nts();
    }
    int symbol_level(std::size_t sym) const {
        return is_terminal(sym) ? t_level[sym - kTerminalBase] : nt_level[sym];
    }
    std::string symbol_name(std::size_t sym) const {
        return is_terminal(sym) ? t_names[sym - kTerminalBase] : nt_names[sym];
    }

    std::size_t add_nt(const std::string& name, int level, bool synth = false) {
        require(nt_index.find(name) == nt_index.end(), "duplicate nonterminal " + name);
        require(level >= 0 && level <= k, "nonterminal level out of range");
        nt_names.push_back(name);
        nt_index[name] = nt_names.size() - 1;
        nt_level.push_back(level);
        involution.push_back(nt_names.size() - 1);  // self until declared
        synthetic.push_back(synth);
        return nt_names.size() - 1;
    }

    std::size_t add_terminal(const std::string& name, int level) {
        require(t_index.find(name) == t_index.end(), "duplicate terminal " + name);
        require(level >= 0 && level <= k, "terminal level out of range");
        t_names.push_back(name);
        t_index[name] = t_names.size() - 1;
        t_level.push_back(level);
        return terminal_sym(t_names.size() - 1);
    }

    void set_involution(std::size_t a, std::size_t b) {
        require(a < nts() && b < nts(), "involution: missing nonterminal");
        require(nt_level[a] == nt_level[b], "involution must preserve levels");
        involution[a] = b;
        involution[b] = a;
    }

    void add_rewrite(std::size_t lhs, ConfigVector rhs) {
        require(lhs < nts() && nt_level[lhs] == 0, "rewrite lhs must be level 0");
        for (const auto& [sym, c] : rhs.coords) {
            require(valid_symbol(sym), "rewrite rhs: unknown symbol");
            if (!is_terminal(sym)) {
                require(c >= 0, "rewrite rhs: negative nonterminal coordinate");
                require(nt_level[sym] == 0, "rewrite rhs nonterminals must be level 0");
            }
        }
        rewrites.push_back({lhs, std::move(rhs)});
    }

    void add_cross(std::size_t from, std::size_t to) {
        require(from < nts() && to < nts(), "cross: missing nonterminal");
        require(nt_level[from] != nt_level[to], "cross: levels must differ");
        crosses.push_back({from, to});
    }

    // u~: involution on nonterminal coordinates, negation on terminals
    ConfigVector inv_config(const ConfigVector& u) const {
        ConfigVector out;
        for (const auto& [sym, c] : u.coords) {
            if (is_terminal(sym))
                out.add(sym, -c);
            else
                out.add(involution[sym], c);
        }
        return out;
    }

    std::string config_to_string(const ConfigVector& u) const {
        if (u.coords.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [sym, c] : u.coords) {
            if (!first) os << " + ";
            first = false;
            os << symbol_name(sym) << ':' << c;
        }
        return os.str();
    }
};

// Nonterminals occurring on some right-hand side (cross targets included).
inline std::vector<bool> compute_R(const KGrammar& g) {
    std::vector<bool> r(g.nts(), false);
    for (const auto& rw : g.rewrites)
        for (const auto& [sym, c] : rw.rhs.coords)
            if (!g.is_terminal(sym)) r[sym] = true;
    for (const auto& cr : g.crosses) r[cr.to] = true;
    return r;
}

// ---------------------------------------------------------------------------
// Cross-level normalization: a cross production spanning more than one level
// is expanded into a ladder of fresh intermediates, one level apart. Ladders
// are shared per unordered endpoint pair, and the involution pairs a ladder
// with the ladder of the inverse endpoints.
// ---------------------------------------------------------------------------

inline KGrammar normalize_cross_levels(const KGrammar& g) {
    bool needed = false;
    for (const auto& cr : g.crosses)
        if (std::abs(g.nt_level[cr.from] - g.nt_level[cr.to]) != 1) needed = true;
    if (!needed) return g;

    KGrammar out = g;
    out.crosses.clear();
    // ladder key: endpoints ordered lower-level first
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> ladders;
    auto ladder_of = [&](std::size_t lo, std::size_t hi) -> std::vector<std::size_t>& {
        auto key = std::make_pair(lo, hi);
        auto it = ladders.find(key);
        if (it != ladders.end()) return it->second;
        int gap = out.nt_level[hi] - out.nt_level[lo];
        std::vector<std::size_t> mids;
        for (int j = 1; j < gap; ++j)
            mids.push_back(out.add_nt("_x" + std::to_string(ladders.size()) + "_" +
                                          std::to_string(j),
                                      out.nt_level[lo] + j, true));
        return ladders.emplace(key, std::move(mids)).first->second;
    };

    for (const auto& cr : g.crosses) {
        int lf = g.nt_level[cr.from], lt = g.nt_level[cr.to];
        if (std::abs(lf - lt) == 1) {
            out.crosses.push_back(cr);
            continue;
        }
        std::size_t lo = lf < lt ? cr.from : cr.to;
        std::size_t hi = lf < lt ? cr.to : cr.from;
        auto mids = ladder_of(lo, hi);  // copy below; reference invalidated by adds
        std::vector<std::size_t> chain{lo};
        chain.insert(chain.end(), mids.begin(), mids.end());
        chain.push_back(hi);
        if (lf < lt) {
            for (std::size_t j = 0; j + 1 < chain.size(); ++j)
                out.crosses.push_back({chain[j], chain[j + 1]});
        } else {
            for (std::size_t j = chain.size(); j-- > 1;)
                out.crosses.push_back({chain[j], chain[j - 1]});
        }
    }
    // involution on intermediates: ladder {a,b} pairs with ladder {a~, b~}
    for (const auto& [key, mids] : ladders) {
        auto partner = std::make_pair(out.involution[key.first],
                                      out.involution[key.second]);
        auto it = ladders.find(partner);
        if (it == ladders.end()) continue;
        for (std::size_t j = 0; j < mids.size(); ++j)
            out.involution[mids[j]] = it->second[j];
    }
    // drop duplicate cross productions from shared ladders
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<KGrammar::Cross> dedup;
    for (const auto& cr : out.crosses)
        if (seen.emplace(cr.from, cr.to).second) dedup.push_back(cr);
    out.crosses = std::move(dedup);
    return out;
}

// ---------------------------------------------------------------------------
// Bounded derivation: under-approximates the sets reachable via =>*_i.
// ---------------------------------------------------------------------------

struct DeriveCaps {
    std::size_t step_cap = 6;    // BFS depth per level
    Int norm_cap = 8;            // max absolute coordinate
    std::size_t config_cap = 4000;
};

namespace detail {

struct DeriveContext {
    const KGrammar& g;
    DeriveCaps caps;
    // memoized bounded language per nonterminal (complete configs only)
    std::map<std::size_t, std::vector<ConfigVector>> lang;
    std::set<std::size_t> in_progress;

    explicit DeriveContext(const KGrammar& gr, DeriveCaps c) : g(gr), caps(c) {}

    bool within_caps(const ConfigVector& u) const {
        for (const auto& [sym, c] : u.coords)
            if (abs_int(c) > caps.norm_cap) return false;
        return true;
    }

    // all configs reachable from `start` via =>*_i
    std::vector<ConfigVector> derive(std::size_t level, const ConfigVector& start) {
        std::set<ConfigVector> seen{start};
        std::deque<std::pair<ConfigVector, std::size_t>> queue{{start, 0}};
        std::vector<ConfigVector> out{start};
        while (!queue.empty()) {
            auto [cur, depth] = queue.front();
            queue.pop_front();
            if (depth >= caps.step_cap || seen.size() > caps.config_cap) continue;
            for (const auto& next : steps(level, cur)) {
                if (!within_caps(next)) continue;
                if (!seen.insert(next).second) continue;
                out.push_back(next);
                queue.emplace_back(next, depth + 1);
            }
        }
        return out;
    }

    // single =>_i steps from cur
    std::vector<ConfigVector> steps(std::size_t level, const ConfigVector& cur) {
        std::vector<ConfigVector> out;
        for (const auto& [sym, count] : cur.coords) {
            if (g.is_terminal(sym) || count <= 0) continue;
            if (static_cast<std::size_t>(g.nt_level[sym]) != level) continue;
            // cross productions
            for (const auto& cr : g.crosses) {
                if (cr.from != sym) continue;
                int lt = g.nt_level[cr.to];
                if (lt == static_cast<int>(level) + 1) {
                    ConfigVector next = cur;
                    next.add(sym, -1);
                    next.add(cr.to, 1);
                    out.push_back(std::move(next));
                } else if (lt == static_cast<int>(level) - 1) {
                    for (const auto& ins : bounded_language(cr.to)) {
                        ConfigVector next = cur;
                        next.add(sym, -1);
                        for (const auto& [s2, c2] : ins.coords) next.add(s2, c2);
                        out.push_back(std::move(next));
                    }
                }
            }
            if (level == 0) {
                for (const auto& rw : g.rewrites) {
                    if (rw.lhs != sym) continue;
                    ConfigVector next = cur;
                    next.add(sym, -1);
                    for (const auto& [s2, c2] : rw.rhs.coords) next.add(s2, c2);
                    out.push_back(std::move(next));
                }
            }
        }
        return out;
    }

    // bounded L(a): derivable configs with no symbols at or below level(a)
    const std::vector<ConfigVector>& bounded_language(std::size_t a) {
        auto it = lang.find(a);
        if (it != lang.end()) return it->second;
        if (in_progress.count(a)) {
            static const std::vector<ConfigVector> empty;
            return empty;  // cycles across levels cannot occur, but be safe
        }
        in_progress.insert(a);
        std::vector<ConfigVector> complete;
        ConfigVector start;
        start.add(a, 1);
        int level = g.nt_level[a];
        for (const auto& u : derive(level, start)) {
            bool ok = true;
            for (const auto& [sym, c] : u.coords)
                if (g.symbol_level(sym) <= level) {
                    ok = false;
                    break;
                }
            if (ok) complete.push_back(u);
        }
        in_progress.erase(a);
        return lang.emplace(a, std::move(complete)).first->second;
    }
};

}  // namespace detail

// Configs reachable from the single symbol a via =>*_{level(a)}.
inline std::vector<ConfigVector> bounded_derive(const KGrammar& g, std::size_t a,
                                                const DeriveCaps& caps = {}) {
    require(a < g.nts(), "bounded_derive: missing nonterminal");
    detail::DeriveContext ctx(g, caps);
    ConfigVector start;
    start.add(a, 1);
    return ctx.derive(g.nt_level[a], start);
}

// Bounded under-approximation of L(a).
inline std::vector<ConfigVector> bounded_language(const KGrammar& g, std::size_t a,
                                                  const DeriveCaps& caps = {}) {
    require(a < g.nts(), "bounded_language: missing nonterminal");
    detail::DeriveContext ctx(g, caps);
    return ctx.bounded_language(a);
}

// ---------------------------------------------------------------------------
// Bidirectedness validation: (1) and (3) are syntactic and exact; (2), (4),
// (5) rely on the bounded derivation engine and may come back Unknown.
// ---------------------------------------------------------------------------

struct ConditionReport {
    enum Status { Holds, Violated, Unknown } status;
    std::string detail;
};

struct BidirectednessReport {
    std::array<ConditionReport, 5> condition;
    bool exact_ok() const {
        return condition[0].status == ConditionReport::Holds &&
               condition[2].status == ConditionReport::Holds;
    }
};

namespace detail {
// Cross pairs with synthetic ladder intermediates contracted away.
inline std::set<std::pair<std::size_t, std::size_t>> effective_crosses(
    const KGrammar& g) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    std::map<std::size_t, std::vector<std::size_t>> succ;
    for (const auto& cr : g.crosses) succ[cr.from].push_back(cr.to);
    for (const auto& cr : g.crosses) {
        if (g.synthetic[cr.from]) continue;
        // walk synthetic chains forward
        std::deque<std::size_t> queue{cr.to};
        std::set<std::size_t> seen;
        while (!queue.empty()) {
            std::size_t at = queue.front();
            queue.pop_front();
            if (!seen.insert(at).second) continue;
            if (!g.synthetic[at]) {
                out.emplace(cr.from, at);
                continue;
            }
            for (auto nxt : succ[at]) queue.push_back(nxt);
        }
    }
    return out;
}
}  // namespace detail

inline BidirectednessReport validate_bidirected(const KGrammar& g,
                                                const DeriveCaps& caps = {}) {
    BidirectednessReport rep;
    auto R = compute_R(g);

    // (1) every production has its involution companion
    rep.condition[0] = {ConditionReport::Holds, ""};
    for (const auto& rw : g.rewrites) {
        KGrammar::Rewrite want{g.involution[rw.lhs], g.inv_config(rw.rhs)};
        bool found = false;
        for (const auto& other : g.rewrites)
            if (other.lhs == want.lhs && other.rhs == want.rhs) found = true;
        if (!found) {
            rep.condition[0] = {ConditionReport::Violated,
                                "missing inverse of " + g.nt_names[rw.lhs] + " -> " +
                                    g.config_to_string(rw.rhs)};
            break;
        }
    }
    if (rep.condition[0].status == ConditionReport::Holds)
        for (const auto& cr : g.crosses) {
            std::pair<std::size_t, std::size_t> want{g.involution[cr.from],
                                                     g.involution[cr.to]};
            bool found = false;
            for (const auto& other : g.crosses)
                if (other.from == want.first && other.to == want.second) found = true;
            if (!found) {
                rep.condition[0] = {ConditionReport::Violated,
                                    "missing inverse of cross " + g.nt_names[cr.from] +
                                        " -> " + g.nt_names[cr.to]};
                break;
            }
        }

    // (2) reversing rewrite productions, checked by bounded search
    rep.condition[1] = {ConditionReport::Holds, ""};
    {
        detail::DeriveContext ctx(g, caps);
        bool unknown = false;
        for (const auto& rw : g.rewrites) {
            if (!R[rw.lhs]) continue;
            for (const auto& [b, cnt] : rw.rhs.coords) {
                if (g.is_terminal(b) || cnt <= 0 || !R[b]) continue;
                // rest must live in N^{R_0} + Z^T
                ConfigVector rest = rw.rhs;
                rest.add(b, -1);
                bool applicable = true;
                for (const auto& [sym, c] : rest.coords)
                    if (!g.is_terminal(sym) && (!R[sym] || g.nt_level[sym] != 0))
                        applicable = false;
                if (!applicable) continue;
                ConfigVector target = g.inv_config(rest);
                target.add(rw.lhs, 1);
                ConfigVector start;
                start.add(b, 1);
                bool found = false;
                for (const auto& u : ctx.derive(0, start))
                    if (u == target) found = true;
                if (!found) unknown = true;
            }
        }
        if (unknown)
            rep.condition[1] = {ConditionReport::Unknown,
                                "some reverse derivations not found within caps"};
    }

    // (3) cross productions reverse for sources in R (on effective pairs,
    // ladder intermediates contracted)
    rep.condition[2] = {ConditionReport::Holds, ""};
    {
        auto eff = detail::effective_crosses(g);
        std::set<std::size_t> eff_r;  // effective RHS occurrences
        for (const auto& rw : g.rewrites)
            for (const auto& [sym, c] : rw.rhs.coords)
                if (!g.is_terminal(sym)) eff_r.insert(sym);
        for (const auto& [from, to] : eff) eff_r.insert(to);
        for (const auto& [from, to] : eff) {
            if (!eff_r.count(from)) continue;
            if (!eff.count({to, from})) {
                rep.condition[2] = {ConditionReport::Violated,
                                    "missing reverse cross " + g.nt_names[to] + " -> " +
                                        g.nt_names[from]};
                break;
            }
        }
    }

    // (4) every a in R has a nonempty bounded language
    rep.condition[3] = {ConditionReport::Holds, ""};
    {
        detail::DeriveContext ctx(g, caps);
        for (std::size_t a = 0; a < g.nts(); ++a) {
            if (!R[a]) continue;
            if (ctx.bounded_language(a).empty()) {
                rep.condition[3] = {ConditionReport::Unknown,
                                    "no bounded witness for L(" + g.nt_names[a] + ")"};
                break;
            }
        }
    }

    // (5) a =>*_0 a + a + a~ for a in R_0
    rep.condition[4] = {ConditionReport::Holds, ""};
    {
        detail::DeriveContext ctx(g, caps);
        for (std::size_t a = 0; a < g.nts(); ++a) {
            if (!R[a] || g.nt_level[a] != 0) continue;
            ConfigVector target;
            target.add(a, 2);
            target.add(g.involution[a], 1);
            ConfigVector start;
            start.add(a, 1);
            bool found = false;
            for (const auto& u : ctx.derive(0, start))
                if (u == target) found = true;
            if (!found) {
                rep.condition[4] = {ConditionReport::Unknown,
                                    "pair creation not found for " + g.nt_names[a]};
                break;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The one-step relation: for a in N_i, a ~> b iff b occurs in some single
// level-i derivation step from a. Down productions need an oracle deciding
// whether some element of the coset L_c has coordinate 1 at b.
// ---------------------------------------------------------------------------

using LeadstoOracle = std::function<bool(std::size_t c, std::size_t b)>;

struct LeadstoRelation {
    // step[a] = one-step successors of a (levels >= level(a))
    std::vector<std::set<std::size_t>> step;
    // reach[a] = reflexive-transitive closure
    std::vector<std::set<std::size_t>> reach;
};

inline LeadstoRelation compute_leadsto(const KGrammar& g, const LeadstoOracle& down) {
    LeadstoRelation rel;
    rel.step.assign(g.nts(), {});
    for (const auto& rw : g.rewrites)
        for (const auto& [sym, c] : rw.rhs.coords)
            if (!g.is_terminal(sym) && c > 0) rel.step[rw.lhs].insert(sym);
    for (const auto& cr : g.crosses) {
        if (g.nt_level[cr.to] > g.nt_level[cr.from]) {
            rel.step[cr.from].insert(cr.to);
        } else {
            for (std::size_t b = 0; b < g.nts(); ++b)
                if (g.nt_level[b] >= g.nt_level[cr.from] && down(cr.to, b))
                    rel.step[cr.from].insert(b);
        }
    }
    rel.reach.assign(g.nts(), {});
    for (std::size_t a = 0; a < g.nts(); ++a) {
        std::deque<std::size_t> queue{a};
        while (!queue.empty()) {
            std::size_t at = queue.front();
            queue.pop_front();
            if (!rel.reach[a].insert(at).second) continue;
            for (auto b : rel.step[at]) queue.push_back(b);
        }
    }
    return rel;
}

// P_a for a at level i: pairs (b, c) with b in N_i, c in N_{i-1}, a ~>* b and
// a down production b -> c.
inline std::vector<std::pair<std::size_t, std::size_t>> cross_pairs_below(
    const KGrammar& g, const LeadstoRelation& rel, std::size_t a) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    int i = g.nt_level[a];
    for (const auto& cr : g.crosses) {
        if (g.nt_level[cr.from] != i || g.nt_level[cr.to] != i - 1) continue;
        if (rel.reach[a].count(cr.from)) out.emplace_back(cr.from, cr.to);
    }
    return out;
}

// ---------------------------------------------------------------------------
// .kg format
// ---------------------------------------------------------------------------

// `levels <k>`; `nt <name> <level> inv=<name>`; `t <name> <level>`;
// `prod <a> -> <sym>:<coef> ...`; `cross <a> <b>`.
inline KGrammar parse_grammar(std::istream& in) {
    KGrammar g;
    std::string line;
    bool have_levels = false;
    std::vector<std::pair<std::size_t, std::string>> pending_inv;
    std::vector<std::string> prod_lines, cross_lines;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "levels") {
            require(static_cast<bool>(ls >> g.k), "levels: missing k");
            require(g.k >= 0, "levels: k must be nonnegative");
            have_levels = true;
        } else if (kw == "nt") {
            require(have_levels, "nt before levels");
            std::string name, invtok;
            int level;
            require(static_cast<bool>(ls >> name >> level), "nt: needs name and level");
            std::size_t id = g.add_nt(name, level);
            if (ls >> invtok) {
                require(invtok.rfind("inv=", 0) == 0, "nt: expected inv=<name>");
                pending_inv.emplace_back(id, invtok.substr(4));
            }
        } else if (kw == "t") {
            require(have_levels, "t before levels");
            std::string name;
            int level;
            require(static_cast<bool>(ls >> name >> level), "t: needs name and level");
            g.add_terminal(name, level);
        } else if (kw == "prod") {
            prod_lines.push_back(line);
        } else if (kw == "cross") {
            cross_lines.push_back(line);
        } else {
            throw std::invalid_argument("grammar: unknown directive " + kw);
        }
    }
    for (const auto& [id, name] : pending_inv) {
        auto it = g.nt_index.find(name);
        require(it != g.nt_index.end(), "inv references missing nonterminal " + name);
        g.set_involution(id, it->second);
    }
    auto symbol = [&](const std::string& name) -> std::size_t {
        auto nit = g.nt_index.find(name);
        if (nit != g.nt_index.end()) return nit->second;
        auto tit = g.t_index.find(name);
        require(tit != g.t_index.end(), "unknown symbol " + name);
        return KGrammar::terminal_sym(tit->second);
    };
    for (const auto& l : prod_lines) {
        std::istringstream ls(l);
        std::string kw, lhs, arrow, tok;
        ls >> kw >> lhs >> arrow;
        require(arrow == "->", "prod: expected ->");
        ConfigVector rhs;
        while (ls >> tok) {
            auto colon = tok.rfind(':');
            require(colon != std::string::npos, "prod: expected <sym>:<coef>");
            rhs.add(symbol(tok.substr(0, colon)), Int(tok.substr(colon + 1)));
        }
        g.add_rewrite(symbol(lhs), std::move(rhs));
    }
    for (const auto& l : cross_lines) {
        std::istringstream ls(l);
        std::string kw, a, b;
        ls >> kw >> a >> b;
        g.add_cross(symbol(a), symbol(b));
    }
    return g;
}

inline KGrammar parse_grammar(const std::string& text) {
    std::istringstream in(text);
    return parse_grammar(in);
}

inline void write_grammar(std::ostream& out, const KGrammar& g) {
    out << "levels " << g.k << "\n";
    for (std::size_t a = 0; a < g.nts(); ++a) {
        out << "nt " << g.nt_names[a] << ' ' << g.nt_level[a];
        if (g.involution[a] != a) out << " inv=" << g.nt_names[g.involution[a]];
        out << "\n";
    }
    for (std::size_t t = 0; t < g.terminals(); ++t)
        out << "t " << g.t_names[t] << ' ' << g.t_level[t] << "\n";
    for (const auto& rw : g.rewrites) {
        out << "prod " << g.nt_names[rw.lhs] << " ->";
        for (const auto& [sym, c] : rw.rhs.coords)
            out << ' ' << g.symbol_name(sym) << ':' << c;
        out << "\n";
    }
    for (const auto& cr : g.crosses)
        out << "cross " << g.nt_names[cr.from] << ' ' << g.nt_names[cr.to] << "\n";
}

}  // namespace valence
