#pragma once

#include "valence/circuit.hpp"
#include "valence/grammar.hpp"
#include "valence/intlin.hpp"

namespace valence {

// Coset circuit for a bidirected k-grammar, built level by level with
// emptiness queries interleaved: gates for S_i, S'_i, O_a and <-a+b> are
// leaves; H_a, L_a, M_a, K_a and K_{a->u} follow the coset equations.
class EmptinessCircuit {
public:
    explicit EmptinessCircuit(const KGrammar& g)
        : g_(g), circuit_(g.symbols()), R_(compute_R(g)) {
        build();
    }

    const KGrammar& grammar() const { return g_; }
    const Circuit& circuit() const { return circuit_; }
    const std::vector<bool>& R() const { return R_; }
    const LeadstoRelation& leadsto() const { return rel_; }

    std::optional<std::size_t> h_gate(std::size_t a) const { return h_[a]; }
    std::optional<std::size_t> l_gate(std::size_t a) const { return l_[a]; }
    std::optional<std::size_t> m_gate(std::size_t a) const { return m_[a]; }
    std::optional<std::size_t> k_gate(std::size_t a) const { return k_[a]; }
    std::size_t s_gate(int level) const { return s_.at(level); }
    std::size_t sp_gate(int level) const { return sp_.at(level); }
    std::size_t o_gate(std::size_t a) const { return o_.at(a); }
    std::optional<std::size_t> rewrite_k_gate(std::size_t idx) const {
        return kprod_[idx];
    }

    // L(a) emptiness via the coset characterization: an upward cross
    // production puts its target into L(a) directly; otherwise emptiness is
    // read off the K gates of rewrite or downward cross productions.
    bool language_nonempty(std::size_t a) const {
        for (const auto& cr : g_.crosses)
            if (cr.from == a && g_.nt_level[cr.to] > g_.nt_level[cr.from]) return true;
        if (g_.nt_level[a] == 0) {
            for (std::size_t i = 0; i < g_.rewrites.size(); ++i)
                if (g_.rewrites[i].lhs == a && kprod_[i] &&
                    !circuit_.gate_is_empty(*kprod_[i]))
                    return true;
            return false;
        }
        for (const auto& cr : g_.crosses) {
            if (cr.from != a || g_.nt_level[cr.to] != g_.nt_level[a] - 1) continue;
            if (k_[cr.to] && !circuit_.gate_is_empty(*k_[cr.to])) return true;
        }
        return false;
    }

    // the one-step oracle: does some element of the coset L_c have
    // coordinate 1 at b?
    bool l_has_coordinate_one(std::size_t c, std::size_t b) const {
        if (!l_[c]) return false;
        const auto& val = circuit_.evaluate_canonical(*l_[c]);
        if (val.empty) return false;
        auto [base, step] = canonical_coord_progression(val, coord(b));
        if (step == 0) return base == 1;
        return (Int(1) - base) % step == 0;
    }

    // dense circuit coordinate of a grammar symbol
    std::size_t coord(std::size_t sym) const {
        return KGrammar::is_terminal(sym) ? g_.nts() + (sym - kTerminalBase) : sym;
    }

private:
    IntVec unit(std::size_t sym, const Int& val = 1) const {
        IntVec v(g_.symbols(), 0);
        v[coord(sym)] = val;
        return v;
    }

    IntVec config_vec(const ConfigVector& u) const {
        IntVec v(g_.symbols(), 0);
        for (const auto& [sym, c] : u.coords) v[coord(sym)] = c;
        return v;
    }

    // leaf for the group of all vectors supported on the given symbols
    std::size_t free_group_leaf(std::vector<std::size_t> coords) {
        std::sort(coords.begin(), coords.end());
        std::vector<IntVec> gens;
        for (auto c : coords) {
            IntVec v(g_.symbols(), 0);
            v[c] = 1;
            gens.push_back(std::move(v));
        }
        return circuit_.add_lattice_leaf(IntVec(g_.symbols(), 0), gens);
    }

    std::size_t point_leaf(IntVec v) {
        CanonicalCoset canon;
        canon.empty = false;
        canon.origin = v;
        canon.basis = IntMatrix(g_.symbols(), 0);
        return circuit_.add_leaf(coset_point(std::move(v)), std::move(canon));
    }

    void build() {
        const std::size_t nn = g_.nts();
        h_.assign(nn, std::nullopt);
        l_.assign(nn, std::nullopt);
        m_.assign(nn, std::nullopt);
        k_.assign(nn, std::nullopt);
        kprod_.assign(g_.rewrites.size(), std::nullopt);

        // S_i and S'_i: everything of level <= i (resp. nonterminals of level
        // <= i and terminals of level < i) pinned to zero
        for (int i = 0; i <= g_.k; ++i) {
            std::vector<std::size_t> free_s, free_sp;
            for (std::size_t a = 0; a < nn; ++a)
                if (g_.nt_level[a] > i) {
                    free_s.push_back(coord(a));
                    free_sp.push_back(coord(a));
                }
            for (std::size_t t = 0; t < g_.terminals(); ++t) {
                if (g_.t_level[t] > i) free_s.push_back(coord(kTerminalBase + t));
                if (g_.t_level[t] >= i) free_sp.push_back(coord(kTerminalBase + t));
            }
            s_.push_back(free_group_leaf(free_s));
            sp_.push_back(free_group_leaf(free_sp));
        }
        // O_a: the coset { u : u(a) = 1 }
        for (std::size_t a = 0; a < nn; ++a) {
            IntMatrix row(1, g_.symbols());
            row.at(0, coord(a)) = 1;
            CanonicalCoset canon;
            canon.empty = false;
            canon.origin.assign(g_.symbols(), 0);
            canon.origin[coord(a)] = 1;
            std::vector<IntVec> gens;
            for (std::size_t c = 0; c < g_.symbols(); ++c) {
                if (c == coord(a)) continue;
                IntVec v(g_.symbols(), 0);
                v[c] = 1;
                gens.push_back(std::move(v));
            }
            canon.basis = IntMatrix::from_cols(g_.symbols(), gens);
            o_.push_back(circuit_.add_leaf(CosetRep{row, {Int(1)}, g_.symbols()},
                                           std::move(canon)));
        }

        // the relation ~> is grown level by level; the down-step oracle uses
        // the L gates of the previous level
        rel_ = compute_leadsto(g_, [this](std::size_t c, std::size_t b) {
            return l_has_coordinate_one(c, b);
        });

        build_level0();
        for (int i = 1; i <= g_.k; ++i) {
            // refresh ~>: L gates for level i-1 now exist
            rel_ = compute_leadsto(g_, [this](std::size_t c, std::size_t b) {
                return l_has_coordinate_one(c, b);
            });
            build_level(i);
        }
        rel_ = compute_leadsto(g_, [this](std::size_t c, std::size_t b) {
            return l_has_coordinate_one(c, b);
        });
    }

    void build_level0() {
        const std::size_t nn = g_.nts();
        // H_a from the explicit generators -b+u over productions b -> u with
        // a ~>* b; shared between nonterminals with the same reachable set
        std::map<std::vector<std::size_t>, std::size_t> shared;
        for (std::size_t a = 0; a < nn; ++a) {
            if (g_.nt_level[a] != 0 || !R_[a]) continue;
            std::vector<std::size_t> upset;
            for (std::size_t b = 0; b < nn; ++b)
                if (g_.nt_level[b] == 0 && R_[b] && rel_.reach[a].count(b))
                    upset.push_back(b);
            auto it = shared.find(upset);
            std::size_t hgate;
            if (it != shared.end()) {
                hgate = it->second;
            } else {
                std::vector<IntVec> gens;
                for (auto b : upset) {
                    for (const auto& rw : g_.rewrites) {
                        if (rw.lhs != b) continue;
                        IntVec gvec = config_vec(rw.rhs);
                        gvec[coord(b)] -= 1;
                        gens.push_back(std::move(gvec));
                    }
                    for (const auto& cr : g_.crosses) {
                        if (cr.from != b) continue;
                        IntVec gvec = unit(cr.to);
                        gvec[coord(b)] -= 1;
                        gens.push_back(std::move(gvec));
                    }
                }
                hgate = circuit_.add_lattice_leaf(IntVec(g_.symbols(), 0), gens);
                shared[upset] = hgate;
            }
            h_[a] = hgate;
            std::size_t point = point_leaf(unit(a));
            std::size_t sum = circuit_.add_sum({point, hgate});
            l_[a] = circuit_.add_intersect({sum, s_[0]});
            m_[a] = circuit_.add_intersect({sum, sp_[0]});
        }
        // K_{a->u} per rewrite production
        for (std::size_t i = 0; i < g_.rewrites.size(); ++i) {
            const auto& rw = g_.rewrites[i];
            std::vector<std::size_t> kids;
            bool ok = true;
            IntVec tpart(g_.symbols(), 0);
            for (const auto& [sym, c] : rw.rhs.coords) {
                if (KGrammar::is_terminal(sym)) {
                    tpart[coord(sym)] = c;
                    continue;
                }
                if (!m_[sym]) {
                    ok = false;  // cannot happen for RHS symbols, but be safe
                    break;
                }
                for (Int cnt = 0; cnt < c; ++cnt) kids.push_back(*m_[sym]);
            }
            if (!ok) continue;
            kids.push_back(point_leaf(tpart));
            std::size_t sum = circuit_.add_sum(kids);
            kprod_[i] = circuit_.add_intersect({sum, s_[0]});
        }
    }

    void build_level(int i) {
        const std::size_t nn = g_.nts();
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> minus_plus;
        auto minus_b_plus_c = [&](std::size_t b, std::size_t c) {
            auto key = std::make_pair(b, c);
            auto it = minus_plus.find(key);
            if (it != minus_plus.end()) return it->second;
            IntVec gvec = unit(c);
            gvec[coord(b)] -= 1;
            std::size_t gate =
                circuit_.add_lattice_leaf(IntVec(g_.symbols(), 0), {gvec});
            minus_plus[key] = gate;
            return gate;
        };
        // operand gates (<-b+c> + H_c) cap S_{i-1} are shared per cross pair
        std::map<std::pair<std::size_t, std::size_t>, std::optional<std::size_t>>
            operand_cache;
        auto down_operand = [&](std::size_t b,
                                std::size_t c) -> std::optional<std::size_t> {
            auto key = std::make_pair(b, c);
            auto it = operand_cache.find(key);
            if (it != operand_cache.end()) return it->second;
            std::optional<std::size_t> res;
            if (h_[c]) {
                std::size_t sum = circuit_.add_sum({minus_b_plus_c(b, c), *h_[c]});
                std::size_t op = circuit_.add_intersect({sum, s_[i - 1]});
                if (!circuit_.gate_is_empty(op)) res = op;
            }
            operand_cache[key] = res;
            return res;
        };
        std::map<std::vector<std::size_t>, std::size_t> shared;
        for (std::size_t a = 0; a < nn; ++a) {
            if (g_.nt_level[a] != i || !R_[a]) continue;
            std::vector<std::size_t> upset;
            for (std::size_t b = 0; b < nn; ++b)
                if (g_.nt_level[b] == i && rel_.reach[a].count(b)) upset.push_back(b);
            auto it = shared.find(upset);
            std::size_t hgate;
            if (it != shared.end()) {
                hgate = it->second;
            } else {
                // H_a = sum over (b,c) in P_a of (<-b+c> + H_c) cap S_{i-1},
                // keeping only nonempty operands, plus the explicit step
                // differences -b+d of upward cross productions b -> d
                std::vector<std::size_t> operands;
                for (const auto& cr : g_.crosses) {
                    if (g_.nt_level[cr.from] != i || g_.nt_level[cr.to] != i - 1)
                        continue;
                    if (std::find(upset.begin(), upset.end(), cr.from) == upset.end())
                        continue;
                    if (auto op = down_operand(cr.from, cr.to)) operands.push_back(*op);
                }
                std::vector<IntVec> upgens;
                for (const auto& cr : g_.crosses) {
                    if (g_.nt_level[cr.from] != i || g_.nt_level[cr.to] <= i) continue;
                    if (std::find(upset.begin(), upset.end(), cr.from) == upset.end())
                        continue;
                    IntVec gvec = unit(cr.to);
                    gvec[coord(cr.from)] -= 1;
                    upgens.push_back(std::move(gvec));
                }
                if (!upgens.empty() || operands.empty())
                    operands.push_back(circuit_.add_lattice_leaf(
                        IntVec(g_.symbols(), 0), upgens));
                hgate = operands.size() == 1 ? operands[0]
                                             : circuit_.add_sum(operands);
                shared[upset] = hgate;
            }
            h_[a] = hgate;
            std::size_t point = point_leaf(unit(a));
            std::size_t sum = circuit_.add_sum({point, hgate});
            l_[a] = circuit_.add_intersect({sum, s_[i]});
            m_[a] = circuit_.add_intersect({sum, sp_[i]});
        }
        // summand gates H_b cap <-b+S'_i> and their side conditions
        // (-b+S'_i) cap H_b depend only on b; share them across all K_a
        std::map<std::size_t, std::optional<std::size_t>> summand_cache;
        auto summand = [&](std::size_t b) -> std::optional<std::size_t> {
            auto it = summand_cache.find(b);
            if (it != summand_cache.end()) return it->second;
            std::optional<std::size_t> res;
            if (h_[b]) {
                std::size_t neg_point = point_leaf(unit(b, Int(-1)));
                std::size_t cond_sum = circuit_.add_sum({neg_point, sp_[i]});
                std::size_t cond = circuit_.add_intersect({cond_sum, *h_[b]});
                if (!circuit_.gate_is_empty(cond)) {
                    // <-b+S'_i> is the free group over the S'_i coords and b
                    std::vector<std::size_t> coords{coord(b)};
                    for (std::size_t x = 0; x < g_.nts(); ++x)
                        if (g_.nt_level[x] > i) coords.push_back(coord(x));
                    for (std::size_t t = 0; t < g_.terminals(); ++t)
                        if (g_.t_level[t] >= i)
                            coords.push_back(coord(kTerminalBase + t));
                    std::size_t grp = free_group_leaf(coords);
                    res = circuit_.add_intersect({*h_[b], grp});
                }
            }
            summand_cache[b] = res;
            return res;
        };
        // K_a for a in R_{i-1}: (L_a + sum of the summands) cap S_i
        for (std::size_t a = 0; a < nn; ++a) {
            if (g_.nt_level[a] != i - 1 || !R_[a] || !l_[a]) continue;
            std::vector<std::size_t> kids{*l_[a]};
            for (std::size_t b = 0; b < nn; ++b) {
                if (g_.nt_level[b] != i || !R_[b]) continue;
                if (!rel_.reach[a].count(b)) continue;
                if (auto s = summand(b)) kids.push_back(*s);
            }
            std::size_t sum = circuit_.add_sum(kids);
            k_[a] = circuit_.add_intersect({sum, s_[i]});
        }
    }

    const KGrammar& g_;
    Circuit circuit_;
    std::vector<bool> R_;
    LeadstoRelation rel_;
    std::vector<std::optional<std::size_t>> h_, l_, m_, k_, kprod_;
    std::vector<std::size_t> s_, sp_, o_;
};

// ---------------------------------------------------------------------------
// Kirchhoff graphs: connecting derivations between the members of a
// ~>*-component, with weights composing additively up to the relation
// approx_a (difference generated by pairs e + e~).
// ---------------------------------------------------------------------------

struct KirchhoffResult {
    bool known = false;
    std::vector<std::size_t> component;           // b with a ~>* b, index order
    std::map<std::pair<std::size_t, std::size_t>, ConfigVector> weight;
    std::string note;
};

namespace detail {
// difference of two configs lies in the group generated by e + e~ over
// higher-level e reachable from a
inline bool approx_equal(const KGrammar& g, const LeadstoRelation& rel,
                         std::size_t a, const ConfigVector& u,
                         const ConfigVector& v) {
    std::vector<std::size_t> pairs;
    int i = g.nt_level[a];
    for (std::size_t e = 0; e < g.nts(); ++e)
        if (g.nt_level[e] > i && rel.reach[a].count(e)) pairs.push_back(e);
    // collect the support of u - v
    std::map<std::size_t, Int> diff;
    for (const auto& [s, c] : u.coords) diff[s] += c;
    for (const auto& [s, c] : v.coords) diff[s] -= c;
    std::vector<std::size_t> support;
    for (const auto& [s, c] : diff)
        if (c != 0) support.push_back(s);
    std::map<std::size_t, std::size_t> pos;
    for (auto s : support) pos[s] = pos.size();
    for (auto e : pairs) {
        if (!pos.count(e)) pos[e] = pos.size();
        if (!pos.count(g.involution[e])) pos[g.involution[e]] = pos.size();
    }
    IntMatrix m(pos.size(), pairs.size());
    IntVec rhs(pos.size(), 0);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        m.at(pos[pairs[j]], j) += 1;
        m.at(pos[g.involution[pairs[j]]], j) += 1;
    }
    for (const auto& [s, c] : diff)
        if (c != 0) rhs[pos[s]] = c;
    return solve_ild(m, rhs).has_value();
}
}  // namespace detail

inline bool approx_a_equal(const KGrammar& g, const LeadstoRelation& rel,
                           std::size_t a, const ConfigVector& u,
                           const ConfigVector& v) {
    return detail::approx_equal(g, rel, a, u, v);
}

inline KirchhoffResult kirchhoff_graph(const KGrammar& g, const LeadstoRelation& rel,
                                       std::size_t a, const DeriveCaps& caps = {}) {
    KirchhoffResult out;
    auto R = compute_R(g);
    int i = g.nt_level[a];
    for (std::size_t b = 0; b < g.nts(); ++b)
        if (g.nt_level[b] == i && R[b] && rel.reach[a].count(b))
            out.component.push_back(b);
    if (out.component.empty()) {
        out.note = "a is not in R";
        return out;
    }
    const auto& comp = out.component;
    detail::DeriveContext ctx(g, caps);
    // chain weights between consecutive members
    std::map<std::pair<std::size_t, std::size_t>, ConfigVector> link;
    for (std::size_t j = 0; j + 1 < comp.size(); ++j) {
        ConfigVector start;
        start.add(comp[j], 1);
        std::optional<ConfigVector> fwd;
        for (const auto& u : ctx.derive(i, start)) {
            if (u.get(comp[j + 1]) < 1) continue;
            ConfigVector w = u;
            w.add(comp[j + 1], -1);
            bool clean = true;  // weight must avoid level-i and lower symbols
            for (const auto& [sym, c] : w.coords)
                if (g.symbol_level(sym) <= i) clean = false;
            if (!clean) continue;
            fwd = w;
            break;
        }
        if (!fwd) {
            out.note = "no connecting derivation from " + g.nt_names[comp[j]] +
                       " to " + g.nt_names[comp[j + 1]] + " within caps";
            return out;
        }
        // reverse link with weight approx-equal to the inverse
        ConfigVector rstart;
        rstart.add(comp[j + 1], 1);
        std::optional<ConfigVector> bwd;
        ConfigVector want = g.inv_config(*fwd);
        for (const auto& u : ctx.derive(i, rstart)) {
            if (u.get(comp[j]) < 1) continue;
            ConfigVector w = u;
            w.add(comp[j], -1);
            bool clean = true;
            for (const auto& [sym, c] : w.coords)
                if (g.symbol_level(sym) <= i) clean = false;
            if (!clean) continue;
            if (detail::approx_equal(g, rel, a, w, want)) {
                bwd = w;
                break;
            }
        }
        if (!bwd) {
            out.note = "no reverse derivation from " + g.nt_names[comp[j + 1]] +
                       " to " + g.nt_names[comp[j]] + " within caps";
            return out;
        }
        link[{j, j + 1}] = *fwd;
        link[{j + 1, j}] = *bwd;
    }
    // compose along the chain
    for (std::size_t r = 0; r < comp.size(); ++r)
        for (std::size_t s = 0; s < comp.size(); ++s) {
            ConfigVector w;
            if (r < s)
                for (std::size_t j = r; j < s; ++j) w = w.plus(link[{j, j + 1}]);
            else if (r > s)
                for (std::size_t j = r; j > s; --j) w = w.plus(link[{j, j - 1}]);
            out.weight[{comp[r], comp[s]}] = std::move(w);
        }
    out.known = true;
    return out;
}

// g_{b,b} = 0 exactly and the triangle law up to approx_a.
inline bool kirchhoff_verify(const KGrammar& g, const LeadstoRelation& rel,
                             std::size_t a, const KirchhoffResult& kg) {
    if (!kg.known) return false;
    for (auto b : kg.component)
        if (!kg.weight.at({b, b}).coords.empty()) return false;
    for (auto b : kg.component)
        for (auto c : kg.component)
            for (auto d : kg.component) {
                ConfigVector lhs = kg.weight.at({b, c}).plus(kg.weight.at({c, d}));
                if (!detail::approx_equal(g, rel, a, lhs, kg.weight.at({b, d})))
                    return false;
            }
    return true;
}

// The permutation law checked over all transpositions of up to four indices.
inline bool kirchhoff_permutation_law(const KGrammar& g, const LeadstoRelation& rel,
                                      std::size_t a, const KirchhoffResult& kg) {
    if (!kg.known) return false;
    const auto& comp = kg.component;
    std::size_t n = std::min<std::size_t>(comp.size(), 4);
    std::vector<std::size_t> es(comp.begin(), comp.begin() + n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            ConfigVector lhs, rhs;
            for (std::size_t j = 0; j < n; ++j) {
                lhs = lhs.plus(kg.weight.at({es[j], es[j]}));
                std::size_t target = j == x ? es[y] : (j == y ? es[x] : es[j]);
                rhs = rhs.plus(kg.weight.at({es[j], target}));
            }
            // lhs uses the identity pairing, rhs the transposition
            if (!detail::approx_equal(g, rel, a, lhs, rhs)) return false;
        }
    return true;
}

}  // namespace valence
