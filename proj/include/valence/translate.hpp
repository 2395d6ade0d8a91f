#pragma once

#include "valence/semigroup.hpp"
#include "valence/system.hpp"

namespace valence {

struct SubgroupQuery {
    Graph graph;  // looped
    Word target;
    std::vector<Word> generators;
};

// SUBMEM -> BIREACH: two states, s -(w~)-> t and generator loops at t.
inline std::tuple<ValenceSystem, std::size_t, std::size_t> submem_to_bireach(
    const SubgroupQuery& q) {
    require(q.graph.fully_looped(), "submem_to_bireach: graph must be looped");
    ValenceSystem sys;
    sys.graph = q.graph;
    std::size_t s = sys.add_state("s"), t = sys.add_state("t");
    sys.add_transition(s, t, word_inverse(q.target));
    for (const auto& w : q.generators) sys.add_transition(t, t, w);
    return {bidirected_closure(sys), s, t};
}

// BIREACH -> SUBMEM via the spanning-tree coset; nullopt when s and t are
// disconnected.
inline std::optional<SubgroupQuery> bireach_to_submem(const ValenceSystem& a,
                                                      std::size_t s, std::size_t t) {
    auto cw = compute_coset(a, s, t);
    if (!cw) return std::nullopt;
    SubgroupQuery q;
    q.graph = a.graph;
    q.target = word_inverse(cw->w0);
    q.generators = cw->gens;
    return q;
}

// w_i = u v^i: a pushdown alphabet inside the free product generated by a
// non-adjacent pair with u unlooped.
inline std::vector<Word> sim_pushdown_words(const Graph& g, std::size_t u,
                                            std::size_t v, std::size_t k) {
    require(!g.adjacent(u, v) && u != v, "sim_pushdown: vertices must be non-adjacent");
    require(!g.looped[u], "sim_pushdown: u must be unlooped");
    std::vector<Word> out;
    for (std::size_t i = 1; i <= k; ++i) {
        Word w{{u, 1}};
        for (std::size_t j = 0; j < i; ++j) w.push_back({v, 1});
        out.push_back(std::move(w));
    }
    return out;
}

// Replaces every single-letter transition over {u, v} by all preimages under
// the morphism w1 -> u, w2 -> v, w3 -> u~, w4 -> v~; the identity when both
// vertices stay looped in the target graph. Other letters pass through.
inline ValenceSystem sim_f2_translate(const ValenceSystem& a, std::size_t u,
                                      std::size_t v, const Graph& target) {
    require(target.size() == a.graph.size(), "sim_f2: vertex sets must agree");
    if (target.looped[u] && target.looped[v]) {
        ValenceSystem out = a;
        out.graph = target;
        return out;
    }
    std::size_t uu = target.looped[u] ? v : u;  // the unlooped one
    std::size_t vv = target.looped[u] ? u : v;
    require(!target.looped[uu], "sim_f2: expected an unlooped vertex");
    auto w = sim_pushdown_words(target, uu, vv, 4);
    // preimages of each letter over {u, v}
    auto preimages = [&](const Letter& l) -> std::vector<Word> {
        // phi(w1)=u, phi(w2)=v, phi(w3)=u~, phi(w4)=v~ and phi(wi~)=phi(wi)~
        std::size_t base;
        if (l.vertex == uu)
            base = l.sign > 0 ? 0 : 2;
        else
            base = l.sign > 0 ? 1 : 3;
        std::size_t other = (base + 2) % 4;
        return {w[base], word_inverse(w[other])};
    };
    ValenceSystem out;
    out.graph = target;
    out.state_names = a.state_names;
    out.state_index = a.state_index;
    for (const auto& tr : a.transitions) {
        bool touches = !tr.label.empty() &&
                       (tr.label[0].vertex == u || tr.label[0].vertex == v);
        if (!touches) {
            out.transitions.push_back(tr);
            continue;
        }
        require(tr.label.size() == 1, "sim_f2: split transitions first");
        for (const auto& pre : preimages(tr.label[0]))
            out.add_transition(tr.src, tr.dst, pre);
    }
    return out;
}

// C4 with loops -> plain C4, by simulating each diagonal free-group pair.
inline ValenceSystem c4looped_to_c4(const ValenceSystem& a) {
    const Graph& g = a.graph;
    require(g.size() == 4 && g.fully_looped(), "c4looped_to_c4: expects looped C4");
    // find the two non-adjacent pairs
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (!g.adjacent(i, j)) pairs.emplace_back(i, j);
    require(pairs.size() == 2, "c4looped_to_c4: underlying graph is not C4");

    Graph step1 = g;
    step1.looped[pairs[0].first] = step1.looped[pairs[0].second] = false;
    Graph step2 = step1;
    step2.looped[pairs[1].first] = step2.looped[pairs[1].second] = false;

    ValenceSystem cur = split_letters(a);
    cur = sim_f2_translate(cur, pairs[0].first, pairs[0].second, step1);
    cur = split_letters(cur);
    cur = sim_f2_translate(cur, pairs[1].first, pairs[1].second, step2);
    return bidirected_closure(cur);
}

// phi(k_1..k_m) = v_1^{k_1} ... v_m^{k_m}, negative exponents via inverses.
inline Word phi_word(const IntVec& v) {
    Word w;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Int k = v[i];
        for (Int j = 0; j < abs_int(k); ++j) w.push_back({i, k < 0 ? -1 : 1});
    }
    return w;
}

// ILD instance -> bidirected Z-VASS over the looped clique on m vertices.
inline std::tuple<ValenceSystem, std::size_t, std::size_t> ild_to_bireach(
    const IntMatrix& a, const IntVec& b) {
    require(b.size() == a.rows(), "ild_to_bireach: dimension mismatch");
    ValenceSystem sys;
    for (std::size_t i = 0; i < a.rows(); ++i)
        sys.graph.add_vertex("v" + std::to_string(i), true);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.rows(); ++j) sys.graph.add_edge(i, j);
    std::size_t p = sys.add_state("p"), q = sys.add_state("q");
    for (std::size_t j = 0; j < a.cols(); ++j)
        sys.add_transition(p, p, phi_word(a.col(j)));
    sys.add_transition(p, q, word_inverse(phi_word(b)));
    return {bidirected_closure(sys), p, q};
}

// Commutative semigroup word problem -> bidirected VASS over the unlooped
// clique on the presentation's alphabet: produce u, rewrite, consume v.
inline std::tuple<ValenceSystem, std::size_t, std::size_t> csg_to_bireach(
    const SemigroupPresentation& pres, const std::vector<long>& u,
    const std::vector<long>& v) {
    ValenceSystem sys;
    for (const auto& s : pres.symbols) sys.graph.add_vertex(s, false);
    for (std::size_t i = 0; i < pres.symbols.size(); ++i)
        for (std::size_t j = i + 1; j < pres.symbols.size(); ++j)
            sys.graph.add_edge(i, j);
    auto produce = [&](const std::vector<long>& m) {
        Word w;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (long c = 0; c < m[i]; ++c) w.push_back({i, 1});
        return w;
    };
    auto consume = [&](const std::vector<long>& m) {
        return word_inverse(produce(m));
    };
    std::size_t q0 = sys.add_state("r0");
    std::size_t q1 = sys.add_state("r1");
    std::size_t q2 = sys.add_state("r2");
    sys.add_transition(q0, q1, produce(u));
    sys.add_transition(q1, q2, consume(v));
    for (const auto& [lhs, rhs] : pres.rules)
        sys.add_transition(q1, q1, word_concat(consume(lhs), produce(rhs)));
    return {bidirected_closure(sys), q0, q2};
}

// Undirected reachability -> bidirected system with empty labels.
inline std::tuple<ValenceSystem, std::size_t, std::size_t> undirected_reach_to_bireach(
    std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    std::size_t s, std::size_t t) {
    ValenceSystem sys;  // empty graph: words are over no vertices
    for (std::size_t i = 0; i < vertices; ++i)
        sys.add_state("n" + std::to_string(i));
    for (const auto& [x, y] : edges) sys.add_transition(x, y, {});
    return {bidirected_closure(sys), s, t};
}

}  // namespace valence
