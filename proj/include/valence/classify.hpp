#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valence/graph.hpp"

namespace valence {

// Node of the decomposition of a transitive forest: `vertices` is the set of
// universal vertices removed at this stage (empty for a synthetic union node
// at the top), children are the decompositions of the remaining components.
struct TreeNode {
    std::vector<std::size_t> vertices;
    std::vector<TreeNode> children;
};

struct DecompositionTree {
    TreeNode root;
    bool empty = false;
};

struct DecomposeResult {
    std::optional<DecompositionTree> tree;
    std::vector<std::size_t> stuck_component;  // set when not a transitive forest

    bool ok() const { return tree.has_value(); }
};

// true iff every unlooped vertex has a clique neighborhood; otherwise the
// witness is (unlooped vertex, two non-adjacent neighbors)
struct PvassWitness {
    std::size_t center, left, right;
};

inline std::optional<PvassWitness> pvass_witness(const Graph& g) {
    for (std::size_t u = 0; u < g.size(); ++u) {
        if (g.looped[u]) continue;
        std::vector<std::size_t> nb;
        for (std::size_t v = 0; v < g.size(); ++v)
            if (g.adjacent(u, v)) nb.push_back(v);
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
                if (!g.adjacent(nb[i], nb[j])) return PvassWitness{u, nb[i], nb[j]};
    }
    return std::nullopt;
}

inline bool is_pvass_free(const Graph& g) { return !pvass_witness(g).has_value(); }

namespace detail {
inline std::vector<std::vector<std::size_t>> components(
    const Graph& g, const std::vector<std::size_t>& verts) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> seen(g.size(), false);
    for (auto s : verts) {
        if (seen[s]) continue;
        std::vector<std::size_t> comp{s};
        seen[s] = true;
        for (std::size_t k = 0; k < comp.size(); ++k)
            for (auto v : verts)
                if (!seen[v] && g.adjacent(comp[k], v)) {
                    seen[v] = true;
                    comp.push_back(v);
                }
        out.push_back(std::move(comp));
    }
    return out;
}

inline bool decompose_rec(const Graph& g, const std::vector<std::size_t>& verts,
                          TreeNode& out, std::vector<std::size_t>& stuck) {
    // verts is nonempty and connected; collect all universal vertices at once
    std::vector<std::size_t> universal;
    for (auto u : verts) {
        bool uni = true;
        for (auto v : verts)
            if (v != u && !g.adjacent(u, v)) {
                uni = false;
                break;
            }
        if (uni) universal.push_back(u);
    }
    if (universal.empty()) {
        stuck = verts;
        return false;
    }
    out.vertices = universal;
    std::vector<std::size_t> rest;
    for (auto v : verts)
        if (std::find(universal.begin(), universal.end(), v) == universal.end())
            rest.push_back(v);
    for (const auto& comp : components(g, rest)) {
        TreeNode child;
        if (!decompose_rec(g, comp, child, stuck)) return false;
        out.children.push_back(std::move(child));
    }
    return true;
}
}  // namespace detail

inline DecomposeResult decompose(const Graph& g) {
    DecomposeResult res;
    if (g.size() == 0) {
        res.tree = DecompositionTree{TreeNode{}, true};
        return res;
    }
    std::vector<std::size_t> all(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) all[i] = i;
    auto comps = detail::components(g, all);
    DecompositionTree tree;
    if (comps.size() == 1) {
        if (!detail::decompose_rec(g, comps[0], tree.root, res.stuck_component))
            return res;
    } else {
        // synthetic union node
        for (const auto& comp : comps) {
            TreeNode child;
            if (!detail::decompose_rec(g, comp, child, res.stuck_component))
                return res;
            tree.root.children.push_back(std::move(child));
        }
    }
    res.tree = std::move(tree);
    return res;
}

// Union steps add one; removing universal vertices is free.
inline int height(const TreeNode& node) {
    if (node.children.empty()) return 0;
    int m = 0;
    for (const auto& c : node.children) m = std::max(m, height(c));
    return m + 1;
}

inline int height(const DecompositionTree& t) {
    return t.empty ? 0 : height(t.root);
}

inline bool is_transitive_forest(const Graph& g) { return decompose(g).ok(); }

inline bool in_sc_pm(const Graph& g) {
    return is_pvass_free(g) && is_transitive_forest(g);
}

// Brute-force search for an induced 4-cycle in the underlying simple graph
// (loops discarded); graphs here are small.
inline std::optional<std::array<std::size_t, 4>> induced_c4(const Graph& g) {
    const std::size_t n = g.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    std::array<std::size_t, 4> q{a, b, c, d};
                    // try the three pairings into a cycle x-y-z-w-x
                    const std::array<std::array<std::size_t, 4>, 3> orders{
                        {{a, b, c, d}, {a, c, b, d}, {a, b, d, c}}};
                    for (const auto& o : orders) {
                        bool cyc = g.adjacent(o[0], o[1]) && g.adjacent(o[1], o[2]) &&
                                   g.adjacent(o[2], o[3]) && g.adjacent(o[3], o[0]) &&
                                   !g.adjacent(o[0], o[2]) && !g.adjacent(o[1], o[3]);
                        if (cyc) return o;
                    }
                    (void)q;
                }
    return std::nullopt;
}

enum class RegimeTag {
    LComplete,
    IldComplete,
    PComplete,
    ExpMember,
    ExpspaceComplete,
    UndecidableC4,
    NotImplementedPvass,
};

inline const char* regime_name(RegimeTag t) {
    switch (t) {
        case RegimeTag::LComplete: return "L-complete";
        case RegimeTag::IldComplete: return "ILD-complete";
        case RegimeTag::PComplete: return "P-complete";
        case RegimeTag::ExpMember: return "in EXP";
        case RegimeTag::ExpspaceComplete: return "EXPSPACE-complete";
        case RegimeTag::UndecidableC4: return "undecidable (induced C4)";
        case RegimeTag::NotImplementedPvass: return "not implemented (outside SC+-)";
    }
    return "?";
}

struct Regime {
    RegimeTag tag;
    std::string evidence;
};

inline Regime classify(const Graph& g) {
    if (g.is_clique())
        return {RegimeTag::LComplete, "graph is a clique"};
    if (in_sc_pm(g))
        return {RegimeTag::PComplete, "PVASS-free transitive forest, not a clique"};
    if (auto c4 = induced_c4(g)) {
        std::string ev = "induced C4 in the underlying graph: " + g.names[(*c4)[0]] +
                         " " + g.names[(*c4)[1]] + " " + g.names[(*c4)[2]] + " " +
                         g.names[(*c4)[3]];
        return {RegimeTag::UndecidableC4, ev};
    }
    if (auto w = pvass_witness(g)) {
        std::string ev = "PVASS subgraph: unlooped " + g.names[w->center] +
                         " with non-adjacent neighbors " + g.names[w->left] + ", " +
                         g.names[w->right] + " (decidable per cited work; out of scope)";
        return {RegimeTag::NotImplementedPvass, ev};
    }
    // PVASS-free, no induced C4, not a transitive forest: an induced P4
    // remains; the decidability status is outside the implemented map.
    return {RegimeTag::NotImplementedPvass,
            "PVASS-free non-transitive-forest (induced P4); out of scope"};
}

// Class descriptor: bounds are "present" when the class is bounded in that
// parameter. The class is assumed to lie in SC+- and be closed under induced
// subgraphs.
struct ClassDescriptor {
    bool uc_bounded = true;
    bool lc_bounded = true;
    bool height_bounded = true;
    bool contains_nonclique = false;
};

inline Regime classify(const ClassDescriptor& d) {
    if (!d.uc_bounded)
        return {RegimeTag::ExpspaceComplete, "UC-unbounded class"};
    if (!d.contains_nonclique) {
        if (!d.lc_bounded)
            return {RegimeTag::IldComplete, "cliques, UC-bounded, LC-unbounded"};
        return {RegimeTag::LComplete, "cliques of bounded size"};
    }
    if (d.height_bounded)
        return {RegimeTag::PComplete, "UC-bounded, height-bounded, non-clique present"};
    return {RegimeTag::ExpMember, "UC-bounded, height-unbounded"};
}

// Rebuild a graph from a decomposition tree: node sets are cliques and every
// node vertex is adjacent to everything strictly below it. Used by tests.
inline Graph graph_from_tree(const Graph& original, const DecompositionTree& t) {
    Graph g;
    for (std::size_t v = 0; v < original.size(); ++v)
        g.add_vertex(original.names[v], original.looped[v]);
    std::function<std::vector<std::size_t>(const TreeNode&)> rec =
        [&](const TreeNode& node) {
            std::vector<std::size_t> below;
            for (const auto& c : node.children) {
                auto sub = rec(c);
                below.insert(below.end(), sub.begin(), sub.end());
            }
            for (std::size_t i = 0; i < node.vertices.size(); ++i)
                for (std::size_t j = i + 1; j < node.vertices.size(); ++j)
                    g.add_edge(node.vertices[i], node.vertices[j]);
            for (auto u : node.vertices)
                for (auto v : below) g.add_edge(u, v);
            below.insert(below.end(), node.vertices.begin(), node.vertices.end());
            return below;
        };
    if (!t.empty) rec(t.root);
    return g;
}

}  // namespace valence
