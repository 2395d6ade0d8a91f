#pragma once

#include "valence/classify.hpp"
#include "valence/clique.hpp"
#include "valence/emptiness.hpp"

namespace valence {

// Tree decomposition of a PVASS-free transitive forest, flattened, with the
// fresh unlooped universal root vertex added when none exists. Each subtree
// contributes one descriptor per mode: leaves only the plain one, inner
// subtrees both the plain one (contents strictly below the root node) and the
// hat one (the whole subtree).
struct TreeInfo {
    Graph graph;  // original vertices first, possibly one fresh root appended
    struct Node {
        std::vector<std::size_t> vertices;
        int parent = -1;
        std::vector<std::size_t> children;
        bool leaf() const { return children.empty(); }
    };
    std::vector<Node> nodes;  // nodes[0] is the root
    struct Desc {
        std::size_t node;
        bool hat;
    };
    std::vector<Desc> descs;
    std::vector<int> desc_level;
    int k = 0;
    std::size_t answer_desc = 0;

    // per node: vertices of the subtree rooted there / of strict descendants
    std::vector<std::vector<std::size_t>> subtree_verts, below_verts;
    // per node: vertices usable inside that subtree's automaton (subtree plus
    // all ancestors' vertices)
    std::vector<std::vector<std::size_t>> comparable_verts;

    std::vector<std::size_t> check_set(std::size_t d) const {
        const auto& n = nodes[descs[d].node];
        if (descs[d].hat || n.leaf()) return subtree_verts[descs[d].node];
        return below_verts[descs[d].node];
    }

    bool above(std::size_t hi, std::size_t lo) const {
        if (descs[hi].node == descs[lo].node)
            return descs[hi].hat && !descs[lo].hat &&
                   !nodes[descs[hi].node].leaf();
        // strict subtree containment
        int at = static_cast<int>(descs[lo].node);
        while (at != -1) {
            at = nodes[at].parent;
            if (at == static_cast<int>(descs[hi].node)) return true;
        }
        return false;
    }
};

inline TreeInfo build_tree(const Graph& g0) {
    require(in_sc_pm(g0), "build_tree: graph must be a PVASS-free transitive forest");
    TreeInfo info;
    info.graph = g0;
    bool have_root = false;
    for (std::size_t v = 0; v < g0.size(); ++v) {
        if (g0.looped[v]) continue;
        bool universal = true;
        for (std::size_t u = 0; u < g0.size(); ++u)
            if (u != v && !g0.adjacent(u, v)) universal = false;
        if (universal) have_root = true;
    }
    if (!have_root) {
        std::size_t r = info.graph.add_vertex("_root", false);
        for (std::size_t v = 0; v < r; ++v) info.graph.add_edge(r, v);
    }
    auto dec = decompose(info.graph);
    check(dec.ok(), "build_tree: decomposition failed on an SC+- graph");
    check(!dec.tree->empty && dec.tree->root.vertices.size() > 0,
          "build_tree: missing root node");
    // flatten
    std::function<std::size_t(const TreeNode&, int)> flat =
        [&](const TreeNode& n, int parent) {
            std::size_t id = info.nodes.size();
            info.nodes.push_back({n.vertices, parent, {}});
            for (const auto& c : n.children) {
                std::size_t cid = flat(c, static_cast<int>(id));
                info.nodes[id].children.push_back(cid);
            }
            return id;
        };
    flat(dec.tree->root, -1);

    const std::size_t nn = info.nodes.size();
    info.subtree_verts.resize(nn);
    info.below_verts.resize(nn);
    info.comparable_verts.resize(nn);
    for (std::size_t id = nn; id-- > 0;) {
        auto& sub = info.subtree_verts[id];
        auto& below = info.below_verts[id];
        for (auto c : info.nodes[id].children)
            for (auto v : info.subtree_verts[c]) below.push_back(v);
        sub = below;
        for (auto v : info.nodes[id].vertices) sub.push_back(v);
        std::sort(sub.begin(), sub.end());
        std::sort(below.begin(), below.end());
    }
    for (std::size_t id = 0; id < nn; ++id) {
        auto cmp = info.subtree_verts[id];
        for (int at = info.nodes[id].parent; at != -1; at = info.nodes[at].parent)
            for (auto v : info.nodes[at].vertices) cmp.push_back(v);
        std::sort(cmp.begin(), cmp.end());
        info.comparable_verts[id] = std::move(cmp);
    }

    // descriptors in depth-first order, plain before hat
    std::function<void(std::size_t)> emit = [&](std::size_t id) {
        for (auto c : info.nodes[id].children) emit(c);
        info.descs.push_back({id, false});
        if (!info.nodes[id].leaf()) info.descs.push_back({id, true});
    };
    emit(0);
    // levels: leaves 0; an inner plain descriptor one above the children tops
    info.desc_level.assign(info.descs.size(), 0);
    std::map<std::pair<std::size_t, bool>, std::size_t> dindex;
    for (std::size_t d = 0; d < info.descs.size(); ++d)
        dindex[{info.descs[d].node, info.descs[d].hat}] = d;
    std::function<int(std::size_t)> top_level = [&](std::size_t node) -> int {
        if (info.nodes[node].leaf()) return info.desc_level[dindex[{node, false}]];
        return info.desc_level[dindex[{node, true}]];
    };
    // process nodes bottom-up (descs are emitted children-first)
    for (std::size_t d = 0; d < info.descs.size(); ++d) {
        auto [node, hat] = info.descs[d];
        if (info.nodes[node].leaf()) {
            info.desc_level[d] = 0;
        } else if (!hat) {
            int m = 0;
            for (auto c : info.nodes[node].children)
                m = std::max(m, top_level(c) + 1);
            info.desc_level[d] = m;
        } else {
            info.desc_level[d] = info.desc_level[dindex[{node, false}]] + 1;
        }
    }
    info.k = 0;
    for (auto l : info.desc_level) info.k = std::max(info.k, l);
    info.answer_desc =
        info.nodes[0].leaf() ? dindex[{std::size_t(0), false}] : dindex[{std::size_t(0), true}];
    return info;
}

// The level map restated for tests: descriptor index -> level.
inline std::vector<int> assign_levels(const TreeInfo& t) { return t.desc_level; }

// ---------------------------------------------------------------------------
// The grammar construction for a given admissible placeholder set R.
// ---------------------------------------------------------------------------

struct PlaceholderId {
    std::size_t p, desc, q;
    auto operator<=>(const PlaceholderId&) const = default;
};

struct ReductionResult {
    enum Kind { Ok, Refused } kind = Ok;
    std::string stage;
};

// alpha: a vector over looped-clique coordinates (real looped vertices and
// placeholder vertices) becomes a grammar configuration; a negative
// placeholder coordinate turns into a positive count of the inverse triple.
inline void alpha_split(const Int& fwd, const Int& bwd, Int& out_fwd, Int& out_bwd) {
    out_fwd = (fwd > 0 ? fwd : Int(0)) + (bwd < 0 ? -bwd : Int(0));
    out_bwd = (bwd > 0 ? bwd : Int(0)) + (fwd < 0 ? -fwd : Int(0));
}

class Reduction {
public:
    Reduction(const ValenceSystem& a, CliqueCaps caps = {})
        : a_(a), caps_(caps), info_(build_tree(a.graph)) {
        require(check_bidirected(a).empty(), "reduction: system must be bidirected");
        const std::size_t q = a_.states();
        for (std::size_t d = 0; d < info_.descs.size(); ++d)
            for (std::size_t p = 0; p < q; ++p)
                for (std::size_t r = 0; r < q; ++r)
                    placeholders_.push_back({p, d, r});
    }

    const TreeInfo& tree() const { return info_; }
    const std::vector<PlaceholderId>& placeholders() const { return placeholders_; }

    std::size_t placeholder_index(const PlaceholderId& t) const {
        const std::size_t q = a_.states();
        return (t.desc * q + t.p) * q + t.q;
    }

    std::string placeholder_name(const PlaceholderId& t) const {
        const auto& d = info_.descs[t.desc];
        std::string node = "n" + std::to_string(d.node);
        return a_.state_names[t.p] + "|" + node + (d.hat ? "^" : "o") + "|" +
               a_.state_names[t.q];
    }

    // Builds the k-grammar for the given set R of placeholders assumed
    // nonempty, following the leaf effect cosets and the production families.
    // Only placeholders that carry or appear in a production become grammar
    // nonterminals; everything else has an empty language by construction.
    std::optional<KGrammar> build_grammar(const std::set<PlaceholderId>& R,
                                          ReductionResult& status) {
        // leaf effect cosets first; they determine the support. The solves
        // depend on the leaf and on R restricted to its placeholders, so they
        // are cached across saturation iterations.
        std::map<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>,
                 CliqueCosetResult>
            cosets;
        std::map<std::size_t, HattedSystem> hatted;
        for (std::size_t d = 0; d < info_.descs.size(); ++d) {
            if (!info_.nodes[info_.descs[d].node].leaf()) continue;
            hatted.emplace(d, build_hatted_system(d, R));
            std::vector<PlaceholderId> rs;
            for (const auto& ph : hatted.at(d).looped_holders) rs.push_back(ph);
            auto cache_key = std::make_pair(d, rs);
            auto hit = leaf_cache_.find(cache_key);
            if (hit == leaf_cache_.end()) {
                std::map<std::pair<std::size_t, std::size_t>, CliqueCosetResult> per;
                for (std::size_t p = 0; p < a_.states(); ++p)
                    for (std::size_t q = p; q < a_.states(); ++q)
                        per[{p, q}] =
                            compute_coset_cliques(hatted.at(d).system, p, q, caps_);
                hit = leaf_cache_.emplace(cache_key, std::move(per)).first;
            }
            for (const auto& [pq, coset] : hit->second) {
                if (coset.kind == CliqueCosetResult::EmptyEff) continue;
                if (coset.kind != CliqueCosetResult::Ok) {
                    status.kind = ReductionResult::Refused;
                    status.stage = "leaf effect coset for " +
                                   placeholder_name({pq.first, d, pq.second}) +
                                   (coset.diagnostic.empty()
                                        ? std::string(": search exhausted")
                                        : ": " + coset.diagnostic);
                    return std::nullopt;
                }
                cosets[{d, pq}] = coset;
            }
        }
        std::set<PlaceholderId> support;
        for (const auto& [key, coset] : cosets) {
            auto [d, pq] = key;
            support.insert({pq.first, d, pq.second});
            support.insert({pq.second, d, pq.first});
        }
        for (const auto& ph : R) {
            support.insert(ph);
            support.insert({ph.q, ph.desc, ph.p});
        }
        // cross productions touch the placeholder on the gated side's level
        for (std::size_t hi = 0; hi < info_.descs.size(); ++hi)
            for (std::size_t lo = 0; lo < info_.descs.size(); ++lo) {
                if (!info_.above(hi, lo)) continue;
                for (std::size_t p = 0; p < a_.states(); ++p)
                    for (std::size_t q = 0; q < a_.states(); ++q) {
                        if (R.count({p, lo, q})) support.insert({p, hi, q});
                        if (R.count({p, hi, q})) support.insert({p, lo, q});
                    }
            }

        KGrammar g;
        g.k = info_.k;
        std::map<PlaceholderId, std::size_t> nt;
        for (const auto& t : placeholders_)
            if (support.count(t))
                nt[t] = g.add_nt(placeholder_name(t), info_.desc_level[t.desc]);
        for (const auto& [ph, id] : nt)
            g.set_involution(id, nt.at({ph.q, ph.desc, ph.p}));
        nt_map_ = nt;

        // terminals: looped vertices at the level of the covering descriptor
        for (std::size_t node = 0; node < info_.nodes.size(); ++node) {
            int lvl = 0;
            if (!info_.nodes[node].leaf())
                for (std::size_t d = 0; d < info_.descs.size(); ++d)
                    if (info_.descs[d].node == node && info_.descs[d].hat)
                        lvl = info_.desc_level[d];
            for (auto v : info_.nodes[node].vertices)
                if (info_.graph.looped[v]) g.add_terminal(info_.graph.names[v], lvl);
        }

        for (const auto& [key, coset] : cosets) {
            auto [d, pq] = key;
            emit_leaf_productions(g, nt, hatted.at(d), d, pq.first, pq.second, coset);
        }
        for (std::size_t d = 0; d < info_.descs.size(); ++d) {
            if (!info_.nodes[info_.descs[d].node].leaf()) continue;
            for (std::size_t p = 0; p < a_.states(); ++p)
                for (std::size_t q = p + 1; q < a_.states(); ++q) {
                    // deletion pairs matter only for placeholders that can be
                    // created, which all lie in R
                    if (!R.count({p, d, q}) && !R.count({q, d, p})) continue;
                    std::size_t z = g.add_terminal("z_" + std::to_string(d) + "_" +
                                                       a_.state_names[p] + "_" +
                                                       a_.state_names[q],
                                                   0);
                    ConfigVector pos, neg;
                    pos.add(z, 1);
                    neg.add(z, -1);
                    g.add_rewrite(nt.at({p, d, q}), pos);
                    g.add_rewrite(nt.at({q, d, p}), neg);
                }
            // pair creation for R members
            for (std::size_t p = 0; p < a_.states(); ++p)
                for (std::size_t q = 0; q < a_.states(); ++q) {
                    if (!R.count({p, d, q})) continue;
                    ConfigVector u;
                    u.add(nt.at({p, d, q}), 2);
                    u.add(nt.at({q, d, p}), 1);
                    g.add_rewrite(nt.at({p, d, q}), u);
                }
        }
        // cross-level productions for every above pair, gated on R
        for (std::size_t hi = 0; hi < info_.descs.size(); ++hi)
            for (std::size_t lo = 0; lo < info_.descs.size(); ++lo) {
                if (!info_.above(hi, lo)) continue;
                for (std::size_t p = 0; p < a_.states(); ++p)
                    for (std::size_t q = 0; q < a_.states(); ++q) {
                        if (R.count({p, lo, q}))
                            g.add_cross(nt.at({p, hi, q}), nt.at({p, lo, q}));
                        if (R.count({p, hi, q}))
                            g.add_cross(nt.at({p, lo, q}), nt.at({p, hi, q}));
                    }
            }
        return normalize_cross_levels(g);
    }

    // nonterminal id of a placeholder in the grammar built last, if any
    std::optional<std::size_t> grammar_nt(const PlaceholderId& ph) const {
        auto it = nt_map_.find(ph);
        if (it == nt_map_.end()) return std::nullopt;
        return it->second;
    }

    struct SaturationOutcome {
        Decision decision = Decision::Refused;
        std::string reason;
        std::set<PlaceholderId> final_r;
        std::vector<std::set<PlaceholderId>> trace;
        std::size_t iterations = 0;
    };

    SaturationOutcome saturate_and_decide(std::size_t s, std::size_t t) {
        SaturationOutcome out;
        std::set<PlaceholderId> R;
        const std::size_t max_iter = placeholders_.size() + 2;
        for (std::size_t it = 0; it < max_iter; ++it) {
            ReductionResult status;
            auto grammar = build_grammar(R, status);
            if (!grammar) {
                out.decision = Decision::Refused;
                out.reason = status.stage;
                return out;
            }
            EmptinessCircuit ec(*grammar);
            std::set<PlaceholderId> next;
            for (const auto& ph : placeholders_) {
                auto id = grammar_nt(ph);
                if (id && ec.language_nonempty(*id)) next.insert(ph);
            }
            ++out.iterations;
            out.trace.push_back(next);
            // monotone and involution symmetric
            for (const auto& ph : R)
                check(next.count(ph) > 0, "saturation lost a placeholder");
            for (const auto& ph : next)
                check(next.count(PlaceholderId{ph.q, ph.desc, ph.p}) > 0,
                      "saturation broke involution symmetry");
            if (next == R) break;
            R = std::move(next);
        }
        out.final_r = R;
        bool reach = R.count({s, info_.answer_desc, t}) > 0;
        out.decision = reach ? Decision::Reachable : Decision::Unreachable;
        out.reason = reach ? "answer placeholder saturated nonempty"
                           : "answer placeholder empty at fixpoint";
        return out;
    }

private:
    struct HattedSystem {
        ValenceSystem system;
        // looped coordinate order of the clique: real looped vertices of the
        // comparable set, then placeholder vertices
        std::vector<std::size_t> looped_real;        // original vertex ids
        std::vector<PlaceholderId> looped_holders;   // placeholder order
    };

    HattedSystem build_hatted_system(std::size_t d, const std::set<PlaceholderId>& R) {
        HattedSystem out;
        std::size_t node = info_.descs[d].node;
        const auto& cmp = info_.comparable_verts[node];
        std::set<std::size_t> cmpset(cmp.begin(), cmp.end());
        Graph clique;
        std::map<std::size_t, std::size_t> vmap;
        for (auto v : cmp) {
            vmap[v] = clique.add_vertex(info_.graph.names[v], info_.graph.looped[v]);
            if (info_.graph.looped[v]) out.looped_real.push_back(v);
        }
        for (std::size_t p = 0; p < a_.states(); ++p)
            for (std::size_t q = 0; q < a_.states(); ++q)
                if (R.count({p, d, q})) out.looped_holders.push_back({p, d, q});
        std::map<PlaceholderId, std::size_t> hmap;
        for (const auto& ph : out.looped_holders)
            hmap[ph] = clique.add_vertex("h_" + placeholder_name(ph), true);
        for (std::size_t i = 0; i < clique.size(); ++i)
            for (std::size_t j = i + 1; j < clique.size(); ++j) clique.add_edge(i, j);

        out.system.graph = clique;
        out.system.state_names = a_.state_names;
        out.system.state_index = a_.state_index;
        for (const auto& tr : a_.transitions) {
            bool usable = true;
            for (const auto& l : tr.label)
                if (!cmpset.count(l.vertex)) usable = false;
            if (!usable) continue;
            Word w;
            for (const auto& l : tr.label) w.push_back({vmap[l.vertex], l.sign});
            out.system.add_transition(tr.src, tr.dst, w);
        }
        for (const auto& ph : out.looped_holders) {
            out.system.add_transition(ph.p, ph.q, {{hmap[ph], 1}});
            out.system.add_transition(ph.q, ph.p, {{hmap[ph], -1}});
        }
        return out;
    }

    void emit_leaf_productions(KGrammar& g,
                               const std::map<PlaceholderId, std::size_t>& nt,
                               const HattedSystem& hatted, std::size_t d,
                               std::size_t p, std::size_t q,
                               const CliqueCosetResult& coset) {
        // coset coordinates: looped vertices of the hatted clique in order
        const std::size_t nreal = hatted.looped_real.size();
        auto to_config = [&](const IntVec& vec, bool negate) -> ConfigVector {
            ConfigVector out;
            for (std::size_t i = 0; i < nreal; ++i) {
                Int val = negate ? -vec[i] : vec[i];
                if (val == 0) continue;
                std::size_t term = g.t_index.at(info_.graph.names[hatted.looped_real[i]]);
                out.add(KGrammar::terminal_sym(term), val);
            }
            // split placeholder coordinates against their inverses
            std::map<PlaceholderId, std::size_t> pos;
            for (std::size_t i = 0; i < hatted.looped_holders.size(); ++i)
                pos[hatted.looped_holders[i]] = nreal + i;
            std::set<PlaceholderId> done;
            for (const auto& ph : hatted.looped_holders) {
                if (done.count(ph)) continue;
                PlaceholderId inv{ph.q, ph.desc, ph.p};
                done.insert(ph);
                done.insert(inv);
                Int fwd = vec[pos.at(ph)];
                Int bwd = pos.count(inv) ? vec[pos.at(inv)] : Int(0);
                if (negate) {
                    fwd = -fwd;
                    bwd = -bwd;
                }
                if (ph == inv) {
                    // diagonal triples are self-inverse
                    Int v = fwd < 0 ? -fwd : fwd;
                    if (v != 0) out.add(nt.at(ph), v);
                    continue;
                }
                Int of, ob;
                alpha_split(fwd, bwd, of, ob);
                if (of != 0) out.add(nt.at(ph), of);
                if (ob != 0) out.add(nt.at(inv), ob);
            }
            return out;
        };
        std::size_t fwd_nt = nt.at({p, d, q});
        std::size_t bwd_nt = nt.at({q, d, p});
        ConfigVector origin_fwd = to_config(coset.coset.origin, false);
        g.add_rewrite(fwd_nt, origin_fwd);
        if (p != q) g.add_rewrite(bwd_nt, to_config(coset.coset.origin, true));
        for (std::size_t j = 0; j < coset.coset.basis.cols(); ++j) {
            IntVec gen = coset.coset.basis.col(j);
            for (bool negate : {false, true}) {
                ConfigVector add = to_config(gen, negate);
                ConfigVector rf = add;
                rf.add(fwd_nt, 1);
                g.add_rewrite(fwd_nt, rf);
                if (p != q) {
                    ConfigVector rb = add;
                    rb.add(bwd_nt, 1);
                    g.add_rewrite(bwd_nt, rb);
                }
            }
        }
    }

    const ValenceSystem& a_;
    CliqueCaps caps_;
    TreeInfo info_;
    std::vector<PlaceholderId> placeholders_;
    std::map<PlaceholderId, std::size_t> nt_map_;
    std::map<std::pair<std::size_t, std::vector<PlaceholderId>>,
             std::map<std::pair<std::size_t, std::size_t>, CliqueCosetResult>>
        leaf_cache_;
};

}  // namespace valence
