#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>

#include "valence/monoid.hpp"

namespace valence {

struct Transition {
    std::size_t src, dst;
    Word label;

    bool operator==(const Transition& o) const = default;
};

struct ValenceSystem {
    Graph graph;
    std::vector<std::string> state_names;
    std::map<std::string, std::size_t> state_index;
    std::vector<Transition> transitions;

    std::size_t add_state(const std::string& name) {
        require(state_index.find(name) == state_index.end(),
                "duplicate state: " + name);
        state_names.push_back(name);
        state_index[name] = state_names.size() - 1;
        return state_names.size() - 1;
    }

    std::size_t state(const std::string& name) const {
        auto it = state_index.find(name);
        require(it != state_index.end(), "unknown state: " + name);
        return it->second;
    }

    void add_transition(std::size_t p, std::size_t q, Word w) {
        require(p < state_names.size() && q < state_names.size(),
                "transition references missing state");
        for (const auto& l : w)
            require(l.vertex < graph.size(), "transition word over unknown vertex");
        transitions.push_back({p, q, std::move(w)});
    }

    std::size_t states() const { return state_names.size(); }
};

// Transitions whose exact reverse (q, w~, p) is absent.
inline std::vector<Transition> check_bidirected(const ValenceSystem& a) {
    std::vector<Transition> missing;
    for (const auto& t : a.transitions) {
        Transition rev{t.dst, t.src, word_inverse(t.label)};
        bool found = false;
        for (const auto& u : a.transitions)
            if (u == rev) {
                found = true;
                break;
            }
        if (!found) missing.push_back(rev);
    }
    return missing;
}

// Adds all missing reverses; idempotent.
inline ValenceSystem bidirected_closure(const ValenceSystem& a) {
    ValenceSystem out = a;
    for (const auto& t : check_bidirected(a)) out.transitions.push_back(t);
    return out;
}

// Splits every multi-letter transition into a chain of single-letter ones
// through fresh states. Queries about original states are unaffected.
inline ValenceSystem split_letters(const ValenceSystem& a) {
    ValenceSystem out;
    out.graph = a.graph;
    out.state_names = a.state_names;
    out.state_index = a.state_index;
    std::size_t fresh = 0;
    for (const auto& t : a.transitions) {
        if (t.label.size() <= 1) {
            out.transitions.push_back(t);
            continue;
        }
        std::size_t cur = t.src;
        for (std::size_t i = 0; i + 1 < t.label.size(); ++i) {
            std::size_t mid = out.add_state("_split" + std::to_string(fresh++));
            out.add_transition(cur, mid, {t.label[i]});
            cur = mid;
        }
        out.add_transition(cur, t.dst, {t.label.back()});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spanning-tree coset extraction for bidirected systems over looped graphs:
// { [w] : s ->* t } = [w0] < [w1], ..., [wn] > where w0 labels the tree path
// and each generator is the fundamental cycle of one non-tree transition.
// ---------------------------------------------------------------------------

struct CosetWords {
    Word w0;
    std::vector<Word> gens;
};

namespace detail {
struct UnionFind {
    std::vector<std::size_t> p;
    explicit UnionFind(std::size_t n) : p(n) {
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};
}  // namespace detail

inline std::optional<CosetWords> compute_coset(const ValenceSystem& a,
                                               std::size_t s, std::size_t t) {
    require(a.graph.fully_looped(), "compute_coset: graph must be fully looped");
    detail::UnionFind uf(a.states());
    std::vector<std::size_t> tree;  // indices of tree transitions, scan order
    for (std::size_t i = 0; i < a.transitions.size(); ++i)
        if (uf.unite(a.transitions[i].src, a.transitions[i].dst)) tree.push_back(i);
    if (uf.find(s) != uf.find(t)) return std::nullopt;

    // adjacency over tree transitions (usable in both directions)
    std::vector<std::vector<std::pair<std::size_t, bool>>> adj(a.states());
    for (auto i : tree) {
        adj[a.transitions[i].src].emplace_back(i, true);
        adj[a.transitions[i].dst].emplace_back(i, false);
    }
    auto tree_path = [&](std::size_t from, std::size_t to) -> Word {
        if (from == to) return {};
        std::vector<int> prev(a.states(), -1);
        std::vector<std::pair<std::size_t, bool>> via(a.states());
        std::deque<std::size_t> queue{from};
        prev[from] = static_cast<int>(from);
        while (!queue.empty()) {
            std::size_t cur = queue.front();
            queue.pop_front();
            if (cur == to) break;
            for (auto [i, fwd] : adj[cur]) {
                std::size_t nxt = fwd ? a.transitions[i].dst : a.transitions[i].src;
                if (prev[nxt] != -1) continue;
                prev[nxt] = static_cast<int>(cur);
                via[nxt] = {i, fwd};
                queue.push_back(nxt);
            }
        }
        check(prev[to] != -1, "tree_path: disconnected inside component");
        Word w;
        for (std::size_t cur = to; cur != from; cur = prev[cur]) {
            const auto& [i, fwd] = via[cur];
            Word lbl = fwd ? a.transitions[i].label : word_inverse(a.transitions[i].label);
            lbl.insert(lbl.end(), w.begin(), w.end());
            w = std::move(lbl);
        }
        return w;
    };

    CosetWords out;
    out.w0 = tree_path(s, t);

    // a tree transition's exact reverse also belongs to the tree; the first
    // listed reverse of a processed non-tree transition is skipped as well
    std::vector<bool> covered(a.transitions.size(), false);
    for (auto i : tree) covered[i] = true;
    auto cover_reverse = [&](std::size_t i) {
        Transition rev{a.transitions[i].dst, a.transitions[i].src,
                       word_inverse(a.transitions[i].label)};
        for (std::size_t j = 0; j < a.transitions.size(); ++j)
            if (!covered[j] && j != i && a.transitions[j] == rev) {
                covered[j] = true;
                return;
            }
    };
    for (auto i : tree) cover_reverse(i);
    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
        if (covered[i]) continue;
        covered[i] = true;
        cover_reverse(i);
        const auto& tr = a.transitions[i];
        if (uf.find(tr.src) != uf.find(s)) continue;  // other component
        Word cyc = tree_path(t, tr.src);
        cyc.insert(cyc.end(), tr.label.begin(), tr.label.end());
        Word back = tree_path(tr.dst, t);
        cyc.insert(cyc.end(), back.begin(), back.end());
        out.gens.push_back(std::move(cyc));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force reachability oracle: BFS over (state, reduced word) pairs.
// NoWithinBound exhausts the bounded space without a witness; it is not a
// proof of unreachability in general.
// ---------------------------------------------------------------------------

struct OracleOutcome {
    enum Kind { Yes, NoWithinBound, Exhausted } kind;
    std::vector<std::size_t> run;  // transition indices on Yes
};

namespace detail {
// Greedy cancellation to a fixpoint, then trace canonical form.
inline Word reduce_word(const Graph& g, Word w) {
    for (;;) {
        w = trace_canonical(g, w);
        auto pairs = cancellable_pairs(g, w);
        if (pairs.empty()) return w;
        w = erase_pair(w, pairs[0].first, pairs[0].second);
    }
}
}  // namespace detail

inline OracleOutcome oracle_reach(const ValenceSystem& a, std::size_t s,
                                  std::size_t t, std::size_t word_len_bound,
                                  std::size_t node_budget) {
    struct Node {
        std::size_t state;
        Word word;
        auto operator<=>(const Node&) const = default;
    };
    std::map<Node, std::pair<Node, std::size_t>> parent;
    std::deque<Node> queue;
    Node start{s, {}};
    parent[start] = {start, a.transitions.size()};
    queue.push_back(start);
    auto emit_run = [&](Node n) {
        std::vector<std::size_t> run;
        while (true) {
            auto& [par, idx] = parent[n];
            if (idx == a.transitions.size()) break;
            run.push_back(idx);
            n = par;
        }
        std::reverse(run.begin(), run.end());
        return run;
    };
    if (s == t) return {OracleOutcome::Yes, {}};
    std::size_t visited = 0;
    while (!queue.empty()) {
        if (++visited > node_budget) return {OracleOutcome::Exhausted, {}};
        Node cur = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < a.transitions.size(); ++i) {
            const auto& tr = a.transitions[i];
            if (tr.src != cur.state) continue;
            Word next = cur.word;
            next.insert(next.end(), tr.label.begin(), tr.label.end());
            next = detail::reduce_word(a.graph, next);
            if (next.size() > word_len_bound) continue;
            Node node{tr.dst, std::move(next)};
            if (parent.count(node)) continue;
            parent[node] = {cur, i};
            if (node.state == t) {
                if (node.word.empty()) return {OracleOutcome::Yes, emit_run(node)};
                // reduced words are normal forms, but double-check short ones
                if (node.word.size() <= 4 &&
                    word_is_identity(a.graph, node.word, 4096).verdict == Verdict::Yes)
                    return {OracleOutcome::Yes, emit_run(node)};
            }
            queue.push_back(node);
        }
    }
    return {OracleOutcome::NoWithinBound, {}};
}

// Replays a run and checks that it is a neutral s -> t run.
inline bool verify_run(const ValenceSystem& a, std::size_t s, std::size_t t,
                       const std::vector<std::size_t>& run) {
    std::size_t cur = s;
    Word w;
    for (auto i : run) {
        if (i >= a.transitions.size()) return false;
        const auto& tr = a.transitions[i];
        if (tr.src != cur) return false;
        w.insert(w.end(), tr.label.begin(), tr.label.end());
        cur = tr.dst;
    }
    if (cur != t) return false;
    return word_is_identity(a.graph, w, 1 << 18).verdict == Verdict::Yes;
}

// ---------------------------------------------------------------------------
// .vs format
// ---------------------------------------------------------------------------

enum class BidirectMode { Strict, Auto };

// `graph <file>`; `state <q>`; `trans <p> <q> <tok>*`; `bidirect auto|strict`.
// The loader resolves the graph file reference.
inline ValenceSystem parse_system(std::istream& in,
                                  const std::function<Graph(const std::string&)>& loader) {
    ValenceSystem sys;
    bool have_graph = false;
    BidirectMode mode = BidirectMode::Strict;
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        lines.push_back(line);
    }
    for (const auto& l : lines) {
        std::istringstream ls(l);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "graph") {
            std::string file;
            require(static_cast<bool>(ls >> file), "graph: missing file");
            require(!have_graph, "graph: declared twice");
            sys.graph = loader(file);
            have_graph = true;
        } else if (kw == "state") {
            std::string name;
            require(static_cast<bool>(ls >> name), "state: missing name");
            require(valid_identifier(name), "bad identifier: " + name);
            sys.add_state(name);
        } else if (kw == "trans") {
            require(have_graph, "trans before graph");
            std::string p, q, tok;
            require(static_cast<bool>(ls >> p >> q), "trans: needs two states");
            std::vector<std::string> toks;
            while (ls >> tok) toks.push_back(tok);
            sys.add_transition(sys.state(p), sys.state(q), parse_word(sys.graph, toks));
        } else if (kw == "bidirect") {
            std::string m;
            require(static_cast<bool>(ls >> m), "bidirect: missing mode");
            require(m == "auto" || m == "strict", "bidirect: auto or strict");
            mode = m == "auto" ? BidirectMode::Auto : BidirectMode::Strict;
        } else {
            throw std::invalid_argument("system: unknown directive " + kw);
        }
    }
    if (mode == BidirectMode::Auto) return bidirected_closure(sys);
    auto missing = check_bidirected(sys);
    if (!missing.empty())
        throw std::invalid_argument(
            "system is not bidirected (strict mode); first missing reverse: " +
            sys.state_names[missing[0].src] + " -> " +
            sys.state_names[missing[0].dst]);
    return sys;
}

inline void write_system(std::ostream& out, const ValenceSystem& a,
                         const std::string& graph_file) {
    out << "graph " << graph_file << "\n";
    for (const auto& s : a.state_names) out << "state " << s << "\n";
    out << "bidirect strict\n";
    for (const auto& t : a.transitions) {
        out << "trans " << a.state_names[t.src] << ' ' << a.state_names[t.dst];
        for (const auto& l : t.label)
            out << ' ' << (l.sign < 0 ? "-" : "") << a.graph.names[l.vertex];
        out << "\n";
    }
}

}  // namespace valence
