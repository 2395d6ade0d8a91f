#pragma once

#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "valence/int.hpp"

namespace valence {

// Undirected graph with per-vertex loop flags. Vertex order is the
// declaration order and is stable; all downstream algorithms depend on it.
struct Graph {
    std::vector<std::string> names;
    std::vector<bool> looped;
    std::vector<std::vector<bool>> adj;
    std::map<std::string, std::size_t> index;

    std::size_t size() const { return names.size(); }

    std::size_t add_vertex(const std::string& name, bool loop) {
        require(index.find(name) == index.end(), "duplicate vertex: " + name);
        require(!name.empty(), "empty vertex name");
        std::size_t v = names.size();
        names.push_back(name);
        looped.push_back(loop);
        index[name] = v;
        for (auto& row : adj) row.push_back(false);
        adj.emplace_back(names.size(), false);
        return v;
    }

    void add_edge(std::size_t u, std::size_t v) {
        require(u < size() && v < size(), "edge references missing vertex");
        require(u != v, "self-pair is not an edge; use the loop flag");
        adj[u][v] = adj[v][u] = true;
    }

    bool adjacent(std::size_t u, std::size_t v) const { return u != v && adj[u][v]; }

    // independence of letters: distinct adjacent vertices, or a looped vertex
    // with itself
    bool independent(std::size_t u, std::size_t v) const {
        return u == v ? looped[u] : adj[u][v];
    }

    std::size_t vertex(const std::string& name) const {
        auto it = index.find(name);
        require(it != index.end(), "unknown vertex: " + name);
        return it->second;
    }

    bool is_clique(const std::vector<std::size_t>& vs) const {
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                if (!adjacent(vs[i], vs[j])) return false;
        return true;
    }

    bool is_clique() const {
        for (std::size_t u = 0; u < size(); ++u)
            for (std::size_t v = u + 1; v < size(); ++v)
                if (!adjacent(u, v)) return false;
        return true;
    }

    bool fully_looped() const {
        for (bool l : looped)
            if (!l) return false;
        return true;
    }
};

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// .vg format: `vertex <name> [looped]`, `edge <a> <b>`, `#` comments.
inline Graph parse_graph(std::istream& in) {
    Graph g;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "vertex") {
            std::string name, flag;
            require(static_cast<bool>(ls >> name), "vertex: missing name");
            require(valid_identifier(name), "bad identifier: " + name);
            bool loop = false;
            if (ls >> flag) {
                require(flag == "looped", "vertex: unknown flag " + flag);
                loop = true;
            }
            g.add_vertex(name, loop);
        } else if (kw == "edge") {
            std::string a, b;
            require(static_cast<bool>(ls >> a >> b), "edge: needs two vertices");
            g.add_edge(g.vertex(a), g.vertex(b));
        } else {
            throw std::invalid_argument("graph: unknown directive " + kw);
        }
    }
    return g;
}

inline Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

}  // namespace valence
