#pragma once

#include <optional>
#include <ostream>

#include "valence/coset.hpp"

namespace valence {

// DAG of coset gates over Z^n: leaves carry matrix representations, inner
// gates are pointwise sum or intersection. Gates are append-only; ids are
// topological.
class Circuit {
public:
    enum class Kind { Leaf, Sum, Intersect };

    struct Gate {
        Kind kind;
        CosetRep leaf;
        std::vector<std::size_t> children;
        std::size_t depth = 0;
    };

    explicit Circuit(std::size_t coords) : n_(coords) {}

    std::size_t coords() const { return n_; }
    std::size_t size() const { return gates_.size(); }
    const Gate& gate(std::size_t id) const { return gates_.at(id); }

    std::size_t add_leaf(CosetRep rep,
                         std::optional<CanonicalCoset> known = std::nullopt) {
        require(rep.n == n_, "add_leaf: coordinate-set mismatch");
        leaf_dim_ = std::max({leaf_dim_, rep.s(), rep.t()});
        Int norm = rep.a.norm();
        for (const auto& v : rep.b) norm = std::max(norm, abs_int(v));
        leaf_norm_ = std::max(leaf_norm_, norm);
        gates_.push_back({Kind::Leaf, std::move(rep), {}, 0});
        literal_.emplace_back();
        canonical_.push_back(std::move(known));
        return gates_.size() - 1;
    }

    // a leaf given directly as origin + generators; the canonical form is
    // computed on the generator matrix alone
    std::size_t add_lattice_leaf(const IntVec& origin,
                                 const std::vector<IntVec>& gens) {
        return add_leaf(coset_from_gens(origin, gens),
                        canonical_from_origin_gens(origin, gens));
    }

    std::size_t add_sum(std::vector<std::size_t> children) {
        return add_inner(Kind::Sum, std::move(children));
    }

    std::size_t add_intersect(std::vector<std::size_t> children) {
        return add_inner(Kind::Intersect, std::move(children));
    }

    // Literal bottom-up evaluation through the block-matrix constructions,
    // with the dimension and norm bounds checked on every gate.
    const CosetRep& evaluate(std::size_t id) const {
        require(id < gates_.size(), "evaluate: missing gate");
        if (literal_[id]) return *literal_[id];
        const Gate& g = gates_[id];
        if (g.kind == Kind::Leaf) {
            literal_[id] = g.leaf;
            return *literal_[id];
        }
        std::vector<CosetRep> ops;
        ops.reserve(g.children.size());
        for (auto c : g.children) ops.push_back(evaluate(c));
        CosetRep rep = g.kind == Kind::Sum ? coset_sum(ops) : coset_intersect(ops);
        // max{s,t} <= (r+1)^depth * m relative to the leaf dimension bound
        Int limit = std::max<Int>(leaf_dim_, 1);
        Int base = Int(max_indegree_ + 1);
        for (std::size_t i = 0; i < g.depth; ++i) limit *= base;
        check(Int(std::max(rep.s(), rep.t())) <= limit,
              "circuit size bound violated");
        Int norm = rep.a.norm();
        for (const auto& v : rep.b) norm = std::max(norm, abs_int(v));
        check(norm <= std::max(leaf_norm_, Int(1)), "circuit norm bound violated");
        literal_[id] = std::move(rep);
        return *literal_[id];
    }

    // Canonical-form evaluation; used for emptiness queries on circuits whose
    // literal matrices would be too large to assemble.
    const CanonicalCoset& evaluate_canonical(std::size_t id) const {
        require(id < gates_.size(), "evaluate_canonical: missing gate");
        if (canonical_[id]) return *canonical_[id];
        const Gate& g = gates_[id];
        CanonicalCoset val;
        if (g.kind == Kind::Leaf) {
            val = coset_canonical(g.leaf);
        } else {
            val = evaluate_canonical(g.children[0]);
            for (std::size_t i = 1; i < g.children.size(); ++i) {
                const auto& next = evaluate_canonical(g.children[i]);
                val = g.kind == Kind::Sum ? canonical_sum(val, next)
                                          : canonical_intersect(val, next);
            }
        }
        canonical_[id] = std::move(val);
        return *canonical_[id];
    }

    bool gate_is_empty(std::size_t id) const {
        return evaluate_canonical(id).empty;
    }

    void clear_caches() const {
        for (auto& c : literal_) c.reset();
        for (auto& c : canonical_) c.reset();
    }

    void dump(std::ostream& out) const {
        for (std::size_t id = 0; id < gates_.size(); ++id) {
            const Gate& g = gates_[id];
            const CosetRep& rep = evaluate(id);
            out << "gate " << id << ' ';
            switch (g.kind) {
                case Kind::Leaf: out << "leaf"; break;
                case Kind::Sum: out << "sum"; break;
                case Kind::Intersect: out << "intersect"; break;
            }
            for (auto c : g.children) out << ' ' << c;
            Int norm = rep.a.norm();
            for (const auto& v : rep.b) norm = std::max(norm, abs_int(v));
            out << " depth=" << g.depth << " dims=" << rep.s() << 'x' << rep.t()
                << " norm=" << norm << '\n';
        }
    }

private:
    std::size_t add_inner(Kind kind, std::vector<std::size_t> children) {
        require(!children.empty(), "inner gate needs at least one child");
        std::size_t depth = 0;
        for (auto c : children) {
            require(c < gates_.size(), "inner gate references missing child");
            depth = std::max(depth, gates_[c].depth + 1);
        }
        max_indegree_ = std::max(max_indegree_, children.size());
        gates_.push_back({kind, {}, std::move(children), depth});
        literal_.emplace_back();
        canonical_.emplace_back();
        return gates_.size() - 1;
    }

    std::size_t n_;
    std::vector<Gate> gates_;
    std::size_t leaf_dim_ = 0;
    Int leaf_norm_ = 0;
    std::size_t max_indegree_ = 0;
    mutable std::vector<std::optional<CosetRep>> literal_;
    mutable std::vector<std::optional<CanonicalCoset>> canonical_;
};

}  // namespace valence
