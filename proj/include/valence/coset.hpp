#pragma once

#include <optional>
#include <vector>

#include "valence/intlin.hpp"

namespace valence {

// Matrix representation of a coset S of Z^n: S = { last n coordinates of x :
// A x = b }. Variables may include auxiliary coordinates before the final n.
struct CosetRep {
    IntMatrix a;  // s x t
    IntVec b;     // length s
    std::size_t n = 0;  // number of target coordinates (last n of t columns)

    std::size_t s() const { return a.rows(); }
    std::size_t t() const { return a.cols(); }
};

inline CosetRep coset_from_gens(const IntVec& origin, const std::vector<IntVec>& gens) {
    const std::size_t n = origin.size();
    for (const auto& g : gens) require(g.size() == n, "coset_from_gens: size mismatch");
    const std::size_t k = gens.size();
    // y - sum lambda_j u_j = origin, variables (lambda_1..lambda_k, y)
    IntMatrix a(n, k + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) a.at(i, j) = -gens[j][i];
        a.at(i, k + i) = 1;
    }
    return CosetRep{std::move(a), origin, n};
}

inline CosetRep coset_point(const IntVec& v) { return coset_from_gens(v, {}); }

namespace detail {
// Assemble the block matrix for a sum or intersection gate.
inline CosetRep coset_combine(const std::vector<CosetRep>& reps, bool is_sum) {
    require(!reps.empty(), "coset combine: needs at least one operand");
    const std::size_t n = reps[0].n;
    for (const auto& r : reps)
        require(r.n == n, "coset combine: coordinate-set mismatch");
    const std::size_t r = reps.size();
    std::size_t st = 0, tt = 0;
    for (const auto& rep : reps) {
        st += rep.s();
        tt += rep.t();
    }
    const std::size_t extra_rows = is_sum ? n : r * n;
    CosetRep out;
    out.n = n;
    out.a = IntMatrix(st + extra_rows, tt + n);
    out.b.assign(st + extra_rows, 0);
    std::size_t row0 = 0, col0 = 0;
    std::vector<std::size_t> tail(r);  // column offset of each child's last n block
    for (std::size_t i = 0; i < r; ++i) {
        const auto& rep = reps[i];
        for (std::size_t x = 0; x < rep.s(); ++x) {
            for (std::size_t y = 0; y < rep.t(); ++y)
                out.a.at(row0 + x, col0 + y) = rep.a.at(x, y);
            out.b[row0 + x] = rep.b[x];
        }
        tail[i] = col0 + rep.t() - n;
        row0 += rep.s();
        col0 += rep.t();
    }
    if (is_sum) {
        // y = y_1 + ... + y_r
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < r; ++c) out.a.at(row0 + i, tail[c] + i) = 1;
            out.a.at(row0 + i, tt + i) = -1;
        }
    } else {
        // y = y_c for each child c
        for (std::size_t c = 0; c < r; ++c)
            for (std::size_t i = 0; i < n; ++i) {
                out.a.at(row0 + c * n + i, tail[c] + i) = 1;
                out.a.at(row0 + c * n + i, tt + i) = -1;
            }
    }
    return out;
}
}  // namespace detail

inline CosetRep coset_sum(const std::vector<CosetRep>& reps) {
    return detail::coset_combine(reps, true);
}

inline CosetRep coset_intersect(const std::vector<CosetRep>& reps) {
    return detail::coset_combine(reps, false);
}

inline bool coset_is_empty(const CosetRep& rep) {
    return !solve_ild(rep.a, rep.b).has_value();
}

inline bool coset_member(const CosetRep& rep, const IntVec& v) {
    require(v.size() == rep.n, "coset_member: dimension mismatch");
    IntMatrix a(rep.s() + rep.n, rep.t());
    IntVec b(rep.s() + rep.n);
    for (std::size_t i = 0; i < rep.s(); ++i) {
        for (std::size_t j = 0; j < rep.t(); ++j) a.at(i, j) = rep.a.at(i, j);
        b[i] = rep.b[i];
    }
    for (std::size_t i = 0; i < rep.n; ++i) {
        a.at(rep.s() + i, rep.t() - rep.n + i) = 1;
        b[rep.s() + i] = v[i];
    }
    return solve_ild(a, b).has_value();
}

// ---------------------------------------------------------------------------
// Canonical form: empty, or origin + column-HNF lattice basis. Two cosets are
// equal iff their canonical forms are structurally equal.
// ---------------------------------------------------------------------------

struct CanonicalCoset {
    bool empty = true;
    IntVec origin;   // reduced modulo the lattice
    IntMatrix basis; // n x rank, column HNF, no zero columns

    bool operator==(const CanonicalCoset& other) const {
        if (empty != other.empty) return false;
        if (empty) return true;
        return origin == other.origin && basis == other.basis;
    }
};

namespace detail {
inline std::vector<std::size_t> pivot_rows(const IntMatrix& h) {
    std::vector<std::size_t> p;
    for (std::size_t j = 0; j < h.cols(); ++j) {
        std::size_t i = 0;
        while (i < h.rows() && h.at(i, j) == 0) ++i;
        if (i == h.rows()) break;  // zero columns are trailing
        p.push_back(i);
    }
    return p;
}
}  // namespace detail

// HNF basis of the lattice generated by the given columns (zero cols dropped).
inline IntMatrix lattice_basis(std::size_t n, const std::vector<IntVec>& gens) {
    IntMatrix h = hnf_only(IntMatrix::from_cols(n, gens));
    std::size_t rank = detail::pivot_rows(h).size();
    IntMatrix out(n, rank);
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < n; ++i) out.at(i, j) = h.at(i, j);
    return out;
}

// Reduce v modulo the column-HNF basis; the remainder is the unique coset
// representative with pivot coordinates in [0, pivot).
inline IntVec lattice_reduce(const IntMatrix& basis, IntVec v) {
    auto piv = detail::pivot_rows(basis);
    for (std::size_t j = 0; j < piv.size(); ++j) {
        Int q = fdiv(v[piv[j]], basis.at(piv[j], j));
        if (q != 0)
            for (std::size_t i = 0; i < basis.rows(); ++i)
                v[i] -= q * basis.at(i, j);
    }
    return v;
}

inline bool lattice_member(const IntMatrix& basis, IntVec v) {
    auto piv = detail::pivot_rows(basis);
    for (std::size_t j = 0; j < piv.size(); ++j) {
        const Int& p = basis.at(piv[j], j);
        if (v[piv[j]] % p != 0) return false;
        Int q = v[piv[j]] / p;
        if (q != 0)
            for (std::size_t i = 0; i < basis.rows(); ++i)
                v[i] -= q * basis.at(i, j);
    }
    return vec_is_zero(v);
}

inline CanonicalCoset canonical_from_origin_gens(const IntVec& origin,
                                                 const std::vector<IntVec>& gens) {
    CanonicalCoset c;
    c.empty = false;
    c.basis = lattice_basis(origin.size(), gens);
    c.origin = lattice_reduce(c.basis, origin);
    return c;
}

inline CanonicalCoset coset_canonical(const CosetRep& rep) {
    auto sol = solve_general(rep.a, rep.b);
    if (!sol) return CanonicalCoset{};
    const auto& x0 = sol->particular;
    const auto& kern = sol->kernel;
    const std::size_t n = rep.n, off = rep.t() - rep.n;
    IntVec origin(n);
    for (std::size_t i = 0; i < n; ++i) origin[i] = x0[off + i];
    std::vector<IntVec> gens;
    gens.reserve(kern.size());
    for (const auto& k : kern) {
        IntVec g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = k[off + i];
        gens.push_back(std::move(g));
    }
    return canonical_from_origin_gens(origin, gens);
}

inline bool canonical_member(const CanonicalCoset& c, const IntVec& v) {
    if (c.empty) return false;
    return lattice_member(c.basis, vec_sub(v, c.origin));
}

inline CanonicalCoset canonical_sum(const CanonicalCoset& a, const CanonicalCoset& b) {
    if (a.empty || b.empty) return CanonicalCoset{};
    // adding a single point is a translation; the basis is already canonical
    if (a.basis.cols() == 0 || b.basis.cols() == 0) {
        const CanonicalCoset& lattice = a.basis.cols() == 0 ? b : a;
        CanonicalCoset out;
        out.empty = false;
        out.basis = lattice.basis;
        out.origin = lattice_reduce(out.basis, vec_add(a.origin, b.origin));
        return out;
    }
    std::vector<IntVec> gens;
    for (std::size_t j = 0; j < a.basis.cols(); ++j) gens.push_back(a.basis.col(j));
    for (std::size_t j = 0; j < b.basis.cols(); ++j) gens.push_back(b.basis.col(j));
    return canonical_from_origin_gens(vec_add(a.origin, b.origin), gens);
}

// forward declaration for the subspace fast path
inline CanonicalCoset canonical_fix_coords(const CanonicalCoset& c,
                                           const std::vector<std::size_t>& coords,
                                           const IntVec& targets);

namespace detail {
// Detects cosets of the form { x : x_c = o_c on constrained coords, free
// elsewhere }: the basis consists of distinct unit columns.
inline bool subspace_constraints(const CanonicalCoset& c,
                                 std::vector<std::size_t>& coords, IntVec& targets) {
    const std::size_t n = c.origin.size();
    std::vector<bool> free_coord(n, false);
    for (std::size_t j = 0; j < c.basis.cols(); ++j) {
        std::size_t nonzero = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (c.basis.at(i, j) == 0) continue;
            if (nonzero != n || c.basis.at(i, j) != 1) return false;
            nonzero = i;
        }
        if (nonzero == n || free_coord[nonzero]) return false;
        free_coord[nonzero] = true;
    }
    coords.clear();
    targets.clear();
    for (std::size_t i = 0; i < n; ++i)
        if (!free_coord[i]) {
            coords.push_back(i);
            targets.push_back(c.origin[i]);
        }
    return true;
}
}  // namespace detail

inline CanonicalCoset canonical_intersect(const CanonicalCoset& a,
                                          const CanonicalCoset& b) {
    if (a.empty || b.empty) return CanonicalCoset{};
    {
        std::vector<std::size_t> coords;
        IntVec targets;
        if (detail::subspace_constraints(b, coords, targets))
            return canonical_fix_coords(a, coords, targets);
        if (detail::subspace_constraints(a, coords, targets))
            return canonical_fix_coords(b, coords, targets);
    }
    const std::size_t n = a.origin.size();
    const std::size_t ra = a.basis.cols(), rb = b.basis.cols();
    // solve A lambda - B mu = origin_b - origin_a
    IntMatrix m(n, ra + rb);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < ra; ++j) m.at(i, j) = a.basis.at(i, j);
        for (std::size_t j = 0; j < rb; ++j) m.at(i, ra + j) = -b.basis.at(i, j);
    }
    auto sol = solve_general(m, vec_sub(b.origin, a.origin));
    if (!sol) return CanonicalCoset{};
    IntVec point = a.origin;
    for (std::size_t j = 0; j < ra; ++j)
        if (sol->particular[j] != 0)
            for (std::size_t i = 0; i < n; ++i)
                point[i] += sol->particular[j] * a.basis.at(i, j);
    std::vector<IntVec> gens;
    for (const auto& k : sol->kernel) {
        IntVec g(n, 0);
        for (std::size_t j = 0; j < ra; ++j)
            if (k[j] != 0)
                for (std::size_t i = 0; i < n; ++i) g[i] += k[j] * a.basis.at(i, j);
        gens.push_back(std::move(g));
    }
    return canonical_from_origin_gens(point, gens);
}

// Constrain the given coordinates to fixed target values.
inline CanonicalCoset canonical_fix_coords(const CanonicalCoset& c,
                                           const std::vector<std::size_t>& coords,
                                           const IntVec& targets) {
    if (c.empty) return CanonicalCoset{};
    require(coords.size() == targets.size(), "canonical_fix_coords: size mismatch");
    const std::size_t n = c.origin.size(), r = c.basis.cols();
    IntMatrix m(coords.size(), r);
    IntVec rhs(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        for (std::size_t j = 0; j < r; ++j) m.at(i, j) = c.basis.at(coords[i], j);
        rhs[i] = targets[i] - c.origin[coords[i]];
    }
    auto sol = solve_general(m, rhs);
    if (!sol) return CanonicalCoset{};
    IntVec point = c.origin;
    for (std::size_t j = 0; j < r; ++j)
        if (sol->particular[j] != 0)
            for (std::size_t i = 0; i < n; ++i)
                point[i] += sol->particular[j] * c.basis.at(i, j);
    std::vector<IntVec> gens;
    for (const auto& k : sol->kernel) {
        IntVec g(n, 0);
        for (std::size_t j = 0; j < r; ++j)
            if (k[j] != 0)
                for (std::size_t i = 0; i < n; ++i) g[i] += k[j] * c.basis.at(i, j);
        gens.push_back(std::move(g));
    }
    return canonical_from_origin_gens(point, gens);
}

// Value set of one coordinate: origin[c] + step*Z (step 0 means fixed).
inline std::pair<Int, Int> canonical_coord_progression(const CanonicalCoset& c,
                                                       std::size_t coord) {
    require(!c.empty, "coord_progression of empty coset");
    Int step = 0;
    for (std::size_t j = 0; j < c.basis.cols(); ++j)
        step = gcd_int(step, c.basis.at(coord, j));
    return {c.origin[coord], step};
}

// Generators of { v restricted to coords outside zero_coords :
//   v in <gens>, v zero on zero_coords }.
inline std::vector<IntVec> lattice_section_project(
    const std::vector<IntVec>& gens, std::size_t dim,
    const std::vector<std::size_t>& zero_coords) {
    std::vector<bool> drop(dim, false);
    for (auto c : zero_coords) {
        require(c < dim, "lattice_section_project: bad coordinate");
        drop[c] = true;
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < dim; ++i)
        if (!drop[i]) keep.push_back(i);
    // coefficients lambda with (sum lambda_j gens_j) zero on zero_coords
    IntMatrix m(zero_coords.size(), gens.size());
    for (std::size_t i = 0; i < zero_coords.size(); ++i)
        for (std::size_t j = 0; j < gens.size(); ++j)
            m.at(i, j) = gens[j][zero_coords[i]];
    std::vector<IntVec> out;
    for (const auto& k : kernel_basis(m)) {
        IntVec g(keep.size(), 0);
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (k[j] != 0)
                for (std::size_t i = 0; i < keep.size(); ++i)
                    g[i] += k[j] * gens[j][keep[i]];
        if (!vec_is_zero(g)) out.push_back(std::move(g));
    }
    return out;
}

}  // namespace valence
