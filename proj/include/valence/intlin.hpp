#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "valence/matrix.hpp"

namespace valence {

// Column Hermite normal form: returns (H, U) with M*U = H, U unimodular.
// Convention: nonzero columns first with strictly increasing pivot rows,
// positive pivots, and entries left of a pivot reduced into [0, pivot).
// Pivot selection is by minimal absolute value to limit coefficient growth.
inline std::pair<IntMatrix, IntMatrix> hnf(const IntMatrix& m) {
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(m.cols());
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t frontier = 0;
    for (std::size_t r = 0; r < rows && frontier < cols; ++r) {
        for (;;) {
            std::size_t best = cols;
            for (std::size_t j = frontier; j < cols; ++j) {
                if (h.at(r, j) == 0) continue;
                if (best == cols || abs_int(h.at(r, j)) < abs_int(h.at(r, best)))
                    best = j;
            }
            if (best == cols) break;
            bool others = false;
            for (std::size_t j = frontier; j < cols; ++j) {
                if (j == best || h.at(r, j) == 0) continue;
                // round to nearest to keep entries small
                Int q = fdiv(2 * h.at(r, j) + abs_int(h.at(r, best)),
                             2 * h.at(r, best));
                if (h.at(r, best) < 0) q = fdiv(2 * h.at(r, j) - abs_int(h.at(r, best)),
                                                2 * h.at(r, best));
                h.add_col(j, best, -q);
                u.add_col(j, best, -q);
                if (h.at(r, j) != 0) others = true;
            }
            if (!others) {
                h.swap_cols(frontier, best);
                u.swap_cols(frontier, best);
                break;
            }
        }
        if (h.at(r, frontier) != 0) {
            if (h.at(r, frontier) < 0) {
                h.negate_col(frontier);
                u.negate_col(frontier);
            }
            for (std::size_t j = 0; j < frontier; ++j) {
                Int q = fdiv(h.at(r, j), h.at(r, frontier));
                h.add_col(j, frontier, -q);
                u.add_col(j, frontier, -q);
            }
            ++frontier;
        }
    }
    return {h, u};
}

// Column HNF without the transformation matrix (cheaper when only the form
// itself is needed).
inline IntMatrix hnf_only(const IntMatrix& m) {
    IntMatrix h = m;
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t frontier = 0;
    for (std::size_t r = 0; r < rows && frontier < cols; ++r) {
        for (;;) {
            std::size_t best = cols;
            for (std::size_t j = frontier; j < cols; ++j) {
                if (h.at(r, j) == 0) continue;
                if (best == cols || abs_int(h.at(r, j)) < abs_int(h.at(r, best)))
                    best = j;
            }
            if (best == cols) break;
            bool others = false;
            for (std::size_t j = frontier; j < cols; ++j) {
                if (j == best || h.at(r, j) == 0) continue;
                Int q = fdiv(2 * h.at(r, j) + abs_int(h.at(r, best)),
                             2 * h.at(r, best));
                if (h.at(r, best) < 0) q = fdiv(2 * h.at(r, j) - abs_int(h.at(r, best)),
                                                2 * h.at(r, best));
                h.add_col(j, best, -q);
                if (h.at(r, j) != 0) others = true;
            }
            if (!others) {
                h.swap_cols(frontier, best);
                break;
            }
        }
        if (h.at(r, frontier) != 0) {
            if (h.at(r, frontier) < 0) h.negate_col(frontier);
            for (std::size_t j = 0; j < frontier; ++j) {
                Int q = fdiv(h.at(r, j), h.at(r, frontier));
                h.add_col(j, frontier, -q);
            }
            ++frontier;
        }
    }
    return h;
}

// Basis of {x : A x = 0}; columns generate the kernel lattice exactly.
inline std::vector<IntVec> kernel_basis(const IntMatrix& a) {
    auto [h, u] = hnf(a);
    std::vector<IntVec> out;
    for (std::size_t j = 0; j < h.cols(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < h.rows() && zero; ++i)
            if (h.at(i, j) != 0) zero = false;
        if (zero) out.push_back(u.col(j));
    }
    return out;
}

struct GeneralSolution {
    IntVec particular;
    std::vector<IntVec> kernel;
};

namespace detail {
inline std::optional<IntVec> solve_from_hnf(const IntMatrix& h, const IntMatrix& u,
                                            const IntVec& b) {
    const std::size_t rows = h.rows(), cols = h.cols();
    std::vector<std::size_t> pivot(cols, rows);
    std::size_t rank = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        std::size_t i = 0;
        while (i < rows && h.at(i, j) == 0) ++i;
        if (i < rows) {
            pivot[j] = i;
            rank = j + 1;
        }
    }
    IntVec y(cols, 0);
    IntVec acc(rows, 0);
    std::size_t next = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (next < rank && pivot[next] == r) {
            Int residual = b[r] - acc[r];
            if (residual % h.at(r, next) != 0) return std::nullopt;
            y[next] = residual / h.at(r, next);
            if (y[next] != 0)
                for (std::size_t i = r; i < rows; ++i)
                    acc[i] += y[next] * h.at(i, next);
            ++next;
        } else if (acc[r] != b[r]) {
            return std::nullopt;
        }
    }
    return u.mul(y);
}
}  // namespace detail

// Particular solution and kernel basis of A x = b in one factorization.
inline std::optional<GeneralSolution> solve_general(const IntMatrix& a,
                                                    const IntVec& b) {
    require(b.size() == a.rows(), "solve_general: dimension mismatch");
    auto [h, u] = hnf(a);
    auto x = detail::solve_from_hnf(h, u, b);
    if (!x) return std::nullopt;
    GeneralSolution out;
    out.particular = std::move(*x);
    for (std::size_t j = 0; j < h.cols(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < h.rows() && zero; ++i)
            if (h.at(i, j) != 0) zero = false;
        if (zero) out.kernel.push_back(u.col(j));
    }
    return out;
}

// Integer solution of A x = b, or nullopt when infeasible over Z.
inline std::optional<IntVec> solve_ild(const IntMatrix& a, const IntVec& b) {
    require(b.size() == a.rows(), "solve_ild: dimension mismatch");
    auto [h, u] = hnf(a);
    return detail::solve_from_hnf(h, u, b);
}

}  // namespace valence
