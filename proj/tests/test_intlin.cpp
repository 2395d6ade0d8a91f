#include "doctest.h"

#include <functional>

#include "testutil.hpp"
#include "valence/coset.hpp"

using namespace valence;
using testutil::Rng;

TEST_CASE("hnf of identity is identity") {
    auto [h, u] = hnf(IntMatrix::identity(3));
    CHECK(h == IntMatrix::identity(3));
    CHECK(u == IntMatrix::identity(3));
}

TEST_CASE("hnf of row [6 4] has pivot gcd 2") {
    IntMatrix m{{6, 4}};
    auto [h, u] = hnf(m);
    CHECK(h.at(0, 0) == 2);
    CHECK(h.at(0, 1) == 0);
    CHECK(m.mul(u) == h);
}

TEST_CASE("hnf satisfies m*U = H on random matrices") {
    Rng rng(1001);
    for (int it = 0; it < 200; ++it) {
        std::size_t r = testutil::rand_int(rng, 0, 5);
        std::size_t c = testutil::rand_int(rng, 0, 5);
        auto m = testutil::rand_matrix(rng, r, c, -9, 9);
        auto [h, u] = hnf(m);
        CHECK(m.mul(u) == h);
        // pivot rows strictly increase and pivots positive
        std::size_t last = 0;
        bool first = true, trailing_zero = false;
        for (std::size_t j = 0; j < h.cols(); ++j) {
            std::size_t i = 0;
            while (i < h.rows() && h.at(i, j) == 0) ++i;
            if (i == h.rows()) {
                trailing_zero = true;
                continue;
            }
            CHECK(!trailing_zero);
            CHECK(h.at(i, j) > 0);
            if (!first) CHECK(i > last);
            last = i;
            first = false;
        }
    }
}

TEST_CASE("solve_ild: 6x + 4y = -7 has no solution") {
    IntMatrix a{{6, 4}};
    CHECK(!solve_ild(a, {Int(-7)}).has_value());
}

TEST_CASE("solve_ild: 2x = 4 gives x = 2") {
    IntMatrix a{{2}};
    auto x = solve_ild(a, {Int(4)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
}

TEST_CASE("solve_ild agrees with box enumeration") {
    Rng rng(1002);
    for (int it = 0; it < 80; ++it) {
        std::size_t m = testutil::rand_int(rng, 1, 4);
        std::size_t n = testutil::rand_int(rng, 1, 4);
        auto a = testutil::rand_matrix(rng, m, n, -5, 5);
        auto b = testutil::rand_vec(rng, m, -12, 12);
        auto x = solve_ild(a, b);
        if (x) {
            CHECK(a.mul(*x) == b);  // exact re-substitution
        } else {
            CHECK(!testutil::box_feasible(a, b, 60));
        }
    }
}

TEST_CASE("kernel_basis: A = [1 0]") {
    auto k = kernel_basis(IntMatrix{{1, 0}});
    REQUIRE(k.size() == 1);
    CHECK(k[0][0] == 0);
    CHECK(abs_int(k[0][1]) == 1);
}

TEST_CASE("kernel_basis: A = [6 4] generates (2,-3)") {
    auto k = kernel_basis(IntMatrix{{6, 4}});
    REQUIRE(k.size() == 1);
    auto got = lattice_basis(2, k);
    auto want = lattice_basis(2, {{Int(2), Int(-3)}});
    CHECK(got == want);
}

TEST_CASE("kernel points in a box are integer combinations of the basis") {
    Rng rng(1003);
    for (int it = 0; it < 40; ++it) {
        std::size_t m = testutil::rand_int(rng, 1, 2);
        std::size_t n = testutil::rand_int(rng, 1, 3);
        auto a = testutil::rand_matrix(rng, m, n, -4, 4);
        auto kb = kernel_basis(a);
        for (const auto& k : kb) CHECK(vec_is_zero(a.mul(k)));
        auto basis = lattice_basis(n, kb);
        // enumerate kernel points in [-20,20]^n
        IntVec x(n, -20);
        for (;;) {
            if (vec_is_zero(a.mul(x))) CHECK(lattice_member(basis, x));
            std::size_t j = 0;
            while (j < n && x[j] == 20) x[j++] = -20;
            if (j == n) break;
            x[j] += 1;
        }
    }
}
