#include "doctest.h"

#include <set>

#include "testutil.hpp"
#include "valence/coset.hpp"

using namespace valence;
using testutil::Rng;

namespace {

// Direct set arithmetic over Z^2, truncated to the working box [-W, W]^2.
// Leaf sets are filled by coefficient enumeration, so inside the box they are
// exact; sums are under-approximations (a decomposition may leave the box).
constexpr long W = 24;

using PointSet = std::set<std::pair<long, long>>;

PointSet leaf_points(const IntVec& origin, const std::vector<IntVec>& gens) {
    PointSet out;
    long o0 = static_cast<long>(origin[0]), o1 = static_cast<long>(origin[1]);
    std::vector<std::pair<long, long>> g;
    for (const auto& v : gens)
        g.emplace_back(static_cast<long>(v[0]), static_cast<long>(v[1]));
    const long R = 60;
    std::function<void(std::size_t, long, long)> rec = [&](std::size_t j, long x, long y) {
        if (j == g.size()) {
            if (x >= -W && x <= W && y >= -W && y <= W) out.emplace(x, y);
            return;
        }
        for (long k = -R; k <= R; ++k) rec(j + 1, x + k * g[j].first, y + k * g[j].second);
    };
    rec(0, o0, o1);
    return out;
}

PointSet sum_points(const PointSet& a, const PointSet& b) {
    PointSet out;
    for (const auto& [x1, y1] : a)
        for (const auto& [x2, y2] : b) {
            long x = x1 + x2, y = y1 + y2;
            if (x >= -W && x <= W && y >= -W && y <= W) out.emplace(x, y);
        }
    return out;
}

PointSet intersect_points(const PointSet& a, const PointSet& b) {
    PointSet out;
    for (const auto& p : a)
        if (b.count(p)) out.insert(p);
    return out;
}

struct RandomExpr {
    CosetRep rep;
    PointSet points;
};

RandomExpr random_leaf(Rng& rng) {
    IntVec origin = testutil::rand_vec(rng, 2, -4, 4);
    std::vector<IntVec> gens;
    int k = testutil::rand_int(rng, 0, 2);
    for (int i = 0; i < k; ++i) gens.push_back(testutil::rand_vec(rng, 2, -4, 4));
    return {coset_from_gens(origin, gens), leaf_points(origin, gens)};
}

RandomExpr random_expr(Rng& rng, int depth) {
    if (depth == 0 || testutil::rand_int(rng, 0, 2) == 0) return random_leaf(rng);
    auto l = random_expr(rng, depth - 1);
    auto r = random_expr(rng, depth - 1);
    if (testutil::rand_int(rng, 0, 1) == 0)
        return {coset_sum({l.rep, r.rep}), sum_points(l.points, r.points)};
    return {coset_intersect({l.rep, r.rep}), intersect_points(l.points, r.points)};
}

bool semantically_equal(const CosetRep& a, const CosetRep& b) {
    return coset_canonical(a) == coset_canonical(b);
}

}  // namespace

TEST_CASE("zero coset and origin membership") {
    auto z = coset_from_gens({Int(0), Int(0)}, {});
    CHECK(!coset_is_empty(z));
    CHECK(coset_member(z, {Int(0), Int(0)}));
    CHECK(!coset_member(z, {Int(1), Int(0)}));

    Rng rng(2001);
    for (int it = 0; it < 20; ++it) {
        auto origin = testutil::rand_vec(rng, 3, -5, 5);
        std::vector<IntVec> gens{testutil::rand_vec(rng, 3, -3, 3)};
        CHECK(coset_member(coset_from_gens(origin, gens), origin));
    }
}

TEST_CASE("membership example: -7 not in <6,4>") {
    auto c = coset_from_gens({Int(0)}, {{Int(6)}, {Int(4)}});
    CHECK(!coset_member(c, {Int(-7)}));
    CHECK(coset_member(c, {Int(-6)}));
}

TEST_CASE("sum of one coset is that coset; zero coset is a sum identity") {
    Rng rng(2002);
    for (int it = 0; it < 20; ++it) {
        auto e = random_leaf(rng);
        CHECK(semantically_equal(coset_sum({e.rep}), e.rep));
        auto z = coset_from_gens({Int(0), Int(0)}, {});
        CHECK(semantically_equal(coset_sum({e.rep, z}), e.rep));
    }
}

TEST_CASE("intersection: X cap X = X, disjoint parallel lines empty") {
    Rng rng(2003);
    for (int it = 0; it < 20; ++it) {
        auto e = random_leaf(rng);
        CHECK(semantically_equal(coset_intersect({e.rep, e.rep}), e.rep));
    }
    auto even = coset_from_gens({Int(0)}, {{Int(2)}});
    auto odd = coset_from_gens({Int(1)}, {{Int(2)}});
    CHECK(coset_is_empty(coset_intersect({even, odd})));
    CHECK(!coset_is_empty(even));
}

TEST_CASE("associativity of sum and intersection up to semantics") {
    Rng rng(2004);
    for (int it = 0; it < 15; ++it) {
        auto a = random_leaf(rng), b = random_leaf(rng), c = random_leaf(rng);
        CHECK(semantically_equal(coset_sum({coset_sum({a.rep, b.rep}), c.rep}),
                                 coset_sum({a.rep, coset_sum({b.rep, c.rep})})));
        auto l = coset_intersect({coset_intersect({a.rep, b.rep}), c.rep});
        auto r = coset_intersect({a.rep, coset_intersect({b.rep, c.rep})});
        CHECK(coset_canonical(l) == coset_canonical(r));
        CHECK(semantically_equal(coset_sum({a.rep, b.rep}), coset_sum({b.rep, a.rep})));
    }
}

TEST_CASE("random expressions match direct set arithmetic on the box") {
    Rng rng(2005);
    for (int it = 0; it < 60; ++it) {
        auto e = random_expr(rng, 2);
        for (long x = -8; x <= 8; ++x)
            for (long y = -8; y <= 8; ++y) {
                bool direct = e.points.count({x, y}) > 0;
                bool rep = coset_member(e.rep, {Int(x), Int(y)});
                // direct arithmetic is an under-approximation: every point it
                // finds must be a member; and membership claims are verified
                // against the canonical form.
                if (direct) CHECK(rep);
                CHECK(rep == canonical_member(coset_canonical(e.rep), {Int(x), Int(y)}));
            }
        // the truncated sets under-approximate, so only one direction is sound;
        // nonemptiness claims carry a substitution certificate
        if (!e.points.empty()) CHECK(!coset_is_empty(e.rep));
        if (!coset_is_empty(e.rep)) {
            auto x = solve_ild(e.rep.a, e.rep.b);
            REQUIRE(x.has_value());
            CHECK(e.rep.a.mul(*x) == e.rep.b);
        }
    }
}

TEST_CASE("norm and dimension invariants of the block constructions") {
    Rng rng(2006);
    for (int it = 0; it < 40; ++it) {
        std::vector<CosetRep> ops;
        int r = testutil::rand_int(rng, 1, 3);
        Int max_norm = 0;
        std::size_t max_dim = 0;
        for (int i = 0; i < r; ++i) {
            auto e = random_leaf(rng);
            max_norm = std::max(max_norm, e.rep.a.norm());
            max_dim = std::max({max_dim, e.rep.s(), e.rep.t()});
            ops.push_back(e.rep);
        }
        for (bool is_sum : {true, false}) {
            auto out = is_sum ? coset_sum(ops) : coset_intersect(ops);
            CHECK(out.a.norm() <= std::max(max_norm, Int(1)));
            CHECK(std::max(out.s(), out.t()) <= (r + 1) * max_dim + (is_sum ? 1 : r) * 2);
        }
    }
}

TEST_CASE("canonical form: empty, idempotence, box membership") {
    CHECK(coset_canonical(coset_intersect(
              {coset_from_gens({Int(0)}, {{Int(2)}}),
               coset_from_gens({Int(1)}, {{Int(2)}})})) == CanonicalCoset{});

    Rng rng(2007);
    for (int it = 0; it < 30; ++it) {
        auto e = random_leaf(rng);
        auto c = coset_canonical(e.rep);
        REQUIRE(!c.empty);
        // rebuilding a rep from the canonical form reproduces it exactly
        std::vector<IntVec> gens;
        for (std::size_t j = 0; j < c.basis.cols(); ++j) gens.push_back(c.basis.col(j));
        CHECK(coset_canonical(coset_from_gens(c.origin, gens)) == c);
        for (long x = -8; x <= 8; ++x)
            for (long y = -8; y <= 8; ++y)
                CHECK(canonical_member(c, {Int(x), Int(y)}) ==
                      coset_member(e.rep, {Int(x), Int(y)}));
    }
}

TEST_CASE("canonical sum and intersect agree with the block constructions") {
    Rng rng(2008);
    for (int it = 0; it < 30; ++it) {
        auto a = random_leaf(rng), b = random_leaf(rng);
        auto ca = coset_canonical(a.rep), cb = coset_canonical(b.rep);
        CHECK(canonical_sum(ca, cb) == coset_canonical(coset_sum({a.rep, b.rep})));
        CHECK(canonical_intersect(ca, cb) ==
              coset_canonical(coset_intersect({a.rep, b.rep})));
    }
}

TEST_CASE("local-global law in Z^3") {
    Rng rng(2009);
    int done = 0;
    while (done < 40) {
        // subgroups U, S and vectors g_i
        std::vector<IntVec> ugens, sgens;
        for (int i = 0, k = testutil::rand_int(rng, 1, 2); i < k; ++i)
            ugens.push_back(testutil::rand_vec(rng, 3, -3, 3));
        for (int i = 0, k = testutil::rand_int(rng, 1, 3); i < k; ++i)
            sgens.push_back(testutil::rand_vec(rng, 3, -3, 3));
        int n = testutil::rand_int(rng, 1, 3);
        std::vector<IntVec> g;
        for (int i = 0; i < n; ++i) g.push_back(testutil::rand_vec(rng, 3, -4, 4));

        auto u_lat = canonical_from_origin_gens(IntVec(3, 0), ugens);
        auto s_lat = canonical_from_origin_gens(IntVec(3, 0), sgens);
        bool ok = true;
        std::vector<CanonicalCoset> pieces;
        for (int i = 0; i < n && ok; ++i) {
            CanonicalCoset gi_u = u_lat;
            gi_u.origin = lattice_reduce(gi_u.basis, vec_add(gi_u.origin, g[i]));
            auto piece = canonical_intersect(gi_u, s_lat);
            if (piece.empty) ok = false;
            else pieces.push_back(piece);
        }
        if (!ok) continue;
        ++done;
        // left side: group generated by the cosets (g_i+U) cap S
        std::vector<IntVec> lhs_gens;
        for (const auto& p : pieces) {
            lhs_gens.push_back(p.origin);
            for (std::size_t j = 0; j < p.basis.cols(); ++j)
                lhs_gens.push_back(p.basis.col(j));
        }
        auto lhs = canonical_from_origin_gens(IntVec(3, 0), lhs_gens);
        // right side: (<g_1..g_n> + U) cap S
        std::vector<IntVec> rgens = g;
        for (const auto& x : ugens) rgens.push_back(x);
        auto rhs = canonical_intersect(canonical_from_origin_gens(IntVec(3, 0), rgens),
                                       s_lat);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("lattice_section_project") {
    // zero_coords empty: plain projection of the lattice
    auto p0 = lattice_section_project({{Int(1), Int(2)}}, 2, {});
    CHECK(lattice_basis(2, p0) == lattice_basis(2, {{Int(1), Int(2)}}));

    // gens {(1,1)}, zero on coordinate 1 -> only the zero vector remains
    auto p1 = lattice_section_project({{Int(1), Int(1)}}, 2, {1});
    CHECK(p1.empty());

    Rng rng(2010);
    for (int it = 0; it < 25; ++it) {
        std::vector<IntVec> gens;
        for (int i = 0, k = testutil::rand_int(rng, 1, 3); i < k; ++i)
            gens.push_back(testutil::rand_vec(rng, 3, -3, 3));
        auto proj = lattice_section_project(gens, 3, {2});
        auto basis = lattice_basis(2, proj);
        // box check against direct enumeration of the lattice
        for (long a = -6; a <= 6; ++a)
            for (long b = -6; b <= 6; ++b)
                for (long c = -6; c <= 6; ++c) {
                    IntVec v(3, 0);
                    for (std::size_t j = 0; j < gens.size(); ++j) {
                        long coef = j == 0 ? a : (j == 1 ? b : c);
                        for (int i = 0; i < 3; ++i) v[i] += coef * gens[j][i];
                    }
                    if (gens.size() < 3 && (c != 0)) continue;
                    if (gens.size() < 2 && (b != 0)) continue;
                    if (v[2] == 0) CHECK(lattice_member(basis, {v[0], v[1]}));
                }
    }
}
