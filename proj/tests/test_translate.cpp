#include "doctest.h"

#include "testutil.hpp"
#include "valence/clique.hpp"
#include "valence/translate.hpp"

using namespace valence;
using testutil::Rng;

namespace {

Graph looped_line(int n) {
    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i), true);
    return g;  // no edges: free product of Z's
}

Word rand_word(Rng& rng, const Graph& g, std::size_t maxlen) {
    Word w;
    std::size_t len = testutil::rand_int(rng, 0, static_cast<int>(maxlen));
    for (std::size_t i = 0; i < len; ++i)
        w.push_back({static_cast<std::size_t>(
                         testutil::rand_int(rng, 0, static_cast<int>(g.size()) - 1)),
                     testutil::rand_int(rng, 0, 1) ? 1 : -1});
    return w;
}

}  // namespace

TEST_CASE("submem round trip on looped cliques") {
    // Z with target 3 and generator 2: odd vs even
    Graph z;
    z.add_vertex("z", true);
    SubgroupQuery q{z, {{0, 1}, {0, 1}, {0, 1}}, {{{0, 1}, {0, 1}}}};
    auto [sys, s, t] = submem_to_bireach(q);
    CHECK(check_bidirected(sys).empty());
    CHECK(decide_clique(sys, s, t).decision == Decision::Unreachable);

    SubgroupQuery q2{z, {{0, 1}, {0, 1}}, {{{0, 1}, {0, 1}}}};  // 2 in <2>
    auto [sys2, s2, t2] = submem_to_bireach(q2);
    CHECK(decide_clique(sys2, s2, t2).decision == Decision::Reachable);

    // k = 0 and empty target: trivially reachable
    SubgroupQuery q3{z, {}, {}};
    auto [sys3, s3, t3] = submem_to_bireach(q3);
    CHECK(decide_clique(sys3, s3, t3).decision == Decision::Reachable);

    // round trip preserves answers on random looped-clique queries
    Rng rng(10001);
    Graph zz;
    zz.add_vertex("a", true);
    zz.add_vertex("b", true);
    zz.add_edge(0, 1);
    for (int it = 0; it < 25; ++it) {
        SubgroupQuery query{zz, rand_word(rng, zz, 3), {}};
        for (int i = 0, k = testutil::rand_int(rng, 0, 2); i < k; ++i)
            query.generators.push_back(rand_word(rng, zz, 3));
        auto [sysa, sa, ta] = submem_to_bireach(query);
        auto direct = decide_clique(sysa, sa, ta);
        auto back = bireach_to_submem(sysa, sa, ta);
        REQUIRE(back.has_value());
        auto [sysb, sb, tb] = submem_to_bireach(*back);
        auto redone = decide_clique(sysb, sb, tb);
        CHECK(direct.decision == redone.decision);
    }
}

TEST_CASE("bireach_to_submem on the Z-VASS example") {
    ValenceSystem a;
    a.graph = looped_line(1);
    std::size_t s = a.add_state("s"), p = a.add_state("p"), q = a.add_state("q"),
                t = a.add_state("t");
    auto zpow = [&](long k) {
        Word w;
        for (long i = 0; i < std::labs(k); ++i) w.push_back({0, k < 0 ? -1 : 1});
        return w;
    };
    a.add_transition(s, p, zpow(5));
    a.add_transition(p, t, zpow(2));
    a.add_transition(q, s, zpow(-2));
    a.add_transition(p, q, zpow(3));
    a.add_transition(t, q, zpow(-1));
    a = bidirected_closure(a);
    auto query = bireach_to_submem(a, s, t);
    REQUIRE(query.has_value());
    CHECK(abelianize(a.graph, query->target)[0] == -7);
    REQUIRE(query->generators.size() == 2);
    CHECK(abelianize(a.graph, query->generators[0])[0] == 6);
    CHECK(abelianize(a.graph, query->generators[1])[0] == 4);

    ValenceSystem disc;
    disc.graph = looped_line(1);
    disc.add_state("x");
    disc.add_state("y");
    CHECK(!bireach_to_submem(disc, 0, 1).has_value());
}

TEST_CASE("sim_pushdown_words") {
    Graph g;
    g.add_vertex("u", false);
    g.add_vertex("v", true);
    auto w = sim_pushdown_words(g, 0, 1, 3);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == Word{{0, 1}, {1, 1}});
    // w1 w1~ cancels, w1 w2~ does not
    CHECK(word_is_identity(g, word_concat(w[0], word_inverse(w[0]))).verdict ==
          Verdict::Yes);
    CHECK(word_is_identity(g, word_concat(w[0], word_inverse(w[1]))).verdict ==
          Verdict::No);
}

TEST_CASE("sim_f2_translate preserves answers against the oracle") {
    // base graph: two non-adjacent vertices, both looped (free group F2)
    Graph base;
    base.add_vertex("u", true);
    base.add_vertex("v", true);
    Graph target = base;
    target.looped[0] = false;

    Rng rng(10002);
    int compared = 0;
    for (int it = 0; it < 30; ++it) {
        ValenceSystem a;
        a.graph = base;
        a.add_state("p");
        a.add_state("q");
        for (int i = 0, k = testutil::rand_int(rng, 1, 3); i < k; ++i) {
            Word w{{static_cast<std::size_t>(testutil::rand_int(rng, 0, 1)),
                    testutil::rand_int(rng, 0, 1) ? 1 : -1}};
            a.add_transition(testutil::rand_int(rng, 0, 1),
                             testutil::rand_int(rng, 0, 1), w);
        }
        a = bidirected_closure(a);
        auto b = bidirected_closure(sim_f2_translate(a, 0, 1, target));
        CHECK(check_bidirected(b).empty());
        auto oa = oracle_reach(a, 0, 1, 8, 40000);
        auto ob = oracle_reach(b, 0, 1, 16, 250000);
        if (oa.kind == OracleOutcome::Yes) {
            ++compared;
            CHECK(ob.kind == OracleOutcome::Yes);
        }
        if (oa.kind == OracleOutcome::NoWithinBound)
            CHECK(ob.kind != OracleOutcome::Yes);
    }
    CHECK(compared > 5);

    // both looped: identity translation
    ValenceSystem a;
    a.graph = base;
    a.add_state("p");
    a.add_transition(0, 0, {{0, 1}});
    auto same = sim_f2_translate(a, 0, 1, base);
    CHECK(same.transitions.size() == a.transitions.size());
}

TEST_CASE("c4looped_to_c4") {
    Graph c4l;
    for (int i = 0; i < 4; ++i) c4l.add_vertex("v" + std::to_string(i), true);
    c4l.add_edge(0, 1);
    c4l.add_edge(1, 2);
    c4l.add_edge(2, 3);
    c4l.add_edge(3, 0);

    ValenceSystem empty;
    empty.graph = c4l;
    empty.add_state("p");
    auto out0 = c4looped_to_c4(empty);
    CHECK(out0.transitions.empty());
    for (std::size_t v = 0; v < 4; ++v) CHECK(!out0.graph.looped[v]);
    CHECK(out0.graph.adjacent(0, 1));
    CHECK(!out0.graph.adjacent(0, 2));

    // oracle Yes instances stay Yes after translation
    Rng rng(10003);
    int preserved = 0;
    for (int it = 0; it < 12 && preserved < 5; ++it) {
        ValenceSystem a;
        a.graph = c4l;
        a.add_state("p");
        a.add_state("q");
        for (int i = 0, k = testutil::rand_int(rng, 1, 3); i < k; ++i)
            a.add_transition(
                testutil::rand_int(rng, 0, 1), testutil::rand_int(rng, 0, 1),
                {{static_cast<std::size_t>(testutil::rand_int(rng, 0, 3)),
                  testutil::rand_int(rng, 0, 1) ? 1 : -1}});
        a = bidirected_closure(a);
        auto oa = oracle_reach(a, 0, 1, 6, 20000);
        if (oa.kind != OracleOutcome::Yes) continue;
        auto b = c4looped_to_c4(a);
        auto ob = oracle_reach(b, 0, 1, 20, 400000);
        if (ob.kind == OracleOutcome::Yes) ++preserved;
    }
    CHECK(preserved >= 5);
}

TEST_CASE("ild_to_bireach round trips through the clique solver") {
    {
        auto [sys, p, q] = ild_to_bireach(IntMatrix{{2}}, {Int(4)});
        CHECK(decide_clique(sys, p, q).decision == Decision::Reachable);
    }
    {
        auto [sys, p, q] = ild_to_bireach(IntMatrix{{6, 4}}, {Int(-7)});
        CHECK(decide_clique(sys, p, q).decision == Decision::Unreachable);
    }
    Rng rng(10004);
    for (int it = 0; it < 40; ++it) {
        std::size_t m = testutil::rand_int(rng, 1, 2);
        std::size_t n = testutil::rand_int(rng, 1, 3);
        auto a = testutil::rand_matrix(rng, m, n, -3, 3);
        auto b = testutil::rand_vec(rng, m, -4, 4);
        auto [sys, p, q] = ild_to_bireach(a, b);
        CHECK(check_bidirected(sys).empty());
        auto d = decide_clique(sys, p, q);
        REQUIRE(d.decision != Decision::Refused);
        CHECK((d.decision == Decision::Reachable) == solve_ild(a, b).has_value());
    }
}

TEST_CASE("csg_to_bireach agrees with csg_equiv") {
    SemigroupPresentation empty_rules;
    empty_rules.symbols = {"a", "b"};
    {
        auto [sys, q0, q2] = csg_to_bireach(empty_rules, {1, 0}, {1, 0});
        CHECK(decide_clique(sys, q0, q2).decision == Decision::Reachable);
        auto [sys2, r0, r2] = csg_to_bireach(empty_rules, {1, 0}, {0, 1});
        CHECK(decide_clique(sys2, r0, r2).decision == Decision::Unreachable);
    }
    {
        SemigroupPresentation p;
        p.symbols = {"a", "b"};
        p.rules.push_back({{1, 0}, {0, 1}});  // a -> b
        auto [sys, q0, q2] = csg_to_bireach(p, {1, 0}, {0, 1});
        CHECK(decide_clique(sys, q0, q2).decision == Decision::Reachable);
    }
    Rng rng(10005);
    int compared = 0;
    for (int it = 0; it < 30; ++it) {
        SemigroupPresentation p;
        p.symbols = {"a", "b"};
        for (int i = 0, k = testutil::rand_int(rng, 0, 2); i < k; ++i) {
            std::vector<long> l{testutil::rand_int(rng, 0, 2),
                                testutil::rand_int(rng, 0, 1)};
            std::vector<long> r{testutil::rand_int(rng, 0, 2),
                                testutil::rand_int(rng, 0, 1)};
            p.rules.push_back({l, r});
        }
        std::vector<long> u{testutil::rand_int(rng, 0, 2), testutil::rand_int(rng, 0, 1)};
        std::vector<long> v{testutil::rand_int(rng, 0, 2), testutil::rand_int(rng, 0, 1)};
        auto eq = csg_equiv(p, u, v, 30, 100000);
        auto [sys, q0, q2] = csg_to_bireach(p, u, v);
        auto d = decide_clique(sys, q0, q2);
        if (eq.kind == CsgResult::Exhausted || d.decision == Decision::Refused)
            continue;
        ++compared;
        CHECK((eq.kind == CsgResult::Yes) == (d.decision == Decision::Reachable));
    }
    CHECK(compared > 20);
}

TEST_CASE("undirected reachability gadget") {
    auto [sys, s, t] = undirected_reach_to_bireach(4, {{0, 1}, {1, 2}}, 0, 2);
    CHECK(oracle_reach(sys, s, t, 2, 1000).kind == OracleOutcome::Yes);
    auto [sys2, s2, t2] = undirected_reach_to_bireach(4, {{0, 1}, {2, 3}}, 0, 2);
    CHECK(oracle_reach(sys2, s2, t2, 2, 1000).kind == OracleOutcome::NoWithinBound);

    Rng rng(10006);
    for (int it = 0; it < 30; ++it) {
        std::size_t n = testutil::rand_int(rng, 2, 6);
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (int i = 0, k = testutil::rand_int(rng, 0, 6); i < k; ++i) {
            std::size_t x = testutil::rand_int(rng, 0, n - 1);
            std::size_t y = testutil::rand_int(rng, 0, n - 1);
            if (x != y) edges.emplace_back(x, y);
        }
        std::size_t s3 = testutil::rand_int(rng, 0, n - 1);
        std::size_t t3 = testutil::rand_int(rng, 0, n - 1);
        // plain undirected connectivity
        std::vector<std::size_t> comp(n);
        for (std::size_t i = 0; i < n; ++i) comp[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            while (comp[x] != x) x = comp[x] = comp[comp[x]];
            return x;
        };
        for (auto [x, y] : edges) comp[find(x)] = find(y);
        bool connected = find(s3) == find(t3);
        auto [sys3, a3, b3] = undirected_reach_to_bireach(n, edges, s3, t3);
        CHECK((oracle_reach(sys3, a3, b3, 2, 5000).kind == OracleOutcome::Yes) ==
              connected);
    }
}
