#include "doctest.h"

#include "testutil.hpp"
#include "valence/emptiness.hpp"

using namespace valence;
using testutil::Rng;

namespace {

// The worked pushdown Z-VASS grammar: states q0, q1; leaf placeholders for
// the stack letters a and b at level 0, c-counter placeholders at levels 1
// and 2, the counter terminal c at level 2, deletion letters at level 0.
struct ExampleGrammar {
    KGrammar g;
    std::map<std::string, std::size_t> id;

    std::size_t nt(const std::string& n) const { return id.at(n); }
};

ExampleGrammar example_grammar() {
    ExampleGrammar eg;
    KGrammar& g = eg.g;
    g.k = 2;
    const char* states[2] = {"q0", "q1"};
    for (const char* d : {"a", "b"})
        for (const char* p : states)
            for (const char* q : states)
                eg.id[std::string(p) + "_" + d + "_" + q] =
                    g.add_nt(std::string(p) + "_" + d + "_" + q, 0);
    for (const char* p : states)
        for (const char* q : states)
            eg.id[std::string(p) + "_c_" + q] =
                g.add_nt(std::string(p) + "_c_" + q, 1);
    for (const char* p : states)
        for (const char* q : states)
            eg.id[std::string(p) + "_C_" + q] =
                g.add_nt(std::string(p) + "_C_" + q, 2);
    for (std::size_t a = 0; a < g.nts(); ++a) {
        // involution swaps the state pair
        std::string n = g.nt_names[a];
        auto cut1 = n.find('_');
        auto cut2 = n.rfind('_');
        std::string swapped = n.substr(cut2 + 1) + n.substr(cut1, cut2 - cut1 + 1) +
                              n.substr(0, cut1);
        g.set_involution(a, eg.id.at(swapped));
    }
    std::size_t term_c = g.add_terminal("c", 2);
    std::size_t za = g.add_terminal("z_a", 0);
    std::size_t zb = g.add_terminal("z_b", 0);

    auto rewrite = [&](const std::string& lhs, std::initializer_list<
                                                   std::pair<std::size_t, int>>
                                                   rhs) {
        ConfigVector u;
        for (auto [sym, c] : rhs) u.add(sym, c);
        g.add_rewrite(eg.nt(lhs), u);
    };
    for (const char* d : {"a", "b"})
        for (const char* p : states) {
            std::string diag = std::string(p) + "_" + d + "_" + p;
            rewrite(diag, {{eg.nt(diag), 2}});
        }
    // runs through the a edge connect the two a diagonals
    for (const char* p : states)
        for (const char* q : states)
            if (std::string(p) != q)
                rewrite(std::string(p) + "_a_" + p,
                        {{eg.nt(std::string(q) + "_a_" + std::string(q)), 1}});
    for (const char* d : {"a", "b"}) {
        rewrite(std::string("q1_") + d + "_q1", {{term_c, 1}});
        rewrite(std::string("q1_") + d + "_q1", {{term_c, -1}});
    }
    // deletion pairs for the off-diagonal leaf placeholders
    for (const char* d : {"a", "b"}) {
        std::size_t z = std::string(d) == "a" ? za : zb;
        ConfigVector pos, neg;
        pos.add(z, 1);
        neg.add(z, -1);
        g.add_rewrite(eg.nt(std::string("q0_") + d + "_q1"), pos);
        g.add_rewrite(eg.nt(std::string("q1_") + d + "_q0"), neg);
    }
    // cross productions between the diagonal placeholders
    for (const char* p : states) {
        for (const char* d : {"a", "b"}) {
            std::string leaf = std::string(p) + "_" + d + "_" + p;
            std::string mid = std::string(p) + "_c_" + p;
            g.add_cross(eg.nt(mid), eg.nt(leaf));
            g.add_cross(eg.nt(leaf), eg.nt(mid));
        }
        std::string mid = std::string(p) + "_c_" + p;
        std::string top = std::string(p) + "_C_" + p;
        g.add_cross(eg.nt(top), eg.nt(mid));
        g.add_cross(eg.nt(mid), eg.nt(top));
    }
    return eg;
}

}  // namespace

TEST_CASE("compute_R") {
    KGrammar g;
    g.k = 0;
    auto a = g.add_nt("a", 0);
    g.add_rewrite(a, {});  // a -> 0
    CHECK(compute_R(g) == std::vector<bool>{false});
    ConfigVector self;
    self.add(a, 1);
    g.add_rewrite(a, self);  // a -> a
    CHECK(compute_R(g) == std::vector<bool>{true});

    auto eg = example_grammar();
    auto R = compute_R(eg.g);
    for (std::size_t x = 0; x < eg.g.nts(); ++x) {
        std::string n = eg.g.nt_names[x];
        bool diagonal = n.substr(0, 2) == n.substr(n.size() - 2);
        CHECK(R[x] == diagonal);
    }
}

TEST_CASE("bounded_derive on the example grammar") {
    auto eg = example_grammar();
    auto from_q1a = bounded_derive(eg.g, eg.nt("q1_a_q1"));
    std::size_t c_sym = KGrammar::terminal_sym(eg.g.t_index.at("c"));
    bool plus = false, minus = false;
    for (const auto& u : from_q1a) {
        if (u.coords.size() == 1 && u.get(c_sym) == 1) plus = true;
        if (u.coords.size() == 1 && u.get(c_sym) == -1) minus = true;
    }
    CHECK(plus);
    CHECK(minus);

    // a nonterminal with no productions derives only itself
    KGrammar g;
    g.k = 0;
    auto a = g.add_nt("a", 0);
    auto configs = bounded_derive(g, a);
    REQUIRE(configs.size() == 1);
    CHECK(configs[0].get(a) == 1);

    // bounded L(a) of the zero production
    g.add_rewrite(a, {});
    CHECK(bounded_language(g, a).size() == 1);  // contains the zero vector
}

TEST_CASE("normalize_cross_levels") {
    KGrammar g;
    g.k = 2;
    auto a = g.add_nt("a", 0);
    auto b = g.add_nt("b", 2);
    g.add_cross(a, b);
    g.add_cross(b, a);
    auto norm = normalize_cross_levels(g);
    CHECK(norm.nts() == 3);  // one fresh level-1 intermediate, shared
    for (const auto& cr : norm.crosses)
        CHECK(std::abs(norm.nt_level[cr.from] - norm.nt_level[cr.to]) == 1);
    CHECK(norm.crosses.size() == 4);
    CHECK(norm.synthetic[2]);

    // already normal: unchanged
    auto eg = example_grammar();
    auto same = normalize_cross_levels(eg.g);
    CHECK(same.nts() == eg.g.nts());
    CHECK(same.crosses.size() == eg.g.crosses.size());
}

TEST_CASE("normalization preserves the bounded emptiness pattern") {
    // grammars with a gap-two cross; derivation semantics of the original are
    // reproduced by inserting complete bounded languages directly
    Rng rng(8001);
    for (int it = 0; it < 20; ++it) {
        KGrammar g;
        g.k = 3;
        auto a0 = g.add_nt("a0", 0);
        auto b0 = g.add_nt("b0", 0);
        auto t0 = g.add_terminal("t", 3);
        auto top = g.add_nt("top", 2);
        ConfigVector u;
        if (testutil::rand_int(rng, 0, 1)) u.add(b0, 1);
        if (testutil::rand_int(rng, 0, 1)) u.add(t0, testutil::rand_int(rng, -2, 2));
        g.add_rewrite(a0, u);
        if (testutil::rand_int(rng, 0, 1)) g.add_rewrite(b0, {});
        g.add_cross(top, a0);  // gap two
        if (testutil::rand_int(rng, 0, 1)) g.add_cross(a0, top);

        auto norm = normalize_cross_levels(g);
        // original semantics: L(top) nonempty iff some complete config of
        // L(a0) has no symbols of level <= 1
        bool direct = false;
        for (const auto& cfg : bounded_language(g, a0)) {
            bool clean = true;
            for (const auto& [sym, c] : cfg.coords)
                if (g.symbol_level(sym) <= 1) clean = false;
            if (clean) direct = true;
        }
        bool vianorm = !bounded_language(norm, norm.nt_index.at("top")).empty();
        CHECK(direct == vianorm);
    }
}

TEST_CASE("validate_bidirected on the example grammar") {
    auto eg = example_grammar();
    auto rep = validate_bidirected(eg.g, {8, 8, 20000});
    CHECK(rep.condition[0].status == ConditionReport::Holds);
    CHECK(rep.condition[1].status == ConditionReport::Holds);
    CHECK(rep.condition[2].status == ConditionReport::Holds);
    CHECK(rep.condition[3].status == ConditionReport::Holds);
    CHECK(rep.condition[4].status == ConditionReport::Holds);

    // dropping one reverse production violates (1); pick a deletion pair,
    // whose companion is a distinct production
    KGrammar broken = eg.g;
    for (std::size_t i = 0; i < broken.rewrites.size(); ++i)
        if (broken.rewrites[i].lhs == eg.nt("q0_a_q1")) {
            broken.rewrites.erase(broken.rewrites.begin() + i);
            break;
        }
    auto rep2 = validate_bidirected(broken, {4, 6, 4000});
    CHECK(rep2.condition[0].status == ConditionReport::Violated);
}

TEST_CASE("emptiness circuit on the example grammar") {
    auto eg = example_grammar();
    EmptinessCircuit ec(eg.g);
    // diagonal placeholders have nonempty languages, the off-diagonal ones
    // over the stack letters are empty
    for (const char* d : {"a", "b", "c", "C"}) {
        for (const char* p : {"q0", "q1"})
            CHECK(ec.language_nonempty(eg.nt(std::string(p) + "_" + d + "_" + p)));
        CHECK(!ec.language_nonempty(eg.nt(std::string("q0_") + d + "_q1")));
        CHECK(!ec.language_nonempty(eg.nt(std::string("q1_") + d + "_q0")));
    }
}

TEST_CASE("emptiness agrees with the bounded derivation oracle") {
    auto eg = example_grammar();
    EmptinessCircuit ec(eg.g);
    DeriveCaps caps{8, 8, 30000};
    for (std::size_t a = 0; a < eg.g.nts(); ++a) {
        bool witnessed = !bounded_language(eg.g, a, caps).empty();
        if (witnessed) CHECK(ec.language_nonempty(a));
        if (!ec.language_nonempty(a)) CHECK(!witnessed);
    }
}

TEST_CASE("every bounded language witness is a member of the coset L_a") {
    auto eg = example_grammar();
    EmptinessCircuit ec(eg.g);
    auto R = compute_R(eg.g);
    for (std::size_t a = 0; a < eg.g.nts(); ++a) {
        if (!R[a] || !ec.l_gate(a)) continue;
        const auto& coset = ec.circuit().evaluate_canonical(*ec.l_gate(a));
        for (const auto& cfg : bounded_language(eg.g, a)) {
            IntVec v(eg.g.symbols(), 0);
            for (const auto& [sym, c] : cfg.coords) v[ec.coord(sym)] = c;
            CHECK(canonical_member(coset, v));
        }
    }
}

TEST_CASE("leadsto on the example grammar matches a bounded recomputation") {
    auto eg = example_grammar();
    EmptinessCircuit ec(eg.g);
    const auto& rel = ec.leadsto();
    // level-0 one-step successors, syntactic
    CHECK(rel.step[eg.nt("q0_a_q0")].count(eg.nt("q1_a_q1")));
    CHECK(rel.step[eg.nt("q0_a_q0")].count(eg.nt("q0_c_q0")));
    CHECK(!rel.step[eg.nt("q0_a_q0")].count(eg.nt("q0_b_q0")));
    // level-1: recompute down-steps from bounded languages
    DeriveCaps caps{8, 8, 30000};
    for (const auto& cr : eg.g.crosses) {
        if (eg.g.nt_level[cr.from] != 1 || eg.g.nt_level[cr.to] != 0) continue;
        for (const auto& cfg : bounded_language(eg.g, cr.to, caps))
            for (const auto& [sym, c] : cfg.coords)
                if (!KGrammar::is_terminal(sym) && c == 1)
                    CHECK(rel.step[cr.from].count(sym));
    }
    // closure is reflexive and matches expectations on the diagonals
    CHECK(rel.reach[eg.nt("q0_c_q0")].count(eg.nt("q1_c_q1")));
    CHECK(rel.reach[eg.nt("q0_c_q0")].count(eg.nt("q0_C_q0")));
    CHECK(!rel.reach[eg.nt("q0_c_q0")].count(eg.nt("q0_c_q1")));
}

TEST_CASE("kirchhoff graph on the example grammar") {
    auto eg = example_grammar();
    EmptinessCircuit ec(eg.g);
    for (const char* name : {"q0_a_q0", "q0_c_q0"}) {
        std::size_t a = eg.nt(name);
        auto kg = kirchhoff_graph(eg.g, ec.leadsto(), a, {8, 8, 30000});
        REQUIRE(kg.known);
        CHECK(kg.component.size() == 2);
        CHECK(kirchhoff_verify(eg.g, ec.leadsto(), a, kg));
        CHECK(kirchhoff_permutation_law(eg.g, ec.leadsto(), a, kg));
    }
    // singleton component: trivial graph
    std::size_t b = eg.nt("q0_b_q0");
    auto kg = kirchhoff_graph(eg.g, ec.leadsto(), b);
    REQUIRE(kg.known);
    CHECK(kg.weight.at({b, b}).coords.empty());
}

TEST_CASE("circuit depth stays within the linear bound") {
    auto eg = example_grammar();
    EmptinessCircuit ec(eg.g);
    std::size_t depth = 0;
    for (std::size_t i = 0; i < ec.circuit().size(); ++i)
        depth = std::max(depth, ec.circuit().gate(i).depth);
    CHECK(depth <= 6 * std::max(eg.g.k, 1));
}

TEST_CASE("involution symmetry of emptiness") {
    auto eg = example_grammar();
    EmptinessCircuit ec(eg.g);
    for (std::size_t a = 0; a < eg.g.nts(); ++a)
        CHECK(ec.language_nonempty(a) == ec.language_nonempty(eg.g.involution[a]));
}

TEST_CASE("grammar text format round trip") {
    auto eg = example_grammar();
    std::ostringstream os;
    write_grammar(os, eg.g);
    auto back = parse_grammar(os.str());
    CHECK(back.nts() == eg.g.nts());
    CHECK(back.terminals() == eg.g.terminals());
    CHECK(back.rewrites.size() == eg.g.rewrites.size());
    CHECK(back.crosses.size() == eg.g.crosses.size());
    for (std::size_t a = 0; a < back.nts(); ++a)
        CHECK(back.nt_names[back.involution[a]] ==
              eg.g.nt_names[eg.g.involution[a]]);
    EmptinessCircuit ec(back);
    CHECK(ec.language_nonempty(back.nt_index.at("q0_a_q0")));
    CHECK(!ec.language_nonempty(back.nt_index.at("q0_a_q1")));

    CHECK_THROWS(parse_grammar("nt a 0\n"));          // levels missing
    CHECK_THROWS(parse_grammar("levels 1\nprod a -> b:1\n"));
}
