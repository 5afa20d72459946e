#include <doctest.h>

#include "ecor/satpath.hpp"
#include "helpers.hpp"

using namespace ecor;

namespace {

const Alphabet kA({"a"});
const Alphabet kAB({"a", "b"});

StateSet states_of(const Nfa& a, std::initializer_list<int> qs) {
    StateSet s(a.states());
    for (int q : qs) s.set(q);
    return s;
}

// Three states 0,1,2 chained by complemented-atom transitions with a final
// self-loop; the hand-compacted machine of -a;-a;(-a)*.
Nfa chain_machine() {
    Nfa a(kA, 3, 0, 2);
    SignedLetter na = SignedLetter::atom(0, true, false);
    a.add_transition(0, na, 1);
    a.add_transition(1, na, 2);
    a.add_transition(2, na, 2);
    a.seal();
    return a;
}

// Four states for -1;(a^;(-a)^)*, with the star loop folded into identity
// edges between states 1 and 3.
Nfa converse_machine() {
    Nfa a(kA, 4, 0, 3);
    a.add_transition(0, SignedLetter::neg_id(kA), 1);
    a.add_transition(1, SignedLetter::atom(0, false, true), 2);
    a.add_transition(2, SignedLetter::atom(0, true, true), 3);
    a.add_transition(1, SignedLetter::id(kA), 3);
    a.add_transition(3, SignedLetter::id(kA), 1);
    a.seal();
    return a;
}

// Four states for a;-1 | -1;-a over two atoms.
Nfa two_branch_machine() {
    Nfa a(kAB, 4, 0, 3);
    a.add_transition(0, SignedLetter::atom(0, false, false), 1);
    a.add_transition(1, SignedLetter::neg_id(kAB), 3);
    a.add_transition(0, SignedLetter::neg_id(kAB), 2);
    a.add_transition(2, SignedLetter::atom(0, true, false), 3);
    a.seal();
    return a;
}

SaturablePath chain_path(const Nfa& a) {
    Word w{SignedLetter::atom(0, true, false)};
    Graph g = graph_of_word(w, kA);
    g.id() = Relation::identity(2);
    g.neg_id() = Relation::identity(2).complement();
    return SaturablePath{w, g, {states_of(a, {0}), states_of(a, {1})}};
}

}  // namespace

TEST_CASE("con: transition compatibility") {
    Nfa a = chain_machine();
    SignedLetter pos = SignedLetter::atom(0, false, false);
    SignedLetter neg = SignedLetter::atom(0, true, false);

    // No positive transitions at all, so the forward and backward inclusions
    // are vacuous.
    CHECK(con(a, pos, states_of(a, {0}), states_of(a, {0})));
    CHECK(con(a, pos, StateSet(a.states()), StateSet(a.states())));

    // The complemented letter steps 0 to 1.
    CHECK(con(a, neg, states_of(a, {0}), states_of(a, {1})));
    CHECK_FALSE(con(a, neg, states_of(a, {0}), StateSet(a.states())));

    Nfa b = two_branch_machine();
    CHECK(con(b, SignedLetter::atom(0, false, false), states_of(b, {0, 3}), states_of(b, {1, 2})));
}

TEST_CASE("is_saturable_path on the worked one-letter example") {
    Nfa a = chain_machine();
    SaturablePath p = chain_path(a);
    CHECK(is_saturable_path(p, a));

    // Letting the final state creep into the last set breaks the exit condition.
    SaturablePath bad = p;
    bad.u[1] = states_of(a, {1, 2});
    CHECK_FALSE(is_saturable_path(bad, a));
}

TEST_CASE("is_saturable_path with converse letters and a nontrivial identity") {
    Nfa a = converse_machine();
    Word w{SignedLetter::atom(0, false, false), SignedLetter::atom(0, true, false)};
    Graph g = graph_of_word(w, kA);
    Relation id = Relation::identity(3);
    id.set(0, 2);
    id.set(2, 0);
    g.id() = id;
    g.neg_id() = id.complement();
    SaturablePath p{w, g, {states_of(a, {0, 2}), states_of(a, {1, 3}), states_of(a, {0, 2})}};
    CHECK(is_saturable_path(p, a));

    // The reconstruction fills in exactly the displayed saturation.
    Graph h = saturate_from_path(p, a);
    Relation expect_pos(3), expect_neg(3);
    expect_pos.set(0, 0);
    expect_pos.set(2, 2);
    expect_pos.set(0, 1);
    expect_pos.set(2, 1);
    expect_pos.set(0, 2);
    expect_pos.set(2, 0);
    expect_neg.set(1, 1);
    expect_neg.set(1, 0);
    expect_neg.set(1, 2);
    CHECK(h.pos(0) == expect_pos);
    CHECK(h.neg(0) == expect_neg);
    CHECK(is_edge_saturated(h));
}

TEST_CASE("saturate_from_path reproduces the two-vertex saturation") {
    Nfa a = chain_machine();
    SaturablePath p = chain_path(a);
    Graph h = saturate_from_path(p, a);
    CHECK(h.pos(0).test(0, 0));
    CHECK(h.pos(0).test(1, 0));
    CHECK(h.pos(0).test(1, 1));
    CHECK(h.neg(0).test(0, 1));
    CHECK(h.neg(0).count() == 1);
    CHECK(is_edge_saturated(h));

    // Nothing to add on a fully saturated degenerate path.
    Alphabet empty_sigma(std::vector<std::string>{});
    Nfa triv(empty_sigma, 2, 0, 1);
    triv.seal();
    Graph pt = graph_of_word({}, empty_sigma);
    pt.id() = Relation::identity(1);
    pt.neg_id() = Relation(1);
    SaturablePath q{{}, pt, {states_of(triv, {0})}};
    CHECK(saturate_from_path(q, triv) == pt);

    CHECK_THROWS_AS(saturate_from_path(SaturablePath{p.word, p.g, {p.u[1], p.u[0]}}, a),
                    std::invalid_argument);
}

TEST_CASE("phi: pointwise saturation formula") {
    Nfa a = chain_machine();
    CHECK(phi(a, {}, StateSet(a.states())));

    // The proof witness makes phi hold for each set of a saturable path.
    Nfa b = converse_machine();
    std::vector<StateSet> us{states_of(b, {0, 2}), states_of(b, {1, 3})};
    std::set<std::array<int, 4>> witness;
    for (const StateSet& u : us)
        for (const auto& t : nu(b, u)) witness.insert(t);
    for (const StateSet& u : us) CHECK(phi(b, witness, u));

    // An empty tuple set cannot absorb the mixed tuples of a mixed set.
    CHECK_FALSE(phi(a, {}, states_of(a, {0})));
}

TEST_CASE("pairwise saturation equals the pointwise form through the witness") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        // Random automaton with up to 3 states over one atom.
        int n = 1 + static_cast<int>(rng() % 3);
        Nfa a(kA, n, 0, n - 1);
        for (int code = 0; code < SignedLetter::count(kA); ++code)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (rng() % 4 == 0) a.add_transition(i, SignedLetter{code}, j);
        a.seal();
        // Random family of up to 3 state sets.
        std::vector<StateSet> family;
        int count = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < count; ++i) {
            StateSet u(n);
            for (int q = 0; q < n; ++q)
                if (rng() & 1u) u.set(q);
            family.push_back(u);
        }
        std::set<std::array<int, 4>> witness;
        for (const StateSet& u : family)
            for (const auto& t : nu(a, u)) witness.insert(t);
        bool pointwise = true;
        for (const StateSet& u : family) pointwise = pointwise && phi(a, witness, u);
        CHECK(pairwise_sat(a, family) == pointwise);
    }
}

TEST_CASE("as_accepts: acceptance by the saturation automaton") {
    Nfa a = chain_machine();
    auto res = as_accepts(a, {SignedLetter::atom(0, true, false)});
    REQUIRE(res);
    CHECK((*res)[0] == states_of(a, {0}));
    CHECK((*res)[1] == states_of(a, {1}));

    // The two-edge union machine rejects the empty word here.
    Nfa u = thompson(parse("a|-a"), kA);
    CHECK_FALSE(as_accepts(u, {}).has_value());

    // Both-branch machine accepts a b -a despite the inequation being valid.
    Nfa b = two_branch_machine();
    Word aba{SignedLetter::atom(0, false, false), SignedLetter::atom(1, false, false),
             SignedLetter::atom(0, true, false)};
    auto r = as_accepts(b, aba);
    REQUIRE(r);
    // The accepting sequence alternates between the two mixed sets.
    CHECK((*r)[0] == (*r)[2]);
    CHECK((*r)[1] == (*r)[3]);
}

TEST_CASE("saturable_paths enumerates every witness for a word") {
    Nfa a = chain_machine();
    auto paths = saturable_paths(a, {SignedLetter::atom(0, true, false)}, false);
    CHECK(!paths.empty());
    // All witnesses saturate to the same two-vertex graph.
    std::set<std::string> shapes;
    for (const SaturablePath& p : paths) shapes.insert(saturate_from_path(p, a).canonical_encoding());
    CHECK(shapes.size() == 1);

    // No saturable path exists for a b -a against the two-branch machine.
    Nfa b = two_branch_machine();
    Word aba{SignedLetter::atom(0, false, false), SignedLetter::atom(1, false, false),
             SignedLetter::atom(0, true, false)};
    CHECK(saturable_paths(b, aba, true).empty());
}

TEST_CASE("fragment_emptiness refutes and confirms inclusions") {
    // -a against -a;-a;(-a)*: the witness is the single complemented letter.
    Nfa a1 = thompson(parse("-a"), kA);
    Nfa a2 = thompson(parse("-a;-a;(-a)*"), kA);
    auto w = fragment_emptiness(a1, a2);
    REQUIRE(w);
    CHECK(w->word.size() == 1);
    CHECK(w->word[0] == SignedLetter::atom(0, true, false));
    PointedStructure m = structure_of(quotient(saturate_from_path(*w, a2)));
    CHECK(m.m.size() == 2);
    // The refuting structure satisfies the word but not the automaton.
    CHECK(holds(m, parse("-a")));
    CHECK_FALSE(eval_nfa(m.m, a2, a2.states() * m.m.size() * m.m.size()).test(m.source, m.target));

    // Equal terms have no witness.
    CHECK_FALSE(fragment_emptiness(thompson(parse("a"), kA), thompson(parse("a"), kA)).has_value());

    // T;a;T;b;T = T;b;T;a;T, both directions.
    TermPtr l = replace_top(parse("T;a;T;b;T"), "a");
    TermPtr r = replace_top(parse("T;b;T;a;T"), "a");
    Nfa nl = thompson(l, kAB);
    Nfa nr = thompson(r, kAB);
    CHECK_FALSE(fragment_emptiness(nl, nr).has_value());
    CHECK_FALSE(fragment_emptiness(nr, nl).has_value());

    // Preconditions: both sides violating the two fragments is rejected.
    Nfa bad1 = thompson(parse("-a"), kA);
    Nfa bad2 = thompson(parse("-1"), kA);
    CHECK_THROWS_AS(fragment_emptiness(bad1, bad2), std::invalid_argument);
}

TEST_CASE("full_exka_search") {
    // a b -a <= -1;-a | a;-1 admits no saturable path at any length.
    Nfa a1 = thompson(parse("a;b;-a"), kAB);
    Nfa a2 = thompson(parse("(a;-1)|(-1;-a)"), kAB);
    SearchResult r = full_exka_search(a1, a2, 6);
    CHECK(r.status == SearchStatus::Valid);  // the language is a single word
    CHECK_FALSE(r.witness.has_value());

    // a <= -1 | a;a holds; small caps stay silent.
    SearchResult r2 = full_exka_search(thompson(parse("a"), kA), thompson(parse("-1|(a;a)"), kA), 4);
    CHECK(r2.status == SearchStatus::Valid);
    CHECK_FALSE(r2.witness.has_value());

    // a <= b is refuted by the one-letter word.
    SearchResult r3 = full_exka_search(thompson(parse("a"), kAB), thompson(parse("b"), kAB), 4);
    REQUIRE(r3.status == SearchStatus::Refuted);
    REQUIRE(r3.witness);
    CHECK(r3.witness->word.size() == 1);
    CHECK(r3.witness->word[0] == SignedLetter::atom(0, false, false));
}

TEST_CASE("witness round-trip: the reconstructed structure refutes the query") {
    // For every witness produced, the quotient of its saturation satisfies
    // the word and avoids the right automaton.
    struct Case {
        const char* lhs;
        const char* rhs;
        const Alphabet* sigma;
    };
    const Case cases[] = {
        {"-a", "-a;-a;(-a)*", &kA},
        {"a", "b", &kAB},
        {"a;a", "a", &kA},
        {"-1", "a", &kA},
    };
    for (const Case& c : cases) {
        Nfa a1 = thompson(parse(c.lhs), *c.sigma);
        Nfa a2 = thompson(parse(c.rhs), *c.sigma);
        std::optional<SaturablePath> w;
        if (!nfa_has_neg_id(a2) || !nfa_has_neg_atom(a1)) {
            w = fragment_emptiness(a1, a2);
        } else {
            SearchResult r = full_exka_search(a1, a2, 8);
            if (r.status == SearchStatus::Refuted) w = r.witness;
        }
        REQUIRE(w);
        // Completeness: the pointwise acceptance test also succeeds.
        CHECK(as_accepts(a2, w->word).has_value());
        Graph h = saturate_from_path(*w, a2);
        PointedStructure m = structure_of(quotient(h));
        CHECK(word_relation(m.m, w->word).test(m.source, m.target));
        int enough = a2.states() * m.m.size() * m.m.size();
        CHECK_FALSE(eval_nfa(m.m, a2, enough).test(m.source, m.target));
        // The distinct state sets stay within the exponential bound.
        std::set<StateSet> distinct(w->u.begin(), w->u.end());
        CHECK(distinct.size() <= (1u << a2.states()));
    }
}

TEST_CASE("witness JSON shape") {
    Nfa a1 = thompson(parse("-a"), kA);
    Nfa a2 = thompson(parse("-a;-a;(-a)*"), kA);
    auto w = fragment_emptiness(a1, a2);
    REQUIRE(w);
    std::string j = witness_json(*w, a2);
    CHECK(j.find("\"word\":[\"!a\"]") != std::string::npos);
    CHECK(j.find("\"I_partition\"") != std::string::npos);
    CHECK(j.find("\"structure\"") != std::string::npos);
    CHECK(j.find("\"U\"") != std::string::npos);
}
