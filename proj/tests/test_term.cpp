#include <doctest.h>

#include "ecor/structure.hpp"
#include "ecor/term.hpp"
#include "helpers.hpp"

using namespace ecor;

TEST_CASE("parse: single productions and precedence") {
    TermPtr t = parse("-a");
    CHECK(t->kind == TermKind::NegVar);
    CHECK(t->atom == "a");

    t = parse("a;(b|-a)*");
    REQUIRE(t->kind == TermKind::Comp);
    CHECK(t->left->kind == TermKind::Var);
    REQUIRE(t->right->kind == TermKind::Star);
    REQUIRE(t->right->left->kind == TermKind::Union);
    CHECK(t->right->left->left->kind == TermKind::Var);
    CHECK(t->right->left->left->atom == "b");
    CHECK(t->right->left->right->kind == TermKind::NegVar);

    t = parse("(a;b)^", TermSyntax::Extended);
    REQUIRE(t->kind == TermKind::Conv);
    CHECK(t->left->kind == TermKind::Comp);

    // `;` binds tighter than `&` binds tighter than `|`.
    t = parse("a;b|c&d");
    REQUIRE(t->kind == TermKind::Union);
    CHECK(t->left->kind == TermKind::Comp);
    CHECK(t->right->kind == TermKind::Inter);

    // Left associativity.
    t = parse("a;b;c");
    REQUIRE(t->kind == TermKind::Comp);
    CHECK(t->left->kind == TermKind::Comp);

    // Postfix binds tighter than prefix.
    CHECK_THROWS_AS(parse("-a*"), ParseError);
    CHECK(parse("(-a)*")->kind == TermKind::Star);
    CHECK(parse("a^*")->kind == TermKind::Star);
}

TEST_CASE("parse: strictness and errors") {
    CHECK_THROWS_AS(parse("(a;b)^"), ParseError);        // general converse needs extended mode
    CHECK_THROWS_AS(parse("-0"), ParseError);            // complemented bottom needs extended mode
    CHECK(parse("-0", TermSyntax::Extended)->kind == TermKind::NegBot);
    CHECK(parse("-T", TermSyntax::Extended)->kind == TermKind::NegTop);
    CHECK_THROWS_AS(parse("a;"), ParseError);
    CHECK_THROWS_AS(parse("a b"), ParseError);
    try {
        parse("a;;b");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.pos == 2);
    }

    Alphabet sigma({"a", "b"});
    CHECK_THROWS_AS(parse("c", TermSyntax::Strict, &sigma), ParseError);
    CHECK(parse("a;b", TermSyntax::Strict, &sigma)->kind == TermKind::Comp);
}

TEST_CASE("parse: -a^ means -(a^) and is rejected in both modes as a complement target") {
    // Postfix before prefix: the operand of '-' is a^, which complement may
    // not apply to; parenthesized (-a)^ is the converse of a complemented atom.
    CHECK_THROWS_AS(parse("-a^"), ParseError);
    CHECK_THROWS_AS(parse("-a^", TermSyntax::Extended), ParseError);
    CHECK(parse("(-a)^")->kind == TermKind::ConvNegVar);
}

TEST_CASE("render and parse round-trip on random terms") {
    test::TermGen gen(20240601, Alphabet({"a", "b"}));
    for (int i = 0; i < 400; ++i) {
        TermPtr t = gen.any(9);
        TermPtr back = parse(render(t));
        CHECK(equal(t, back));
    }
}

TEST_CASE("converse normal form: rewrite examples") {
    TermPtr t = parse("(a;b)^", TermSyntax::Extended);
    CHECK(equal(converse_normal_form(t), make_comp(make_conv_var("b"), make_conv_var("a"))));

    t = parse("a^^", TermSyntax::Extended);
    CHECK(equal(converse_normal_form(t), make_var("a")));

    t = make_conv(make_star(make_union(make_var("a"), make_neg_var("b"))));
    CHECK(equal(converse_normal_form(t),
                make_star(make_union(make_conv_var("a"), make_conv_neg_var("b")))));

    CHECK(equal(converse_normal_form(make_neg_bot()), make_top()));
    CHECK(equal(converse_normal_form(make_neg_top()), make_bot()));
}

TEST_CASE("converse normal form: identity on restricted terms, size stays linear") {
    test::TermGen gen(7, Alphabet({"a", "b"}));
    for (int i = 0; i < 200; ++i) {
        TermPtr t = gen.any(8);
        REQUIRE(is_strict(t));
        CHECK(equal(converse_normal_form(t), t));
    }
    TermPtr nested = parse("(((a;b)^|(b&-1))^)*", TermSyntax::Extended);
    TermPtr nf = converse_normal_form(nested);
    CHECK(is_strict(nf));
    CHECK(term_size(nf) <= 2 * term_size(nested));
}

TEST_CASE("converse normal form preserves the denotation") {
    // All extended-syntax terms of small size, then random larger ones,
    // against every structure with at most 2 vertices and a seeded sample of
    // 3-vertex structures.
    Alphabet sigma({"a", "b"});
    test::TermGen gen(99, sigma);
    std::vector<TermPtr> terms;
    for (int i = 0; i < 250; ++i) terms.push_back(gen.general(8));
    std::vector<Structure> structures = test::structure_sample(sigma, 40);
    for (const TermPtr& t : terms) {
        TermPtr nf = converse_normal_form(t);
        for (const Structure& m : structures) CHECK(eval(m, t) == eval(m, nf));
    }
}

TEST_CASE("term size counts symbol occurrences") {
    CHECK(term_size(make_var("a")) == 1);
    CHECK(term_size(parse("a;b*")) == 4);
    CHECK(term_size(make_neg_var("a")) == 2);
    CHECK(term_size(make_conv_neg_var("a")) == 3);
    // Equation size is the sum of the sides.
    TermPtr s = parse("a|b");
    TermPtr t = parse("-1");
    CHECK(term_size(s) + term_size(t) == 5);
}

TEST_CASE("fragment flags are exactly the operator occurrences") {
    Fragment f = fragment_of(parse("a;-1"));
    CHECK(f.has_negid);
    CHECK_FALSE(f.has_star);
    CHECK_FALSE(f.has_inter);
    CHECK_FALSE(f.has_negvar);
    CHECK_FALSE(f.has_conv);
    CHECK_FALSE(f.has_top);

    f = fragment_of(parse("(-a)*"));
    CHECK(f.has_star);
    CHECK(f.has_negvar);
    CHECK_FALSE(f.has_negid);

    f = fragment_of(parse("a&T"));
    CHECK(f.has_inter);
    CHECK(f.has_top);

    f = fragment_of(parse("a^"));
    CHECK(f.has_conv);
}

TEST_CASE("bar dual maps each leaf to its complement partner") {
    CHECK(equal(bar_dual(make_var("a")), make_neg_var("a")));
    CHECK(equal(bar_dual(make_neg_id()), make_id()));
    CHECK(equal(bar_dual(make_bot()), make_top()));
    for (const TermPtr& leaf : {make_var("a"), make_neg_var("a"), make_id(), make_neg_id(),
                                make_bot(), make_top()})
        CHECK(equal(bar_dual(bar_dual(leaf)), leaf));
    CHECK_THROWS_AS(bar_dual(parse("a;b")), std::invalid_argument);
}

TEST_CASE("replace_top substitutes the union of an atom and its complement") {
    CHECK(equal(replace_top(make_top(), "a"), parse("a|-a")));
    CHECK(equal(replace_top(make_var("b"), "a"), make_var("b")));
    CHECK(equal(replace_top(parse("T;T"), "a"), parse("(a|-a);(a|-a)")));
    CHECK_THROWS_AS(replace_top(make_top(), ""), std::invalid_argument);

    // The substitution preserves the denotation.
    Alphabet sigma({"a", "b"});
    TermPtr t = parse("T;(b|T)&T");
    TermPtr r = replace_top(t, "a");
    test::for_each_structure(sigma, 2, [&](const Structure& m) { CHECK(eval(m, t) == eval(m, r)); });
}

TEST_CASE("alphabet inference and explicit alphabets") {
    TermPtr t = parse("a;(c|b)");
    CHECK(atoms_of(t) == std::vector<std::string>{"a", "b", "c"});
    Alphabet sigma = infer_alphabet({t, parse("d")});
    CHECK(sigma.size() == 4);
    CHECK(sigma.index("d").has_value());
    CHECK_FALSE(sigma.index("e").has_value());
    CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
}
