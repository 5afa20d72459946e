#include <doctest.h>

#include <set>

#include "ecor/nfa.hpp"
#include "helpers.hpp"

using namespace ecor;

namespace {

const Alphabet kA({"a"});
const Alphabet kAB({"a", "b"});

// Direct recursive matcher on terms viewed as regular expressions over the
// signed alphabet; the oracle for automaton languages.
std::set<size_t> match_from(const TermPtr& t, const Word& w, size_t i, const Alphabet& sigma) {
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::NegVar:
        case TermKind::ConvVar:
        case TermKind::ConvNegVar: {
            bool neg = t->kind == TermKind::NegVar || t->kind == TermKind::ConvNegVar;
            bool conv = t->kind == TermKind::ConvVar || t->kind == TermKind::ConvNegVar;
            SignedLetter x = SignedLetter::atom(*sigma.index(t->atom), neg, conv);
            if (i < w.size() && w[i] == x) return {i + 1};
            return {};
        }
        case TermKind::NegId:
            if (i < w.size() && w[i] == SignedLetter::neg_id(sigma)) return {i + 1};
            return {};
        case TermKind::Id: return {i};
        case TermKind::Bot: return {};
        case TermKind::Top: {
            std::set<size_t> out;
            for (SignedLetter x : {SignedLetter::atom(0, false, false), SignedLetter::atom(0, true, false)})
                if (i < w.size() && w[i] == x) out.insert(i + 1);
            return out;
        }
        case TermKind::Comp: {
            std::set<size_t> out;
            for (size_t mid : match_from(t->left, w, i, sigma))
                for (size_t end : match_from(t->right, w, mid, sigma)) out.insert(end);
            return out;
        }
        case TermKind::Union: {
            std::set<size_t> out = match_from(t->left, w, i, sigma);
            for (size_t end : match_from(t->right, w, i, sigma)) out.insert(end);
            return out;
        }
        case TermKind::Star: {
            std::set<size_t> out{i};
            for (bool grew = true; grew;) {
                grew = false;
                for (size_t p : std::set<size_t>(out))
                    for (size_t end : match_from(t->left, w, p, sigma))
                        if (out.insert(end).second) grew = true;
            }
            return out;
        }
        default: throw std::invalid_argument("matcher: unsupported term");
    }
}

bool word_matches(const TermPtr& t, const Word& w, const Alphabet& sigma) {
    return match_from(t, w, 0, sigma).count(w.size()) > 0;
}

void all_words(const std::vector<SignedLetter>& letters, size_t max_len,
               const std::function<void(const Word&)>& f) {
    Word w;
    auto rec = [&](auto&& self) -> void {
        f(w);
        if (w.size() == max_len) return;
        for (SignedLetter x : letters) {
            w.push_back(x);
            self(self);
            w.pop_back();
        }
    };
    rec(rec);
}

std::vector<SignedLetter> signed_letters(const Alphabet& sigma, bool with_conv) {
    std::vector<SignedLetter> out;
    for (size_t a = 0; a < sigma.size(); ++a) {
        out.push_back(SignedLetter::atom(static_cast<int>(a), false, false));
        out.push_back(SignedLetter::atom(static_cast<int>(a), true, false));
        if (with_conv) {
            out.push_back(SignedLetter::atom(static_cast<int>(a), false, true));
            out.push_back(SignedLetter::atom(static_cast<int>(a), true, true));
        }
    }
    out.push_back(SignedLetter::neg_id(sigma));
    return out;
}

}  // namespace

TEST_CASE("thompson: leaf shapes") {
    Nfa a = thompson(parse("a"), kA);
    CHECK(a.states() == 2);
    CHECK(a.transitions(SignedLetter::atom(0, false, false)).size() == 1);

    Nfa bot = thompson(make_bot(), kA);
    CHECK(bot.states() == 2);
    for (int code = 0; code < SignedLetter::count(kA); ++code)
        CHECK(bot.transitions(SignedLetter{code}).empty());

    CHECK_THROWS_AS(thompson(parse("a&a"), kA), std::invalid_argument);
}

TEST_CASE("thompson of repeated complemented atoms accepts exactly its regular language") {
    TermPtr t = parse("-a;-a;(-a)*");
    Nfa a = thompson(t, kA);
    SignedLetter na = SignedLetter::atom(0, true, false);
    CHECK(accepts(a, {na, na, na}));
    CHECK(accepts(a, {na, na}));
    CHECK_FALSE(accepts(a, {na}));
    CHECK_FALSE(accepts(a, {}));
    // Language equivalence on all signed words of length <= 6.
    all_words(signed_letters(kA, true), 6, [&](const Word& w) {
        CHECK(accepts(a, w) == word_matches(t, w, kA));
    });
}

TEST_CASE("epsilon closures") {
    Nfa a = thompson(parse("a*"), kA);
    // The loop-back edge keeps the inner block reachable from its own exit.
    int from = a.transitions(SignedLetter::atom(0, false, false))[0].first;
    int to = a.transitions(SignedLetter::atom(0, false, false))[0].second;
    CHECK(a.closure_of(to).test(from));

    StateSet s(a.states());
    s.set(a.initial());
    StateSet c = eps_closure(a, s);
    CHECK(eps_closure(a, c) == c);  // idempotent
    StateSet empty(a.states());
    CHECK(eps_closure(a, empty).empty());
}

TEST_CASE("accepts excludes the identity letter and handles the empty word") {
    Nfa a = thompson(parse("1"), kA);
    CHECK(accepts(a, {}));
    CHECK_FALSE(accepts(a, {SignedLetter::atom(0, false, false)}));
    CHECK_FALSE(accepts(a, {SignedLetter::id(kA)}));
    Nfa b = thompson(parse("a"), kA);
    CHECK_FALSE(accepts(b, {SignedLetter::id(kA)}));
}

TEST_CASE("breve is a converse-swap fixing the identity family") {
    SignedLetter a = SignedLetter::atom(0, false, false);
    CHECK(a.breve(kA) == SignedLetter::atom(0, false, true));
    CHECK(SignedLetter::neg_id(kA).breve(kA) == SignedLetter::neg_id(kA));
    CHECK(SignedLetter::id(kA).breve(kA) == SignedLetter::id(kA));
    for (SignedLetter x : signed_letters(kAB, true)) CHECK(x.breve(kAB).breve(kAB) == x);
}

TEST_CASE("eval_nfa on small structures") {
    Structure m(kA, 2);
    m.base(0).set(0, 1);

    Relation r = eval_nfa(m, thompson(parse("a"), kA), 8);
    CHECK(r.count() == 1);
    CHECK(r.test(0, 1));

    CHECK(eval_nfa(m, thompson(parse("a|-a"), kA), 8) == Relation::full(2));

    CHECK(eval_nfa(m, thompson(parse("a*"), kA), 16) == m.base(0).star());
}

TEST_CASE("thompson agreement with term semantics") {
    test::TermGen gen(1234, kAB);
    std::vector<Structure> structures = test::structure_sample(kAB, 8);
    for (int i = 0; i < 40; ++i) {
        TermPtr t = gen.inter_free(6);
        Nfa a = thompson(t, kAB);
        for (const Structure& m : structures) {
            int enough = a.states() * m.size() * m.size();
            CHECK(eval(m, t) == eval_nfa(m, a, enough));
        }
    }
}

TEST_CASE("letterwise transition composition matches the closure-padded definition") {
    // A fixed 4-state automaton with a mix of letters and epsilon edges.
    Nfa a(kA, 4, 0, 3);
    a.add_transition(0, SignedLetter::atom(0, false, false), 1);
    a.add_transition(1, SignedLetter::id(kA), 2);
    a.add_transition(2, SignedLetter::atom(0, true, true), 3);
    a.add_transition(3, SignedLetter::neg_id(kA), 0);
    a.add_transition(0, SignedLetter::id(kA), 3);
    a.seal();
    all_words(signed_letters(kA, true), 5, [&](const Word& w) {
        // Letterwise contraction.
        StateSet s(a.states());
        s.set(a.initial());
        s = eps_closure(a, s);
        for (SignedLetter x : w) s = delta(a, s, x);
        CHECK(s.test(a.final()) == accepts(a, w));
    });
}

TEST_CASE("thompson language equals the term language on random terms") {
    test::TermGen gen(98, kA);
    for (int i = 0; i < 25; ++i) {
        TermPtr t = gen.inter_free(5);
        Nfa a = thompson(t, kA);
        all_words(signed_letters(kA, true), 4, [&](const Word& w) {
            CHECK(accepts(a, w) == word_matches(replace_top(t, "a"), w, kA));
        });
    }
}

TEST_CASE("nfa dot export") {
    Nfa a = thompson(parse("a|-1"), kA);
    std::string dot = to_dot(a);
    CHECK(dot.find("label=\"a\"") != std::string::npos);
    CHECK(dot.find("label=\"!1\"") != std::string::npos);
}
