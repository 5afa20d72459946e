#include "ecor/nfa.hpp"

#include <bit>
#include <stdexcept>

namespace ecor {

bool StateSet::empty() const {
    for (uint64_t w : words_)
        if (w) return false;
    return true;
}

int StateSet::count() const {
    int c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
}

bool StateSet::subset_of(const StateSet& o) const {
    for (size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

StateSet& StateSet::operator|=(const StateSet& o) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

StateSet& StateSet::operator&=(const StateSet& o) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

StateSet StateSet::operator|(const StateSet& o) const {
    StateSet r = *this;
    r |= o;
    return r;
}

StateSet StateSet::operator&(const StateSet& o) const {
    StateSet r = *this;
    r &= o;
    return r;
}

StateSet StateSet::complement() const {
    StateSet r(n_);
    for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
    if (n_ & 63) r.words_.back() &= (1ull << (n_ & 63)) - 1;
    return r;
}

std::vector<int> StateSet::elements() const {
    std::vector<int> out;
    for (size_t w = 0; w < words_.size(); ++w) {
        uint64_t bits = words_[w];
        while (bits) {
            out.push_back(static_cast<int>(w) * 64 + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return out;
}

Nfa::Nfa(Alphabet sigma, int states, int initial, int final)
    : sigma_(std::move(sigma)), states_(states), initial_(initial), final_(final) {
    if (states < 1) throw std::invalid_argument("nfa: at least one state required");
    if (initial < 0 || initial >= states || final < 0 || final >= states)
        throw std::invalid_argument("nfa: initial/final out of range");
    trans_.assign(static_cast<size_t>(SignedLetter::count(sigma_)), {});
}

void Nfa::add_transition(int from, SignedLetter x, int to) {
    if (sealed_) throw std::logic_error("nfa: sealed");
    if (from < 0 || from >= states_ || to < 0 || to >= states_)
        throw std::invalid_argument("nfa: transition out of range");
    trans_[static_cast<size_t>(x.code)].emplace_back(from, to);
}

void Nfa::seal() {
    if (sealed_) return;
    // Memoize per-state epsilon closures by a fixpoint over identity edges.
    std::vector<std::vector<int>> eps(static_cast<size_t>(states_));
    for (auto [from, to] : trans_[static_cast<size_t>(SignedLetter::id(sigma_).code)])
        eps[static_cast<size_t>(from)].push_back(to);
    closures_.assign(static_cast<size_t>(states_), StateSet(states_));
    for (int s = 0; s < states_; ++s) {
        StateSet& cl = closures_[static_cast<size_t>(s)];
        std::vector<int> stack{s};
        cl.set(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : eps[static_cast<size_t>(v)])
                if (!cl.test(u)) {
                    cl.set(u);
                    stack.push_back(u);
                }
        }
    }
    sealed_ = true;
}

StateSet eps_closure(const Nfa& a, const StateSet& s) {
    if (!a.sealed()) throw std::logic_error("eps_closure: automaton not sealed");
    StateSet out(a.states());
    for (int v : s.elements()) out |= a.closure_of(v);
    return out;
}

StateSet delta(const Nfa& a, const StateSet& s, SignedLetter x) {
    if (x.is_id(a.sigma())) throw std::invalid_argument("delta: identity letter excluded");
    StateSet pre = eps_closure(a, s);
    StateSet step(a.states());
    for (auto [from, to] : a.transitions(x))
        if (pre.test(from)) step.set(to);
    return eps_closure(a, step);
}

bool accepts(const Nfa& a, const Word& w) {
    StateSet s(a.states());
    s.set(a.initial());
    s = eps_closure(a, s);
    for (SignedLetter x : w) {
        if (x.is_id(a.sigma())) return false;  // words exclude the identity letter
        StateSet step(a.states());
        for (auto [from, to] : a.transitions(x))
            if (s.test(from)) step.set(to);
        s = eps_closure(a, step);
        if (s.empty()) return false;
    }
    return s.test(a.final());
}

// ---------------------------------------------------------------------------
// Thompson construction
// ---------------------------------------------------------------------------

namespace {

struct Builder {
    const Alphabet& sigma;
    int states = 0;
    std::vector<std::tuple<int, SignedLetter, int>> edges;

    int fresh() { return states++; }
    void edge(int a, SignedLetter x, int b) { edges.emplace_back(a, x, b); }
    void eps(int a, int b) { edge(a, SignedLetter::id(sigma), b); }

    // Returns (initial, final) of the sub-automaton.
    std::pair<int, int> build(const TermPtr& t) {
        switch (t->kind) {
            case TermKind::Var:
            case TermKind::NegVar:
            case TermKind::ConvVar:
            case TermKind::ConvNegVar: {
                auto idx = sigma.index(t->atom);
                if (!idx) throw std::invalid_argument("thompson: unknown atom '" + t->atom + "'");
                bool neg = t->kind == TermKind::NegVar || t->kind == TermKind::ConvNegVar;
                bool conv = t->kind == TermKind::ConvVar || t->kind == TermKind::ConvNegVar;
                int s = fresh(), f = fresh();
                edge(s, SignedLetter::atom(*idx, neg, conv), f);
                return {s, f};
            }
            case TermKind::Id: {
                int s = fresh(), f = fresh();
                eps(s, f);
                return {s, f};
            }
            case TermKind::NegId: {
                int s = fresh(), f = fresh();
                edge(s, SignedLetter::neg_id(sigma), f);
                return {s, f};
            }
            case TermKind::Bot: {
                int s = fresh(), f = fresh();
                return {s, f};
            }
            case TermKind::Top: {
                // T denotes the same relation as (a | -a) for any atom a.
                if (sigma.empty()) throw std::invalid_argument("thompson: T requires a nonempty alphabet");
                int s = fresh(), f = fresh();
                int s1 = fresh(), f1 = fresh(), s2 = fresh(), f2 = fresh();
                edge(s1, SignedLetter::atom(0, false, false), f1);
                edge(s2, SignedLetter::atom(0, true, false), f2);
                eps(s, s1);
                eps(s, s2);
                eps(f1, f);
                eps(f2, f);
                return {s, f};
            }
            case TermKind::Union: {
                int s = fresh(), f = fresh();
                auto [ls, lf] = build(t->left);
                auto [rs, rf] = build(t->right);
                eps(s, ls);
                eps(s, rs);
                eps(lf, f);
                eps(rf, f);
                return {s, f};
            }
            case TermKind::Comp: {
                auto [ls, lf] = build(t->left);
                auto [rs, rf] = build(t->right);
                eps(lf, rs);
                return {ls, rf};
            }
            case TermKind::Star: {
                int s = fresh(), f = fresh();
                auto [is, io] = build(t->left);
                eps(s, is);
                eps(io, f);
                eps(io, is);
                eps(s, f);
                return {s, f};
            }
            case TermKind::Inter:
                throw std::invalid_argument("thompson: intersection is not supported");
            default:
                throw std::invalid_argument("thompson: term not in restricted syntax");
        }
    }
};

}  // namespace

Nfa thompson(const TermPtr& t, const Alphabet& sigma) {
    Builder b{sigma};
    auto [s, f] = b.build(t);
    Nfa a(sigma, b.states, s, f);
    for (auto& [from, x, to] : b.edges) a.add_transition(from, x, to);
    a.seal();
    return a;
}

// ---------------------------------------------------------------------------
// Relational semantics
// ---------------------------------------------------------------------------

Relation letter_relation(const Structure& m, SignedLetter x) {
    const Alphabet& sigma = m.sigma();
    if (x.is_identity_family(sigma)) {
        Relation id = Relation::identity(m.size());
        return x.is_id(sigma) ? id : id.complement();
    }
    Relation r = m.base(x.atom_index());
    if (x.code & 1) r = r.complement();
    if (x.code & 2) r = r.converse();
    return r;
}

Relation word_relation(const Structure& m, const Word& w) {
    Relation r = Relation::identity(m.size());
    for (SignedLetter x : w) r = r.compose(letter_relation(m, x));
    return r;
}

Relation eval_nfa(const Structure& m, const Nfa& a, int max_len) {
    // reach[q] holds the union of word denotations over all epsilon-padded
    // paths from the initial state to q seen so far; monotone, so the loop is
    // a fixpoint iteration cut off at max_len letters.
    std::vector<Relation> reach(static_cast<size_t>(a.states()), Relation(m.size()));
    StateSet start(a.states());
    start.set(a.initial());
    for (int q : eps_closure(a, start).elements())
        reach[static_cast<size_t>(q)] = Relation::identity(m.size());
    Relation result(m.size());
    if (reach[static_cast<size_t>(a.final())].count() > 0) result |= reach[static_cast<size_t>(a.final())];

    std::vector<SignedLetter> letters;
    for (int code = 0; code < SignedLetter::count(a.sigma()); ++code) {
        SignedLetter x{code};
        if (!x.is_id(a.sigma()) && a.has_letter(x)) letters.push_back(x);
    }
    std::vector<Relation> letter_rel;
    letter_rel.reserve(letters.size());
    for (SignedLetter x : letters) letter_rel.push_back(letter_relation(m, x));

    for (int step = 0; step < max_len; ++step) {
        bool changed = false;
        std::vector<Relation> next = reach;
        for (size_t li = 0; li < letters.size(); ++li) {
            for (auto [from, to] : a.transitions(letters[li])) {
                Relation moved = reach[static_cast<size_t>(from)].compose(letter_rel[li]);
                for (int q : a.closure_of(to).elements()) {
                    Relation merged = next[static_cast<size_t>(q)] | moved;
                    if (!(merged == next[static_cast<size_t>(q)])) {
                        next[static_cast<size_t>(q)] = std::move(merged);
                        changed = true;
                    }
                }
            }
        }
        reach = std::move(next);
        result |= reach[static_cast<size_t>(a.final())];
        if (!changed) break;
    }
    return result;
}

std::string word_to_string(const Word& w, const Alphabet& sigma) {
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += letter_name(w[i], sigma);
    }
    return out;
}

std::string to_dot(const Nfa& a) {
    std::string out = "digraph A {\n  rankdir=LR;\n  __in [shape=none,label=\"\"];\n  __out [shape=none,label=\"\"];\n";
    for (int q = 0; q < a.states(); ++q) out += "  q" + std::to_string(q) + " [shape=circle];\n";
    out += "  __in -> q" + std::to_string(a.initial()) + ";\n";
    out += "  q" + std::to_string(a.final()) + " -> __out;\n";
    for (int code = 0; code < SignedLetter::count(a.sigma()); ++code) {
        SignedLetter x{code};
        for (auto [from, to] : a.transitions(x))
            out += "  q" + std::to_string(from) + " -> q" + std::to_string(to) + " [label=\"" +
                   letter_name(x, a.sigma()) + "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace ecor
