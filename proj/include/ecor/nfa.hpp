#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecor/graph.hpp"
#include "ecor/structure.hpp"
#include "ecor/term.hpp"

namespace ecor {

/// Dynamically sized bitset for automaton state sets.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(int n) : n_(n), words_(static_cast<size_t>((n + 63) / 64), 0) {}

    int universe() const { return n_; }
    bool test(int i) const { return (words_[static_cast<size_t>(i >> 6)] >> (i & 63)) & 1u; }
    void set(int i) { words_[static_cast<size_t>(i >> 6)] |= 1ull << (i & 63); }
    void reset(int i) { words_[static_cast<size_t>(i >> 6)] &= ~(1ull << (i & 63)); }
    bool empty() const;
    int count() const;
    bool subset_of(const StateSet& o) const;
    StateSet& operator|=(const StateSet& o);
    StateSet& operator&=(const StateSet& o);
    StateSet operator|(const StateSet& o) const;
    StateSet operator&(const StateSet& o) const;
    StateSet complement() const;
    bool operator==(const StateSet&) const = default;
    bool operator<(const StateSet& o) const { return words_ < o.words_; }
    std::vector<int> elements() const;

private:
    int n_ = 0;
    std::vector<uint64_t> words_;
};

/// NFA over the signed-converse alphabet; identity-labeled transitions act as
/// epsilon. Immutable once built: per-state epsilon closures are memoized by
/// seal().
class Nfa {
public:
    Nfa(Alphabet sigma, int states, int initial, int final);

    const Alphabet& sigma() const { return sigma_; }
    int states() const { return states_; }
    int initial() const { return initial_; }
    int final() const { return final_; }

    void add_transition(int from, SignedLetter x, int to);
    const std::vector<std::pair<int, int>>& transitions(SignedLetter x) const {
        return trans_[static_cast<size_t>(x.code)];
    }
    bool has_letter(SignedLetter x) const { return !trans_[static_cast<size_t>(x.code)].empty(); }

    /// Finalizes the automaton and memoizes epsilon closures.
    void seal();
    bool sealed() const { return sealed_; }

    const StateSet& closure_of(int state) const { return closures_[static_cast<size_t>(state)]; }

private:
    Alphabet sigma_;
    int states_;
    int initial_, final_;
    std::vector<std::vector<std::pair<int, int>>> trans_;  // per letter code
    std::vector<StateSet> closures_;
    bool sealed_ = false;
};

/// Thompson construction for intersection-free terms in the restricted
/// syntax; T expands to the first atom joined with its complement.
Nfa thompson(const TermPtr& t, const Alphabet& sigma);

/// Epsilon closure of a state set.
StateSet eps_closure(const Nfa& a, const StateSet& s);

/// One-letter transition with epsilon closure on both sides.
StateSet delta(const Nfa& a, const StateSet& s, SignedLetter x);

bool accepts(const Nfa& a, const Word& w);

/// Union of the word denotations over accepted words of length <= max_len;
/// stops early once the per-state reachability relations stabilize, at which
/// point the result is the full denotation of the automaton.
Relation eval_nfa(const Structure& m, const Nfa& a, int max_len);

/// Denotation of a single letter on a structure.
Relation letter_relation(const Structure& m, SignedLetter x);

/// Denotation of a word on a structure.
Relation word_relation(const Structure& m, const Word& w);

std::string to_dot(const Nfa& a);
std::string word_to_string(const Word& w, const Alphabet& sigma);

}  // namespace ecor
