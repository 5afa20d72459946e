#pragma once

#include <array>
#include <optional>
#include <set>
#include <vector>

#include "ecor/graph.hpp"
#include "ecor/nfa.hpp"

namespace ecor {

/// A saturable path: the path graph of a word extended with an equivalence
/// identity relation (and complement), plus one automaton state set per
/// position.
struct SaturablePath {
    Word word;
    Graph g;                  // identity-saturation of graph_of_word(word)
    std::vector<StateSet> u;  // one per vertex of g
};

/// Transition-compatibility of two state sets under a letter: stepping
/// forward stays inside u2 and stepping backward (by the converse-swapped
/// letter) stays inside u.
bool con(const Nfa& a, SignedLetter x, const StateSet& u, const StateSet& u2);

bool is_saturable_path(const SaturablePath& p, const Nfa& a);

/// Extends p.g to a full edge saturation whose every edge is
/// transition-compatible with the state-set assignment. Identity-induced
/// additions are exhausted first; remaining pairs are labeled in row-major
/// order, preferring the positive label.
Graph saturate_from_path(const SaturablePath& p, const Nfa& a);

/// Pointwise form of the pairwise saturation condition: checks that every
/// mixed 4-tuple of u lies in uset and that every tuple of uset admits a
/// compatible label choice toward u.
bool phi(const Nfa& a, const std::set<std::array<int, 4>>& uset, const StateSet& u);

/// Mixed-tuple set of a state set (members x non-members x members x
/// non-members).
std::set<std::array<int, 4>> nu(const Nfa& a, const StateSet& u);

/// Pairwise saturation condition over a family of state sets (all ordered
/// pairs including self-pairs, all atoms and the identity).
bool pairwise_sat(const Nfa& a, const std::vector<StateSet>& family);

/// Searches for a state-set sequence certifying w against the automaton:
/// entry containing the initial state, per-letter transition compatibility,
/// epsilon-closed throughout, final state excluded at the end, and the
/// pairwise saturation condition over all sets of the sequence. Present iff
/// the word is accepted by the saturation automaton of a.
std::optional<std::vector<StateSet>> as_accepts(const Nfa& a, const Word& w);

/// All saturable paths for the word against the automaton, grouped by
/// identity partition; state sets are constant on identity classes.
/// With `first_only`, stops after one witness.
std::vector<SaturablePath> saturable_paths(const Nfa& a, const Word& w, bool first_only);

enum class SearchStatus { Refuted, Valid, Unknown };

struct SearchResult {
    SearchStatus status;
    std::optional<SaturablePath> witness;
    int len_cap = 0;
};

/// Decides [a1] <= [a2] over relational semantics for the two automaton
/// fragments (a2 free of the complemented identity, or a1 free of
/// complemented atoms) via a product reachability search; exact.
std::optional<SaturablePath> fragment_emptiness(const Nfa& a1, const Nfa& a2);

bool nfa_has_neg_id(const Nfa& a);
bool nfa_has_neg_atom(const Nfa& a);

/// Exhaustive word-by-word search over [a1] for a saturable path against a2,
/// up to words of length < len_cap. Valid is reported only when the whole
/// language was covered (frontier exhausted or len_cap meets the
/// completeness bound states(a1) * 2^states(a2)).
SearchResult full_exka_search(const Nfa& a1, const Nfa& a2, int len_cap);

/// Identity classes of the path graph, each sorted, ordered by least member.
std::vector<std::vector<int>> identity_partition(const Graph& g);

std::string witness_json(const SaturablePath& p, const Nfa& a);

}  // namespace ecor
