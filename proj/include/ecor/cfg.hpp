#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ecor/decide.hpp"
#include "ecor/structure.hpp"
#include "ecor/term.hpp"

namespace ecor {

struct CfgRule {
    std::string head;
    std::vector<std::string> body;  // empty body is the empty word
};

/// Context-free grammar over disjoint terminal and nonterminal symbol sets.
class Cfg {
public:
    Cfg(std::vector<std::string> terminals, std::vector<std::string> nonterminals,
        std::vector<CfgRule> rules, std::string start);

    const std::vector<std::string>& terminals() const { return terminals_; }
    const std::vector<std::string>& nonterminals() const { return nonterminals_; }
    const std::vector<CfgRule>& rules() const { return rules_; }
    const std::string& start() const { return start_; }
    bool is_terminal(const std::string& s) const;
    bool is_nonterminal(const std::string& s) const;

    /// Deterministic mapping of grammar symbols to well-formed term atom
    /// names (identity when the symbol already fits the atom grammar).
    const std::string& atom_for(const std::string& symbol) const;
    /// Alphabet of all symbol atoms, terminals first.
    const Alphabet& symbol_alphabet() const { return symbol_alphabet_; }

private:
    std::vector<std::string> terminals_;
    std::vector<std::string> nonterminals_;
    std::vector<CfgRule> rules_;
    std::string start_;
    std::vector<std::pair<std::string, std::string>> atom_map_;
    Alphabet symbol_alphabet_;
};

using CfgWord = std::vector<std::string>;  // sequence of terminals

/// One rule per line, `X -> alpha` with whitespace-separated symbols and
/// `eps` for the empty word; symbols starting with an uppercase letter are
/// nonterminals. The first rule's head is the start symbol unless a
/// `start: X` header is present.
Cfg parse_grammar(const std::string& text);

/// The derivability model of the grammar on a word: vertices are the word
/// positions, terminal relations are the letter steps, and nonterminal
/// relations are the least fixpoint closing every rule over intermediate
/// positions. Pointed at (0, |w|).
PointedStructure canonical_model(const Cfg& c, const CfgWord& w);

/// Derivability via the canonical model.
bool derives(const Cfg& c, const std::string& nonterminal, const CfgWord& w);

/// Independent derivability oracle: textbook CYK over the grammar brought to
/// Chomsky normal form. Kept apart from the canonical-model route.
bool cyk_derives(const Cfg& c, const CfgWord& w);

/// One inequation body <= head per rule, as terms over the symbol atoms.
std::vector<std::pair<TermPtr, TermPtr>> build_gamma(const Cfg& c);

/// Folds hypotheses u = 0 into the conclusion: lhs <= rhs | T;u1;T | ...
Query hoare_encode(const std::vector<TermPtr>& hypotheses, TermPtr lhs, TermPtr rhs);

/// The universality reduction: the grammar derives every terminal word iff
/// the returned inequation is valid. T is expanded over the first terminal.
Query reduce_universality(const Cfg& c);

/// The canonical model of w as a refutation candidate for the reduced
/// inequation, with the expected outcome: it violates the inequation exactly
/// when the grammar does not derive w.
std::pair<PointedStructure, bool> counterexample_from_word(const Cfg& c, const CfgWord& w);

}  // namespace ecor
