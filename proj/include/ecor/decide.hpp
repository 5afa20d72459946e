#pragma once

#include <optional>
#include <string>

#include "ecor/graph.hpp"
#include "ecor/satpath.hpp"
#include "ecor/structure.hpp"
#include "ecor/term.hpp"

namespace ecor {

enum class VerdictKind { Valid, Refuted, Unknown };

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::optional<Refutation> refutation;  // violating pointed structure and direction
    std::optional<Word> word_witness;      // set by the automaton-based engines
    int bound = 0;                         // resource bound reached for Unknown

    static Verdict valid() { return {VerdictKind::Valid, std::nullopt, std::nullopt, 0}; }
    static Verdict refuted(Refutation r, std::optional<Word> w = std::nullopt) {
        return {VerdictKind::Refuted, std::move(r), std::move(w), 0};
    }
    static Verdict unknown(int bound) { return {VerdictKind::Unknown, std::nullopt, std::nullopt, bound}; }
};

struct QueryOptions {
    int glang_budget = 0;   // 0: derive from the term size
    int len_cap = 0;        // 0: engine default
    int semi_budget = 8;    // vertex budget of the refutation semi-procedure
};

struct Query {
    TermPtr lhs;
    TermPtr rhs;
    QueryRelation rel = QueryRelation::LessEqual;
    QueryOptions options;
};

/// Exhaustive decision for star-free queries: every saturation of every
/// graph of the left language is quotiented and model-checked. Sound
/// pruning skips saturation families whose quotients provably satisfy the
/// right side; the verdict and the produced counterexample (first in
/// candidate order) match the unpruned enumeration. Never Unknown.
Verdict decide_starfree(const Query& q);

/// Independent second procedure for star-free queries, deciding the
/// homomorphism characterization directly: a counterexample is a quotiented
/// saturation admitting no homomorphism from any right-language graph.
Verdict graph_characterization_check(const Query& q);

/// Intersection-free queries via the Thompson automata: exact through the
/// product search when a side fits one of the two sound fragments, otherwise
/// the exhaustive word search with a length cap (may report Unknown).
Verdict decide_intersection_free(const Query& q);

/// Refutation semi-procedure for the full syntax: enumerates quotiented
/// saturations of left-language graphs with growing vertex budget. Never
/// claims Valid.
Verdict semidecide_ecorstar(const Query& q);

/// Fragment dispatch: star-free -> decide_starfree, intersection-free ->
/// decide_intersection_free, otherwise semidecide_ecorstar. Every refuted
/// payload is re-verified before being returned.
Verdict decide(const Query& q);

std::string verdict_json(const Verdict& v);

}  // namespace ecor
