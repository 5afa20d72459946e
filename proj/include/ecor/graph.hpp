#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ecor/structure.hpp"
#include "ecor/term.hpp"

namespace ecor {

/// Edge label: an atom or the identity constant, possibly complemented.
/// For an alphabet of k atoms the codes are 2*atom (positive), 2*atom+1
/// (complemented), 2k (identity) and 2k+1 (complemented identity).
struct Label {
    int code = 0;

    static Label pos(int atom) { return {2 * atom}; }
    static Label neg(int atom) { return {2 * atom + 1}; }
    static Label id(const Alphabet& sigma) { return {2 * static_cast<int>(sigma.size())}; }
    static Label neg_id(const Alphabet& sigma) { return {2 * static_cast<int>(sigma.size()) + 1}; }
    static int count(const Alphabet& sigma) { return 2 * static_cast<int>(sigma.size()) + 2; }

    bool is_identity_family(const Alphabet& sigma) const { return code >= 2 * static_cast<int>(sigma.size()); }
    bool complemented() const { return code & 1; }
    int atom() const { return code / 2; }
    Label bar() const { return {code ^ 1}; }

    bool operator==(const Label&) const = default;
};

std::string label_name(Label l, const Alphabet& sigma);

/// 2-pointed labeled graph over the atoms, their complements, identity and
/// complemented identity.
class Graph {
public:
    Graph(Alphabet sigma, int n, int source, int target);

    const Alphabet& sigma() const { return sigma_; }
    int size() const { return n_; }
    int source() const { return source_; }
    int target() const { return target_; }
    void set_points(int source, int target);

    Relation& label(Label l) { return labels_[static_cast<size_t>(l.code)]; }
    const Relation& label(Label l) const { return labels_[static_cast<size_t>(l.code)]; }
    Relation& pos(int atom) { return label(Label::pos(atom)); }
    Relation& neg(int atom) { return label(Label::neg(atom)); }
    Relation& id() { return label(Label::id(sigma_)); }
    Relation& neg_id() { return label(Label::neg_id(sigma_)); }
    const Relation& pos(int atom) const { return label(Label::pos(atom)); }
    const Relation& neg(int atom) const { return label(Label::neg(atom)); }
    const Relation& id() const { return label(Label::id(sigma_)); }
    const Relation& neg_id() const { return label(Label::neg_id(sigma_)); }

    int label_count() const { return Label::count(sigma_); }

    /// Exact structural key (vertex-order sensitive).
    std::string encoding() const;
    /// Minimal encoding over all vertex relabelings; requires size() <= 8.
    std::string canonical_encoding() const;

    bool operator==(const Graph&) const = default;

private:
    Alphabet sigma_;
    int n_;
    int source_, target_;
    std::vector<Relation> labels_;
};

/// Single-edge graph for a possibly complemented atom.
Graph edge_graph(const Alphabet& sigma, Label l);

/// Glues g's target to h's source.
Graph series(const Graph& g, const Graph& h);
/// Glues both endpoint pairs.
Graph parallel(const Graph& g, const Graph& h);
/// Swaps source and target.
Graph converse(const Graph& g);

/// Total vertex map preserving points and every labeled edge.
using Homomorphism = std::vector<int>;

/// Complete backtracking search ordered by most-constrained vertex first.
std::optional<Homomorphism> homomorphism_exists(const Graph& from, const Graph& to);

/// Graphs denoted by a term, restricted to at most `budget` vertices. For
/// star-free terms with budget >= 1 + term size this is the whole language.
std::vector<Graph> glang(const TermPtr& t, int budget, const Alphabet& sigma);

/// Letter of the automaton alphabet: an atom with optional complement and
/// converse marks, or the identity / complemented identity.
struct SignedLetter {
    int code = 0;

    static SignedLetter atom(int a, bool neg, bool conv) { return {4 * a + (neg ? 1 : 0) + (conv ? 2 : 0)}; }
    static SignedLetter id(const Alphabet& sigma) { return {4 * static_cast<int>(sigma.size())}; }
    static SignedLetter neg_id(const Alphabet& sigma) { return {4 * static_cast<int>(sigma.size()) + 1}; }
    static int count(const Alphabet& sigma) { return 4 * static_cast<int>(sigma.size()) + 2; }

    bool is_identity_family(const Alphabet& sigma) const { return code >= 4 * static_cast<int>(sigma.size()); }
    bool is_id(const Alphabet& sigma) const { return code == 4 * static_cast<int>(sigma.size()); }
    int atom_index() const { return code / 4; }
    bool complemented(const Alphabet& sigma) const { return !is_identity_family(sigma) ? (code & 1) : (code & 1); }
    bool conversed(const Alphabet& sigma) const { return !is_identity_family(sigma) && (code & 2); }

    /// Converse-swap; fixes the identity family.
    SignedLetter breve(const Alphabet& sigma) const {
        return is_identity_family(sigma) ? *this : SignedLetter{code ^ 2};
    }
    /// Complement-toggle (defined on converse-free letters and the identity family).
    SignedLetter bar(const Alphabet&) const { return {code ^ 1}; }
    /// Underlying graph label, forgetting the converse mark.
    Label graph_label(const Alphabet& sigma) const {
        if (is_identity_family(sigma)) return {2 * static_cast<int>(sigma.size()) + (code & 1)};
        return {2 * atom_index() + (code & 1)};
    }

    bool operator==(const SignedLetter&) const = default;
};

std::string letter_name(SignedLetter x, const Alphabet& sigma);
SignedLetter letter_from_name(const std::string& name, const Alphabet& sigma);

/// Word over the automaton alphabet without the identity letter.
using Word = std::vector<SignedLetter>;

/// Path graph of a word: vertex i-1 to i carries the letter's label, reversed
/// for conversed letters.
Graph graph_of_word(const Word& w, const Alphabet& sigma);

/// Equivalence closure of an arbitrary relation.
Relation equivalence_closure(const Relation& r);

/// Quotient by the equivalence closure of the identity edges. Classes are
/// numbered by least member.
Graph quotient(const Graph& g);

bool is_consistent(const Graph& g);
bool is_edge_saturated(const Graph& g);

/// All edge-saturated edge-extensions of g; empty when g is inconsistent.
/// Feasible only for small graphs: the count grows as 2^(|sigma| k^2) over
/// k-class identity partitions.
std::vector<Graph> saturations(const Graph& g);

/// Quotients of all saturations.
std::vector<Graph> qs(const Graph& g);

/// Reads an edge-saturated graph with identity = diagonal as a structure.
PointedStructure structure_of(const Graph& g);

/// Deduplicates up to isomorphism (point-preserving); requires <= 8 vertices.
std::vector<Graph> dedup_up_to_iso(const std::vector<Graph>& graphs);

std::string to_json(const Graph& g);
Graph graph_from_json(const std::string& text);
std::string to_dot(const Graph& g);

/// Enumerates the partitions of [0,n) as restricted growth strings; calls f
/// with the class index of every vertex (classes numbered by least member).
void for_each_partition(int n, const std::function<void(const std::vector<int>&, int)>& f);

}  // namespace ecor
