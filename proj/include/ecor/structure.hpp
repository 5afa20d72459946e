#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ecor/term.hpp"

namespace ecor {

/// Hard cap on vertex counts; relations are stored as one 64-bit row per
/// vertex.
inline constexpr int kMaxVertices = 64;

/// Binary relation on [0,n) as a boolean matrix of bit rows.
class Relation {
public:
    explicit Relation(int n);
    static Relation identity(int n);
    static Relation full(int n);

    int size() const { return n_; }
    bool test(int i, int j) const { return (rows_[static_cast<size_t>(i)] >> j) & 1u; }
    void set(int i, int j, bool v = true);
    uint64_t row(int i) const { return rows_[static_cast<size_t>(i)]; }
    void set_row(int i, uint64_t bits) { rows_[static_cast<size_t>(i)] = bits & mask_; }

    Relation& operator|=(const Relation& o);
    Relation& operator&=(const Relation& o);
    Relation operator|(const Relation& o) const;
    Relation operator&(const Relation& o) const;
    Relation complement() const;
    Relation converse() const;
    Relation compose(const Relation& o) const;
    /// Reflexive-transitive closure by iterated squaring.
    Relation star() const;
    /// Minimal equivalence relation containing this one.
    Relation equivalence_closure() const;

    bool subset_of(const Relation& o) const;
    bool empty() const;
    int count() const;
    std::vector<std::pair<int, int>> pairs() const;

    bool operator==(const Relation&) const = default;

private:
    int n_;
    uint64_t mask_;
    std::vector<uint64_t> rows_;
};

/// Finite relational model: base relations for the alphabet's atoms.
/// Identity, its complement and atom complements are derived, never stored.
class Structure {
public:
    Structure(Alphabet sigma, int n);

    const Alphabet& sigma() const { return sigma_; }
    int size() const { return n_; }
    Relation& base(int atom) { return base_[static_cast<size_t>(atom)]; }
    const Relation& base(int atom) const { return base_[static_cast<size_t>(atom)]; }
    const Relation& base(std::string_view name) const;

    bool operator==(const Structure&) const = default;

private:
    Alphabet sigma_;
    int n_;
    std::vector<Relation> base_;
};

struct PointedStructure {
    Structure m;
    int source = 0;
    int target = 0;
};

/// Denotation of a term; accepts the extended syntax as well.
Relation eval(const Structure& m, const TermPtr& t);

bool holds(const PointedStructure& p, const TermPtr& t);
bool models_equation(const Structure& m, const TermPtr& lhs, const TermPtr& rhs);

/// Streams every structure with 1..max_n vertices over sigma exactly once:
/// by vertex count, then lexicographically over the concatenated relation
/// bitstrings (atom-major, row-major).
class StructureEnumerator {
public:
    StructureEnumerator(Alphabet sigma, int max_n);
    /// Returns the next structure, or nullopt when exhausted.
    std::optional<Structure> next();

private:
    Alphabet sigma_;
    int max_n_;
    int n_ = 0;
    std::vector<bool> bits_;
    bool fresh_level_ = true;
};

enum class Direction { LeftToRight, RightToLeft };
inline const char* direction_str(Direction d) { return d == Direction::LeftToRight ? "<=" : ">="; }

struct Refutation {
    PointedStructure where;
    Direction dir;
};

enum class QueryRelation { Equal, LessEqual };

/// Exhaustive search for a pointed structure violating lhs = rhs (or just
/// lhs <= rhs) over the inferred alphabet, scanning the enumeration order of
/// StructureEnumerator and returning the first hit. Independent of every
/// decision procedure in this library; used as their ground-truth oracle.
/// Scans in parallel when workers > 1 (capped by ECOR_THREADS), with the
/// result independent of the worker count.
std::optional<Refutation> brute_force_refute(const TermPtr& lhs, const TermPtr& rhs, int max_n,
                                             QueryRelation rel = QueryRelation::Equal);

std::string to_json(const PointedStructure& p, bool include_points = true);
PointedStructure pointed_structure_from_json(const std::string& text);

/// Worker count for parallel scans: hardware concurrency capped by the
/// ECOR_THREADS environment variable.
int worker_count();

}  // namespace ecor
