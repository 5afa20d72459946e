#pragma once

#include <random>
#include <vector>

#include "ecor/graph.hpp"
#include "ecor/structure.hpp"
#include "ecor/term.hpp"

namespace ecor::test {

/// A structure viewed as a fully labeled graph (atoms, complements,
/// identity, complemented identity), pointed anywhere.
inline Graph graph_of_structure(const Structure& m, int source, int target) {
    Graph g(m.sigma(), m.size(), source, target);
    for (size_t a = 0; a < m.sigma().size(); ++a) {
        g.pos(static_cast<int>(a)) = m.base(static_cast<int>(a));
        g.neg(static_cast<int>(a)) = m.base(static_cast<int>(a)).complement();
    }
    g.id() = Relation::identity(m.size());
    g.neg_id() = Relation::identity(m.size()).complement();
    return g;
}

/// Denotation of a graph on a structure: the pairs it maps into.
inline Relation graph_denotation(const Graph& g, const Structure& m) {
    Relation out(m.size());
    Graph target = graph_of_structure(m, 0, 0);
    for (int x = 0; x < m.size(); ++x)
        for (int y = 0; y < m.size(); ++y) {
            target.set_points(x, y);
            if (homomorphism_exists(g, target)) out.set(x, y);
        }
    return out;
}

/// Seeded random term generator; sizes are measured in symbol occurrences.
class TermGen {
public:
    TermGen(uint64_t seed, Alphabet sigma) : rng_(seed), sigma_(std::move(sigma)) {}

    TermPtr star_free(int max_size) { return gen(pick_size(max_size), false); }
    TermPtr any(int max_size) { return gen(pick_size(max_size), true); }

    /// Extended syntax: sprinkles general converses and complemented 0/T.
    TermPtr general(int max_size) {
        TermPtr t = gen(pick_size(std::max(1, max_size - 2)), true);
        t = sprinkle_conv(t);
        if (roll(6) == 0) t = make_conv(t);
        return t;
    }

    /// Intersection-free restricted term.
    TermPtr inter_free(int max_size) {
        for (;;) {
            TermPtr t = gen(pick_size(max_size), true);
            if (!fragment_of(t).has_inter) return t;
        }
    }

private:
    std::mt19937_64 rng_;
    Alphabet sigma_;

    int pick_size(int max_size) { return std::uniform_int_distribution<int>(1, max_size)(rng_); }
    int roll(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    TermPtr leaf(int budget) {
        for (;;) {
            switch (roll(8)) {
                case 0:
                case 1:
                case 2: return make_var(sigma_.name(roll(static_cast<int>(sigma_.size()))));
                case 3:
                    if (budget >= 2) return make_neg_var(sigma_.name(roll(static_cast<int>(sigma_.size()))));
                    break;
                case 4:
                    if (budget >= 2) return make_conv_var(sigma_.name(roll(static_cast<int>(sigma_.size()))));
                    break;
                case 5: return make_id();
                case 6:
                    if (budget >= 2) return make_neg_id();
                    return make_top();
                case 7: return roll(2) ? make_top() : make_bot();
            }
        }
    }

    TermPtr gen(int size, bool allow_star) {
        if (size <= 1) return leaf(size);
        if (size == 2 && roll(2)) return leaf(size);
        // Operators cost one symbol.
        int choice = roll(allow_star ? 4 : 3);
        if (allow_star && choice == 3 && size >= 2) return make_star(gen(size - 1, allow_star));
        int left = 1 + roll(std::max(1, size - 2));
        int right = size - 1 - left;
        if (right < 1) right = 1;
        TermPtr l = gen(left, allow_star);
        TermPtr r = gen(right, allow_star);
        switch (choice % 3) {
            case 0: return make_comp(l, r);
            case 1: return make_union(l, r);
            default: return make_inter(l, r);
        }
    }

    TermPtr sprinkle_conv(const TermPtr& t) {
        if (roll(5) == 0) {
            switch (t->kind) {
                case TermKind::Bot: return roll(2) ? make_neg_bot() : make_conv(t);
                case TermKind::Top: return roll(2) ? make_neg_top() : make_conv(t);
                default: return make_conv(t);
            }
        }
        if (!t->left) return t;
        TermPtr l = sprinkle_conv(t->left);
        TermPtr r = t->right ? sprinkle_conv(t->right) : nullptr;
        switch (t->kind) {
            case TermKind::Comp: return make_comp(l, r);
            case TermKind::Union: return make_union(l, r);
            case TermKind::Inter: return make_inter(l, r);
            case TermKind::Star: return make_star(l);
            case TermKind::Conv: return make_conv(l);
            default: return t;
        }
    }
};

/// Every structure with at most 2 vertices plus a seeded sample of 3-vertex
/// structures.
inline std::vector<Structure> structure_sample(const Alphabet& sigma, int three_vertex_count) {
    std::vector<Structure> out;
    StructureEnumerator en(sigma, 2);
    while (auto m = en.next()) out.push_back(std::move(*m));
    std::mt19937_64 rng(4242);
    for (int i = 0; i < three_vertex_count; ++i) {
        Structure m(sigma, 3);
        for (size_t a = 0; a < sigma.size(); ++a)
            for (int x = 0; x < 3; ++x)
                for (int y = 0; y < 3; ++y)
                    if (rng() & 1u) m.base(static_cast<int>(a)).set(x, y);
        out.push_back(std::move(m));
    }
    return out;
}

/// Runs f on every structure over sigma with at most max_n vertices.
template <typename F>
void for_each_structure(const Alphabet& sigma, int max_n, F&& f) {
    StructureEnumerator en(sigma, max_n);
    while (auto m = en.next()) f(*m);
}

}  // namespace ecor::test
