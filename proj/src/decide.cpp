#include "ecor/decide.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include <json.hpp>

#include "ecor/nfa.hpp"

namespace ecor {

namespace {

// ---------------------------------------------------------------------------
// Three-valued evaluation on a partially labeled quotient structure
// ---------------------------------------------------------------------------

// Candidate quotient under construction: per atom, the pairs already fixed
// positive (ones) or complemented (zeros); undetermined pairs are in neither.
struct PartialStructure {
    const Alphabet* sigma = nullptr;
    int k = 0;
    int src = 0, tgt = 0;
    std::vector<Relation> ones, zeros;
};

struct Bounds {
    Relation lo, hi;
};

// lo under-approximates and hi over-approximates the denotation of t on
// every completion of ps; exact once all pairs are fixed.
Bounds eval_bounds(const PartialStructure& ps, const TermPtr& t) {
    const int k = ps.k;
    switch (t->kind) {
        case TermKind::Var: {
            int a = *ps.sigma->index(t->atom);
            return {ps.ones[static_cast<size_t>(a)], ps.zeros[static_cast<size_t>(a)].complement()};
        }
        case TermKind::NegVar: {
            int a = *ps.sigma->index(t->atom);
            return {ps.zeros[static_cast<size_t>(a)], ps.ones[static_cast<size_t>(a)].complement()};
        }
        case TermKind::ConvVar: {
            int a = *ps.sigma->index(t->atom);
            return {ps.ones[static_cast<size_t>(a)].converse(),
                    ps.zeros[static_cast<size_t>(a)].complement().converse()};
        }
        case TermKind::ConvNegVar: {
            int a = *ps.sigma->index(t->atom);
            return {ps.zeros[static_cast<size_t>(a)].converse(),
                    ps.ones[static_cast<size_t>(a)].complement().converse()};
        }
        case TermKind::Id: return {Relation::identity(k), Relation::identity(k)};
        case TermKind::NegId:
            return {Relation::identity(k).complement(), Relation::identity(k).complement()};
        case TermKind::Bot:
        case TermKind::NegTop: return {Relation(k), Relation(k)};
        case TermKind::Top:
        case TermKind::NegBot: return {Relation::full(k), Relation::full(k)};
        case TermKind::Comp: {
            Bounds l = eval_bounds(ps, t->left), r = eval_bounds(ps, t->right);
            return {l.lo.compose(r.lo), l.hi.compose(r.hi)};
        }
        case TermKind::Union: {
            Bounds l = eval_bounds(ps, t->left), r = eval_bounds(ps, t->right);
            return {l.lo | r.lo, l.hi | r.hi};
        }
        case TermKind::Inter: {
            Bounds l = eval_bounds(ps, t->left), r = eval_bounds(ps, t->right);
            return {l.lo & r.lo, l.hi & r.hi};
        }
        case TermKind::Star: {
            Bounds s = eval_bounds(ps, t->left);
            return {s.lo.star(), s.hi.star()};
        }
        case TermKind::Conv: {
            Bounds s = eval_bounds(ps, t->left);
            return {s.lo.converse(), s.hi.converse()};
        }
    }
    throw std::logic_error("eval_bounds: unreachable");
}

// ---------------------------------------------------------------------------
// Counterexample search over quotiented saturations of one base graph
// ---------------------------------------------------------------------------

enum class Classify { Descend, Skip, AllViolate };

using Classifier = std::function<Classify(const PartialStructure&)>;

Structure complete_structure(const PartialStructure& ps) {
    Structure m(*ps.sigma, ps.k);
    for (size_t a = 0; a < ps.sigma->size(); ++a) m.base(static_cast<int>(a)) = ps.ones[a];
    return m;
}

// Every quotiented saturation of h0 is a structure on its identity classes
// whose per-atom labels are constant on class pairs; the search walks those
// sign choices, pruned by the classifier. The first counterexample in
// candidate order (partitions as restricted growth strings, then free signs
// atom-major and row-major, complemented label first) is returned.
std::optional<PointedStructure> saturation_counterexample(const Graph& h0, const Classifier& classify) {
    const Alphabet& sigma = h0.sigma();
    const int atoms = static_cast<int>(sigma.size());
    std::optional<PointedStructure> found;

    for_each_partition(h0.size(), [&](const std::vector<int>& cls, int k) {
        if (found) return;
        for (auto [i, j] : h0.id().pairs())
            if (cls[static_cast<size_t>(i)] != cls[static_cast<size_t>(j)]) return;
        for (auto [i, j] : h0.neg_id().pairs())
            if (cls[static_cast<size_t>(i)] == cls[static_cast<size_t>(j)]) return;

        PartialStructure ps;
        ps.sigma = &sigma;
        ps.k = k;
        ps.src = cls[static_cast<size_t>(h0.source())];
        ps.tgt = cls[static_cast<size_t>(h0.target())];
        ps.ones.assign(static_cast<size_t>(atoms), Relation(k));
        ps.zeros.assign(static_cast<size_t>(atoms), Relation(k));
        for (int a = 0; a < atoms; ++a) {
            for (auto [i, j] : h0.pos(a).pairs())
                ps.ones[static_cast<size_t>(a)].set(cls[static_cast<size_t>(i)], cls[static_cast<size_t>(j)]);
            for (auto [i, j] : h0.neg(a).pairs())
                ps.zeros[static_cast<size_t>(a)].set(cls[static_cast<size_t>(i)], cls[static_cast<size_t>(j)]);
            if (!(ps.ones[static_cast<size_t>(a)] & ps.zeros[static_cast<size_t>(a)]).empty()) return;
        }

        std::vector<std::pair<int, std::pair<int, int>>> free_bits;
        for (int a = 0; a < atoms; ++a)
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    if (!ps.ones[static_cast<size_t>(a)].test(i, j) &&
                        !ps.zeros[static_cast<size_t>(a)].test(i, j))
                        free_bits.push_back({a, {i, j}});

        auto dfs = [&](auto&& self, size_t bit) -> bool {
            switch (classify(ps)) {
                case Classify::Skip: return false;
                case Classify::AllViolate: {
                    // Lexicographically least completion: remaining pairs
                    // take the complemented label.
                    PartialStructure done = ps;
                    for (size_t b = bit; b < free_bits.size(); ++b)
                        done.zeros[static_cast<size_t>(free_bits[b].first)].set(free_bits[b].second.first,
                                                                               free_bits[b].second.second);
                    found = PointedStructure{complete_structure(done), done.src, done.tgt};
                    return true;
                }
                case Classify::Descend: break;
            }
            if (bit == free_bits.size())
                throw std::logic_error("saturation_counterexample: classifier undecided on a leaf");
            auto [a, pair] = free_bits[bit];
            ps.zeros[static_cast<size_t>(a)].set(pair.first, pair.second);
            if (self(self, bit + 1)) return true;
            ps.zeros[static_cast<size_t>(a)].set(pair.first, pair.second, false);
            ps.ones[static_cast<size_t>(a)].set(pair.first, pair.second);
            if (self(self, bit + 1)) return true;
            ps.ones[static_cast<size_t>(a)].set(pair.first, pair.second, false);
            return false;
        };
        dfs(dfs, 0);
    });
    return found;
}

Classifier eval_classifier(const TermPtr& rhs) {
    return [rhs](const PartialStructure& ps) {
        Bounds b = eval_bounds(ps, rhs);
        if (b.lo.test(ps.src, ps.tgt)) return Classify::Skip;
        if (!b.hi.test(ps.src, ps.tgt)) return Classify::AllViolate;
        return Classify::Descend;
    };
}

Graph bound_graph(const PartialStructure& ps, bool upper) {
    Graph g(*ps.sigma, ps.k, ps.src, ps.tgt);
    for (size_t a = 0; a < ps.sigma->size(); ++a) {
        g.pos(static_cast<int>(a)) = upper ? ps.zeros[a].complement() : ps.ones[a];
        g.neg(static_cast<int>(a)) = upper ? ps.ones[a].complement() : ps.zeros[a];
    }
    g.id() = Relation::identity(ps.k);
    g.neg_id() = Relation::identity(ps.k).complement();
    return g;
}

Classifier hom_classifier(std::vector<Graph> rhs_graphs) {
    return [rhs_graphs = std::move(rhs_graphs)](const PartialStructure& ps) {
        Graph lower = bound_graph(ps, false);
        for (const Graph& h : rhs_graphs)
            if (homomorphism_exists(h, lower)) return Classify::Skip;
        Graph upper = bound_graph(ps, true);
        for (const Graph& h : rhs_graphs)
            if (homomorphism_exists(h, upper)) return Classify::Descend;
        return Classify::AllViolate;
    };
}

// ---------------------------------------------------------------------------
// Procedures
// ---------------------------------------------------------------------------

void verify_refutation(const Refutation& r, const TermPtr& lhs, const TermPtr& rhs) {
    const TermPtr& from = r.dir == Direction::LeftToRight ? lhs : rhs;
    const TermPtr& to = r.dir == Direction::LeftToRight ? rhs : lhs;
    if (!holds(r.where, from) || holds(r.where, to))
        throw std::logic_error("refutation failed independent re-checking");
}

std::vector<std::pair<TermPtr, TermPtr>> directions(const Query& q) {
    std::vector<std::pair<TermPtr, TermPtr>> out{{q.lhs, q.rhs}};
    if (q.rel == QueryRelation::Equal) out.push_back({q.rhs, q.lhs});
    return out;
}

Direction nth_direction(size_t i) { return i == 0 ? Direction::LeftToRight : Direction::RightToLeft; }

Verdict starfree_engine(const Query& q, bool hom_route) {
    if (fragment_of(q.lhs).has_star || fragment_of(q.rhs).has_star)
        throw std::invalid_argument("star-free procedure applied to a starred term");
    Alphabet sigma = infer_alphabet({q.lhs, q.rhs});
    auto dirs = directions(q);
    for (size_t d = 0; d < dirs.size(); ++d) {
        const auto& [from, to] = dirs[d];
        int budget = q.options.glang_budget > 0 ? q.options.glang_budget : 1 + term_size(from);
        Classifier classify = hom_route ? hom_classifier(glang(to, 1 + term_size(to), sigma))
                                        : eval_classifier(to);
        for (const Graph& h0 : glang(from, budget, sigma)) {
            if (auto cx = saturation_counterexample(h0, classify)) {
                Refutation r{std::move(*cx), nth_direction(d)};
                verify_refutation(r, q.lhs, q.rhs);
                return Verdict::refuted(std::move(r));
            }
        }
    }
    return Verdict::valid();
}

}  // namespace

Verdict decide_starfree(const Query& q) { return starfree_engine(q, false); }

Verdict graph_characterization_check(const Query& q) { return starfree_engine(q, true); }

Verdict semidecide_ecorstar(const Query& q) {
    Alphabet sigma = infer_alphabet({q.lhs, q.rhs});
    const int max_budget = std::max(1, q.options.semi_budget);
    auto dirs = directions(q);
    for (size_t d = 0; d < dirs.size(); ++d) {
        const auto& [from, to] = dirs[d];
        Classifier classify = eval_classifier(to);
        std::set<std::string> processed;
        for (int budget = 1; budget <= max_budget; ++budget) {
            for (const Graph& h0 : glang(from, budget, sigma)) {
                if (!processed.insert(h0.encoding()).second) continue;
                if (auto cx = saturation_counterexample(h0, classify)) {
                    Refutation r{std::move(*cx), nth_direction(d)};
                    verify_refutation(r, q.lhs, q.rhs);
                    return Verdict::refuted(std::move(r));
                }
            }
        }
    }
    return Verdict::unknown(max_budget);
}

Verdict decide_intersection_free(const Query& q) {
    if (fragment_of(q.lhs).has_inter || fragment_of(q.rhs).has_inter)
        throw std::invalid_argument("intersection-free procedure applied to a term with intersection");
    Alphabet sigma = infer_alphabet({q.lhs, q.rhs});
    if (sigma.empty() && (fragment_of(q.lhs).has_top || fragment_of(q.rhs).has_top))
        sigma = Alphabet({"a"});

    auto dirs = directions(q);
    bool any_unknown = false;
    int unknown_bound = 0;
    for (size_t d = 0; d < dirs.size(); ++d) {
        const auto& [from, to] = dirs[d];
        Nfa a1 = thompson(from, sigma);
        Nfa a2 = thompson(to, sigma);
        std::optional<SaturablePath> witness;
        if (!nfa_has_neg_id(a2) || !nfa_has_neg_atom(a1)) {
            witness = fragment_emptiness(a1, a2);
            if (!witness) continue;  // this inclusion is valid
        } else {
            double bound = static_cast<double>(a1.states()) * std::pow(2.0, static_cast<double>(a2.states()));
            int cap = q.options.len_cap > 0 ? q.options.len_cap : 20;
            if (bound < static_cast<double>(cap)) cap = static_cast<int>(bound);
            SearchResult res = full_exka_search(a1, a2, cap);
            if (res.status == SearchStatus::Valid) continue;
            if (res.status == SearchStatus::Unknown) {
                any_unknown = true;
                unknown_bound = std::max(unknown_bound, res.len_cap);
                continue;
            }
            witness = std::move(res.witness);
        }
        PointedStructure m = structure_of(quotient(saturate_from_path(*witness, a2)));
        Refutation r{std::move(m), nth_direction(d)};
        verify_refutation(r, q.lhs, q.rhs);
        return Verdict::refuted(std::move(r), witness->word);
    }
    if (any_unknown) return Verdict::unknown(unknown_bound);
    return Verdict::valid();
}

Verdict decide(const Query& q) {
    Fragment fl = fragment_of(q.lhs);
    Fragment fr = fragment_of(q.rhs);
    Verdict v;
    if (!fl.has_star && !fr.has_star)
        v = decide_starfree(q);
    else if (!fl.has_inter && !fr.has_inter)
        v = decide_intersection_free(q);
    else
        v = semidecide_ecorstar(q);
    if (v.kind == VerdictKind::Refuted) verify_refutation(*v.refutation, q.lhs, q.rhs);
    return v;
}

std::string verdict_json(const Verdict& v) {
    nlohmann::json j;
    switch (v.kind) {
        case VerdictKind::Valid: j["verdict"] = "valid"; break;
        case VerdictKind::Refuted: j["verdict"] = "refuted"; break;
        case VerdictKind::Unknown: j["verdict"] = "unknown"; break;
    }
    if (v.refutation) {
        j["direction"] = direction_str(v.refutation->dir);
        j["counterexample"] = nlohmann::json::parse(to_json(v.refutation->where));
    }
    if (v.kind == VerdictKind::Unknown) j["bound"] = v.bound;
    return j.dump();
}

}  // namespace ecor
