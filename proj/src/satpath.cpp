#include "ecor/satpath.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include <json.hpp>

namespace ecor {

namespace {

StateSet delta_letter(const Nfa& a, const StateSet& u, SignedLetter x) {
    return x.is_id(a.sigma()) ? eps_closure(a, u) : delta(a, u, x);
}

StateSet singleton(const Nfa& a, int q) {
    StateSet s(a.states());
    s.set(q);
    return s;
}

// Bases quantified by the saturation conditions: every atom and the identity.
std::vector<SignedLetter> sat_bases(const Alphabet& sigma) {
    std::vector<SignedLetter> out;
    for (size_t i = 0; i < sigma.size(); ++i) out.push_back(SignedLetter::atom(static_cast<int>(i), false, false));
    out.push_back(SignedLetter::id(sigma));
    return out;
}

}  // namespace

bool con(const Nfa& a, SignedLetter x, const StateSet& u, const StateSet& u2) {
    if (!delta_letter(a, u, x).subset_of(u2)) return false;
    return delta_letter(a, u2, x.breve(a.sigma())).subset_of(u);
}

std::vector<std::vector<int>> identity_partition(const Graph& g) {
    Relation e = g.id().equivalence_closure();
    std::vector<std::vector<int>> classes;
    std::vector<bool> done(static_cast<size_t>(g.size()), false);
    for (int v = 0; v < g.size(); ++v) {
        if (done[static_cast<size_t>(v)]) continue;
        std::vector<int> cls;
        for (int u = v; u < g.size(); ++u)
            if (e.test(v, u)) {
                cls.push_back(u);
                done[static_cast<size_t>(u)] = true;
            }
        classes.push_back(std::move(cls));
    }
    return classes;
}

namespace {

bool is_identity_saturation_of_word(const Graph& g, const Word& w) {
    if (g.size() != static_cast<int>(w.size()) + 1) return false;
    Graph base = graph_of_word(w, g.sigma());
    if (g.source() != base.source() || g.target() != base.target()) return false;
    for (size_t atom = 0; atom < g.sigma().size(); ++atom) {
        int ai = static_cast<int>(atom);
        if (!(g.label(Label::pos(ai)) == base.label(Label::pos(ai)))) return false;
        if (!(g.label(Label::neg(ai)) == base.label(Label::neg(ai)))) return false;
    }
    Relation id = g.id();
    if (!(id == id.equivalence_closure())) return false;
    if (!(g.neg_id() == id.complement())) return false;
    if (!base.neg_id().subset_of(g.neg_id())) return false;  // edge-extension
    return is_consistent(g);
}

}  // namespace

bool is_saturable_path(const SaturablePath& p, const Nfa& a) {
    const Graph& g = p.g;
    if (static_cast<int>(p.u.size()) != g.size()) return false;
    if (!is_identity_saturation_of_word(g, p.word)) return false;
    // Entry and exit state conditions.
    if (!p.u[static_cast<size_t>(g.source())].test(a.initial())) return false;
    if (p.u[static_cast<size_t>(g.target())].test(a.final())) return false;
    // Every labeled edge is transition-compatible.
    for (int l = 0; l < g.label_count(); ++l) {
        SignedLetter x = letter_from_name(label_name(Label{l}, g.sigma()), g.sigma());
        for (auto [i, j] : g.label(Label{l}).pairs())
            if (!con(a, x, p.u[static_cast<size_t>(i)], p.u[static_cast<size_t>(j)])) return false;
    }
    // Every vertex pair admits one of the two labels of every base.
    for (SignedLetter base : sat_bases(a.sigma()))
        for (int i = 0; i < g.size(); ++i)
            for (int j = 0; j < g.size(); ++j) {
                const StateSet& ui = p.u[static_cast<size_t>(i)];
                const StateSet& uj = p.u[static_cast<size_t>(j)];
                if (!con(a, base, ui, uj) && !con(a, base.bar(a.sigma()), ui, uj)) return false;
            }
    return true;
}

Graph saturate_from_path(const SaturablePath& p, const Nfa& a) {
    if (!is_saturable_path(p, a)) throw std::invalid_argument("saturate_from_path: not a saturable path");
    Graph h = p.g;
    const int atoms = static_cast<int>(h.sigma().size());
    auto propagate = [&] {
        for (bool changed = true; changed;) {
            changed = false;
            for (int ai = 0; ai < atoms; ++ai)
                for (Label l : {Label::pos(ai), Label::neg(ai)}) {
                    Relation conj = h.id().compose(h.label(l)).compose(h.id());
                    if (!conj.subset_of(h.label(l))) {
                        h.label(l) |= conj;
                        changed = true;
                    }
                }
        }
    };
    propagate();
    for (;;) {
        bool added = false;
        for (int i = 0; i < h.size() && !added; ++i)
            for (int j = 0; j < h.size() && !added; ++j)
                for (int ai = 0; ai < atoms && !added; ++ai) {
                    if (h.pos(ai).test(i, j) || h.neg(ai).test(i, j)) continue;
                    SignedLetter x = SignedLetter::atom(ai, false, false);
                    if (con(a, x, p.u[static_cast<size_t>(i)], p.u[static_cast<size_t>(j)]))
                        h.pos(ai).set(i, j);
                    else
                        h.neg(ai).set(i, j);
                    added = true;
                }
        if (!added) break;
        propagate();
    }
    return h;
}

std::set<std::array<int, 4>> nu(const Nfa& a, const StateSet& u) {
    std::set<std::array<int, 4>> out;
    std::vector<int> in = u.elements();
    std::vector<int> notin;
    for (int q = 0; q < a.states(); ++q)
        if (!u.test(q)) notin.push_back(q);
    for (int t1 : in)
        for (int t2 : notin)
            for (int t3 : in)
                for (int t4 : notin) out.insert({t1, t2, t3, t4});
    return out;
}

bool phi(const Nfa& a, const std::set<std::array<int, 4>>& uset, const StateSet& u) {
    for (const auto& t : nu(a, u))
        if (!uset.count(t)) return false;
    for (const auto& t : uset) {
        for (SignedLetter base : sat_bases(a.sigma())) {
            SignedLetter neg = base.bar(a.sigma());
            bool pos_ok = delta_letter(a, singleton(a, t[0]), base).subset_of(u) &&
                          !delta_letter(a, u, base.breve(a.sigma())).test(t[1]);
            bool neg_ok = delta_letter(a, singleton(a, t[2]), neg).subset_of(u) &&
                          !delta_letter(a, u, neg.breve(a.sigma())).test(t[3]);
            if (!pos_ok && !neg_ok) return false;
        }
    }
    return true;
}

bool pairwise_sat(const Nfa& a, const std::vector<StateSet>& family) {
    for (const StateSet& ui : family)
        for (const StateSet& uj : family)
            for (SignedLetter base : sat_bases(a.sigma()))
                if (!con(a, base, ui, uj) && !con(a, base.bar(a.sigma()), ui, uj)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Candidate state sets
// ---------------------------------------------------------------------------

namespace {

// All epsilon-closed sets s with lower <= s <= upper, sorted. Grows closed
// sets one state at a time, so the cost is proportional to the result count.
std::vector<StateSet> closed_sets_between(const Nfa& a, const StateSet& lower, const StateSet& upper) {
    std::vector<StateSet> out;
    StateSet base = eps_closure(a, lower);
    if (!base.subset_of(upper)) return out;
    std::set<StateSet> visited{base};
    std::vector<StateSet> stack{base};
    while (!stack.empty()) {
        StateSet s = std::move(stack.back());
        stack.pop_back();
        for (int q = 0; q < a.states(); ++q) {
            if (!upper.test(q) || s.test(q)) continue;
            StateSet t = s;
            t.set(q);
            t = eps_closure(a, t);
            if (!t.subset_of(upper)) continue;
            if (visited.insert(t).second) {
                if (visited.size() > (1u << 20))
                    throw std::invalid_argument("state-set search space too large");
                stack.push_back(std::move(t));
            }
        }
    }
    out.assign(visited.begin(), visited.end());
    return out;
}

// Candidates u' with con(x, u, u'), epsilon-closed and within extra bounds.
std::vector<StateSet> step_candidates(const Nfa& a, const StateSet& u, SignedLetter x,
                                      const StateSet* extra_lower, const StateSet* extra_upper) {
    StateSet lower = delta_letter(a, u, x);
    if (extra_lower) lower |= *extra_lower;
    StateSet upper(a.states());
    SignedLetter xb = x.breve(a.sigma());
    for (int q = 0; q < a.states(); ++q)
        if (delta_letter(a, singleton(a, q), xb).subset_of(u)) upper.set(q);
    if (extra_upper) upper &= *extra_upper;
    return closed_sets_between(a, lower, upper);
}

bool sat_compatible(const Nfa& a, const StateSet& candidate, const std::vector<StateSet>& seen) {
    for (SignedLetter base : sat_bases(a.sigma())) {
        SignedLetter neg = base.bar(a.sigma());
        if (!con(a, base, candidate, candidate) && !con(a, neg, candidate, candidate)) return false;
        for (const StateSet& v : seen) {
            if (!con(a, base, candidate, v) && !con(a, neg, candidate, v)) return false;
            if (!con(a, base, v, candidate) && !con(a, neg, v, candidate)) return false;
        }
    }
    return true;
}

}  // namespace

std::optional<std::vector<StateSet>> as_accepts(const Nfa& a, const Word& w) {
    StateSet entry_lower(a.states());
    entry_lower.set(a.initial());
    StateSet full(a.states());
    for (int q = 0; q < a.states(); ++q) full.set(q);

    std::vector<StateSet> sequence;
    std::vector<StateSet> seen;  // distinct sets of the sequence

    auto dfs = [&](auto&& self, size_t pos) -> bool {
        if (pos == w.size()) return !sequence.back().test(a.final());
        for (const StateSet& next : step_candidates(a, sequence.back(), w[pos], nullptr, nullptr)) {
            bool fresh = std::find(seen.begin(), seen.end(), next) == seen.end();
            if (fresh && !sat_compatible(a, next, seen)) continue;
            sequence.push_back(next);
            if (fresh) seen.push_back(next);
            if (self(self, pos + 1)) return true;
            sequence.pop_back();
            if (fresh) seen.pop_back();
        }
        return false;
    };

    for (const StateSet& first : closed_sets_between(a, entry_lower, full)) {
        if (!sat_compatible(a, first, {})) continue;
        sequence.assign(1, first);
        seen.assign(1, first);
        if (dfs(dfs, 0)) return sequence;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Saturable-path enumeration for a fixed word
// ---------------------------------------------------------------------------

namespace {

struct ClassInfo {
    std::vector<int> members;
    bool has_source = false;
    bool has_target = false;
};

// Graph edges between classes, as (letter, from class, to class).
struct ClassEdge {
    SignedLetter letter;
    int from;
    int to;
};

}  // namespace

std::vector<SaturablePath> saturable_paths(const Nfa& a, const Word& w, bool first_only) {
    std::vector<SaturablePath> results;
    const Alphabet& sigma = a.sigma();
    Graph base = graph_of_word(w, sigma);
    const int n = base.size();

    for_each_partition(n, [&](const std::vector<int>& cls, int k) {
        if (first_only && !results.empty()) return;
        // Assemble the identity-saturation candidate for this partition.
        Graph g = base;
        Relation part(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (cls[static_cast<size_t>(i)] == cls[static_cast<size_t>(j)]) part.set(i, j);
        g.id() = part;
        g.neg_id() = part.complement();
        if (!is_consistent(g)) return;

        std::vector<ClassInfo> classes(static_cast<size_t>(k));
        for (int v = 0; v < n; ++v) classes[static_cast<size_t>(cls[static_cast<size_t>(v)])].members.push_back(v);
        classes[static_cast<size_t>(cls[static_cast<size_t>(base.source())])].has_source = true;
        classes[static_cast<size_t>(cls[static_cast<size_t>(base.target())])].has_target = true;

        std::vector<ClassEdge> edges;
        for (size_t atom = 0; atom < sigma.size(); ++atom) {
            int ai = static_cast<int>(atom);
            for (Label l : {Label::pos(ai), Label::neg(ai)}) {
                SignedLetter x = SignedLetter::atom(ai, l.complemented(), false);
                for (auto [i, j] : g.label(l).pairs())
                    edges.push_back({x, cls[static_cast<size_t>(i)], cls[static_cast<size_t>(j)]});
            }
        }

        SignedLetter neg_id = SignedLetter::neg_id(sigma);
        std::vector<StateSet> assign(static_cast<size_t>(k), StateSet(a.states()));

        auto dfs = [&](auto&& self, int c) -> void {
            if (first_only && !results.empty()) return;
            if (c == k) {
                SaturablePath p{w, g, {}};
                p.u.reserve(static_cast<size_t>(n));
                for (int v = 0; v < n; ++v) p.u.push_back(assign[static_cast<size_t>(cls[static_cast<size_t>(v)])]);
                if (!is_saturable_path(p, a))
                    throw std::logic_error("saturable_paths: constraint propagation mismatch");
                results.push_back(std::move(p));
                return;
            }
            // Interval constraints from edges and the complemented identity
            // against the already-assigned classes.
            StateSet lower(a.states());
            StateSet upper(a.states());
            for (int q = 0; q < a.states(); ++q) upper.set(q);
            if (classes[static_cast<size_t>(c)].has_source) lower.set(a.initial());
            if (classes[static_cast<size_t>(c)].has_target) upper.reset(a.final());
            for (const ClassEdge& e : edges) {
                if (e.from == c && e.to < c) {
                    // con(x, u_c, u_to): forward upper bound, backward lower bound.
                    const StateSet& v = assign[static_cast<size_t>(e.to)];
                    for (int q = 0; q < a.states(); ++q)
                        if (!delta_letter(a, singleton(a, q), e.letter).subset_of(v)) upper.reset(q);
                    lower |= delta_letter(a, v, e.letter.breve(sigma));
                } else if (e.to == c && e.from < c) {
                    const StateSet& v = assign[static_cast<size_t>(e.from)];
                    lower |= delta_letter(a, v, e.letter);
                    SignedLetter xb = e.letter.breve(sigma);
                    for (int q = 0; q < a.states(); ++q)
                        if (!delta_letter(a, singleton(a, q), xb).subset_of(v)) upper.reset(q);
                }
            }
            for (int d = 0; d < c; ++d) {
                // Complemented-identity edges run both ways between distinct classes.
                const StateSet& v = assign[static_cast<size_t>(d)];
                lower |= delta_letter(a, v, neg_id);
                for (int q = 0; q < a.states(); ++q)
                    if (!delta_letter(a, singleton(a, q), neg_id).subset_of(v)) upper.reset(q);
            }

            std::vector<StateSet> prior(assign.begin(), assign.begin() + c);
            for (const StateSet& candidate : closed_sets_between(a, lower, upper)) {
                if (first_only && !results.empty()) return;
                // Inner-class edges constrain the candidate against itself.
                bool ok = true;
                for (const ClassEdge& e : edges)
                    if (e.from == c && e.to == c && !con(a, e.letter, candidate, candidate)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                if (!sat_compatible(a, candidate, prior)) continue;
                // Verify edge compatibility both ways (the interval covered
                // one inclusion of each con; check the full predicate).
                for (const ClassEdge& e : edges) {
                    if (e.from == c && e.to < c && !con(a, e.letter, candidate, assign[static_cast<size_t>(e.to)])) ok = false;
                    if (e.to == c && e.from < c && !con(a, e.letter, assign[static_cast<size_t>(e.from)], candidate)) ok = false;
                    if (!ok) break;
                }
                if (!ok) continue;
                for (int d = 0; d < c && ok; ++d)
                    if (!con(a, neg_id, candidate, assign[static_cast<size_t>(d)])) ok = false;
                if (!ok) continue;
                assign[static_cast<size_t>(c)] = candidate;
                self(self, c + 1);
            }
        };
        dfs(dfs, 0);
    });
    return results;
}

// ---------------------------------------------------------------------------
// Fragment product search
// ---------------------------------------------------------------------------

bool nfa_has_neg_id(const Nfa& a) { return a.has_letter(SignedLetter::neg_id(a.sigma())); }

bool nfa_has_neg_atom(const Nfa& a) {
    for (size_t i = 0; i < a.sigma().size(); ++i) {
        if (a.has_letter(SignedLetter::atom(static_cast<int>(i), true, false))) return true;
        if (a.has_letter(SignedLetter::atom(static_cast<int>(i), true, true))) return true;
    }
    return false;
}

namespace {

std::vector<SignedLetter> present_letters(const Nfa& a) {
    std::vector<SignedLetter> out;
    for (int code = 0; code < SignedLetter::count(a.sigma()); ++code) {
        SignedLetter x{code};
        if (!x.is_id(a.sigma()) && a.has_letter(x)) out.push_back(x);
    }
    return out;
}

StateSet set_delta(const Nfa& a, const StateSet& s, SignedLetter x) {
    StateSet step(a.states());
    for (auto [from, to] : a.transitions(x))
        if (s.test(from)) step.set(to);
    return eps_closure(a, step);
}

SaturablePath assemble_witness(const Nfa& a2, const Word& w, const std::vector<StateSet>& us,
                               bool identity_relation) {
    Graph g = graph_of_word(w, a2.sigma());
    const int n = g.size();
    Relation id = Relation::identity(n);
    if (!identity_relation) {
        SignedLetter neg_id = SignedLetter::neg_id(a2.sigma());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && !con(a2, neg_id, us[static_cast<size_t>(i)], us[static_cast<size_t>(j)]))
                    id.set(i, j);
    }
    g.id() = id;
    g.neg_id() = id.complement();
    SaturablePath p{w, std::move(g), us};
    if (!is_saturable_path(p, a2)) throw std::logic_error("fragment_emptiness: witness fails verification");
    return p;
}

}  // namespace

namespace {

// True when the automaton's word language is finite: no labeled transition
// lies on a cycle of the useful (reachable and co-reachable) part.
bool language_is_finite(const Nfa& a) {
    const int n = a.states();
    std::vector<std::vector<int>> fwd(static_cast<size_t>(n)), bwd(static_cast<size_t>(n));
    for (int code = 0; code < SignedLetter::count(a.sigma()); ++code)
        for (auto [from, to] : a.transitions(SignedLetter{code})) {
            fwd[static_cast<size_t>(from)].push_back(to);
            bwd[static_cast<size_t>(to)].push_back(from);
        }
    auto reach = [&](int start, const std::vector<std::vector<int>>& adj) {
        std::vector<bool> seen(static_cast<size_t>(n), false);
        std::vector<int> stack{start};
        seen[static_cast<size_t>(start)] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : adj[static_cast<size_t>(v)])
                if (!seen[static_cast<size_t>(u)]) {
                    seen[static_cast<size_t>(u)] = true;
                    stack.push_back(u);
                }
        }
        return seen;
    };
    std::vector<bool> fromInit = reach(a.initial(), fwd);
    std::vector<bool> toFinal = reach(a.final(), bwd);
    auto useful = [&](int v) { return fromInit[static_cast<size_t>(v)] && toFinal[static_cast<size_t>(v)]; };
    // Pairwise reachability over the useful part.
    std::vector<std::vector<bool>> r(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
    for (int v = 0; v < n; ++v) {
        if (!useful(v)) continue;
        std::vector<bool> seen = reach(v, fwd);
        for (int u = 0; u < n; ++u) r[static_cast<size_t>(v)][static_cast<size_t>(u)] = seen[static_cast<size_t>(u)];
    }
    for (int code = 0; code < SignedLetter::count(a.sigma()); ++code) {
        SignedLetter x{code};
        if (x.is_id(a.sigma())) continue;
        for (auto [from, to] : a.transitions(x))
            if (useful(from) && useful(to) && r[static_cast<size_t>(to)][static_cast<size_t>(from)])
                return false;
    }
    return true;
}

}  // namespace

std::optional<SaturablePath> fragment_emptiness(const Nfa& a1, const Nfa& a2) {
    bool rhs_neg_id_free = !nfa_has_neg_id(a2);
    bool lhs_neg_atom_free = !nfa_has_neg_atom(a1);
    if (!rhs_neg_id_free && !lhs_neg_atom_free)
        throw std::invalid_argument(
            "fragment_emptiness: needs a complemented-identity-free right side or a "
            "complemented-atom-free left side");

    std::vector<SignedLetter> letters = present_letters(a1);
    StateSet q0(a1.states());
    q0.set(a1.initial());
    q0 = eps_closure(a1, q0);

    if (language_is_finite(a1)) {
        // Finite left language: walk its words shortest-first and test each
        // against the saturation automaton directly.
        Word word;
        std::optional<SaturablePath> hit;
        bool frontier_alive = true;
        for (int length = 0; frontier_alive; ++length) {
            frontier_alive = false;
            auto dfs = [&](auto&& self, const StateSet& q, int remaining) -> bool {
                if (remaining == 0) {
                    frontier_alive = true;
                    if (!q.test(a1.final())) return false;
                    if (auto us = as_accepts(a2, word)) {
                        hit = assemble_witness(a2, word, *us, rhs_neg_id_free);
                        return true;
                    }
                    return false;
                }
                for (SignedLetter x : letters) {
                    StateSet q2 = set_delta(a1, q, x);
                    if (q2.empty()) continue;
                    word.push_back(x);
                    if (self(self, q2, remaining - 1)) return true;
                    word.pop_back();
                }
                return false;
            };
            if (dfs(dfs, q0, length)) return hit;
        }
        return std::nullopt;
    }

    // Infinite left language: product reachability over (left state set,
    // right state set, family of right sets on the path). A node is skipped
    // when an already-visited node with the same pair carries a subfamily of
    // its constraints.
    struct Node {
        StateSet q;
        StateSet u;
        std::vector<StateSet> seen;
        int parent;
        SignedLetter letter{0};
    };

    std::vector<Node> nodes;
    std::map<std::pair<StateSet, StateSet>, std::vector<std::vector<StateSet>>> visited;
    std::deque<int> queue;

    auto subsumed = [&](const StateSet& q, const StateSet& u, const std::vector<StateSet>& seen) {
        auto it = visited.find({q, u});
        if (it == visited.end()) return false;
        for (const auto& old : it->second) {
            bool subset = true;
            for (const StateSet& s : old)
                if (std::find(seen.begin(), seen.end(), s) == seen.end()) {
                    subset = false;
                    break;
                }
            if (subset) return true;
        }
        return false;
    };

    StateSet entry_lower(a2.states());
    entry_lower.set(a2.initial());
    StateSet full(a2.states());
    for (int q = 0; q < a2.states(); ++q) full.set(q);

    auto finish = [&](int node_index) -> SaturablePath {
        Word w;
        std::vector<StateSet> us;
        for (int at = node_index; at >= 0; at = nodes[static_cast<size_t>(at)].parent) {
            us.push_back(nodes[static_cast<size_t>(at)].u);
            if (nodes[static_cast<size_t>(at)].parent >= 0) w.push_back(nodes[static_cast<size_t>(at)].letter);
        }
        std::reverse(w.begin(), w.end());
        std::reverse(us.begin(), us.end());
        return assemble_witness(a2, w, us, rhs_neg_id_free);
    };

    auto push = [&](Node node) {
        if (subsumed(node.q, node.u, node.seen)) return;
        visited[{node.q, node.u}].push_back(node.seen);
        nodes.push_back(std::move(node));
        queue.push_back(static_cast<int>(nodes.size()) - 1);
    };

    for (const StateSet& u0 : closed_sets_between(a2, entry_lower, full)) {
        if (!sat_compatible(a2, u0, {})) continue;
        push({q0, u0, {u0}, -1, SignedLetter{0}});
    }

    while (!queue.empty()) {
        int idx = queue.front();
        queue.pop_front();
        StateSet node_q = nodes[static_cast<size_t>(idx)].q;
        StateSet node_u = nodes[static_cast<size_t>(idx)].u;
        if (node_q.test(a1.final()) && !node_u.test(a2.final())) return finish(idx);
        for (SignedLetter x : letters) {
            StateSet q2 = set_delta(a1, node_q, x);
            if (q2.empty()) continue;
            for (const StateSet& u2 : step_candidates(a2, node_u, x, nullptr, nullptr)) {
                std::vector<StateSet> seen2 = nodes[static_cast<size_t>(idx)].seen;
                if (std::find(seen2.begin(), seen2.end(), u2) == seen2.end()) {
                    if (!sat_compatible(a2, u2, seen2)) continue;
                    seen2.push_back(u2);
                    std::sort(seen2.begin(), seen2.end(),
                              [](const StateSet& a, const StateSet& b) { return a < b; });
                }
                push({q2, u2, std::move(seen2), idx, x});
            }
        }
    }
    return std::nullopt;
}

SearchResult full_exka_search(const Nfa& a1, const Nfa& a2, int len_cap) {
    std::vector<SignedLetter> letters = present_letters(a1);
    StateSet start(a1.states());
    start.set(a1.initial());
    start = eps_closure(a1, start);

    bool frontier_alive = true;
    for (int length = 0; length < len_cap && frontier_alive; ++length) {
        frontier_alive = false;
        Word word;
        std::optional<SaturablePath> hit;
        auto dfs = [&](auto&& self, const StateSet& q, int remaining) -> bool {
            if (remaining == 0) {
                frontier_alive = true;
                if (!q.test(a1.final())) return false;
                auto paths = saturable_paths(a2, word, /*first_only=*/true);
                if (!paths.empty()) {
                    hit = std::move(paths.front());
                    return true;
                }
                return false;
            }
            for (SignedLetter x : letters) {
                StateSet q2 = set_delta(a1, q, x);
                if (q2.empty()) continue;
                word.push_back(x);
                if (self(self, q2, remaining - 1)) return true;
                word.pop_back();
            }
            return false;
        };
        if (dfs(dfs, start, length)) return {SearchStatus::Refuted, std::move(hit), len_cap};
    }
    if (!frontier_alive) return {SearchStatus::Valid, std::nullopt, len_cap};
    // Complete when the cap meets the exponential word-length bound.
    double bound = static_cast<double>(a1.states()) * std::pow(2.0, static_cast<double>(a2.states()));
    if (static_cast<double>(len_cap) >= bound) return {SearchStatus::Valid, std::nullopt, len_cap};
    return {SearchStatus::Unknown, std::nullopt, len_cap};
}

std::string witness_json(const SaturablePath& p, const Nfa& a) {
    nlohmann::json j;
    nlohmann::json word = nlohmann::json::array();
    for (SignedLetter x : p.word) word.push_back(letter_name(x, a.sigma()));
    j["word"] = std::move(word);
    nlohmann::json part = nlohmann::json::array();
    for (const auto& cls : identity_partition(p.g)) part.push_back(cls);
    j["I_partition"] = std::move(part);
    nlohmann::json us = nlohmann::json::array();
    for (const StateSet& u : p.u) {
        nlohmann::json arr = nlohmann::json::array();
        for (int q : u.elements()) arr.push_back("q" + std::to_string(q));
        us.push_back(std::move(arr));
    }
    j["U"] = std::move(us);
    PointedStructure s = structure_of(quotient(saturate_from_path(p, a)));
    j["structure"] = nlohmann::json::parse(to_json(s));
    return j.dump();
}

}  // namespace ecor
