#include "ecor/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

namespace ecor {

std::string label_name(Label l, const Alphabet& sigma) {
    if (l.is_identity_family(sigma)) return l.complemented() ? "!1" : "1";
    return (l.complemented() ? "!" : "") + sigma.name(l.atom());
}

std::string letter_name(SignedLetter x, const Alphabet& sigma) {
    if (x.is_identity_family(sigma)) return x.is_id(sigma) ? "1" : "!1";
    std::string s = (x.code & 1) ? "!" + sigma.name(x.atom_index()) : sigma.name(x.atom_index());
    if (x.code & 2) s += '^';
    return s;
}

SignedLetter letter_from_name(const std::string& name, const Alphabet& sigma) {
    std::string s = name;
    bool conv = false, neg = false;
    if (!s.empty() && s.back() == '^') {
        conv = true;
        s.pop_back();
    }
    if (!s.empty() && s.front() == '!') {
        neg = true;
        s.erase(s.begin());
    }
    if (s == "1" && !conv) return neg ? SignedLetter::neg_id(sigma) : SignedLetter::id(sigma);
    auto idx = sigma.index(s);
    if (!idx) throw std::invalid_argument("unknown letter '" + name + "'");
    return SignedLetter::atom(*idx, neg, conv);
}

Graph::Graph(Alphabet sigma, int n, int source, int target)
    : sigma_(std::move(sigma)), n_(n), source_(source), target_(target) {
    if (n < 1 || n > kMaxVertices) throw std::invalid_argument("graph: vertex count out of range");
    if (source < 0 || source >= n || target < 0 || target >= n)
        throw std::invalid_argument("graph: source/target out of range");
    labels_.assign(static_cast<size_t>(Label::count(sigma_)), Relation(n));
}

void Graph::set_points(int source, int target) {
    if (source < 0 || source >= n_ || target < 0 || target >= n_)
        throw std::invalid_argument("graph: source/target out of range");
    source_ = source;
    target_ = target;
}

std::string Graph::encoding() const {
    std::string s;
    s.push_back(static_cast<char>(n_));
    s.push_back(static_cast<char>(source_));
    s.push_back(static_cast<char>(target_));
    for (const Relation& rel : labels_)
        for (int i = 0; i < n_; ++i)
            for (int b = 0; b < 8; ++b) s.push_back(static_cast<char>((rel.row(i) >> (8 * b)) & 0xff));
    return s;
}

std::string Graph::canonical_encoding() const {
    if (n_ > 8) throw std::invalid_argument("canonical_encoding: more than 8 vertices");
    std::vector<int> perm(static_cast<size_t>(n_));
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::string s;
        s.push_back(static_cast<char>(n_));
        s.push_back(static_cast<char>(perm[static_cast<size_t>(source_)]));
        s.push_back(static_cast<char>(perm[static_cast<size_t>(target_)]));
        for (const Relation& rel : labels_) {
            std::vector<unsigned char> rows(static_cast<size_t>(n_), 0);
            for (auto [i, j] : rel.pairs())
                rows[static_cast<size_t>(perm[static_cast<size_t>(i)])] |=
                    static_cast<unsigned char>(1u << perm[static_cast<size_t>(j)]);
            for (unsigned char r : rows) s.push_back(static_cast<char>(r));
        }
        if (best.empty() || s < best) best = std::move(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Graph edge_graph(const Alphabet& sigma, Label l) {
    Graph g(sigma, 2, 0, 1);
    g.label(l).set(0, 1);
    return g;
}

namespace {

struct MergeMap {
    std::vector<int> parent;

    explicit MergeMap(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    }
    void merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

Graph glue(const Graph& g, const Graph& h, bool glue_sources, bool glue_targets) {
    const int ng = g.size(), nh = h.size(), total = ng + nh;
    MergeMap uf(total);
    if (glue_sources) uf.merge(g.source(), ng + h.source());
    if (glue_targets) uf.merge(g.target(), ng + h.target());
    if (!glue_sources) uf.merge(g.target(), ng + h.source());  // series
    std::vector<int> index(static_cast<size_t>(total), -1);
    int k = 0;
    for (int v = 0; v < total; ++v)
        if (index[static_cast<size_t>(uf.find(v))] == -1) index[static_cast<size_t>(uf.find(v))] = k++;
    auto map = [&](int v) { return index[static_cast<size_t>(uf.find(v))]; };
    int src = map(g.source());
    int tgt = glue_targets ? map(g.target()) : map(ng + h.target());
    Graph out(g.sigma(), k, src, tgt);
    for (int l = 0; l < g.label_count(); ++l) {
        for (auto [i, j] : g.label(Label{l}).pairs()) out.label(Label{l}).set(map(i), map(j));
        for (auto [i, j] : h.label(Label{l}).pairs()) out.label(Label{l}).set(map(ng + i), map(ng + j));
    }
    return out;
}

}  // namespace

Graph series(const Graph& g, const Graph& h) { return glue(g, h, false, false); }
Graph parallel(const Graph& g, const Graph& h) { return glue(g, h, true, true); }

Graph converse(const Graph& g) {
    Graph out = g;
    out.set_points(g.target(), g.source());
    return out;
}

// ---------------------------------------------------------------------------
// Homomorphism search
// ---------------------------------------------------------------------------

namespace {

struct HomSearch {
    const Graph& from;
    const Graph& to;
    std::vector<Relation> to_conv;  // converse of every target label
    int n_from;
    uint64_t all_to;

    HomSearch(const Graph& f, const Graph& t) : from(f), to(t), n_from(f.size()) {
        to_conv.reserve(static_cast<size_t>(t.label_count()));
        for (int l = 0; l < t.label_count(); ++l) to_conv.push_back(t.label(Label{l}).converse());
        all_to = (t.size() == 64) ? ~0ull : ((1ull << t.size()) - 1);
    }

    // cand[v]: bitset of permitted images. Returns false when a domain empties.
    bool assign(std::vector<uint64_t>& cand, std::vector<int>& map, int v, int x) {
        map[static_cast<size_t>(v)] = x;
        cand[static_cast<size_t>(v)] = 1ull << x;
        for (int l = 0; l < from.label_count(); ++l) {
            const Relation& rel = from.label(Label{l});
            uint64_t out = rel.row(v);
            while (out) {
                int u = std::countr_zero(out);
                out &= out - 1;
                cand[static_cast<size_t>(u)] &= to.label(Label{l}).row(x);
                if (!cand[static_cast<size_t>(u)]) return false;
            }
            for (int u = 0; u < n_from; ++u) {
                if (rel.test(u, v)) {
                    cand[static_cast<size_t>(u)] &= to_conv[static_cast<size_t>(l)].row(x);
                    if (!cand[static_cast<size_t>(u)]) return false;
                }
            }
        }
        return true;
    }

    bool search(std::vector<uint64_t> cand, std::vector<int> map) {
        int best = -1, best_count = 65;
        for (int v = 0; v < n_from; ++v) {
            if (map[static_cast<size_t>(v)] >= 0) continue;
            int c = std::popcount(cand[static_cast<size_t>(v)]);
            if (c < best_count) {
                best = v;
                best_count = c;
            }
        }
        if (best == -1) {
            result = map;
            return true;
        }
        uint64_t options = cand[static_cast<size_t>(best)];
        while (options) {
            int x = std::countr_zero(options);
            options &= options - 1;
            auto cand2 = cand;
            auto map2 = map;
            if (assign(cand2, map2, best, x) && search(std::move(cand2), std::move(map2))) return true;
        }
        return false;
    }

    std::vector<int> result;
};

}  // namespace

std::optional<Homomorphism> homomorphism_exists(const Graph& from, const Graph& to) {
    if (!(from.sigma() == to.sigma()))
        throw std::invalid_argument("homomorphism_exists: alphabet mismatch");
    HomSearch hs(from, to);
    std::vector<uint64_t> cand(static_cast<size_t>(from.size()), hs.all_to);
    std::vector<int> map(static_cast<size_t>(from.size()), -1);
    if (!hs.assign(cand, map, from.source(), to.source())) return std::nullopt;
    if (map[static_cast<size_t>(from.target())] == -1) {
        if (!(cand[static_cast<size_t>(from.target())] >> to.target() & 1u)) return std::nullopt;
        if (!hs.assign(cand, map, from.target(), to.target())) return std::nullopt;
    } else if (map[static_cast<size_t>(from.target())] != to.target()) {
        return std::nullopt;
    }
    if (!hs.search(std::move(cand), std::move(map))) return std::nullopt;
    return hs.result;
}

// ---------------------------------------------------------------------------
// Graph languages
// ---------------------------------------------------------------------------

namespace {

void push_unique(std::vector<Graph>& out, std::set<std::string>& seen, Graph g) {
    if (seen.insert(g.encoding()).second) out.push_back(std::move(g));
}

std::vector<Graph> glang_rec(const TermPtr& t, int budget, const Alphabet& sigma) {
    std::vector<Graph> out;
    std::set<std::string> seen;
    if (budget < 1) return out;
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::NegVar:
        case TermKind::ConvVar:
        case TermKind::ConvNegVar: {
            if (budget < 2) return out;
            auto idx = sigma.index(t->atom);
            if (!idx) throw std::invalid_argument("glang: unknown atom '" + t->atom + "'");
            bool neg = t->kind == TermKind::NegVar || t->kind == TermKind::ConvNegVar;
            Graph e = edge_graph(sigma, neg ? Label::neg(*idx) : Label::pos(*idx));
            if (t->kind == TermKind::ConvVar || t->kind == TermKind::ConvNegVar) e = converse(e);
            out.push_back(std::move(e));
            return out;
        }
        case TermKind::Id: {
            out.emplace_back(sigma, 1, 0, 0);
            return out;
        }
        case TermKind::NegId: {
            if (budget < 2) return out;
            out.push_back(edge_graph(sigma, Label::neg_id(sigma)));
            return out;
        }
        case TermKind::Bot:
            return out;
        case TermKind::Top: {
            if (budget < 2) return out;
            out.emplace_back(sigma, 2, 0, 1);
            return out;
        }
        case TermKind::Union: {
            for (auto& g : glang_rec(t->left, budget, sigma)) push_unique(out, seen, std::move(g));
            for (auto& g : glang_rec(t->right, budget, sigma)) push_unique(out, seen, std::move(g));
            return out;
        }
        case TermKind::Comp: {
            for (const Graph& g : glang_rec(t->left, budget, sigma)) {
                for (const Graph& h : glang_rec(t->right, budget - g.size() + 1, sigma))
                    push_unique(out, seen, series(g, h));
            }
            return out;
        }
        case TermKind::Inter: {
            for (const Graph& g : glang_rec(t->left, budget, sigma)) {
                for (const Graph& h : glang_rec(t->right, budget - g.size() + 2, sigma)) {
                    Graph p = parallel(g, h);
                    if (p.size() <= budget) push_unique(out, seen, std::move(p));
                }
            }
            return out;
        }
        case TermKind::Star: {
            std::vector<Graph> base = glang_rec(t->left, budget, sigma);
            std::vector<Graph> level;
            level.emplace_back(sigma, 1, 0, 0);  // zero iterations
            std::set<std::string> level_hashes;
            for (;;) {
                std::set<std::string> level_enc;
                for (const Graph& g : level) {
                    push_unique(out, seen, g);
                    level_enc.insert(g.encoding());
                }
                std::string h;
                for (const auto& e : level_enc) h += e + '\xff';
                if (!level_hashes.insert(h).second) break;  // level set repeats, union is complete
                std::vector<Graph> next;
                std::set<std::string> next_seen;
                for (const Graph& g : base)
                    for (const Graph& prev : level) {
                        if (g.size() + prev.size() - 1 > budget) continue;
                        push_unique(next, next_seen, series(g, prev));
                    }
                if (next.empty()) break;
                level = std::move(next);
            }
            return out;
        }
        case TermKind::Conv: {
            for (auto& g : glang_rec(t->left, budget, sigma)) push_unique(out, seen, converse(g));
            return out;
        }
        case TermKind::NegBot:
        case TermKind::NegTop:
            throw std::invalid_argument("glang: term not in restricted syntax");
    }
    return out;
}

}  // namespace

std::vector<Graph> glang(const TermPtr& t, int budget, const Alphabet& sigma) {
    return glang_rec(t, budget, sigma);
}

Graph graph_of_word(const Word& w, const Alphabet& sigma) {
    const int n = static_cast<int>(w.size());
    Graph g(sigma, n + 1, 0, n);
    for (int i = 0; i < n; ++i) {
        SignedLetter x = w[static_cast<size_t>(i)];
        if (x.is_id(sigma)) throw std::invalid_argument("graph_of_word: words exclude the identity letter");
        Label l = x.graph_label(sigma);
        if (x.conversed(sigma))
            g.label(l).set(i + 1, i);
        else
            g.label(l).set(i, i + 1);
    }
    return g;
}

Relation equivalence_closure(const Relation& r) { return r.equivalence_closure(); }

Graph quotient(const Graph& g) {
    Relation e = g.id().equivalence_closure();
    std::vector<int> cls(static_cast<size_t>(g.size()), -1);
    int k = 0;
    for (int v = 0; v < g.size(); ++v) {
        if (cls[static_cast<size_t>(v)] != -1) continue;
        for (int u = v; u < g.size(); ++u)
            if (e.test(v, u)) cls[static_cast<size_t>(u)] = k;
        ++k;
    }
    Graph out(g.sigma(), k, cls[static_cast<size_t>(g.source())], cls[static_cast<size_t>(g.target())]);
    for (int l = 0; l < g.label_count(); ++l)
        for (auto [i, j] : g.label(Label{l}).pairs())
            out.label(Label{l}).set(cls[static_cast<size_t>(i)], cls[static_cast<size_t>(j)]);
    return out;
}

bool is_consistent(const Graph& g) {
    Relation e = g.id().equivalence_closure();
    const int k = static_cast<int>(g.sigma().size());
    for (int a = 0; a <= k; ++a) {
        Label pos = a < k ? Label::pos(a) : Label::id(g.sigma());
        Relation cp = e.compose(g.label(pos)).compose(e);
        Relation cn = e.compose(g.label(pos.bar())).compose(e);
        if (!(cp & cn).empty()) return false;
    }
    return true;
}

bool is_edge_saturated(const Graph& g) {
    if (!is_consistent(g)) return false;
    const int k = static_cast<int>(g.sigma().size());
    Relation full = Relation::full(g.size());
    for (int a = 0; a <= k; ++a) {
        Label pos = a < k ? Label::pos(a) : Label::id(g.sigma());
        if (!((g.label(pos) | g.label(pos.bar())) == full)) return false;
    }
    return g.id() == g.id().equivalence_closure();
}

void for_each_partition(int n, const std::function<void(const std::vector<int>&, int)>& f) {
    if (n <= 0) return;
    std::vector<int> rgs(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int i, int max_used) -> void {
        if (i == n) {
            f(rgs, max_used + 1);
            return;
        }
        for (int c = 0; c <= max_used + 1; ++c) {
            rgs[static_cast<size_t>(i)] = c;
            self(self, i + 1, std::max(max_used, c));
        }
    };
    rec(rec, 1, 0);
}

// ---------------------------------------------------------------------------
// Saturations
// ---------------------------------------------------------------------------

namespace {

// Per-atom class-pair sign constraints of a partitioned graph: +1 forced
// positive, -1 forced complemented, 0 free. Returns false on conflict.
bool forced_signs(const Graph& g, const std::vector<int>& cls, int k, std::vector<std::vector<int>>& sign) {
    const int atoms = static_cast<int>(g.sigma().size());
    sign.assign(static_cast<size_t>(atoms), std::vector<int>(static_cast<size_t>(k * k), 0));
    for (int a = 0; a < atoms; ++a) {
        for (auto [i, j] : g.pos(a).pairs()) {
            int& s = sign[static_cast<size_t>(a)][static_cast<size_t>(
                cls[static_cast<size_t>(i)] * k + cls[static_cast<size_t>(j)])];
            if (s == -1) return false;
            s = 1;
        }
        for (auto [i, j] : g.neg(a).pairs()) {
            int& s = sign[static_cast<size_t>(a)][static_cast<size_t>(
                cls[static_cast<size_t>(i)] * k + cls[static_cast<size_t>(j)])];
            if (s == 1) return false;
            s = -1;
        }
    }
    return true;
}

// A partition is admissible when it merges all identity edges and no
// complemented-identity edge.
bool partition_admissible(const Graph& g, const std::vector<int>& cls) {
    for (auto [i, j] : g.id().pairs())
        if (cls[static_cast<size_t>(i)] != cls[static_cast<size_t>(j)]) return false;
    for (auto [i, j] : g.neg_id().pairs())
        if (cls[static_cast<size_t>(i)] == cls[static_cast<size_t>(j)]) return false;
    return true;
}

}  // namespace

std::vector<Graph> saturations(const Graph& g) {
    std::vector<Graph> out;
    if (!is_consistent(g)) return out;
    const int n = g.size();
    const int atoms = static_cast<int>(g.sigma().size());
    for_each_partition(n, [&](const std::vector<int>& cls, int k) {
        if (!partition_admissible(g, cls)) return;
        std::vector<std::vector<int>> sign;
        if (!forced_signs(g, cls, k, sign)) return;
        std::vector<std::pair<int, int>> free_bits;  // (atom, class pair)
        for (int a = 0; a < atoms; ++a)
            for (int p = 0; p < k * k; ++p)
                if (sign[static_cast<size_t>(a)][static_cast<size_t>(p)] == 0) free_bits.emplace_back(a, p);
        if (free_bits.size() > 24)
            throw std::invalid_argument("saturations: free choice space too large to materialize");
        Relation part(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (cls[static_cast<size_t>(i)] == cls[static_cast<size_t>(j)]) part.set(i, j);
        for (uint64_t v = 0; v < (1ull << free_bits.size()); ++v) {
            auto s = sign;
            for (size_t b = 0; b < free_bits.size(); ++b)
                s[static_cast<size_t>(free_bits[b].first)][static_cast<size_t>(free_bits[b].second)] =
                    ((v >> (free_bits.size() - 1 - b)) & 1u) ? 1 : -1;
            Graph sat(g.sigma(), n, g.source(), g.target());
            sat.id() = part;
            sat.neg_id() = part.complement();
            for (int a = 0; a < atoms; ++a)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        int sg = s[static_cast<size_t>(a)][static_cast<size_t>(
                            cls[static_cast<size_t>(i)] * k + cls[static_cast<size_t>(j)])];
                        if (sg > 0)
                            sat.pos(a).set(i, j);
                        else
                            sat.neg(a).set(i, j);
                    }
            out.push_back(std::move(sat));
        }
    });
    return out;
}

std::vector<Graph> qs(const Graph& g) {
    std::vector<Graph> out;
    for (const Graph& s : saturations(g)) out.push_back(quotient(s));
    return out;
}

PointedStructure structure_of(const Graph& g) {
    if (!is_edge_saturated(g)) throw std::invalid_argument("structure_of: graph is not edge-saturated");
    if (!(g.id() == Relation::identity(g.size())))
        throw std::invalid_argument("structure_of: identity is not the diagonal; quotient first");
    Structure m(g.sigma(), g.size());
    for (size_t a = 0; a < g.sigma().size(); ++a) {
        m.base(static_cast<int>(a)) = g.label(Label::pos(static_cast<int>(a)));
        if (!(g.label(Label::neg(static_cast<int>(a))) == m.base(static_cast<int>(a)).complement()))
            throw std::invalid_argument("structure_of: complemented labels are incoherent");
    }
    if (!(g.neg_id() == Relation::identity(g.size()).complement()))
        throw std::invalid_argument("structure_of: complemented identity is incoherent");
    return PointedStructure{std::move(m), g.source(), g.target()};
}

std::vector<Graph> dedup_up_to_iso(const std::vector<Graph>& graphs) {
    std::vector<Graph> out;
    std::set<std::string> seen;
    for (const Graph& g : graphs)
        if (seen.insert(g.canonical_encoding()).second) out.push_back(g);
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.size();
    j["source"] = g.source();
    j["target"] = g.target();
    nlohmann::json labels = nlohmann::json::object();
    for (int l = 0; l < g.label_count(); ++l) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto [i, k] : g.label(Label{l}).pairs()) arr.push_back({i, k});
        labels[label_name(Label{l}, g.sigma())] = std::move(arr);
    }
    j["labels"] = std::move(labels);
    return j.dump();
}

Graph graph_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    std::set<std::string> names;
    for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it) {
        std::string key = it.key();
        if (key == "1" || key == "!1") continue;
        if (!key.empty() && key.front() == '!') key.erase(key.begin());
        names.insert(key);
    }
    Alphabet sigma{std::vector<std::string>(names.begin(), names.end())};
    Graph g(sigma, n, j.at("source").get<int>(), j.at("target").get<int>());
    for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it) {
        std::string key = it.key();
        Label l{0};
        if (key == "1")
            l = Label::id(sigma);
        else if (key == "!1")
            l = Label::neg_id(sigma);
        else if (!key.empty() && key.front() == '!')
            l = Label::neg(*sigma.index(key.substr(1)));
        else
            l = Label::pos(*sigma.index(key));
        for (const auto& pair : it.value()) g.label(l).set(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    return g;
}

std::string to_dot(const Graph& g) {
    std::string out = "digraph G {\n  rankdir=LR;\n  __src [shape=none,label=\"\"];\n  __tgt [shape=none,label=\"\"];\n";
    for (int v = 0; v < g.size(); ++v) out += "  v" + std::to_string(v) + " [shape=circle];\n";
    out += "  __src -> v" + std::to_string(g.source()) + ";\n";
    out += "  v" + std::to_string(g.target()) + " -> __tgt;\n";
    for (int l = 0; l < g.label_count(); ++l)
        for (auto [i, j] : g.label(Label{l}).pairs())
            out += "  v" + std::to_string(i) + " -> v" + std::to_string(j) + " [label=\"" +
                   label_name(Label{l}, g.sigma()) + "\"];\n";
    out += "}\n";
    return out;
}

}  // namespace ecor
