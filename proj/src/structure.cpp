#include "ecor/structure.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <thread>

#include <json.hpp>

namespace ecor {

Relation::Relation(int n) : n_(n) {
    if (n < 1 || n > kMaxVertices) throw std::invalid_argument("relation: vertex count out of range");
    mask_ = (n == 64) ? ~0ull : ((1ull << n) - 1);
    rows_.assign(static_cast<size_t>(n), 0);
}

Relation Relation::identity(int n) {
    Relation r(n);
    for (int i = 0; i < n; ++i) r.rows_[static_cast<size_t>(i)] = 1ull << i;
    return r;
}

Relation Relation::full(int n) {
    Relation r(n);
    for (auto& row : r.rows_) row = r.mask_;
    return r;
}

void Relation::set(int i, int j, bool v) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("relation: pair out of range");
    if (v)
        rows_[static_cast<size_t>(i)] |= 1ull << j;
    else
        rows_[static_cast<size_t>(i)] &= ~(1ull << j);
}

Relation& Relation::operator|=(const Relation& o) {
    for (size_t i = 0; i < rows_.size(); ++i) rows_[i] |= o.rows_[i];
    return *this;
}

Relation& Relation::operator&=(const Relation& o) {
    for (size_t i = 0; i < rows_.size(); ++i) rows_[i] &= o.rows_[i];
    return *this;
}

Relation Relation::operator|(const Relation& o) const {
    Relation r = *this;
    r |= o;
    return r;
}

Relation Relation::operator&(const Relation& o) const {
    Relation r = *this;
    r &= o;
    return r;
}

Relation Relation::complement() const {
    Relation r(n_);
    for (size_t i = 0; i < rows_.size(); ++i) r.rows_[i] = ~rows_[i] & mask_;
    return r;
}

Relation Relation::converse() const {
    Relation r(n_);
    for (int i = 0; i < n_; ++i) {
        uint64_t row = rows_[static_cast<size_t>(i)];
        while (row) {
            int j = std::countr_zero(row);
            row &= row - 1;
            r.rows_[static_cast<size_t>(j)] |= 1ull << i;
        }
    }
    return r;
}

Relation Relation::compose(const Relation& o) const {
    Relation r(n_);
    for (int i = 0; i < n_; ++i) {
        uint64_t row = rows_[static_cast<size_t>(i)];
        uint64_t acc = 0;
        while (row) {
            int j = std::countr_zero(row);
            row &= row - 1;
            acc |= o.rows_[static_cast<size_t>(j)];
        }
        r.rows_[static_cast<size_t>(i)] = acc;
    }
    return r;
}

Relation Relation::star() const {
    Relation s = *this | identity(n_);
    for (;;) {
        Relation next = s.compose(s) | s;
        if (next == s) return s;
        s = next;
    }
}

Relation Relation::equivalence_closure() const {
    return (*this | converse()).star();
}

bool Relation::subset_of(const Relation& o) const {
    for (size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i] & ~o.rows_[i]) return false;
    return true;
}

bool Relation::empty() const {
    for (uint64_t row : rows_)
        if (row) return false;
    return true;
}

int Relation::count() const {
    int c = 0;
    for (uint64_t row : rows_) c += std::popcount(row);
    return c;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i) {
        uint64_t row = rows_[static_cast<size_t>(i)];
        while (row) {
            int j = std::countr_zero(row);
            row &= row - 1;
            out.emplace_back(i, j);
        }
    }
    return out;
}

Structure::Structure(Alphabet sigma, int n) : sigma_(std::move(sigma)), n_(n) {
    base_.assign(sigma_.size(), Relation(n));
}

const Relation& Structure::base(std::string_view name) const {
    auto idx = sigma_.index(name);
    if (!idx) throw std::invalid_argument("structure: unknown atom '" + std::string(name) + "'");
    return base_[static_cast<size_t>(*idx)];
}

Relation eval(const Structure& m, const TermPtr& t) {
    const int n = m.size();
    switch (t->kind) {
        case TermKind::Var: return m.base(t->atom);
        case TermKind::NegVar: return m.base(t->atom).complement();
        case TermKind::ConvVar: return m.base(t->atom).converse();
        case TermKind::ConvNegVar: return m.base(t->atom).complement().converse();
        case TermKind::Id: return Relation::identity(n);
        case TermKind::NegId: return Relation::identity(n).complement();
        case TermKind::Bot: return Relation(n);
        case TermKind::Top: return Relation::full(n);
        case TermKind::NegBot: return Relation::full(n);
        case TermKind::NegTop: return Relation(n);
        case TermKind::Comp: return eval(m, t->left).compose(eval(m, t->right));
        case TermKind::Union: return eval(m, t->left) | eval(m, t->right);
        case TermKind::Inter: return eval(m, t->left) & eval(m, t->right);
        case TermKind::Star: return eval(m, t->left).star();
        case TermKind::Conv: return eval(m, t->left).converse();
    }
    throw std::logic_error("eval: unreachable");
}

bool holds(const PointedStructure& p, const TermPtr& t) {
    return eval(p.m, t).test(p.source, p.target);
}

bool models_equation(const Structure& m, const TermPtr& lhs, const TermPtr& rhs) {
    return eval(m, lhs) == eval(m, rhs);
}

// ---------------------------------------------------------------------------
// Enumeration and the brute-force oracle
// ---------------------------------------------------------------------------

StructureEnumerator::StructureEnumerator(Alphabet sigma, int max_n)
    : sigma_(std::move(sigma)), max_n_(max_n) {
    if (max_n < 1) throw std::invalid_argument("enumerate_structures: max_n must be >= 1");
    n_ = 1;
    bits_.assign(sigma_.size() * 1, false);
}

std::optional<Structure> StructureEnumerator::next() {
    for (;;) {
        if (n_ > max_n_) return std::nullopt;
        if (!fresh_level_) {
            // The bitstring is an odometer; the last position is least
            // significant so the scan is lexicographic.
            size_t i = bits_.size();
            while (i > 0 && bits_[i - 1]) bits_[--i] = false;
            if (i == 0) {
                ++n_;
                if (n_ > max_n_) return std::nullopt;
                bits_.assign(sigma_.size() * static_cast<size_t>(n_ * n_), false);
            } else {
                bits_[i - 1] = true;
            }
        }
        fresh_level_ = false;
        Structure m(sigma_, n_);
        size_t p = 0;
        for (size_t a = 0; a < sigma_.size(); ++a)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j, ++p)
                    if (bits_[p]) m.base(static_cast<int>(a)).set(i, j);
        return m;
    }
}

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("ECOR_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

namespace {

// First violating (source, target, direction) in a fixed structure, scanning
// pairs row-major and testing direction <= before >=.
std::optional<Refutation> check_structure(const Structure& m, const Relation& l, const Relation& r,
                                          QueryRelation rel) {
    for (int i = 0; i < m.size(); ++i) {
        for (int j = 0; j < m.size(); ++j) {
            if (l.test(i, j) && !r.test(i, j)) return Refutation{{m, i, j}, Direction::LeftToRight};
            if (rel == QueryRelation::Equal && r.test(i, j) && !l.test(i, j))
                return Refutation{{m, i, j}, Direction::RightToLeft};
        }
    }
    return std::nullopt;
}

Structure decode_structure(const Alphabet& sigma, int n, uint64_t v, int total_bits) {
    Structure m(sigma, n);
    int p = 0;
    for (size_t a = 0; a < sigma.size(); ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++p)
                if ((v >> (total_bits - 1 - p)) & 1u) m.base(static_cast<int>(a)).set(i, j);
    return m;
}

}  // namespace

std::optional<Refutation> brute_force_refute(const TermPtr& lhs, const TermPtr& rhs, int max_n,
                                             QueryRelation rel) {
    Alphabet sigma = infer_alphabet({lhs, rhs});
    for (int n = 1; n <= max_n; ++n) {
        const int total_bits = static_cast<int>(sigma.size()) * n * n;
        if (total_bits > 62) throw std::invalid_argument("brute_force_refute: search space too large");
        const uint64_t space = 1ull << total_bits;
        int workers = worker_count();
        if (workers > 1 && space >= (1u << 16)) {
            std::atomic<uint64_t> best{UINT64_MAX};
            std::vector<std::optional<Refutation>> found(static_cast<size_t>(workers));
            std::vector<uint64_t> found_at(static_cast<size_t>(workers), UINT64_MAX);
            std::vector<std::thread> pool;
            const uint64_t chunk = (space + static_cast<uint64_t>(workers) - 1) / static_cast<uint64_t>(workers);
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    const uint64_t lo = static_cast<uint64_t>(w) * chunk;
                    const uint64_t hi = std::min(space, lo + chunk);
                    for (uint64_t v = lo; v < hi; ++v) {
                        if (v >= best.load(std::memory_order_relaxed)) break;
                        Structure m = decode_structure(sigma, n, v, total_bits);
                        auto hit = check_structure(m, eval(m, lhs), eval(m, rhs), rel);
                        if (hit) {
                            found[static_cast<size_t>(w)] = std::move(hit);
                            found_at[static_cast<size_t>(w)] = v;
                            uint64_t cur = best.load(std::memory_order_relaxed);
                            while (v < cur && !best.compare_exchange_weak(cur, v)) {
                            }
                            break;
                        }
                    }
                });
            }
            for (auto& th : pool) th.join();
            uint64_t best_v = UINT64_MAX;
            std::optional<Refutation> result;
            for (size_t w = 0; w < found.size(); ++w) {
                if (found[w] && found_at[w] < best_v) {
                    best_v = found_at[w];
                    result = found[w];
                }
            }
            if (result) return result;
        } else {
            for (uint64_t v = 0; v < space; ++v) {
                Structure m = decode_structure(sigma, n, v, total_bits);
                auto hit = check_structure(m, eval(m, lhs), eval(m, rhs), rel);
                if (hit) return hit;
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string to_json(const PointedStructure& p, bool include_points) {
    nlohmann::json j;
    j["n"] = p.m.size();
    nlohmann::json rels = nlohmann::json::object();
    for (size_t a = 0; a < p.m.sigma().size(); ++a) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto [i, k] : p.m.base(static_cast<int>(a)).pairs()) arr.push_back({i, k});
        rels[p.m.sigma().name(static_cast<int>(a))] = std::move(arr);
    }
    j["relations"] = std::move(rels);
    if (include_points) {
        j["source"] = p.source;
        j["target"] = p.target;
    }
    return j.dump();
}

PointedStructure pointed_structure_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    std::vector<std::string> names;
    for (auto it = j.at("relations").begin(); it != j.at("relations").end(); ++it)
        names.push_back(it.key());
    Structure m(Alphabet(names), n);
    for (auto it = j.at("relations").begin(); it != j.at("relations").end(); ++it) {
        int atom = *m.sigma().index(it.key());
        for (const auto& pair : it.value()) {
            int i = pair.at(0).get<int>();
            int k = pair.at(1).get<int>();
            if (i < 0 || i >= n || k < 0 || k >= n)
                throw std::invalid_argument("structure json: pair out of range");
            m.base(atom).set(i, k);
        }
    }
    PointedStructure p{std::move(m), 0, 0};
    if (j.contains("source")) p.source = j.at("source").get<int>();
    if (j.contains("target")) p.target = j.at("target").get<int>();
    if (p.source < 0 || p.source >= n || p.target < 0 || p.target >= n)
        throw std::invalid_argument("structure json: source/target out of range");
    return p;
}

}  // namespace ecor
