#include "ecor/cfg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace ecor {

namespace {

bool valid_atom_name(const std::string& s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

std::string mangle(const std::string& s) {
    std::string out;
    for (char c : s) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')
            out += c;
        else if (c >= 'A' && c <= 'Z')
            out += static_cast<char>(c - 'A' + 'a');
        else
            out += '_';
    }
    if (out.empty() || out[0] < 'a' || out[0] > 'z') out = "s_" + out;
    return out;
}

}  // namespace

Cfg::Cfg(std::vector<std::string> terminals, std::vector<std::string> nonterminals,
         std::vector<CfgRule> rules, std::string start)
    : terminals_(std::move(terminals)),
      nonterminals_(std::move(nonterminals)),
      rules_(std::move(rules)),
      start_(std::move(start)) {
    std::set<std::string> ts(terminals_.begin(), terminals_.end());
    std::set<std::string> ns(nonterminals_.begin(), nonterminals_.end());
    if (ts.size() != terminals_.size() || ns.size() != nonterminals_.size())
        throw std::invalid_argument("cfg: duplicate symbol");
    for (const auto& t : ts)
        if (ns.count(t)) throw std::invalid_argument("cfg: symbol '" + t + "' is both terminal and nonterminal");
    if (!ns.count(start_)) throw std::invalid_argument("cfg: start symbol is not a nonterminal");
    for (const CfgRule& r : rules_) {
        if (!ns.count(r.head)) throw std::invalid_argument("cfg: rule head '" + r.head + "' undeclared");
        for (const auto& s : r.body)
            if (!ts.count(s) && !ns.count(s))
                throw std::invalid_argument("cfg: rule symbol '" + s + "' undeclared");
    }
    // Symbol-to-atom mapping, terminals first, de-collided deterministically.
    std::set<std::string> used;
    std::vector<std::string> names;
    auto add = [&](const std::string& sym) {
        std::string base = valid_atom_name(sym) ? sym : mangle(sym);
        std::string name = base;
        for (int i = 2; used.count(name); ++i) name = base + "_" + std::to_string(i);
        used.insert(name);
        atom_map_.emplace_back(sym, name);
        names.push_back(name);
    };
    for (const auto& t : terminals_) add(t);
    for (const auto& n : nonterminals_) add(n);
    symbol_alphabet_ = Alphabet(names);
}

bool Cfg::is_terminal(const std::string& s) const {
    return std::find(terminals_.begin(), terminals_.end(), s) != terminals_.end();
}

bool Cfg::is_nonterminal(const std::string& s) const {
    return std::find(nonterminals_.begin(), nonterminals_.end(), s) != nonterminals_.end();
}

const std::string& Cfg::atom_for(const std::string& symbol) const {
    for (const auto& [sym, atom] : atom_map_)
        if (sym == symbol) return atom;
    throw std::invalid_argument("cfg: undeclared symbol '" + symbol + "'");
}

Cfg parse_grammar(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string start;
    std::vector<CfgRule> rules;
    std::set<std::string> terminals, nonterminals;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (tokens[0] == "start:") {
            if (tokens.size() != 2) throw std::invalid_argument("grammar: malformed start header");
            start = tokens[1];
            continue;
        }
        if (tokens.size() < 2 || tokens[1] != "->")
            throw std::invalid_argument("grammar: expected 'X -> alpha' in line: " + line);
        CfgRule r;
        r.head = tokens[0];
        nonterminals.insert(r.head);
        for (size_t i = 2; i < tokens.size(); ++i) {
            if (tokens[i] == "eps") continue;
            r.body.push_back(tokens[i]);
            if (std::isupper(static_cast<unsigned char>(tokens[i][0])))
                nonterminals.insert(tokens[i]);
            else
                terminals.insert(tokens[i]);
        }
        rules.push_back(std::move(r));
    }
    if (rules.empty()) throw std::invalid_argument("grammar: no rules");
    if (start.empty()) start = rules[0].head;
    return Cfg(std::vector<std::string>(terminals.begin(), terminals.end()),
               std::vector<std::string>(nonterminals.begin(), nonterminals.end()), std::move(rules),
               std::move(start));
}

// ---------------------------------------------------------------------------
// Canonical model
// ---------------------------------------------------------------------------

PointedStructure canonical_model(const Cfg& c, const CfgWord& w) {
    const int m = static_cast<int>(w.size());
    const int n = m + 1;
    Structure model(c.symbol_alphabet(), n);
    for (int i = 0; i < m; ++i) {
        if (!c.is_terminal(w[static_cast<size_t>(i)]))
            throw std::invalid_argument("canonical_model: word symbol '" + w[static_cast<size_t>(i)] +
                                        "' is not a terminal");
        model.base(*model.sigma().index(c.atom_for(w[static_cast<size_t>(i)]))).set(i, i + 1);
    }
    // Least fixpoint over the rules: the body relation is the composition of
    // its symbols' current relations.
    for (bool changed = true; changed;) {
        changed = false;
        for (const CfgRule& r : c.rules()) {
            Relation body = Relation::identity(n);
            for (const auto& sym : r.body)
                body = body.compose(model.base(*model.sigma().index(c.atom_for(sym))));
            int head = *model.sigma().index(c.atom_for(r.head));
            Relation merged = model.base(head) | body;
            if (!(merged == model.base(head))) {
                model.base(head) = std::move(merged);
                changed = true;
            }
        }
    }
    return PointedStructure{std::move(model), 0, m};
}

bool derives(const Cfg& c, const std::string& nonterminal, const CfgWord& w) {
    if (!c.is_nonterminal(nonterminal))
        throw std::invalid_argument("derives: '" + nonterminal + "' is not a nonterminal");
    PointedStructure p = canonical_model(c, w);
    return p.m.base(c.atom_for(nonterminal)).test(0, static_cast<int>(w.size()));
}

// ---------------------------------------------------------------------------
// CYK oracle
// ---------------------------------------------------------------------------

namespace {

struct CnfGrammar {
    // Indexed nonterminals; rules X -> t and X -> Y Z.
    std::map<std::string, int> index;
    std::vector<std::vector<std::string>> term_rules;        // per NT: terminals
    std::vector<std::vector<std::pair<int, int>>> bin_rules; // per NT: pairs
    int start = 0;
    bool start_nullable = false;
};

CnfGrammar to_cnf(const Cfg& c) {
    // Working rule set over string symbols; fresh names use characters that
    // cannot clash with declared symbols.
    std::vector<CfgRule> rules = c.rules();
    std::set<std::string> nts(c.nonterminals().begin(), c.nonterminals().end());
    int fresh = 0;
    auto fresh_nt = [&] { return "@" + std::to_string(fresh++); };

    std::string start0 = fresh_nt();
    nts.insert(start0);
    rules.push_back({start0, {c.start()}});

    // TERM: terminals out of long bodies.
    std::map<std::string, std::string> term_nt;
    for (CfgRule& r : rules) {
        if (r.body.size() < 2) continue;
        for (auto& sym : r.body) {
            if (!c.is_terminal(sym)) continue;
            auto it = term_nt.find(sym);
            if (it == term_nt.end()) {
                std::string nt = fresh_nt();
                nts.insert(nt);
                it = term_nt.emplace(sym, nt).first;
            }
            sym = it->second;
        }
    }
    for (const auto& [t, nt] : term_nt) rules.push_back({nt, {t}});

    // BIN: split long bodies.
    std::vector<CfgRule> binned;
    for (const CfgRule& r : rules) {
        if (r.body.size() <= 2) {
            binned.push_back(r);
            continue;
        }
        std::string head = r.head;
        for (size_t i = 0; i + 2 < r.body.size(); ++i) {
            std::string nt = fresh_nt();
            nts.insert(nt);
            binned.push_back({head, {r.body[i], nt}});
            head = nt;
        }
        binned.push_back({head, {r.body[r.body.size() - 2], r.body.back()}});
    }
    rules = std::move(binned);

    // DEL: nullable computation and epsilon elimination.
    std::set<std::string> nullable;
    for (bool changed = true; changed;) {
        changed = false;
        for (const CfgRule& r : rules) {
            if (nullable.count(r.head)) continue;
            bool all = true;
            for (const auto& s : r.body)
                if (!nullable.count(s)) {
                    all = false;
                    break;
                }
            if (all) {
                nullable.insert(r.head);
                changed = true;
            }
        }
    }
    std::set<std::pair<std::string, std::vector<std::string>>> expanded;
    for (const CfgRule& r : rules) {
        std::vector<std::vector<std::string>> variants{{}};
        for (const auto& s : r.body) {
            std::vector<std::vector<std::string>> next;
            for (const auto& v : variants) {
                auto with = v;
                with.push_back(s);
                next.push_back(std::move(with));
                if (nts.count(s) && nullable.count(s)) next.push_back(v);
            }
            variants = std::move(next);
        }
        for (auto& v : variants)
            if (!v.empty()) expanded.insert({r.head, std::move(v)});
    }

    // UNIT: closure over single-nonterminal bodies.
    std::map<std::string, std::set<std::string>> unit;
    for (const auto& nt : nts) unit[nt].insert(nt);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [head, body] : expanded) {
            if (body.size() != 1 || !nts.count(body[0])) continue;
            for (const auto& [x, reach] : unit) {
                if (!reach.count(head)) continue;
                if (unit[x].insert(body[0]).second) changed = true;
            }
        }
    }

    CnfGrammar g;
    for (const auto& nt : nts) {
        g.index.emplace(nt, static_cast<int>(g.index.size()));
    }
    g.term_rules.assign(g.index.size(), {});
    g.bin_rules.assign(g.index.size(), {});
    for (const auto& [x, reach] : unit) {
        int xi = g.index[x];
        for (const auto& y : reach) {
            for (const auto& [head, body] : expanded) {
                if (head != y) continue;
                if (body.size() == 1 && !nts.count(body[0]))
                    g.term_rules[static_cast<size_t>(xi)].push_back(body[0]);
                else if (body.size() == 2)
                    g.bin_rules[static_cast<size_t>(xi)].emplace_back(g.index[body[0]], g.index[body[1]]);
            }
        }
    }
    g.start = g.index[start0];
    g.start_nullable = nullable.count(start0) > 0;
    return g;
}

}  // namespace

bool cyk_derives(const Cfg& c, const CfgWord& w) {
    CnfGrammar g = to_cnf(c);
    const int n = static_cast<int>(w.size());
    if (n == 0) return g.start_nullable;
    const int k = static_cast<int>(g.index.size());
    // table[len][i][X]: X derives w[i, i+len)
    std::vector<std::vector<std::vector<bool>>> table(
        static_cast<size_t>(n + 1),
        std::vector<std::vector<bool>>(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(k), false)));
    for (int i = 0; i < n; ++i)
        for (int x = 0; x < k; ++x)
            for (const auto& t : g.term_rules[static_cast<size_t>(x)])
                if (t == w[static_cast<size_t>(i)]) table[1][static_cast<size_t>(i)][static_cast<size_t>(x)] = true;
    for (int len = 2; len <= n; ++len)
        for (int i = 0; i + len <= n; ++i)
            for (int x = 0; x < k; ++x)
                for (auto [y, z] : g.bin_rules[static_cast<size_t>(x)]) {
                    bool hit = false;
                    for (int split = 1; split < len && !hit; ++split)
                        hit = table[static_cast<size_t>(split)][static_cast<size_t>(i)][static_cast<size_t>(y)] &&
                              table[static_cast<size_t>(len - split)][static_cast<size_t>(i + split)]
                                   [static_cast<size_t>(z)];
                    if (hit) {
                        table[static_cast<size_t>(len)][static_cast<size_t>(i)][static_cast<size_t>(x)] = true;
                        break;
                    }
                }
    return table[static_cast<size_t>(n)][0][static_cast<size_t>(g.start)];
}

// ---------------------------------------------------------------------------
// Reduction to the equational theory
// ---------------------------------------------------------------------------

std::vector<std::pair<TermPtr, TermPtr>> build_gamma(const Cfg& c) {
    std::vector<std::pair<TermPtr, TermPtr>> out;
    for (const CfgRule& r : c.rules()) {
        TermPtr body = nullptr;
        for (const auto& sym : r.body) {
            TermPtr atom = make_var(c.atom_for(sym));
            body = body ? make_comp(body, atom) : atom;
        }
        if (!body) body = make_id();
        out.emplace_back(body, make_var(c.atom_for(r.head)));
    }
    return out;
}

Query hoare_encode(const std::vector<TermPtr>& hypotheses, TermPtr lhs, TermPtr rhs) {
    TermPtr acc = std::move(rhs);
    for (const TermPtr& u : hypotheses)
        acc = make_union(acc, make_comp(make_comp(make_top(), u), make_top()));
    return Query{std::move(lhs), std::move(acc), QueryRelation::LessEqual, {}};
}

Query reduce_universality(const Cfg& c) {
    if (c.terminals().empty()) throw std::invalid_argument("reduce_universality: empty terminal alphabet");
    TermPtr letters = nullptr;
    for (const auto& t : c.terminals()) {
        TermPtr atom = make_var(c.atom_for(t));
        letters = letters ? make_union(letters, atom) : atom;
    }
    TermPtr lhs = make_star(letters);
    std::vector<TermPtr> hypotheses;
    for (const auto& [body, head] : build_gamma(c))
        hypotheses.push_back(make_inter(body, make_neg_var(head->atom)));
    Query q = hoare_encode(hypotheses, lhs, make_var(c.atom_for(c.start())));
    const std::string& first = c.atom_for(c.terminals().front());
    q.lhs = replace_top(q.lhs, first);
    q.rhs = replace_top(q.rhs, first);
    return q;
}

std::pair<PointedStructure, bool> counterexample_from_word(const Cfg& c, const CfgWord& w) {
    PointedStructure model = canonical_model(c, w);
    bool violates = !derives(c, c.start(), w);
    return {std::move(model), violates};
}

}  // namespace ecor
