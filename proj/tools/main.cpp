#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ecor/cfg.hpp"
#include "ecor/decide.hpp"
#include "ecor/graph.hpp"
#include "ecor/nfa.hpp"
#include "ecor/satpath.hpp"
#include "ecor/structure.hpp"
#include "ecor/term.hpp"

namespace {

using namespace ecor;

constexpr int kExitValid = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

std::optional<Alphabet> parse_sigma(const std::string& csv) {
    if (csv.empty()) return std::nullopt;
    std::vector<std::string> names;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) names.push_back(item);
    return Alphabet(names);
}

QueryRelation parse_relation(const std::string& rel) {
    if (rel == "<=") return QueryRelation::LessEqual;
    if (rel == "=") return QueryRelation::Equal;
    throw std::invalid_argument("relation must be '<=' or '='");
}

Query build_query(const std::string& lhs, const std::string& rel, const std::string& rhs,
                  const std::optional<Alphabet>& sigma, const QueryOptions& options) {
    const Alphabet* sp = sigma ? &*sigma : nullptr;
    Query q;
    q.lhs = converse_normal_form(parse(lhs, TermSyntax::Extended, sp));
    q.rhs = converse_normal_form(parse(rhs, TermSyntax::Extended, sp));
    q.rel = parse_relation(rel);
    q.options = options;
    return q;
}

int verdict_exit(const Verdict& v) {
    switch (v.kind) {
        case VerdictKind::Valid: return kExitValid;
        case VerdictKind::Refuted: return kExitRefuted;
        case VerdictKind::Unknown: return kExitUnknown;
    }
    return kExitError;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"validity checker for relational equations with complemented atoms and star"};
    app.require_subcommand(1);

    std::string sigma_csv;
    app.add_option("--sigma", sigma_csv, "comma-separated atom alphabet (default: inferred)");

    // decide
    auto* cmd_decide = app.add_subcommand("decide", "decide an (in)equation, printing a verdict as JSON");
    std::string d_lhs, d_rel, d_rhs, d_procedure;
    QueryOptions d_opt;
    cmd_decide->add_option("lhs", d_lhs)->required();
    cmd_decide->add_option("rel", d_rel)->required();
    cmd_decide->add_option("rhs", d_rhs)->required();
    cmd_decide->add_option("--procedure", d_procedure,
                           "force an engine: starfree|graphchar|fragment|full|semi");
    cmd_decide->add_option("--budget", d_opt.semi_budget, "vertex budget of the semi-procedure");
    cmd_decide->add_option("--len-cap", d_opt.len_cap, "word-length cap of the exhaustive automaton search");

    // refute
    auto* cmd_refute = app.add_subcommand("refute", "run only the refutation semi-procedure");
    std::string r_lhs, r_rel, r_rhs;
    QueryOptions r_opt;
    cmd_refute->add_option("lhs", r_lhs)->required();
    cmd_refute->add_option("rel", r_rel)->required();
    cmd_refute->add_option("rhs", r_rhs)->required();
    cmd_refute->add_option("--budget", r_opt.semi_budget, "vertex budget");

    // oracle
    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force search for a small counterexample");
    std::string o_lhs, o_rel, o_rhs;
    int o_max_n = 3;
    cmd_oracle->add_option("lhs", o_lhs)->required();
    cmd_oracle->add_option("rel", o_rel)->required();
    cmd_oracle->add_option("rhs", o_rhs)->required();
    cmd_oracle->add_option("--max-n", o_max_n, "largest structure size to scan");

    // check-model
    auto* cmd_check = app.add_subcommand("check-model", "evaluate a term or (in)equation on a structure");
    std::string c_model;
    std::vector<std::string> c_args;
    cmd_check->add_option("--model", c_model, "structure JSON file")->required();
    cmd_check->add_option("query", c_args, "term, or: lhs rel rhs")->expected(1, 3);

    // cfg-reduce
    auto* cmd_cfg = app.add_subcommand("cfg-reduce", "emit the universality inequation of a grammar");
    std::string g_file;
    cmd_cfg->add_option("grammar", g_file, "grammar file")->required();

    // nfa-dump
    auto* cmd_nfa = app.add_subcommand("nfa-dump", "emit the automaton of an intersection-free term");
    std::string n_term;
    bool n_json = false;
    cmd_nfa->add_option("term", n_term)->required();
    cmd_nfa->add_flag("--json", n_json, "letters and transitions as JSON instead of DOT");

    // glang-dump
    auto* cmd_glang = app.add_subcommand("glang-dump", "emit the graphs of a term up to a vertex budget");
    std::string gl_term;
    int gl_budget = 6;
    bool gl_dot = false;
    cmd_glang->add_option("term", gl_term)->required();
    cmd_glang->add_option("--budget", gl_budget, "vertex budget");
    cmd_glang->add_flag("--dot", gl_dot, "DOT instead of JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        std::optional<Alphabet> sigma = parse_sigma(sigma_csv);

        if (*cmd_decide) {
            Query q = build_query(d_lhs, d_rel, d_rhs, sigma, d_opt);
            Verdict v;
            if (d_procedure.empty())
                v = decide(q);
            else if (d_procedure == "starfree")
                v = decide_starfree(q);
            else if (d_procedure == "graphchar")
                v = graph_characterization_check(q);
            else if (d_procedure == "fragment" || d_procedure == "full")
                v = decide_intersection_free(q);
            else if (d_procedure == "semi")
                v = semidecide_ecorstar(q);
            else
                throw std::invalid_argument("unknown procedure: " + d_procedure);
            std::cout << verdict_json(v) << "\n";
            return verdict_exit(v);
        }

        if (*cmd_refute) {
            Query q = build_query(r_lhs, r_rel, r_rhs, sigma, r_opt);
            Verdict v = semidecide_ecorstar(q);
            std::cout << verdict_json(v) << "\n";
            return verdict_exit(v);
        }

        if (*cmd_oracle) {
            const Alphabet* sp = sigma ? &*sigma : nullptr;
            TermPtr lhs = converse_normal_form(parse(o_lhs, TermSyntax::Extended, sp));
            TermPtr rhs = converse_normal_form(parse(o_rhs, TermSyntax::Extended, sp));
            auto r = brute_force_refute(lhs, rhs, o_max_n, parse_relation(o_rel));
            if (r) {
                Verdict v = Verdict::refuted(*r);
                std::cout << verdict_json(v) << "\n";
                return kExitRefuted;
            }
            std::cout << "{\"verdict\":\"unknown\",\"bound\":" << o_max_n << "}\n";
            return kExitUnknown;
        }

        if (*cmd_check) {
            PointedStructure p = pointed_structure_from_json(read_file(c_model));
            const Alphabet* sp = sigma ? &*sigma : nullptr;
            bool result = false;
            if (c_args.size() == 1) {
                result = holds(p, converse_normal_form(parse(c_args[0], TermSyntax::Extended, sp)));
            } else if (c_args.size() == 3) {
                TermPtr lhs = converse_normal_form(parse(c_args[0], TermSyntax::Extended, sp));
                TermPtr rhs = converse_normal_form(parse(c_args[2], TermSyntax::Extended, sp));
                if (parse_relation(c_args[1]) == QueryRelation::Equal)
                    result = models_equation(p.m, lhs, rhs);
                else
                    result = !holds(p, lhs) || holds(p, rhs);
            } else {
                throw std::invalid_argument("check-model expects a term or: lhs rel rhs");
            }
            std::cout << (result ? "{\"holds\":true}" : "{\"holds\":false}") << "\n";
            return result ? 0 : 1;
        }

        if (*cmd_cfg) {
            Cfg c = parse_grammar(read_file(g_file));
            Query q = reduce_universality(c);
            std::cout << render(q.lhs) << " <= " << render(q.rhs) << "\n";
            return 0;
        }

        if (*cmd_nfa) {
            const Alphabet* sp = sigma ? &*sigma : nullptr;
            TermPtr t = converse_normal_form(parse(n_term, TermSyntax::Extended, sp));
            Alphabet a = sigma ? *sigma : infer_alphabet({t});
            if (a.empty() && fragment_of(t).has_top) a = Alphabet({"a"});
            Nfa nfa = thompson(t, a);
            if (n_json) {
                std::cout << "{\"states\":" << nfa.states() << ",\"initial\":" << nfa.initial()
                          << ",\"final\":" << nfa.final() << "}\n";
            } else {
                std::cout << to_dot(nfa);
            }
            return 0;
        }

        if (*cmd_glang) {
            const Alphabet* sp = sigma ? &*sigma : nullptr;
            TermPtr t = converse_normal_form(parse(gl_term, TermSyntax::Extended, sp));
            Alphabet a = sigma ? *sigma : infer_alphabet({t});
            std::vector<Graph> graphs = glang(t, gl_budget, a);
            if (gl_dot) {
                for (const Graph& g : graphs) std::cout << to_dot(g);
            } else {
                std::cout << "[";
                for (size_t i = 0; i < graphs.size(); ++i)
                    std::cout << (i ? "," : "") << to_json(graphs[i]);
                std::cout << "]\n";
            }
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error at position " << e.pos << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
