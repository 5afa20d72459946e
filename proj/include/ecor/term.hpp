#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ecor {

/// Finite ordered set of atom names.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }
    const std::string& name(int i) const { return names_.at(static_cast<size_t>(i)); }
    std::optional<int> index(std::string_view name) const;
    bool contains(std::string_view name) const { return index(name).has_value(); }
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> names_;
};

/// Node kinds of the term AST. The first twelve form the restricted syntax
/// (converse on variable leaves only, complement on atoms and identity);
/// Conv/NegBot/NegTop may appear in extended input and are eliminated by
/// converse_normal_form().
enum class TermKind {
    Var,
    NegVar,
    ConvVar,
    ConvNegVar,
    Id,
    NegId,
    Bot,
    Top,
    Comp,
    Union,
    Inter,
    Star,
    Conv,
    NegBot,
    NegTop,
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable term node. Build through the factory functions below.
class Term {
public:
    TermKind kind;
    std::string atom;  // leaf kinds Var/NegVar/ConvVar/ConvNegVar only
    TermPtr left;      // Comp/Union/Inter/Star/Conv
    TermPtr right;     // Comp/Union/Inter only

    Term(TermKind k, std::string a, TermPtr l, TermPtr r)
        : kind(k), atom(std::move(a)), left(std::move(l)), right(std::move(r)) {}
};

TermPtr make_var(std::string atom);
TermPtr make_neg_var(std::string atom);
TermPtr make_conv_var(std::string atom);
TermPtr make_conv_neg_var(std::string atom);
TermPtr make_id();
TermPtr make_neg_id();
TermPtr make_bot();
TermPtr make_top();
TermPtr make_neg_bot();
TermPtr make_neg_top();
TermPtr make_comp(TermPtr l, TermPtr r);
TermPtr make_union(TermPtr l, TermPtr r);
TermPtr make_inter(TermPtr l, TermPtr r);
TermPtr make_star(TermPtr t);
TermPtr make_conv(TermPtr t);

bool equal(const TermPtr& a, const TermPtr& b);

/// Operator occurrences of a term.
struct Fragment {
    bool has_star = false;
    bool has_inter = false;
    bool has_negvar = false;
    bool has_negid = false;
    bool has_conv = false;
    bool has_top = false;
};

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string& what, size_t p) : std::runtime_error(what), pos(p) {}
};

enum class TermSyntax {
    Strict,    // complement on atoms and 1 only, converse on (possibly complemented) atoms
    Extended,  // additionally -0, -T and converse on arbitrary subterms
};

/// Parses the ASCII term grammar: atoms [a-z][a-z0-9_]*, `1` identity,
/// `0` bottom, `T` top, `-x` complement, `x^` converse, `;` composition,
/// `&` intersection, `|` union, `x*` star, parentheses. Precedence, tightest
/// first: postfix `*`/`^`, prefix `-`, `;`, `&`, `|`; binaries associate left.
/// With a null alphabet the atom set is inferred; otherwise unknown atoms are
/// rejected.
TermPtr parse(std::string_view text, TermSyntax syntax = TermSyntax::Strict,
              const Alphabet* sigma = nullptr);

std::string render(const TermPtr& t);

/// Pushes converse to the leaves and removes complemented 0/T; the result is
/// in the restricted syntax and denotes the same relation on every structure.
TermPtr converse_normal_form(const TermPtr& t);

/// Number of symbol occurrences.
int term_size(const TermPtr& t);

Fragment fragment_of(const TermPtr& t);

/// Involution a <-> -a, 1 <-> -1, 0 <-> T on leaf terms.
TermPtr bar_dual(const TermPtr& leaf);

/// Replaces every T node by (a | -a).
TermPtr replace_top(const TermPtr& t, const std::string& atom);

/// Atom names occurring in t, sorted and deduplicated.
std::vector<std::string> atoms_of(const TermPtr& t);

/// Union of the atoms of several terms as an alphabet.
Alphabet infer_alphabet(const std::vector<TermPtr>& terms);

/// True when t uses only the restricted syntax.
bool is_strict(const TermPtr& t);

}  // namespace ecor
