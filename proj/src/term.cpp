#include "ecor/term.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ecor {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw std::invalid_argument("alphabet: empty atom name");
        if (!seen.insert(n).second) throw std::invalid_argument("alphabet: duplicate atom name '" + n + "'");
    }
}

std::optional<int> Alphabet::index(std::string_view name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

namespace {
TermPtr node(TermKind k, std::string a = {}, TermPtr l = nullptr, TermPtr r = nullptr) {
    return std::make_shared<const Term>(k, std::move(a), std::move(l), std::move(r));
}
}  // namespace

TermPtr make_var(std::string atom) { return node(TermKind::Var, std::move(atom)); }
TermPtr make_neg_var(std::string atom) { return node(TermKind::NegVar, std::move(atom)); }
TermPtr make_conv_var(std::string atom) { return node(TermKind::ConvVar, std::move(atom)); }
TermPtr make_conv_neg_var(std::string atom) { return node(TermKind::ConvNegVar, std::move(atom)); }
TermPtr make_id() { return node(TermKind::Id); }
TermPtr make_neg_id() { return node(TermKind::NegId); }
TermPtr make_bot() { return node(TermKind::Bot); }
TermPtr make_top() { return node(TermKind::Top); }
TermPtr make_neg_bot() { return node(TermKind::NegBot); }
TermPtr make_neg_top() { return node(TermKind::NegTop); }
TermPtr make_comp(TermPtr l, TermPtr r) { return node(TermKind::Comp, {}, std::move(l), std::move(r)); }
TermPtr make_union(TermPtr l, TermPtr r) { return node(TermKind::Union, {}, std::move(l), std::move(r)); }
TermPtr make_inter(TermPtr l, TermPtr r) { return node(TermKind::Inter, {}, std::move(l), std::move(r)); }
TermPtr make_star(TermPtr t) { return node(TermKind::Star, {}, std::move(t)); }
TermPtr make_conv(TermPtr t) { return node(TermKind::Conv, {}, std::move(t)); }

bool equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->atom != b->atom) return false;
    return equal(a->left, b->left) && equal(a->right, b->right);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    Parser(std::string_view text, TermSyntax syntax, const Alphabet* sigma)
        : text_(text), syntax_(syntax), sigma_(sigma) {}

    TermPtr run() {
        TermPtr t = parse_union();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return t;
    }

private:
    std::string_view text_;
    TermSyntax syntax_;
    const Alphabet* sigma_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    TermPtr parse_union() {
        TermPtr t = parse_inter();
        while (eat('|')) t = make_union(t, parse_inter());
        return t;
    }

    TermPtr parse_inter() {
        TermPtr t = parse_comp();
        while (eat('&')) t = make_inter(t, parse_comp());
        return t;
    }

    TermPtr parse_comp() {
        TermPtr t = parse_prefix();
        while (eat(';')) t = make_comp(t, parse_prefix());
        return t;
    }

    TermPtr parse_prefix() {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            TermPtr t = parse_prefix();
            return complement_of(t);
        }
        return parse_postfix();
    }

    TermPtr complement_of(const TermPtr& t) {
        switch (t->kind) {
            case TermKind::Var: return make_neg_var(t->atom);
            case TermKind::Id: return make_neg_id();
            case TermKind::Bot:
                if (syntax_ == TermSyntax::Extended) return make_neg_bot();
                break;
            case TermKind::Top:
                if (syntax_ == TermSyntax::Extended) return make_neg_top();
                break;
            default: break;
        }
        fail(syntax_ == TermSyntax::Extended
                 ? "complement may only apply to an atom, 1, 0 or T"
                 : "complement may only apply to an atom or 1");
    }

    TermPtr parse_postfix() {
        TermPtr t = parse_primary();
        for (;;) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                ++pos_;
                t = make_star(t);
            } else if (pos_ < text_.size() && text_[pos_] == '^') {
                ++pos_;
                t = converse_of(t);
            } else {
                break;
            }
        }
        return t;
    }

    TermPtr converse_of(const TermPtr& t) {
        switch (t->kind) {
            case TermKind::Var: return make_conv_var(t->atom);
            case TermKind::NegVar: return make_conv_neg_var(t->atom);
            default: break;
        }
        if (syntax_ == TermSyntax::Extended) return make_conv(t);
        fail("converse may only apply to an atom or a complemented atom");
    }

    TermPtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            TermPtr t = parse_union();
            if (!eat(')')) fail("expected ')'");
            return t;
        }
        if (c == '1') {
            ++pos_;
            return make_id();
        }
        if (c == '0') {
            ++pos_;
            return make_bot();
        }
        if (c == 'T') {
            ++pos_;
            return make_top();
        }
        if (c >= 'a' && c <= 'z') {
            size_t start = pos_;
            ++pos_;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if ((d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_')
                    ++pos_;
                else
                    break;
            }
            std::string name(text_.substr(start, pos_ - start));
            if (sigma_ && !sigma_->contains(name)) {
                pos_ = start;
                fail("unknown atom '" + name + "'");
            }
            return make_var(std::move(name));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

TermPtr parse(std::string_view text, TermSyntax syntax, const Alphabet* sigma) {
    return Parser(text, syntax, sigma).run();
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

// Binding strength used to decide parenthesization; larger binds tighter.
int level(TermKind k) {
    switch (k) {
        case TermKind::Union: return 0;
        case TermKind::Inter: return 1;
        case TermKind::Comp: return 2;
        case TermKind::NegId:
        case TermKind::NegBot:
        case TermKind::NegTop:
        case TermKind::NegVar: return 3;
        default: return 4;  // leaves and postfix forms
    }
}

void render_into(const TermPtr& t, std::string& out);

void render_child(const TermPtr& child, int parent_level, bool needs_strictly_tighter,
                  std::string& out) {
    bool parens = needs_strictly_tighter ? level(child->kind) <= parent_level
                                         : level(child->kind) < parent_level;
    if (parens) out += '(';
    render_into(child, out);
    if (parens) out += ')';
}

void render_into(const TermPtr& t, std::string& out) {
    switch (t->kind) {
        case TermKind::Var: out += t->atom; return;
        case TermKind::NegVar: out += '-'; out += t->atom; return;
        case TermKind::ConvVar: out += t->atom; out += '^'; return;
        case TermKind::ConvNegVar: out += "(-"; out += t->atom; out += ")^"; return;
        case TermKind::Id: out += '1'; return;
        case TermKind::NegId: out += "-1"; return;
        case TermKind::Bot: out += '0'; return;
        case TermKind::Top: out += 'T'; return;
        case TermKind::NegBot: out += "-0"; return;
        case TermKind::NegTop: out += "-T"; return;
        case TermKind::Comp:
            render_child(t->left, 2, false, out);
            out += ';';
            render_child(t->right, 2, true, out);
            return;
        case TermKind::Inter:
            render_child(t->left, 1, false, out);
            out += '&';
            render_child(t->right, 1, true, out);
            return;
        case TermKind::Union:
            render_child(t->left, 0, false, out);
            out += '|';
            render_child(t->right, 0, true, out);
            return;
        case TermKind::Star:
            render_child(t->left, 4, true, out);
            out += '*';
            return;
        case TermKind::Conv:
            render_child(t->left, 4, true, out);
            out += '^';
            return;
    }
}

}  // namespace

std::string render(const TermPtr& t) {
    std::string out;
    render_into(t, out);
    return out;
}

// ---------------------------------------------------------------------------
// Converse normal form
// ---------------------------------------------------------------------------

namespace {

// breve(t) is the normal form of t^; breve(breve(t)) normalizes t itself.
TermPtr breve_nf(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var: return make_conv_var(t->atom);
        case TermKind::NegVar: return make_conv_neg_var(t->atom);
        case TermKind::ConvVar: return make_var(t->atom);
        case TermKind::ConvNegVar: return make_neg_var(t->atom);
        case TermKind::Id:
        case TermKind::NegId:
        case TermKind::Bot:
        case TermKind::Top:
        case TermKind::NegBot:
        case TermKind::NegTop: return t;
        case TermKind::Comp: return make_comp(breve_nf(t->right), breve_nf(t->left));
        case TermKind::Union: return make_union(breve_nf(t->left), breve_nf(t->right));
        case TermKind::Inter: return make_inter(breve_nf(t->left), breve_nf(t->right));
        case TermKind::Star: return make_star(breve_nf(t->left));
        case TermKind::Conv: {
            // breve of u^ normalizes u without the converse swap.
            const TermPtr& u = t->left;
            switch (u->kind) {
                case TermKind::Var: return u;
                case TermKind::NegVar: return u;
                case TermKind::ConvVar: return make_conv_var(u->atom);
                case TermKind::ConvNegVar: return make_conv_neg_var(u->atom);
                case TermKind::Id:
                case TermKind::NegId:
                case TermKind::Bot:
                case TermKind::Top:
                case TermKind::NegBot:
                case TermKind::NegTop: return u;
                case TermKind::Comp:
                    return make_comp(breve_nf(make_conv(u->left)), breve_nf(make_conv(u->right)));
                case TermKind::Union:
                    return make_union(breve_nf(make_conv(u->left)), breve_nf(make_conv(u->right)));
                case TermKind::Inter:
                    return make_inter(breve_nf(make_conv(u->left)), breve_nf(make_conv(u->right)));
                case TermKind::Star: return make_star(breve_nf(make_conv(u->left)));
                case TermKind::Conv: return breve_nf(u->left);
            }
            break;
        }
    }
    throw std::logic_error("breve_nf: unreachable");
}

TermPtr drop_neg_constants(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::NegBot: return make_top();
        case TermKind::NegTop: return make_bot();
        case TermKind::Comp: return make_comp(drop_neg_constants(t->left), drop_neg_constants(t->right));
        case TermKind::Union: return make_union(drop_neg_constants(t->left), drop_neg_constants(t->right));
        case TermKind::Inter: return make_inter(drop_neg_constants(t->left), drop_neg_constants(t->right));
        case TermKind::Star: return make_star(drop_neg_constants(t->left));
        case TermKind::Conv: return make_conv(drop_neg_constants(t->left));
        default: return t;
    }
}

}  // namespace

TermPtr converse_normal_form(const TermPtr& t) {
    TermPtr r = drop_neg_constants(breve_nf(breve_nf(t)));
    if (!is_strict(r)) throw std::logic_error("converse_normal_form: result not in restricted syntax");
    return r;
}

// ---------------------------------------------------------------------------
// Measures and classification
// ---------------------------------------------------------------------------

int term_size(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::Id:
        case TermKind::Bot:
        case TermKind::Top: return 1;
        case TermKind::NegVar:
        case TermKind::NegId:
        case TermKind::NegBot:
        case TermKind::NegTop:
        case TermKind::ConvVar: return 2;
        case TermKind::ConvNegVar: return 3;
        case TermKind::Star:
        case TermKind::Conv: return 1 + term_size(t->left);
        case TermKind::Comp:
        case TermKind::Union:
        case TermKind::Inter: return 1 + term_size(t->left) + term_size(t->right);
    }
    throw std::logic_error("term_size: unreachable");
}

namespace {
void fragment_into(const TermPtr& t, Fragment& f) {
    switch (t->kind) {
        case TermKind::Var: return;
        case TermKind::NegVar: f.has_negvar = true; return;
        case TermKind::ConvVar: f.has_conv = true; return;
        case TermKind::ConvNegVar: f.has_conv = f.has_negvar = true; return;
        case TermKind::Id: return;
        case TermKind::NegId: f.has_negid = true; return;
        case TermKind::Bot: return;
        case TermKind::Top: f.has_top = true; return;
        case TermKind::NegBot:
        case TermKind::NegTop: f.has_top = true; return;
        case TermKind::Star: f.has_star = true; break;
        case TermKind::Inter: f.has_inter = true; break;
        case TermKind::Conv: f.has_conv = true; break;
        case TermKind::Comp:
        case TermKind::Union: break;
    }
    if (t->left) fragment_into(t->left, f);
    if (t->right) fragment_into(t->right, f);
}
}  // namespace

Fragment fragment_of(const TermPtr& t) {
    Fragment f;
    fragment_into(t, f);
    return f;
}

TermPtr bar_dual(const TermPtr& leaf) {
    switch (leaf->kind) {
        case TermKind::Var: return make_neg_var(leaf->atom);
        case TermKind::NegVar: return make_var(leaf->atom);
        case TermKind::Id: return make_neg_id();
        case TermKind::NegId: return make_id();
        case TermKind::Bot: return make_top();
        case TermKind::Top: return make_bot();
        default: throw std::invalid_argument("bar_dual: expects an atom, 1, -1, 0 or T");
    }
}

TermPtr replace_top(const TermPtr& t, const std::string& atom) {
    if (atom.empty()) throw std::invalid_argument("replace_top: empty atom");
    switch (t->kind) {
        case TermKind::Top: return make_union(make_var(atom), make_neg_var(atom));
        case TermKind::Comp: return make_comp(replace_top(t->left, atom), replace_top(t->right, atom));
        case TermKind::Union: return make_union(replace_top(t->left, atom), replace_top(t->right, atom));
        case TermKind::Inter: return make_inter(replace_top(t->left, atom), replace_top(t->right, atom));
        case TermKind::Star: return make_star(replace_top(t->left, atom));
        case TermKind::Conv: return make_conv(replace_top(t->left, atom));
        default: return t;
    }
}

namespace {
void atoms_into(const TermPtr& t, std::set<std::string>& out) {
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::NegVar:
        case TermKind::ConvVar:
        case TermKind::ConvNegVar: out.insert(t->atom); return;
        default: break;
    }
    if (t->left) atoms_into(t->left, out);
    if (t->right) atoms_into(t->right, out);
}
}  // namespace

std::vector<std::string> atoms_of(const TermPtr& t) {
    std::set<std::string> s;
    atoms_into(t, s);
    return {s.begin(), s.end()};
}

Alphabet infer_alphabet(const std::vector<TermPtr>& terms) {
    std::set<std::string> s;
    for (const auto& t : terms) atoms_into(t, s);
    return Alphabet(std::vector<std::string>(s.begin(), s.end()));
}

bool is_strict(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Conv:
        case TermKind::NegBot:
        case TermKind::NegTop: return false;
        default: break;
    }
    if (t->left && !is_strict(t->left)) return false;
    if (t->right && !is_strict(t->right)) return false;
    return true;
}

}  // namespace ecor
