#ifndef POSETMC_FORMULA_HPP
#define POSETMC_FORMULA_HPP

// First-order formulas over the poset vocabulary {<=, =, unary colors}, plus
// the binary `edge` predicate used by graph sentences. Parsing, printing,
// negation normal form and the small syntactic analyses the checkers need.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace posetmc {

enum class Op { exists, forall, conj, disj, neg, less_eq, equal, color, edge };

inline bool is_quantifier(Op op) { return op == Op::exists || op == Op::forall; }
inline bool is_binary(Op op) { return op == Op::conj || op == Op::disj; }
inline bool is_atom(Op op) {
    return op == Op::less_eq || op == Op::equal || op == Op::color || op == Op::edge;
}

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A formula is an immutable tree with shared subterms; copies are cheap.
///
/// Field use per operator:
///   exists/forall   var = bound variable, left = body
///   conj/disj       left, right
///   neg             left
///   less_eq/equal   var <= var2, var = var2
///   edge            edge(var, var2)
///   color           name(var)
class Formula {
public:
    Formula() = default;

    static Formula exists(std::string var, Formula body) {
        return make(Op::exists, std::move(var), {}, {}, std::move(body), {});
    }
    static Formula forall(std::string var, Formula body) {
        return make(Op::forall, std::move(var), {}, {}, std::move(body), {});
    }
    static Formula quantifier(Op op, std::string var, Formula body) {
        return make(op, std::move(var), {}, {}, std::move(body), {});
    }
    static Formula conj(Formula l, Formula r) {
        return make(Op::conj, {}, {}, {}, std::move(l), std::move(r));
    }
    static Formula disj(Formula l, Formula r) {
        return make(Op::disj, {}, {}, {}, std::move(l), std::move(r));
    }
    static Formula neg(Formula f) { return make(Op::neg, {}, {}, {}, std::move(f), {}); }
    static Formula less_eq(std::string x, std::string y) {
        return make(Op::less_eq, std::move(x), std::move(y), {}, {}, {});
    }
    static Formula equal(std::string x, std::string y) {
        return make(Op::equal, std::move(x), std::move(y), {}, {}, {});
    }
    static Formula edge(std::string x, std::string y) {
        return make(Op::edge, std::move(x), std::move(y), {}, {}, {});
    }
    static Formula color(std::string name, std::string x) {
        return make(Op::color, std::move(x), {}, std::move(name), {}, {});
    }

    bool empty() const { return !node_; }
    Op op() const;
    const std::string& var() const;
    const std::string& var2() const;
    const std::string& color_name() const;
    const Formula& left() const;
    const Formula& right() const;
    const Formula& body() const { return left(); }

    /// Identity of the shared node; stable for the lifetime of the tree.
    const void* id() const { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    struct Node;

    static Formula make(Op op, std::string var, std::string var2, std::string name, Formula l,
                        Formula r);

    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Op op;
    std::string var;
    std::string var2;
    std::string name;
    Formula left;
    Formula right;
};

inline Formula Formula::make(Op op, std::string var, std::string var2, std::string name, Formula l,
                             Formula r) {
    Formula f;
    f.node_ = std::make_shared<const Node>(
        Node{op, std::move(var), std::move(var2), std::move(name), std::move(l), std::move(r)});
    return f;
}

inline Op Formula::op() const { return node_->op; }
inline const std::string& Formula::var() const { return node_->var; }
inline const std::string& Formula::var2() const { return node_->var2; }
inline const std::string& Formula::color_name() const { return node_->name; }
inline const Formula& Formula::left() const { return node_->left; }
inline const Formula& Formula::right() const { return node_->right; }

inline bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const Formula::Node& x = *a.node_;
    const Formula::Node& y = *b.node_;
    return x.op == y.op && x.var == y.var && x.var2 == y.var2 && x.name == y.name &&
           x.left == y.left && x.right == y.right;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_to(const Formula& f, std::string& out, bool operand) {
    switch (f.op()) {
    case Op::less_eq: out += f.var() + " <= " + f.var2(); return;
    case Op::equal: out += f.var() + " = " + f.var2(); return;
    case Op::edge: out += "edge(" + f.var() + ", " + f.var2() + ")"; return;
    case Op::color: out += f.color_name() + "(" + f.var() + ")"; return;
    case Op::neg: {
        out += "!";
        const bool wrap = !is_atom(f.left().op()) && f.left().op() != Op::neg;
        if (wrap) out += "(";
        print_to(f.left(), out, false);
        if (wrap) out += ")";
        return;
    }
    case Op::conj:
    case Op::disj:
        out += "(";
        print_to(f.left(), out, true);
        out += f.op() == Op::conj ? " & " : " | ";
        print_to(f.right(), out, true);
        out += ")";
        return;
    case Op::exists:
    case Op::forall:
        if (operand) out += "(";
        out += f.op() == Op::exists ? "E " : "A ";
        out += f.var() + ". ";
        print_to(f.body(), out, false);
        if (operand) out += ")";
        return;
    }
}

} // namespace detail

/// ASCII rendering that `parse` reads back to a structurally equal tree.
inline std::string to_string(const Formula& f) {
    std::string out;
    detail::print_to(f, out, false);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Formula parse_all() {
        Formula f = formula();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return f;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(msg, line, column);
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    bool peek(std::string_view tok) {
        skip_space();
        return text_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok) {
        if (!peek(tok)) return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) {
            if (pos_ >= text_.size()) fail("expected '" + std::string(tok) + "' before end of input");
            fail("expected '" + std::string(tok) + "'");
        }
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    bool at_ident() {
        skip_space();
        return pos_ < text_.size() && ident_start(text_[pos_]);
    }

    std::string identifier() {
        skip_space();
        if (pos_ >= text_.size()) fail("expected identifier before end of input");
        if (!ident_start(text_[pos_]))
            fail("unknown token '" + std::string(1, text_[pos_]) + "'");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string variable() {
        const std::size_t start = (skip_space(), pos_);
        std::string v = identifier();
        if (v == "E" || v == "A") fail_at(start, "quantifier keyword '" + v + "' used as variable");
        return v;
    }

    // A quantifier keyword is `E`/`A` standing alone followed by a variable.
    bool at_quantifier(Op& op) {
        skip_space();
        if (pos_ >= text_.size()) return false;
        const char c = text_[pos_];
        if (c != 'E' && c != 'A') return false;
        if (pos_ + 1 < text_.size() && ident_char(text_[pos_ + 1])) return false;
        op = c == 'E' ? Op::exists : Op::forall;
        return true;
    }

    Formula formula() { return biconditional(); }

    Formula biconditional() {
        Formula f = implication();
        while (accept("<->")) {
            Formula g = implication();
            f = Formula::conj(Formula::disj(Formula::neg(f), g), Formula::disj(f, Formula::neg(g)));
        }
        return f;
    }

    Formula implication() {
        Formula f = disjunction();
        if (accept("->")) {
            Formula g = implication();
            return Formula::disj(Formula::neg(f), g);
        }
        return f;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (accept("|")) f = Formula::disj(f, conjunction());
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (accept("&")) f = Formula::conj(f, unary());
        return f;
    }

    Formula unary() {
        Op q;
        if (at_quantifier(q)) {
            ++pos_;
            std::string v = variable();
            expect(".");
            // The body extends as far to the right as possible.
            return Formula::quantifier(q, std::move(v), formula());
        }
        if (peek("!") && !peek("!=")) {
            ++pos_;
            return Formula::neg(unary());
        }
        if (accept("(")) {
            Formula f = formula();
            expect(")");
            return f;
        }
        return atom();
    }

    Formula atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("expected formula before end of input");
        if (!at_ident()) fail("unknown token '" + std::string(1, text_[pos_]) + "'");
        const std::size_t start = pos_;
        std::string name = identifier();
        if (accept("(")) {
            std::string x = variable();
            if (accept(",")) {
                std::string y = variable();
                expect(")");
                if (name != "edge") fail_at(start, "unknown binary predicate '" + name + "'");
                return Formula::edge(std::move(x), std::move(y));
            }
            expect(")");
            if (name == "edge") fail_at(start, "predicate 'edge' takes two arguments");
            return Formula::color(std::move(name), std::move(x));
        }
        if (name == "E" || name == "A") fail_at(start, "quantifier keyword '" + name + "' used as variable");
        if (accept("<=")) return Formula::less_eq(std::move(name), variable());
        if (accept("!=")) return Formula::neg(Formula::equal(std::move(name), variable()));
        if (accept("=")) return Formula::equal(std::move(name), variable());
        if (pos_ >= text_.size()) fail("expected '<=' or '=' before end of input");
        fail("expected '<=' or '=' after variable '" + name + "'");
    }
};

inline void collect_names(const Formula& f, std::set<std::string>& names) {
    switch (f.op()) {
    case Op::exists:
    case Op::forall:
        names.insert(f.var());
        collect_names(f.body(), names);
        return;
    case Op::conj:
    case Op::disj:
        collect_names(f.left(), names);
        collect_names(f.right(), names);
        return;
    case Op::neg: collect_names(f.left(), names); return;
    case Op::color: names.insert(f.var()); return;
    default:
        names.insert(f.var());
        names.insert(f.var2());
        return;
    }
}

class Renamer {
public:
    Renamer(std::set<std::string> taken, const std::vector<std::string>& free)
        : taken_(std::move(taken)), bound_once_(free.begin(), free.end()) {}

    Formula run(const Formula& f) { return rename(f); }

private:
    std::set<std::string> taken_;
    std::set<std::string> bound_once_;
    std::map<std::string, std::vector<std::string>> scope_;

    std::string lookup(const std::string& v) const {
        auto it = scope_.find(v);
        return it == scope_.end() || it->second.empty() ? v : it->second.back();
    }

    std::string fresh(const std::string& base) {
        for (int i = 1;; ++i) {
            std::string cand = base + "_" + std::to_string(i);
            if (!taken_.count(cand)) {
                taken_.insert(cand);
                return cand;
            }
        }
    }

    Formula rename(const Formula& f) {
        switch (f.op()) {
        case Op::exists:
        case Op::forall: {
            std::string name = f.var();
            if (!bound_once_.insert(name).second) name = fresh(f.var());
            bound_once_.insert(name);
            scope_[f.var()].push_back(name);
            Formula body = rename(f.body());
            scope_[f.var()].pop_back();
            if (name == f.var() && body == f.body()) return f;
            return Formula::quantifier(f.op(), name, body);
        }
        case Op::conj:
        case Op::disj: {
            Formula l = rename(f.left());
            Formula r = rename(f.right());
            if (l == f.left() && r == f.right()) return f;
            return f.op() == Op::conj ? Formula::conj(l, r) : Formula::disj(l, r);
        }
        case Op::neg: {
            Formula c = rename(f.left());
            return c == f.left() ? f : Formula::neg(c);
        }
        case Op::color: {
            std::string x = lookup(f.var());
            return x == f.var() ? f : Formula::color(f.color_name(), x);
        }
        case Op::less_eq:
        case Op::equal:
        case Op::edge: {
            std::string x = lookup(f.var());
            std::string y = lookup(f.var2());
            if (x == f.var() && y == f.var2()) return f;
            if (f.op() == Op::less_eq) return Formula::less_eq(x, y);
            if (f.op() == Op::equal) return Formula::equal(x, y);
            return Formula::edge(x, y);
        }
        }
        return f;
    }
};

} // namespace detail

std::vector<std::string> free_variables(const Formula& f);

/// Every variable name occurring in `f`, bound or free.
inline std::set<std::string> variable_names(const Formula& f) {
    std::set<std::string> names;
    detail::collect_names(f, names);
    return names;
}

/// Renames bound variables so that no name is bound by two quantifiers.
/// Free occurrences keep their names. Already-distinct binders are untouched.
inline Formula rename_apart(const Formula& f) {
    return detail::Renamer(variable_names(f), free_variables(f)).run(f);
}

/// Parses the ASCII surface syntax. `->` and `<->` are desugared; negation may
/// still appear anywhere. Bound variables are renamed apart.
inline Formula parse(std::string_view text) {
    return rename_apart(detail::Parser(text).parse_all());
}

// ---------------------------------------------------------------------------
// Analyses

namespace detail {

inline void free_vars(const Formula& f, std::vector<std::string>& bound,
                      std::vector<std::string>& out) {
    auto note = [&](const std::string& v) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    switch (f.op()) {
    case Op::exists:
    case Op::forall:
        bound.push_back(f.var());
        free_vars(f.body(), bound, out);
        bound.pop_back();
        return;
    case Op::conj:
    case Op::disj:
        free_vars(f.left(), bound, out);
        free_vars(f.right(), bound, out);
        return;
    case Op::neg: free_vars(f.left(), bound, out); return;
    case Op::color: note(f.var()); return;
    default:
        note(f.var());
        note(f.var2());
        return;
    }
}

} // namespace detail

/// Free variables in order of first occurrence (left to right).
inline std::vector<std::string> free_variables(const Formula& f) {
    std::vector<std::string> bound, out;
    detail::free_vars(f, bound, out);
    return out;
}

inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

/// Throws ParseError naming the first free variable if `f` is not a sentence.
inline void require_sentence(const Formula& f) {
    auto fv = free_variables(f);
    if (!fv.empty()) throw ParseError("free variable " + fv.front(), 1, 1);
}

inline Formula parse_sentence(std::string_view text) {
    Formula f = parse(text);
    require_sentence(f);
    return f;
}

inline int quantifier_rank(const Formula& f) {
    switch (f.op()) {
    case Op::exists:
    case Op::forall: return 1 + quantifier_rank(f.body());
    case Op::conj:
    case Op::disj: return std::max(quantifier_rank(f.left()), quantifier_rank(f.right()));
    case Op::neg: return quantifier_rank(f.left());
    default: return 0;
    }
}

inline std::size_t formula_size(const Formula& f) {
    switch (f.op()) {
    case Op::exists:
    case Op::forall:
    case Op::neg: return 1 + formula_size(f.left());
    case Op::conj:
    case Op::disj: return 1 + formula_size(f.left()) + formula_size(f.right());
    default: return 1;
    }
}

inline bool is_nnf(const Formula& f) {
    switch (f.op()) {
    case Op::exists:
    case Op::forall: return is_nnf(f.body());
    case Op::conj:
    case Op::disj: return is_nnf(f.left()) && is_nnf(f.right());
    case Op::neg: return is_atom(f.left().op());
    default: return true;
    }
}

/// Pushes negations to the atoms. Linear in the size of the input; returns
/// the very same tree for inputs already in NNF.
inline Formula to_nnf(const Formula& f, bool negate = false) {
    switch (f.op()) {
    case Op::neg: return to_nnf(f.left(), !negate);
    case Op::exists:
    case Op::forall: {
        Formula body = to_nnf(f.body(), negate);
        Op op = f.op();
        if (negate) op = op == Op::exists ? Op::forall : Op::exists;
        if (op == f.op() && body == f.body()) return f;
        return Formula::quantifier(op, f.var(), body);
    }
    case Op::conj:
    case Op::disj: {
        Formula l = to_nnf(f.left(), negate);
        Formula r = to_nnf(f.right(), negate);
        const bool as_conj = (f.op() == Op::conj) != negate;
        if (!negate && l == f.left() && r == f.right()) return f;
        return as_conj ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    default: return negate ? Formula::neg(f) : f;
    }
}

/// Distinct color names in first-occurrence order.
inline std::vector<std::string> color_names(const Formula& f) {
    std::vector<std::string> out;
    auto walk = [&](auto&& self, const Formula& g) -> void {
        if (g.op() == Op::color) {
            if (std::find(out.begin(), out.end(), g.color_name()) == out.end())
                out.push_back(g.color_name());
            return;
        }
        if (is_atom(g.op())) return;
        self(self, g.left());
        if (is_binary(g.op())) self(self, g.right());
    };
    walk(walk, f);
    return out;
}

inline bool mentions(const Formula& f, Op atom) {
    if (f.op() == atom) return true;
    if (is_atom(f.op())) return false;
    if (mentions(f.left(), atom)) return true;
    return is_binary(f.op()) && mentions(f.right(), atom);
}

struct SubformulaPosition {
    Formula formula;
    std::vector<std::string> free_vars;
};

/// All subformula occurrences in preorder, each with its ordered free
/// variables. These are the formula halves of game positions.
inline std::vector<SubformulaPosition> subformula_positions(const Formula& f) {
    std::vector<SubformulaPosition> out;
    auto walk = [&](auto&& self, const Formula& g) -> void {
        out.push_back({g, free_variables(g)});
        if (is_atom(g.op())) return;
        self(self, g.left());
        if (is_binary(g.op())) self(self, g.right());
    };
    walk(walk, f);
    return out;
}

/// The finite color alphabet: sorted, duplicate free, never empty.
class ColorSet {
public:
    static constexpr std::string_view default_color = "_";

    ColorSet() : names_{std::string(default_color)} {}

    template <class Range>
    explicit ColorSet(const Range& names) {
        for (const auto& n : names) add(std::string(n));
        if (names_.empty()) names_.push_back(std::string(default_color));
    }

    void add(const std::string& name) {
        auto it = std::lower_bound(names_.begin(), names_.end(), name);
        if (it == names_.end() || *it != name) names_.insert(it, name);
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    bool contains(const std::string& name) const {
        return std::binary_search(names_.begin(), names_.end(), name);
    }

private:
    std::vector<std::string> names_;
};

} // namespace posetmc

#endif // POSETMC_FORMULA_HPP
