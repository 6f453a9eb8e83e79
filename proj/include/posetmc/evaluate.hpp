#ifndef POSETMC_EVALUATE_HPP
#define POSETMC_EVALUATE_HPP

// Flattened formulas with variable slots, and the exhaustive evaluator that
// expands every quantifier over the whole domain. The evaluator is generic
// over the structure, so the same code serves posets and graphs.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "posetmc/formula.hpp"
#include "posetmc/poset.hpp"

namespace posetmc {

struct CompiledNode {
    Op op = Op::conj;
    int left = -1;
    int right = -1;
    int slot = -1;   // bound variable, or first atom argument
    int slot2 = -1;  // second atom argument
    int color = -1;  // index into CompiledFormula::colors
    int rank = 0;
    std::vector<int> free_slots;  // ordered free variables of the subformula
};

/// A formula as an array of nodes (children before parents is not assumed;
/// `root` is the entry point). Every distinct variable gets a slot.
class CompiledFormula {
public:
    explicit CompiledFormula(const Formula& f) : source_(rename_apart(f)) {
        root_ = add(source_);
    }

    const Formula& source() const { return source_; }
    int root() const { return root_; }
    const CompiledNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t slot_count() const { return slots_.size(); }
    const std::vector<std::string>& colors() const { return colors_; }
    const std::string& slot_name(int s) const { return slot_names_[static_cast<std::size_t>(s)]; }

private:
    Formula source_;
    std::vector<CompiledNode> nodes_;
    std::map<std::string, int> slots_;
    std::vector<std::string> slot_names_;
    std::vector<std::string> colors_;
    int root_ = -1;

    int slot(const std::string& v) {
        auto [it, inserted] = slots_.try_emplace(v, static_cast<int>(slot_names_.size()));
        if (inserted) slot_names_.push_back(v);
        return it->second;
    }

    int color(const std::string& c) {
        for (std::size_t i = 0; i < colors_.size(); ++i)
            if (colors_[i] == c) return static_cast<int>(i);
        colors_.push_back(c);
        return static_cast<int>(colors_.size() - 1);
    }

    int add(const Formula& f) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        CompiledNode n;
        n.op = f.op();
        switch (f.op()) {
        case Op::exists:
        case Op::forall:
            n.slot = slot(f.var());
            n.left = add(f.body());
            break;
        case Op::conj:
        case Op::disj:
            n.left = add(f.left());
            n.right = add(f.right());
            break;
        case Op::neg: n.left = add(f.left()); break;
        case Op::color:
            n.slot = slot(f.var());
            n.color = color(f.color_name());
            break;
        default:
            n.slot = slot(f.var());
            n.slot2 = slot(f.var2());
            break;
        }
        n.rank = quantifier_rank(f);
        for (const auto& v : free_variables(f)) n.free_slots.push_back(slot(v));
        nodes_[static_cast<std::size_t>(id)] = std::move(n);
        return id;
    }
};

/// What the evaluators need from a finite structure. Atoms a structure does
/// not interpret throw.
template <class S>
concept FirstOrderStructure = requires(const S& s, Element a, Element b, const std::string& name) {
    { s.size() } -> std::convertible_to<std::size_t>;
    { s.less_eq(a, b) } -> std::convertible_to<bool>;
    { s.edge(a, b) } -> std::convertible_to<bool>;
    { s.color_index(name) } -> std::same_as<std::optional<std::uint32_t>>;
    { s.color_of(a) } -> std::convertible_to<std::uint32_t>;
    s.check_vocabulary(Formula{});
};

/// Throws std::invalid_argument if `f` uses an edge atom.
inline void require_poset_vocabulary(const Formula& f) {
    if (mentions(f, Op::edge))
        throw std::invalid_argument("edge predicate is not part of the poset vocabulary");
}

/// Throws std::invalid_argument if `f` uses an order or color atom.
inline void require_graph_vocabulary(const Formula& f) {
    if (mentions(f, Op::less_eq))
        throw std::invalid_argument("order predicate is not part of the graph vocabulary");
    if (mentions(f, Op::color))
        throw std::invalid_argument("color predicates are not part of the graph vocabulary");
}

class PosetStructure {
public:
    explicit PosetStructure(const Poset& p) : p_(p) {}
    std::size_t size() const { return p_.size(); }
    bool less_eq(Element a, Element b) const { return p_.leq(a, b); }
    bool edge(Element, Element) const {
        throw std::invalid_argument("edge predicate is not part of the poset vocabulary");
    }
    std::optional<std::uint32_t> color_index(const std::string& name) const { return p_.find_color(name); }
    std::uint32_t color_of(Element e) const { return p_.color_id(e); }
    void check_vocabulary(const Formula& f) const { require_poset_vocabulary(f); }

private:
    const Poset& p_;
};

/// Simple undirected graph; edge(v, v) is false.
class GraphStructure {
public:
    GraphStructure(std::size_t n, const std::vector<std::pair<Element, Element>>& edges)
        : n_(n), adj_(n) {
        for (auto [a, b] : edges) {
            if (a >= n || b >= n) throw std::invalid_argument("edge endpoint out of range");
            if (a == b) continue;
            adj_.set(a, b);
            adj_.set(b, a);
        }
    }
    std::size_t size() const { return n_; }
    bool less_eq(Element, Element) const {
        throw std::invalid_argument("order predicate is not part of the graph vocabulary");
    }
    bool edge(Element a, Element b) const { return adj_.test(a, b); }
    std::optional<std::uint32_t> color_index(const std::string&) const {
        throw std::invalid_argument("color predicates are not part of the graph vocabulary");
    }
    std::uint32_t color_of(Element) const { return 0; }
    void check_vocabulary(const Formula& f) const { require_graph_vocabulary(f); }

private:
    std::size_t n_;
    BitMatrix adj_;
};

struct NaiveResult {
    bool verdict = false;
    std::uint64_t positions = 0;
};

namespace detail {

template <FirstOrderStructure S>
class NaiveEvaluator {
public:
    NaiveEvaluator(const S& s, const CompiledFormula& f) : s_(s), f_(f), env_(f.slot_count(), 0) {
        // a color the structure lacks makes its atoms false everywhere
        for (const auto& c : f.colors()) color_ids_.push_back(s.color_index(c));
    }

    bool eval(int id, bool negated = false) {
        ++positions;
        const CompiledNode& n = f_.node(id);
        switch (n.op) {
        case Op::neg: return eval(n.left, !negated);
        case Op::conj:
        case Op::disj: {
            // under negation a conjunction behaves as a disjunction
            const bool all = (n.op == Op::conj) != negated;
            if (all) return eval(n.left, negated) && eval(n.right, negated);
            return eval(n.left, negated) || eval(n.right, negated);
        }
        case Op::exists:
        case Op::forall: {
            const bool some = (n.op == Op::exists) != negated;
            const auto slot = static_cast<std::size_t>(n.slot);
            for (Element e = 0; e < s_.size(); ++e) {
                env_[slot] = e;
                const bool r = eval(n.left, negated);
                if (some && r) return true;
                if (!some && !r) return false;
            }
            return !some;
        }
        default: return atom(n) != negated;
        }
    }

    std::uint64_t positions = 0;

private:
    const S& s_;
    const CompiledFormula& f_;
    std::vector<Element> env_;
    std::vector<std::optional<std::uint32_t>> color_ids_;

    bool atom(const CompiledNode& n) const {
        const Element x = env_[static_cast<std::size_t>(n.slot)];
        switch (n.op) {
        case Op::color: {
            const auto& c = color_ids_[static_cast<std::size_t>(n.color)];
            return c && s_.color_of(x) == *c;
        }
        case Op::less_eq: return s_.less_eq(x, env_[static_cast<std::size_t>(n.slot2)]);
        case Op::equal: return x == env_[static_cast<std::size_t>(n.slot2)];
        case Op::edge: return s_.edge(x, env_[static_cast<std::size_t>(n.slot2)]);
        default: throw std::logic_error("not an atom");
        }
    }
};

} // namespace detail

/// Exhaustive evaluation of a sentence, arbitrary negations allowed.
template <FirstOrderStructure S>
NaiveResult evaluate_naive(const S& structure, const Formula& sentence) {
    require_sentence(sentence);
    structure.check_vocabulary(sentence);
    CompiledFormula cf(sentence);
    detail::NaiveEvaluator<S> ev(structure, cf);
    NaiveResult r;
    r.verdict = ev.eval(cf.root());
    r.positions = ev.positions;
    return r;
}

inline bool eval_naive(const Poset& p, const Formula& sentence) {
    return evaluate_naive(PosetStructure(p), sentence).verdict;
}

/// Graph sentences over {edge, =} with irreflexive edge semantics.
inline bool eval_graph_fo(const std::vector<std::pair<Element, Element>>& edges, std::size_t n,
                          const Formula& sentence) {
    return evaluate_naive(GraphStructure(n, edges), sentence).verdict;
}

/// Number of positions in the full, unrestricted game tree on n elements.
/// Saturates at UINT64_MAX.
inline std::uint64_t full_game_size(std::size_t n, const Formula& f) {
    constexpr std::uint64_t top = ~std::uint64_t{0};
    auto mul = [&](std::uint64_t a, std::uint64_t b) {
        return (a != 0 && b > top / a) ? top : a * b;
    };
    auto add = [&](std::uint64_t a, std::uint64_t b) { return a > top - b ? top : a + b; };
    switch (f.op()) {
    case Op::exists:
    case Op::forall: return add(1, mul(n, full_game_size(n, f.body())));
    case Op::conj:
    case Op::disj: return add(1, add(full_game_size(n, f.left()), full_game_size(n, f.right())));
    case Op::neg: return add(1, full_game_size(n, f.left()));
    default: return 1;
    }
}

} // namespace posetmc

#endif // POSETMC_EVALUATE_HPP
