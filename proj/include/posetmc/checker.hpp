#ifndef POSETMC_CHECKER_HPP
#define POSETMC_CHECKER_HPP

// Model checking by the local Hintikka game.
//
// The game is the ordinary AND/OR evaluation game with one restriction on
// quantifier moves. At a quantifier position Qy.body whose free variables
// are assigned p_1..p_i with i >= 1, the next element must come from the
// ball around {p_1..p_i} in D_q of radius radius(q) - radius(q - 1), where q
// is the quantifier rank of the body (radius(0) in D_0 when q = 0). Moves at
// positions without free variables are unrestricted; with the first-move
// optimization they range over one representative per type of rank q.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "posetmc/evaluate.hpp"
#include "posetmc/formula.hpp"
#include "posetmc/poset.hpp"
#include "posetmc/typegraph.hpp"

namespace posetmc {

struct CheckOptions {
    bool first_move_optimization = true;
    bool memoize = true;
    /// Assert that every move below an unrestricted move stays within
    /// radius(q - 1) of that move's element in D_{q-1}, q the rank of the
    /// unrestricted move's body. Violations throw std::logic_error.
    bool verify_locality = false;
    std::size_t size_cap = default_size_cap;
};

struct CheckResult {
    bool verdict = false;
    std::uint64_t positions = 0;
    std::size_t max_ball = 0;
    std::vector<std::size_t> type_counts_per_rank;
    double millis = 0.0;
};

/// Holds a poset and lazily built digraphs D_0, D_1, ...; checking several
/// sentences against one instance reuses them.
class LocalChecker {
public:
    explicit LocalChecker(Poset p, CheckOptions options = {})
        : poset_(std::move(p)), options_(options), search_(poset_.size()) {}

    LocalChecker(Poset p, CheckOptions options, TypeRegistry& shared_registry)
        : poset_(std::move(p)), options_(options), search_(poset_.size()),
          registry_(&shared_registry) {}

    LocalChecker(const LocalChecker&) = delete;
    LocalChecker& operator=(const LocalChecker&) = delete;

    const Poset& poset() const { return poset_; }
    const CheckOptions& options() const { return options_; }
    TypeRegistry& registry() { return *registry_; }

    /// D_rank, building lower ranks as needed.
    const RankDigraph& digraph(int rank) {
        if (rank < 0) throw std::invalid_argument("negative rank");
        if (digraphs_.empty()) digraphs_.push_back(build_rank0(poset_, *registry_));
        while (static_cast<int>(digraphs_.size()) <= rank)
            digraphs_.push_back(build_next(poset_, digraphs_.back(), *registry_, options_.size_cap));
        return digraphs_[static_cast<std::size_t>(rank)];
    }

    int built_rank() const { return static_cast<int>(digraphs_.size()) - 1; }

    std::vector<TypeId> type_set(int rank) { return posetmc::type_set(digraph(rank)); }

    /// Allowed moves from a quantifier position whose free variables are
    /// assigned `assigned` (non-empty) and whose body has rank `inner_rank`.
    std::vector<Element> local_move_set(std::span<const Element> assigned, int inner_rank) {
        if (assigned.empty()) throw std::invalid_argument("local moves need an assigned element");
        const RankDigraph& d = digraph(inner_rank);
        const std::int64_t r = inner_rank >= 1 ? radius(inner_rank) - radius(inner_rank - 1) : radius(0);
        return search_(d, assigned, r);
    }

    /// One element per type of the given rank, the least id of each type.
    const std::vector<Element>& representatives(int rank) {
        auto it = representatives_.find(rank);
        if (it != representatives_.end()) return it->second;
        const RankDigraph& d = digraph(rank);
        std::map<TypeId, Element> first;
        for (Element e = 0; e < d.size(); ++e) first.try_emplace(d.tau[e], e);
        std::vector<Element> reps;
        for (auto [t, e] : first) reps.push_back(e);
        std::sort(reps.begin(), reps.end());
        return representatives_.emplace(rank, std::move(reps)).first->second;
    }

    CheckResult check(const Formula& sentence);

private:
    Poset poset_;
    CheckOptions options_;
    BallSearch search_;
    TypeRegistry own_registry_;
    TypeRegistry* registry_ = &own_registry_;
    std::vector<RankDigraph> digraphs_;
    std::map<int, std::vector<Element>> representatives_;

    friend class GameSolver;
};

class GameSolver {
public:
    GameSolver(LocalChecker& checker, const CompiledFormula& f)
        : c_(checker), p_(checker.poset_), f_(f), env_(f.slot_count(), 0), memo_(f.node_count()) {
        for (const auto& name : f.colors()) color_ids_.push_back(p_.find_color(name));
    }

    bool solve(int id, Element anchor = 0, int anchor_rank = -1) {
        ++positions;
        const CompiledNode& n = f_.node(id);
        std::u32string key;
        if (c_.options_.memoize && !is_atom(n.op) && n.op != Op::neg) {
            key.reserve(n.free_slots.size());
            for (int s : n.free_slots) key.push_back(static_cast<char32_t>(env_[static_cast<std::size_t>(s)]));
            auto& table = memo_[static_cast<std::size_t>(id)];
            if (auto it = table.find(key); it != table.end()) return it->second;
            const bool v = expand(n, anchor, anchor_rank);
            table.emplace(std::move(key), v);
            return v;
        }
        return expand(n, anchor, anchor_rank);
    }

    std::uint64_t positions = 0;
    std::size_t max_ball = 0;

private:
    LocalChecker& c_;
    const Poset& p_;
    const CompiledFormula& f_;
    std::vector<Element> env_;
    std::vector<std::unordered_map<std::u32string, bool>> memo_;
    std::vector<std::optional<std::uint32_t>> color_ids_;
    std::map<std::pair<Element, int>, std::vector<bool>> anchor_balls_;

    bool atom(const CompiledNode& n) const {
        const Element x = env_[static_cast<std::size_t>(n.slot)];
        switch (n.op) {
        case Op::color: {
            const auto& c = color_ids_[static_cast<std::size_t>(n.color)];
            return c && p_.color_id(x) == *c;
        }
        case Op::less_eq: return p_.leq(x, env_[static_cast<std::size_t>(n.slot2)]);
        case Op::equal: return x == env_[static_cast<std::size_t>(n.slot2)];
        default: throw std::invalid_argument("atom outside the poset vocabulary");
        }
    }

    void check_local(Element anchor, int anchor_rank, Element e) {
        // anchor_rank >= 1 whenever a move happens below the anchor
        const int s = anchor_rank - 1;
        auto key = std::make_pair(anchor, s);
        auto it = anchor_balls_.find(key);
        if (it == anchor_balls_.end()) {
            std::vector<bool> in(p_.size(), false);
            const Element src[] = {anchor};
            BallSearch search(p_.size());
            for (Element x : search(c_.digraph(s), src, radius(s))) in[x] = true;
            it = anchor_balls_.emplace(key, std::move(in)).first;
        }
        if (!it->second[e])
            throw std::logic_error("local move left the radius(" + std::to_string(s) + ") ball of its anchor");
    }

    bool expand(const CompiledNode& n, Element anchor, int anchor_rank) {
        switch (n.op) {
        case Op::neg: return !atom(f_.node(n.left));
        case Op::conj: return solve(n.left, anchor, anchor_rank) && solve(n.right, anchor, anchor_rank);
        case Op::disj: return solve(n.left, anchor, anchor_rank) || solve(n.right, anchor, anchor_rank);
        case Op::exists:
        case Op::forall: {
            const bool some = n.op == Op::exists;
            const int inner = f_.node(n.left).rank;
            const auto slot = static_cast<std::size_t>(n.slot);
            std::vector<Element> moves;
            const bool unrestricted = n.free_slots.empty();
            if (unrestricted) {
                if (c_.options_.first_move_optimization) {
                    moves = c_.representatives(inner);
                } else {
                    moves.resize(p_.size());
                    for (Element e = 0; e < p_.size(); ++e) moves[e] = e;
                }
            } else {
                std::vector<Element> assigned;
                for (int s : n.free_slots) assigned.push_back(env_[static_cast<std::size_t>(s)]);
                moves = c_.local_move_set(assigned, inner);
                max_ball = std::max(max_ball, moves.size());
            }
            for (Element e : moves) {
                if (!unrestricted && c_.options_.verify_locality) check_local(anchor, anchor_rank, e);
                env_[slot] = e;
                const bool r = unrestricted ? solve(n.left, e, inner) : solve(n.left, anchor, anchor_rank);
                if (some == r) return r;
            }
            return !some;
        }
        default: return atom(n);
        }
    }
};

inline CheckResult LocalChecker::check(const Formula& sentence) {
    const auto start = std::chrono::steady_clock::now();
    require_sentence(sentence);
    require_poset_vocabulary(sentence);
    const Formula nnf = to_nnf(sentence);
    const int q = quantifier_rank(nnf);
    if (q == 0) throw std::invalid_argument("sentence without quantifiers");
    CompiledFormula cf(nnf);
    digraph(q - 1);

    GameSolver solver(*this, cf);
    CheckResult result;
    result.verdict = solver.solve(cf.root());
    result.positions = solver.positions;
    result.max_ball = solver.max_ball;
    for (const auto& d : digraphs_) result.type_counts_per_rank.push_back(posetmc::type_set(d).size());
    result.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

inline CheckResult check_local(const Poset& p, const Formula& sentence, CheckOptions options = {}) {
    LocalChecker checker(p, options);
    return checker.check(sentence);
}

} // namespace posetmc

#endif // POSETMC_CHECKER_HPP
