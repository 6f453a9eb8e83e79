#ifndef POSETMC_TESTS_ORACLES_HPP
#define POSETMC_TESTS_ORACLES_HPP

// Slow reference implementations and random generators used by the tests.
// Nothing here reuses the algorithms under test.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <bit>
#include <random>
#include <string>
#include <vector>

#include "posetmc/canon.hpp"
#include "posetmc/formula.hpp"
#include "posetmc/poset.hpp"
#include "posetmc/typegraph.hpp"

namespace oracle {

using posetmc::Element;
using posetmc::Formula;

/// Root-preserving isomorphism by trying every bijection.
inline bool isomorphic(const posetmc::LabeledStructure& a, const posetmc::LabeledStructure& b) {
    const std::size_t m = a.size();
    if (b.size() != m) return false;
    if (m == 0) return true;
    if (a.labels[0] != b.labels[0] || a.at(0, 0) != b.at(0, 0)) return false;
    std::vector<std::size_t> perm(m - 1);
    std::iota(perm.begin(), perm.end(), 1);
    do {
        auto img = [&](std::size_t v) { return v == 0 ? 0 : perm[v - 1]; };
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            if (a.labels[i] != b.labels[img(i)]) ok = false;
            for (std::size_t j = 0; j < m && ok; ++j)
                if (a.at(i, j) != b.at(img(i), img(j))) ok = false;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// Largest antichain by enumerating every subset (n <= 20).
inline std::size_t max_antichain(const posetmc::Poset& p) {
    const std::size_t n = p.size();
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (size <= best) continue;
        bool anti = true;
        for (std::size_t i = 0; i < n && anti; ++i)
            for (std::size_t j = i + 1; j < n && anti; ++j)
                if ((mask >> i & 1) && (mask >> j & 1) && p.comparable(static_cast<Element>(i), static_cast<Element>(j)))
                    anti = false;
        if (anti) best = size;
    }
    return best;
}

/// Arcs of the digraph of a given rank, straight from the definition: scan
/// each chain for its extremes and for the nearest element of every type
/// above and below.
inline std::vector<std::vector<posetmc::Arc>> arcs_by_definition(const posetmc::Poset& p,
                                                                  const std::vector<posetmc::TypeId>& tau) {
    using posetmc::ArcLabel;
    const std::size_t n = p.size();
    std::vector<std::vector<posetmc::Arc>> out(n);
    for (Element x = 0; x < n; ++x) {
        for (std::size_t j = 0; j < p.width(); ++j) {
            auto c = p.chain(j);
            out[x].push_back({c.back(), ArcLabel::max});
            out[x].push_back({c.front(), ArcLabel::min});
            std::vector<posetmc::TypeId> types;
            for (Element q : c) types.push_back(tau[q]);
            std::sort(types.begin(), types.end());
            types.erase(std::unique(types.begin(), types.end()), types.end());
            for (auto t : types) {
                std::optional<Element> up, down;
                for (Element q : c) {
                    if (q == x || tau[q] != t) continue;
                    if (p.leq(x, q) && (!up || p.leq(q, *up))) up = q;
                    if (p.leq(q, x) && (!down || p.leq(*down, q))) down = q;
                }
                if (up) out[x].push_back({*up, ArcLabel::up});
                if (down) out[x].push_back({*down, ArcLabel::down});
            }
        }
    }
    return out;
}

/// Random sentences in negation normal form over <=, = and the given colors.
class SentenceGen {
public:
    SentenceGen(std::uint64_t seed, std::vector<std::string> colors, bool graph = false)
        : rng_(seed), colors_(std::move(colors)), graph_(graph) {}

    /// A sentence of quantifier rank exactly `rank` (rank >= 1).
    Formula sentence(int rank) {
        for (;;) {
            Formula f = quantified(rank, {});
            if (posetmc::quantifier_rank(f) == rank) return f;
        }
    }

private:
    std::mt19937_64 rng_;
    std::vector<std::string> colors_;
    bool graph_;
    int counter_ = 0;

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    bool coin(int percent) { return static_cast<int>(rng_() % 100) < percent; }

    Formula quantified(int q, std::vector<std::string> scope) {
        const std::string v = "v" + std::to_string(counter_++);
        scope.push_back(v);
        Formula body = formula(q - 1, scope, 0);
        return coin(50) ? Formula::exists(v, body) : Formula::forall(v, body);
    }

    Formula formula(int q, const std::vector<std::string>& scope, int depth) {
        const int roll = static_cast<int>(rng_() % 100);
        if (q > 0 && roll < 45) return quantified(q, scope);
        if (roll < 70 && depth < 3) {
            Formula l = formula(q, scope, depth + 1), r = formula(coin(50) ? q : 0, scope, depth + 1);
            if (coin(50)) std::swap(l, r);
            return coin(50) ? Formula::conj(l, r) : Formula::disj(l, r);
        }
        Formula a = atom(scope);
        return coin(40) ? negated(a) : a;
    }

    // The graph vocabulary is read irreflexively, so edge atoms come with an
    // inequality guard.
    Formula negated(const Formula& a) {
        if (graph_ && a.op() == posetmc::Op::conj)
            return Formula::disj(Formula::neg(a.left()), a.right().left());
        return Formula::neg(a);
    }

    Formula atom(const std::vector<std::string>& scope) {
        const std::string& x = scope[pick(scope.size())];
        const std::string& y = scope[pick(scope.size())];
        if (graph_) {
            if (coin(30)) return Formula::equal(x, y);
            return Formula::conj(Formula::edge(x, y), Formula::neg(Formula::equal(x, y)));
        }
        const int roll = static_cast<int>(rng_() % 100);
        if (roll < 50) return Formula::less_eq(x, y);
        if (roll < 70 || colors_.empty()) return Formula::equal(x, y);
        return Formula::color(colors_[pick(colors_.size())], x);
    }
};

} // namespace oracle

#endif // POSETMC_TESTS_ORACLES_HPP
