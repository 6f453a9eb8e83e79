#ifndef POSETMC_POSET_HPP
#define POSETMC_POSET_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "posetmc/formula.hpp"

namespace posetmc {

using Element = std::uint32_t;

class PosetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Square boolean matrix with bit-packed rows.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

    std::size_t size() const { return n_; }
    std::size_t words_per_row() const { return words_; }

    bool test(std::size_t i, std::size_t j) const {
        return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
    }
    void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }

    std::span<std::uint64_t> row(std::size_t i) { return {bits_.data() + i * words_, words_}; }
    std::span<const std::uint64_t> row(std::size_t i) const {
        return {bits_.data() + i * words_, words_};
    }

    /// row(dst) |= row(src)
    void merge_row(std::size_t dst, std::size_t src) {
        for (std::size_t w = 0; w < words_; ++w) bits_[dst * words_ + w] |= bits_[src * words_ + w];
    }

    bool row_subset(std::size_t sub, std::size_t super) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (bits_[sub * words_ + w] & ~bits_[super * words_ + w]) return false;
        return true;
    }

    std::size_t row_count(std::size_t i) const {
        std::size_t c = 0;
        for (auto w : row(i)) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Chains listed bottom to top, plus the inverse lookup tables.
struct ChainPartition {
    std::vector<std::vector<Element>> chains;
    std::vector<std::uint32_t> chain_of;
    std::vector<std::uint32_t> position;

    std::size_t size() const { return chains.size(); }

    static ChainPartition from_chains(std::vector<std::vector<Element>> chains, std::size_t n) {
        ChainPartition cp;
        cp.chains = std::move(chains);
        cp.chain_of.assign(n, std::numeric_limits<std::uint32_t>::max());
        cp.position.assign(n, 0);
        for (std::uint32_t j = 0; j < cp.chains.size(); ++j) {
            for (std::uint32_t k = 0; k < cp.chains[j].size(); ++k) {
                const Element e = cp.chains[j][k];
                if (e >= n) throw PosetError("chain element " + std::to_string(e) + " out of range");
                if (cp.chain_of[e] != std::numeric_limits<std::uint32_t>::max())
                    throw PosetError("element " + std::to_string(e) + " appears in two chains");
                cp.chain_of[e] = j;
                cp.position[e] = k;
            }
        }
        for (std::size_t e = 0; e < n; ++e)
            if (cp.chain_of[e] == std::numeric_limits<std::uint32_t>::max())
                throw PosetError("element " + std::to_string(e) + " is in no chain");
        return cp;
    }
};

namespace detail {

// Hopcroft-Karp on the bipartite graph (left u) -> (right v) for u < v.
// Returns for each left vertex its matched right partner or -1.
inline std::vector<int> max_strict_order_matching(const BitMatrix& leq) {
    const int n = static_cast<int>(leq.size());
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && leq.test(u, v)) adj[u].push_back(v);

    std::vector<int> match_l(n, -1), match_r(n, -1), dist(n);
    constexpr int inf = std::numeric_limits<int>::max();

    auto bfs = [&] {
        std::queue<int> q;
        bool found = false;
        for (int u = 0; u < n; ++u) {
            if (match_l[u] < 0) {
                dist[u] = 0;
                q.push(u);
            } else {
                dist[u] = inf;
            }
        }
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : adj[u]) {
                const int w = match_r[v];
                if (w < 0) {
                    found = true;
                } else if (dist[w] == inf) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };

    auto dfs = [&](auto&& self, int u) -> bool {
        for (int v : adj[u]) {
            const int w = match_r[v];
            if (w < 0 || (dist[w] == dist[u] + 1 && self(self, w))) {
                match_l[u] = v;
                match_r[v] = u;
                return true;
            }
        }
        dist[u] = inf;
        return false;
    };

    while (bfs())
        for (int u = 0; u < n; ++u)
            if (match_l[u] < 0) dfs(dfs, u);
    return match_l;
}

} // namespace detail

/// Minimum chain cover of a (transitively closed) order relation, via maximum
/// matching on the strict order. Chains are ordered by their least element id.
inline ChainPartition minimum_chain_partition(const BitMatrix& leq) {
    const std::size_t n = leq.size();
    const std::vector<int> next = detail::max_strict_order_matching(leq);
    std::vector<bool> has_pred(n, false);
    for (std::size_t u = 0; u < n; ++u)
        if (next[u] >= 0) has_pred[static_cast<std::size_t>(next[u])] = true;

    std::vector<std::vector<Element>> chains;
    for (std::size_t u = 0; u < n; ++u) {
        if (has_pred[u]) continue;
        std::vector<Element> chain;
        for (int v = static_cast<int>(u); v >= 0; v = next[static_cast<std::size_t>(v)])
            chain.push_back(static_cast<Element>(v));
        chains.push_back(std::move(chain));
    }
    std::sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) {
        return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
    });
    return ChainPartition::from_chains(std::move(chains), n);
}

enum class RelationMode { cover, full };

/// A finite colored poset on elements 0..n-1 with a fixed chain partition.
/// Immutable once constructed.
class Poset {
public:
    Poset() = default;

    /// Validates the order axioms and chain structure. When `chains` is
    /// empty a minimum chain partition is computed.
    Poset(BitMatrix leq, std::vector<std::string> colors,
          std::optional<std::vector<std::vector<Element>>> chains = std::nullopt)
        : leq_(std::move(leq)) {
        const std::size_t n = leq_.size();
        if (colors.size() != n) throw PosetError("color vector size does not match element count");
        validate_order();
        set_colors(colors);
        partition_ = chains ? ChainPartition::from_chains(std::move(*chains), n)
                            : minimum_chain_partition(leq_);
        validate_chains();
    }

    /// Builds a poset from pairs. In cover mode the order is the
    /// reflexive-transitive closure of the pairs. In full mode the pairs
    /// (plus the diagonal) must already be a partial order.
    static Poset from_relation(std::size_t n, const std::vector<std::pair<Element, Element>>& pairs,
                               const std::map<Element, std::string>& colors, RelationMode mode) {
        BitMatrix m(n);
        for (auto [a, b] : pairs) {
            if (a >= n || b >= n)
                throw PosetError("pair (" + std::to_string(a) + "," + std::to_string(b) +
                                 ") out of range");
            m.set(a, b);
        }
        for (std::size_t i = 0; i < n; ++i) m.set(i, i);
        if (mode == RelationMode::cover) m = transitive_closure(m);

        std::vector<std::string> names(n, std::string(ColorSet::default_color));
        for (const auto& [e, c] : colors) {
            if (e >= n) throw PosetError("color assigned to undefined element " + std::to_string(e));
            if (c.empty()) throw PosetError("empty color name for element " + std::to_string(e));
            names[e] = c;
        }
        return Poset(std::move(m), std::move(names));
    }

    /// Reflexive-transitive closure of a relation whose graph is acyclic
    /// (apart from self-loops). Throws on a cycle.
    static BitMatrix transitive_closure(const BitMatrix& rel) {
        const std::size_t n = rel.size();
        std::vector<std::vector<Element>> succ(n);
        std::vector<std::size_t> indeg(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && rel.test(i, j)) {
                    succ[i].push_back(static_cast<Element>(j));
                    ++indeg[j];
                }
        std::vector<Element> order;
        order.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            if (indeg[i] == 0) order.push_back(static_cast<Element>(i));
        for (std::size_t k = 0; k < order.size(); ++k)
            for (Element j : succ[order[k]])
                if (--indeg[j] == 0) order.push_back(j);
        if (order.size() != n) throw PosetError("cycle detected in cover relation");

        BitMatrix out(n);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            out.set(*it, *it);
            for (Element j : succ[*it]) out.merge_row(*it, j);
        }
        return out;
    }

    std::size_t size() const { return leq_.size(); }
    bool leq(Element a, Element b) const { return leq_.test(a, b); }
    bool less(Element a, Element b) const { return a != b && leq_.test(a, b); }
    bool comparable(Element a, Element b) const { return leq(a, b) || leq(b, a); }
    const BitMatrix& order() const { return leq_; }

    const std::string& color(Element e) const { return color_names_[color_ids_[e]]; }
    std::uint32_t color_id(Element e) const { return color_ids_[e]; }
    /// Sorted distinct colors used by the elements.
    const std::vector<std::string>& color_names() const { return color_names_; }
    std::vector<std::string> element_colors() const {
        std::vector<std::string> out(size());
        for (Element e = 0; e < size(); ++e) out[e] = color(e);
        return out;
    }
    std::optional<std::uint32_t> find_color(const std::string& name) const {
        auto it = std::lower_bound(color_names_.begin(), color_names_.end(), name);
        if (it == color_names_.end() || *it != name) return std::nullopt;
        return static_cast<std::uint32_t>(it - color_names_.begin());
    }

    std::size_t width() const { return partition_.size(); }
    const ChainPartition& chain_partition() const { return partition_; }
    std::span<const Element> chain(std::size_t j) const { return partition_.chains[j]; }
    std::uint32_t chain_of(Element e) const { return partition_.chain_of[e]; }
    std::uint32_t position_in_chain(Element e) const { return partition_.position[e]; }

private:
    BitMatrix leq_;
    std::vector<std::string> color_names_;
    std::vector<std::uint32_t> color_ids_;
    ChainPartition partition_;

    void validate_order() const {
        const std::size_t n = leq_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (!leq_.test(i, i)) throw PosetError("reflexivity violated at element " + std::to_string(i));
            for (std::size_t j = i + 1; j < n; ++j)
                if (leq_.test(i, j) && leq_.test(j, i))
                    throw PosetError("antisymmetry violated: " + std::to_string(i) + " and " +
                                     std::to_string(j));
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (leq_.test(i, j) && !leq_.row_subset(j, i))
                    throw PosetError("transitivity violated through " + std::to_string(i) + " <= " +
                                     std::to_string(j));
    }

    void set_colors(const std::vector<std::string>& colors) {
        color_names_ = colors;
        std::sort(color_names_.begin(), color_names_.end());
        color_names_.erase(std::unique(color_names_.begin(), color_names_.end()), color_names_.end());
        color_ids_.resize(colors.size());
        for (std::size_t e = 0; e < colors.size(); ++e) color_ids_[e] = *find_color(colors[e]);
    }

    // Chains must be listed bottom to top.
    void validate_chains() const {
        for (const auto& c : partition_.chains) {
            if (c.empty()) throw PosetError("empty chain in partition");
            for (std::size_t k = 1; k < c.size(); ++k)
                if (!less(c[k - 1], c[k]))
                    throw PosetError("chain not strictly increasing at elements " +
                                     std::to_string(c[k - 1]) + ", " + std::to_string(c[k]));
        }
    }
};

/// Maximum antichain size by branch-and-bound subset enumeration.
inline std::size_t brute_force_width(const Poset& p, std::size_t max_elements = 20) {
    const std::size_t n = p.size();
    if (n > max_elements)
        throw PosetError("brute-force width limited to " + std::to_string(max_elements) + " elements");
    std::vector<std::uint32_t> incomparable(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !p.comparable(static_cast<Element>(i), static_cast<Element>(j)))
                incomparable[i] |= std::uint32_t{1} << j;

    std::size_t best = 0;
    // candidates: elements that may still join the current antichain
    auto grow = [&](auto&& self, std::uint32_t candidates, std::size_t size) -> void {
        if (candidates == 0) {
            best = std::max(best, size);
            return;
        }
        if (size + static_cast<std::size_t>(std::popcount(candidates)) <= best) return;
        const int v = std::countr_zero(candidates);
        const std::uint32_t rest = candidates & (candidates - 1);
        self(self, rest & incomparable[static_cast<std::size_t>(v)], size + 1);
        self(self, rest, size);
    };
    const std::uint32_t all = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
    grow(grow, all, 0);
    return best;
}

/// Bounded draw that does not depend on the standard library's distribution
/// implementations, so generated instances are byte-identical everywhere.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

/// Random poset of width at most `target_width`: elements are dealt into
/// chains, given random heights, and random upward cross-chain relations are
/// added before closing transitively. Element ids are shuffled.
inline Poset random_poset(std::size_t n, std::size_t target_width, std::size_t color_count,
                          std::uint64_t seed, double cross_density = 0.25) {
    if (target_width == 0) throw PosetError("target width must be at least 1");
    if (n < target_width) throw PosetError("element count smaller than target width");
    std::mt19937_64 rng(seed);

    std::vector<Element> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<Element>(i);
    for (std::size_t i = n; i > 1; --i) std::swap(ids[i - 1], ids[draw(rng, i)]);

    std::vector<std::size_t> chain(n);
    std::vector<std::uint64_t> height(n);
    for (std::size_t i = 0; i < n; ++i) {
        chain[i] = i < target_width ? i : draw(rng, target_width);
        height[i] = rng() >> 11;
    }
    BitMatrix rel(n);
    const std::uint64_t threshold =
        static_cast<std::uint64_t>(cross_density * static_cast<double>(1u << 20));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || height[i] > height[j] || (height[i] == height[j] && i > j)) continue;
            if (chain[i] == chain[j] || draw(rng, 1u << 20) < threshold) rel.set(ids[i], ids[j]);
        }
    }
    for (std::size_t i = 0; i < n; ++i) rel.set(i, i);

    std::vector<std::string> colors(n, "c0");
    if (color_count > 1)
        for (std::size_t i = 0; i < n; ++i) colors[i] = "c" + std::to_string(draw(rng, color_count));
    return Poset(Poset::transitive_closure(rel), std::move(colors));
}

} // namespace posetmc

#endif // POSETMC_POSET_HPP
