#ifndef POSETMC_TYPEGRAPH_HPP
#define POSETMC_TYPEGRAPH_HPP

// Rank-indexed labeled digraphs D_0, D_1, ... on the elements of a poset and
// the element types they induce.
//
// At rank s every element p has, for every chain C_j,
//   - a `max` arc to the top of C_j and a `min` arc to the bottom of C_j,
//   - for every rank-s type t occurring on C_j, an `up` arc to the lowest
//     q != p on C_j with p <= q and type(q) = t, and a `down` arc to the
//     highest q != p on C_j with q <= p and type(q) = t (when they exist).
// The rank-0 type of p is (color of p, chain index of p). The rank-(s+1)
// type of p is the isomorphism class of the ball of radius radius(s) around
// p in D_s, taken with its vertex types, labeled arcs and the order relation,
// rooted at p.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "posetmc/canon.hpp"
#include "posetmc/poset.hpp"

namespace posetmc {

using TypeId = std::uint32_t;

enum class ArcLabel : std::uint8_t { max = 0, min = 1, up = 2, down = 3 };

inline const char* to_string(ArcLabel l) {
    switch (l) {
    case ArcLabel::max: return "max";
    case ArcLabel::min: return "min";
    case ArcLabel::up: return "up";
    case ArcLabel::down: return "down";
    }
    return "?";
}

struct Arc {
    Element target;
    ArcLabel label;
    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Relation bits of neighborhood structures: one bit per arc label, and the
/// order relation.
inline constexpr std::uint8_t arc_bit(ArcLabel l) { return std::uint8_t(1u << static_cast<unsigned>(l)); }
inline constexpr std::uint8_t order_bit = 1u << 4;

inline constexpr std::size_t default_size_cap = 50000;

/// A neighborhood grew past the configured cap.
class SizeCapError : public std::runtime_error {
public:
    SizeCapError(std::size_t size, std::size_t cap)
        : std::runtime_error("neighborhood of " + std::to_string(size) +
                             " elements exceeds size cap " + std::to_string(cap)),
          size_(size), cap_(cap) {}
    std::size_t size() const { return size_; }
    std::size_t cap() const { return cap_; }

private:
    std::size_t size_;
    std::size_t cap_;
};

/// 3 * 4^s - 1
inline constexpr std::int64_t radius(int s) {
    std::int64_t p = 1;
    for (int i = 0; i < s; ++i) p *= 4;
    return 3 * p - 1;
}

/// Interns canonical encodings per rank. Ids are handed out in first-seen
/// order; equal ids mean equal encodings. Share one registry between posets
/// whose type sets are to be compared.
class TypeRegistry {
public:
    TypeId intern(int rank, const std::string& encoding) {
        auto& table = ranks_at(rank);
        auto [it, inserted] = table.ids.try_emplace(encoding, static_cast<TypeId>(table.encodings.size()));
        if (inserted) table.encodings.push_back(encoding);
        return it->second;
    }

    const std::string& encoding(int rank, TypeId id) const {
        return ranks_.at(static_cast<std::size_t>(rank)).encodings.at(id);
    }

    std::size_t count(int rank) const {
        return static_cast<std::size_t>(rank) < ranks_.size()
                   ? ranks_[static_cast<std::size_t>(rank)].encodings.size()
                   : 0;
    }

private:
    struct Table {
        std::unordered_map<std::string, TypeId> ids;
        std::vector<std::string> encodings;
    };
    std::vector<Table> ranks_;

    Table& ranks_at(int rank) {
        if (rank < 0) throw std::invalid_argument("negative rank");
        if (ranks_.size() <= static_cast<std::size_t>(rank)) ranks_.resize(static_cast<std::size_t>(rank) + 1);
        return ranks_[static_cast<std::size_t>(rank)];
    }
};

struct RankDigraph {
    int rank = 0;
    std::vector<std::vector<Arc>> arcs;  // per source element
    std::vector<TypeId> tau;             // per element

    std::size_t size() const { return tau.size(); }
    std::int64_t neighborhood_radius() const { return radius(rank); }

    bool has_arc(Element from, Element to, ArcLabel label) const {
        for (const Arc& a : arcs[from])
            if (a.target == to && a.label == label) return true;
        return false;
    }

    std::size_t max_out_degree() const {
        std::size_t d = 0;
        for (const auto& out : arcs) d = std::max(d, out.size());
        return d;
    }
};

/// Distinct types present, ascending.
inline std::vector<TypeId> type_set(const RankDigraph& d) {
    std::vector<TypeId> t = d.tau;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

/// Breadth-first search bounded by depth, with reusable marks so that
/// repeated searches on one digraph cost only the size of the ball.
class BallSearch {
public:
    explicit BallSearch(std::size_t n = 0) : mark_(n, 0) {}

    /// Elements reachable from `sources` by directed paths of length <= r,
    /// in discovery order (sources first).
    std::vector<Element> operator()(const RankDigraph& d, std::span<const Element> sources,
                                    std::int64_t r,
                                    std::size_t cap = std::numeric_limits<std::size_t>::max()) {
        if (mark_.size() < d.size()) mark_.assign(d.size(), 0);
        if (++epoch_ == 0) {
            std::fill(mark_.begin(), mark_.end(), 0);
            epoch_ = 1;
        }
        std::vector<Element> out;
        for (Element s : sources) {
            if (mark_[s] == epoch_) continue;
            mark_[s] = epoch_;
            out.push_back(s);
        }
        std::size_t frontier_begin = 0;
        for (std::int64_t depth = 0; depth < r; ++depth) {
            const std::size_t frontier_end = out.size();
            if (frontier_begin == frontier_end) break;
            for (std::size_t k = frontier_begin; k < frontier_end; ++k) {
                for (const Arc& a : d.arcs[out[k]]) {
                    if (mark_[a.target] == epoch_) continue;
                    mark_[a.target] = epoch_;
                    out.push_back(a.target);
                    if (out.size() > cap) throw SizeCapError(out.size(), cap);
                }
            }
            frontier_begin = frontier_end;
        }
        return out;
    }

private:
    std::vector<std::uint32_t> mark_;
    std::uint32_t epoch_ = 0;
};

inline std::vector<Element> ball(const RankDigraph& d, std::span<const Element> sources, std::int64_t r) {
    BallSearch search(d.size());
    return search(d, sources, r);
}

/// Builds the arcs of the digraph of the given rank from a type labeling.
inline RankDigraph assemble_digraph(const Poset& p, int rank, std::vector<TypeId> tau) {
    RankDigraph d;
    d.rank = rank;
    d.tau = std::move(tau);
    const std::size_t n = p.size();
    const std::size_t w = p.width();
    d.arcs.assign(n, {});

    // per chain: type -> ascending positions on the chain
    std::vector<std::map<TypeId, std::vector<std::uint32_t>>> by_type(w);
    for (std::size_t j = 0; j < w; ++j) {
        auto c = p.chain(j);
        for (std::uint32_t k = 0; k < c.size(); ++k) by_type[j][d.tau[c[k]]].push_back(k);
    }

    for (Element e = 0; e < n; ++e) {
        auto& out = d.arcs[e];
        for (std::size_t j = 0; j < w; ++j) {
            auto c = p.chain(j);
            out.push_back({c.back(), ArcLabel::max});
            out.push_back({c.front(), ArcLabel::min});

            // [up_from, size): elements q != e with e <= q; [0, down_to): q != e with q <= e
            std::uint32_t up_from, down_to;
            if (p.chain_of(e) == j) {
                up_from = p.position_in_chain(e) + 1;
                down_to = p.position_in_chain(e);
            } else {
                up_from = static_cast<std::uint32_t>(
                    std::partition_point(c.begin(), c.end(), [&](Element q) { return !p.leq(e, q); }) -
                    c.begin());
                down_to = static_cast<std::uint32_t>(
                    std::partition_point(c.begin(), c.end(), [&](Element q) { return p.leq(q, e); }) -
                    c.begin());
            }
            for (const auto& [t, positions] : by_type[j]) {
                auto it = std::lower_bound(positions.begin(), positions.end(), up_from);
                if (it != positions.end()) out.push_back({c[*it], ArcLabel::up});
                auto jt = std::lower_bound(positions.begin(), positions.end(), down_to);
                if (jt != positions.begin()) out.push_back({c[*std::prev(jt)], ArcLabel::down});
            }
        }
    }
    return d;
}

inline RankDigraph build_rank0(const Poset& p, TypeRegistry& registry) {
    std::vector<TypeId> tau(p.size());
    for (Element e = 0; e < p.size(); ++e) {
        std::string key = p.color(e);
        key.push_back('\0');
        key += std::to_string(p.chain_of(e));
        tau[e] = registry.intern(0, key);
    }
    return assemble_digraph(p, 0, std::move(tau));
}

struct RootedNeighborhood {
    Element root;
    std::vector<Element> members;  // root first
    LabeledStructure structure;    // vertex i is members[i]
};

/// The ball of radius radius(d.rank) around `root` in `d`, as a rooted
/// structure with rank-d.rank vertex labels, induced arcs and order.
inline RootedNeighborhood extract_neighborhood(const Poset& p, const RankDigraph& d, Element root,
                                               BallSearch& search,
                                               std::size_t cap = default_size_cap) {
    RootedNeighborhood nb;
    nb.root = root;
    const Element src[] = {root};
    nb.members = search(d, src, d.neighborhood_radius(), cap);
    const std::size_t m = nb.members.size();
    std::unordered_map<Element, std::uint32_t> index;
    index.reserve(m * 2);
    for (std::uint32_t i = 0; i < m; ++i) index.emplace(nb.members[i], i);

    nb.structure = LabeledStructure(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Element a = nb.members[i];
        nb.structure.labels[i] = d.tau[a];
        for (const Arc& arc : d.arcs[a]) {
            auto it = index.find(arc.target);
            if (it != index.end()) nb.structure.at(i, it->second) |= arc_bit(arc.label);
        }
        for (std::size_t j = 0; j < m; ++j)
            if (p.leq(a, nb.members[j])) nb.structure.at(i, j) |= order_bit;
    }
    return nb;
}

inline RootedNeighborhood extract_neighborhood(const Poset& p, const RankDigraph& d, Element root,
                                               std::size_t cap = default_size_cap) {
    BallSearch search(p.size());
    return extract_neighborhood(p, d, root, search, cap);
}

/// Interns the isomorphism class of a neighborhood of a rank-s digraph as a
/// type of rank s + 1.
inline TypeId canonical_type(const RootedNeighborhood& nb, int rank, TypeRegistry& registry) {
    return registry.intern(rank + 1, canonical_form(nb.structure));
}

inline RankDigraph build_next(const Poset& p, const RankDigraph& d, TypeRegistry& registry,
                              std::size_t cap = default_size_cap) {
    BallSearch search(p.size());
    std::vector<TypeId> tau(p.size());
    for (Element e = 0; e < p.size(); ++e)
        tau[e] = canonical_type(extract_neighborhood(p, d, e, search, cap), d.rank, registry);
    return assemble_digraph(p, d.rank + 1, std::move(tau));
}

inline std::vector<RankDigraph> build_up_to(const Poset& p, int max_rank, TypeRegistry& registry,
                                            std::size_t cap = default_size_cap) {
    if (max_rank < 0) throw std::invalid_argument("max rank must be non-negative");
    std::vector<RankDigraph> out;
    out.push_back(build_rank0(p, registry));
    for (int s = 0; s < max_rank; ++s) out.push_back(build_next(p, out.back(), registry, cap));
    return out;
}

/// Text dump: "s: p -label-> q" per arc, then "s: tau(p) = id" per element.
inline std::string dump(const RankDigraph& d) {
    std::ostringstream os;
    for (Element e = 0; e < d.size(); ++e)
        for (const Arc& a : d.arcs[e])
            os << d.rank << ": " << e << " -" << to_string(a.label) << "-> " << a.target << '\n';
    for (Element e = 0; e < d.size(); ++e) os << d.rank << ": tau(" << e << ") = " << d.tau[e] << '\n';
    return os.str();
}

} // namespace posetmc

#endif // POSETMC_TYPEGRAPH_HPP
