#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "posetmc/canon.hpp"
#include "posetmc/typegraph.hpp"
#include "support/oracles.hpp"

using namespace posetmc;

namespace {

Poset chain(std::size_t n, std::map<Element, std::string> colors = {}) {
    std::vector<std::pair<Element, Element>> c;
    for (Element i = 1; i < n; ++i) c.emplace_back(i - 1, i);
    return Poset::from_relation(n, c, colors, RelationMode::cover);
}

std::set<std::pair<Element, ArcLabel>> arc_set(const std::vector<Arc>& arcs) {
    std::set<std::pair<Element, ArcLabel>> s;
    for (const Arc& a : arcs) s.emplace(a.target, a.label);
    return s;
}

LabeledStructure random_structure(std::mt19937_64& rng, std::size_t m) {
    LabeledStructure s(m);
    for (auto& l : s.labels) l = static_cast<std::uint32_t>(rng() % 2);
    for (auto& r : s.rel) r = static_cast<std::uint8_t>((rng() % 3 == 0) ? (1u << (rng() % 5)) : 0u);
    return s;
}

// Relabels vertices 1..m-1 by a random permutation, keeping the root.
LabeledStructure shuffled(const LabeledStructure& s, std::mt19937_64& rng) {
    const std::size_t m = s.size();
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    if (m > 1) std::shuffle(perm.begin() + 1, perm.end(), rng);
    LabeledStructure t(m);
    for (std::size_t i = 0; i < m; ++i) {
        t.labels[perm[i]] = s.labels[i];
        for (std::size_t j = 0; j < m; ++j) t.at(perm[i], perm[j]) = s.at(i, j);
    }
    return t;
}

} // namespace

TEST(Radius, Values) {
    EXPECT_EQ(radius(0), 2);
    EXPECT_EQ(radius(1), 11);
    EXPECT_EQ(radius(2), 47);
}

TEST(Rank0, ThreeChainMiddle) {
    const Poset p = chain(3);
    TypeRegistry reg;
    const RankDigraph d = build_rank0(p, reg);
    // a = 0, b = 1, c = 2
    EXPECT_EQ(arc_set(d.arcs[1]), (std::set<std::pair<Element, ArcLabel>>{
                                      {2, ArcLabel::max}, {0, ArcLabel::min}, {2, ArcLabel::up}, {0, ArcLabel::down}}));
    // the top has a self max arc and no up arc
    EXPECT_TRUE(d.has_arc(2, 2, ArcLabel::max));
    EXPECT_FALSE(d.has_arc(2, 2, ArcLabel::up));
}

TEST(Rank0, Antichain) {
    const Poset p = Poset::from_relation(2, {}, {}, RelationMode::cover);
    TypeRegistry reg;
    const RankDigraph d = build_rank0(p, reg);
    for (Element e = 0; e < 2; ++e) {
        EXPECT_EQ(arc_set(d.arcs[e]), (std::set<std::pair<Element, ArcLabel>>{
                                          {0, ArcLabel::max}, {0, ArcLabel::min}, {1, ArcLabel::max}, {1, ArcLabel::min}}));
    }
}

TEST(Rank0, ColorsSeparateTypes) {
    const Poset p = chain(2, {{0, "red"}, {1, "blue"}});
    TypeRegistry reg;
    const RankDigraph d = build_rank0(p, reg);
    EXPECT_NE(d.tau[0], d.tau[1]);
    EXPECT_EQ(type_set(build_rank0(chain(5), reg)).size(), 1u);
    const Poset anti = Poset::from_relation(3, {}, {}, RelationMode::cover);
    EXPECT_EQ(type_set(build_rank0(anti, reg)).size(), 3u);
}

TEST(Rank0, AlternatingColors) {
    const Poset p = chain(4, {{0, "red"}, {1, "blue"}, {2, "red"}, {3, "blue"}});
    TypeRegistry reg;
    EXPECT_EQ(type_set(build_rank0(p, reg)).size(), 2u);
}

TEST(Ball, Basics) {
    const Poset p = chain(3);
    TypeRegistry reg;
    const RankDigraph d = build_rank0(p, reg);
    const Element b[] = {1};
    EXPECT_EQ(ball(d, b, 0), std::vector<Element>{1});
    auto r1 = ball(d, b, 1);
    std::sort(r1.begin(), r1.end());
    EXPECT_EQ(r1, (std::vector<Element>{0, 1, 2}));
}

TEST(Ball, MonotoneInRadius) {
    const Poset p = random_poset(12, 3, 2, 3);
    TypeRegistry reg;
    const RankDigraph d = build_rank0(p, reg);
    for (Element e = 0; e < p.size(); ++e) {
        const Element src[] = {e};
        std::size_t last = 0;
        for (int r = 0; r < 6; ++r) {
            auto b = ball(d, src, r);
            EXPECT_GE(b.size(), last);
            last = b.size();
            EXPECT_EQ(b.front(), e);
        }
    }
}

TEST(Canonical, RandomPairsMatchIsomorphismOracle) {
    std::mt19937_64 rng(2024);
    int iso = 0;
    for (int i = 0; i < 600; ++i) {
        const std::size_t m = 1 + rng() % 8;
        const LabeledStructure a = random_structure(rng, m);
        LabeledStructure b = (i % 3 == 0) ? random_structure(rng, m) : shuffled(a, rng);
        if (i % 3 == 2 && m > 1) b.at(rng() % m, rng() % m) ^= 1;  // small edit, usually breaks isomorphism
        const bool expected = oracle::isomorphic(a, b);
        iso += expected;
        EXPECT_EQ(canonical_form(a) == canonical_form(b), expected) << "pair " << i;
    }
    EXPECT_GT(iso, 100);
}

TEST(Canonical, HighlySymmetricStructures) {
    // a root joined to a 7-cycle and to 7 isolated twins
    std::mt19937_64 rng(1);
    LabeledStructure cycle(8);
    for (std::size_t i = 1; i < 8; ++i) {
        cycle.at(0, i) = 1;
        cycle.at(i, 1 + i % 7) = 2;
    }
    EXPECT_EQ(canonical_form(cycle), canonical_form(shuffled(cycle, rng)));
    LabeledStructure twins(8);
    for (std::size_t i = 1; i < 8; ++i) twins.at(0, i) = 1;
    EXPECT_NE(canonical_form(cycle), canonical_form(twins));
}

TEST(Canonical, RootLabelMatters) {
    LabeledStructure a(2), b(2);
    a.labels = {0, 1};
    b.labels = {1, 0};
    a.at(0, 1) = b.at(1, 0) = 1;
    b.at(0, 1) = a.at(1, 0) = 0;
    EXPECT_NE(canonical_form(a), canonical_form(b));
}

TEST(Canonical, RealNeighborhoodsMatchOracle) {
    TypeRegistry reg;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Poset p = random_poset(5 + seed % 4, 2, 1 + seed % 2, seed);
        const RankDigraph d = build_rank0(p, reg);
        for (Element x = 0; x < p.size(); ++x)
            for (Element y = x + 1; y < p.size(); ++y) {
                const auto nx = extract_neighborhood(p, d, x), ny = extract_neighborhood(p, d, y);
                if (nx.structure.size() > 8 || ny.structure.size() > 8) continue;
                EXPECT_EQ(canonical_form(nx.structure) == canonical_form(ny.structure),
                          oracle::isomorphic(nx.structure, ny.structure));
            }
    }
}

TEST(Canonical, IsomorphicComponentsShareTypes) {
    // two disjoint 4-chains
    const Poset p = Poset::from_relation(8, {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}, {6, 7}}, {}, RelationMode::cover);
    TypeRegistry reg;
    const auto ds = build_up_to(p, 1, reg);
    // chains are listed by least element, so chain 0 = {0..3}, chain 1 = {4..7}
    for (Element i = 0; i < 4; ++i) EXPECT_NE(ds[0].tau[i], ds[0].tau[i + 4]);
    EXPECT_EQ(type_set(ds[0]).size(), 2u);
}

TEST(BuildNext, InteriorOfLongChainIsUniform) {
    const Poset p = chain(30);
    TypeRegistry reg;
    const auto ds = build_up_to(p, 1, reg);
    // within two steps e reaches e-2..e+2 and the two ends with their
    // neighbours; these pieces stay apart once e is 5 away from both ends
    for (Element e = 5; e + 5 < 30; ++e) EXPECT_EQ(ds[1].tau[e], ds[1].tau[5]);
    EXPECT_NE(ds[1].tau[4], ds[1].tau[5]);
    EXPECT_NE(ds[1].tau[25], ds[1].tau[5]);
}

TEST(BuildUpTo, ChainTenRankTwo) {
    TypeRegistry reg;
    const auto ds = build_up_to(chain(10), 2, reg);
    ASSERT_EQ(ds.size(), 3u);
    EXPECT_EQ(build_up_to(chain(10), 0, reg).size(), 1u);
}

TEST(BuildUpTo, SizeCap) {
    TypeRegistry reg;
    EXPECT_THROW(build_up_to(chain(40), 1, reg, 3), SizeCapError);
}

TEST(Dump, Format) {
    TypeRegistry reg;
    const std::string text = dump(build_rank0(chain(2), reg));
    EXPECT_EQ(text,
              "0: 0 -max-> 1\n"
              "0: 0 -min-> 0\n"
              "0: 0 -up-> 1\n"
              "0: 1 -max-> 1\n"
              "0: 1 -min-> 0\n"
              "0: 1 -down-> 0\n"
              "0: tau(0) = 0\n"
              "0: tau(1) = 0\n");
}

TEST(Types, IndependentOfElementNumbering) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Poset p = random_poset(9, 2, 2, seed);
        // reverse the ids
        const std::size_t n = p.size();
        BitMatrix rev(n);
        std::vector<std::string> colors(n);
        for (Element a = 0; a < n; ++a) {
            colors[n - 1 - a] = p.color(a);
            for (Element b = 0; b < n; ++b)
                if (p.leq(a, b)) rev.set(n - 1 - a, n - 1 - b);
        }
        std::vector<std::vector<Element>> chains;
        for (const auto& c : p.chain_partition().chains) {
            chains.emplace_back();
            for (Element e : c) chains.back().push_back(static_cast<Element>(n - 1 - e));
        }
        const Poset q(rev, colors, chains);
        TypeRegistry reg;
        const auto dp = build_up_to(p, 2, reg), dq = build_up_to(q, 2, reg);
        for (int s = 0; s <= 2; ++s)
            for (Element a = 0; a < n; ++a) EXPECT_EQ(dp[s].tau[a], dq[s].tau[n - 1 - a]);
    }
}

// Structural properties of the digraphs, on random posets of width at most 3.
TEST(Structure, RandomPosets) {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const std::size_t n = 2 + seed % 11;
        const Poset p = random_poset(n, 1 + seed % std::min<std::size_t>(3, n), 1 + seed % 2, seed * 7 + 1);
        TypeRegistry reg;
        const auto ds = build_up_to(p, 2, reg);
        std::vector<std::size_t> counts;
        for (int s = 0; s <= 2; ++s) {
            const RankDigraph& d = ds[s];
            counts.push_back(type_set(d).size());
            // arcs agree with a direct reading of the definition
            const auto expected = oracle::arcs_by_definition(p, d.tau);
            for (Element e = 0; e < n; ++e) ASSERT_EQ(arc_set(d.arcs[e]), arc_set(expected[e])) << "seed " << seed;
            // out-degree bound
            EXPECT_LE(d.max_out_degree(), 2 * p.width() * (counts.back() + 1));
            // well-formed up and down arcs
            for (Element e = 0; e < n; ++e)
                for (const Arc& a : d.arcs[e]) {
                    if (a.label != ArcLabel::up && a.label != ArcLabel::down) continue;
                    EXPECT_NE(a.target, e);
                    const bool up = a.label == ArcLabel::up;
                    EXPECT_TRUE(up ? p.leq(e, a.target) : p.leq(a.target, e));
                    for (Element z : p.chain(p.chain_of(a.target))) {
                        if (z == a.target || z == e || d.tau[z] != d.tau[a.target]) continue;
                        const bool between = up ? (p.leq(e, z) && p.leq(z, a.target)) : (p.leq(a.target, z) && p.leq(z, e));
                        EXPECT_FALSE(between);
                    }
                }
            // no crossing
            for (Element x = 0; x < n; ++x)
                for (Element y = 0; y < n; ++y) {
                    if (d.tau[x] != d.tau[y] || !p.leq(x, y)) continue;
                    for (const Arc& a : d.arcs[x])
                        for (const Arc& b : d.arcs[y])
                            if (a.label == b.label && d.tau[a.target] == d.tau[b.target]) {
                                EXPECT_TRUE(p.leq(a.target, b.target)) << "seed " << seed;
                            }
                }
            if (s == 2) break;
            const RankDigraph& next = ds[s + 1];
            // edge preservation
            for (Element e = 0; e < n; ++e)
                for (const Arc& a : d.arcs[e]) EXPECT_TRUE(next.has_arc(e, a.target, a.label));
            // refinement
            for (Element x = 0; x < n; ++x)
                for (Element y = 0; y < n; ++y)
                    if (d.tau[x] != d.tau[y]) {
                        EXPECT_NE(next.tau[x], next.tau[y]);
                    }
        }
        EXPECT_TRUE(std::is_sorted(counts.begin(), counts.end()));
    }
}
