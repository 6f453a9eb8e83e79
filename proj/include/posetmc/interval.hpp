#ifndef POSETMC_INTERVAL_HPP
#define POSETMC_INTERVAL_HPP

// Model checking graph sentences on intersection graphs of k-fold proper
// interval families, through a poset of width at most k + 1:
//
//   endpoints D (sorted, one chain)  +  one chain per proper family
//   d1 <= d2   iff d1 <= d2 as numbers
//   J1 <= J2   iff J1 is not to the right of J2 (same family)
//   J <= d     iff d >= right(J);  d <= J iff d <= left(J)
//
// and the sentence translation that reads edge(x, y) as "no endpoint lies
// between x and y" and relativizes quantifiers to non-endpoints.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "posetmc/checker.hpp"
#include "posetmc/evaluate.hpp"
#include "posetmc/formula.hpp"
#include "posetmc/poset.hpp"

namespace posetmc {

using Rational = boost::multiprecision::cpp_rational;

class IntervalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "p/q", an integer, or a decimal literal such as "-1.25", exactly.
inline Rational parse_rational(const std::string& text) {
    using boost::multiprecision::cpp_int;
    auto bad = [&]() { return IntervalError("malformed rational '" + text + "'"); };
    auto integer = [&](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) throw bad();
        for (std::size_t k = i; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw bad();
        return cpp_int(s[0] == '+' ? s.substr(1) : s);
    };
    if (auto slash = text.find('/'); slash != std::string::npos) {
        cpp_int den = integer(text.substr(slash + 1));
        if (den == 0) throw IntervalError("zero denominator in '" + text + "'");
        return Rational(integer(text.substr(0, slash)), den);
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
        const std::string frac = text.substr(dot + 1);
        std::string whole = text.substr(0, dot);
        const bool negative = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (frac.empty()) throw bad();
        cpp_int scale = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
        cpp_int num = integer(whole) * scale;
        const cpp_int f = integer(frac);
        num += negative ? -f : f;
        return Rational(num, scale);
    }
    return Rational(integer(text));
}

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

struct Interval {
    Rational a;
    Rational b;
    std::size_t group = 1;  // 1..k
};

inline bool intersects(const Interval& x, const Interval& y) { return x.a <= y.b && y.a <= x.b; }

inline bool strictly_contains(const Interval& outer, const Interval& inner) {
    return outer.a <= inner.a && inner.b <= outer.b && (outer.a < inner.a || inner.b < outer.b);
}

struct IntervalInstance {
    std::size_t k = 1;
    std::vector<Interval> intervals;

    std::size_t size() const { return intervals.size(); }

    /// Checks a <= b, group ranges and that no group has a strict containment.
    void validate() const {
        if (k == 0) throw IntervalError("k must be at least 1");
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            const auto& J = intervals[i];
            if (J.b < J.a) throw IntervalError("interval " + std::to_string(i) + " has b < a");
            if (J.group < 1 || J.group > k)
                throw IntervalError("interval " + std::to_string(i) + " has group outside 1.." +
                                    std::to_string(k));
        }
        for (std::size_t i = 0; i < intervals.size(); ++i)
            for (std::size_t j = 0; j < intervals.size(); ++j)
                if (i != j && intervals[i].group == intervals[j].group &&
                    strictly_contains(intervals[i], intervals[j]))
                    throw IntervalError("improper family: interval " + std::to_string(i) +
                                        " strictly contains interval " + std::to_string(j) +
                                        " in group " + std::to_string(intervals[i].group));
    }

    /// Intersection graph edges (i < j).
    std::vector<std::pair<Element, Element>> edges() const {
        std::vector<std::pair<Element, Element>> out;
        for (std::size_t i = 0; i < intervals.size(); ++i)
            for (std::size_t j = i + 1; j < intervals.size(); ++j)
                if (intersects(intervals[i], intervals[j]))
                    out.emplace_back(static_cast<Element>(i), static_cast<Element>(j));
        return out;
    }
};

/// Shifts interval i (1-based) to [a_i + eps*i/n, b_i + eps*(1 + i/n)] with
/// eps a quarter of the least positive gap between endpoints, making all
/// endpoints distinct while keeping the intersection graph.
inline IntervalInstance perturb(const IntervalInstance& inst) {
    const std::size_t n = inst.size();
    if (n == 0) return inst;
    std::vector<Rational> ends;
    for (const auto& J : inst.intervals) {
        ends.push_back(J.a);
        ends.push_back(J.b);
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    Rational gap = 0;
    for (std::size_t i = 1; i < ends.size(); ++i)
        if (gap == 0 || ends[i] - ends[i - 1] < gap) gap = ends[i] - ends[i - 1];
    // a single distinct endpoint value: any positive eps works
    const Rational eps = gap == 0 ? Rational(1) : gap / 4;

    IntervalInstance out = inst;
    for (std::size_t i = 0; i < n; ++i) {
        const Rational frac(static_cast<long long>(i + 1), static_cast<long long>(n));
        out.intervals[i].a = inst.intervals[i].a + eps * frac;
        out.intervals[i].b = inst.intervals[i].b + eps * (1 + frac);
    }
    return out;
}

struct ElementRole {
    enum class Kind { endpoint, interval } kind;
    std::size_t interval;  // owning interval
    bool right_end = false;
};

struct IntervalPoset {
    Poset poset;
    std::vector<ElementRole> roles;
    std::vector<Element> interval_element;  // interval index -> element
};

inline constexpr const char* endpoint_color = "D";

/// Elements 0..2n-1 are the endpoints in increasing order, 2n..3n-1 the
/// intervals in input order. Chain 0 is the endpoints; chain g holds group g
/// sorted by (left, right). Requires distinct endpoints.
inline IntervalPoset build_interval_poset(const IntervalInstance& inst) {
    inst.validate();
    const std::size_t n = inst.size();
    struct End {
        Rational x;
        std::size_t interval;
        bool right;
    };
    std::vector<End> ends;
    for (std::size_t i = 0; i < n; ++i) {
        ends.push_back({inst.intervals[i].a, i, false});
        ends.push_back({inst.intervals[i].b, i, true});
    }
    std::sort(ends.begin(), ends.end(), [](const End& u, const End& v) { return u.x < v.x; });
    for (std::size_t i = 1; i < ends.size(); ++i)
        if (ends[i].x == ends[i - 1].x) throw IntervalError("endpoints must be distinct; perturb first");

    IntervalPoset out;
    const std::size_t total = 3 * n;
    out.roles.resize(total);
    out.interval_element.resize(n);
    for (std::size_t e = 0; e < 2 * n; ++e)
        out.roles[e] = {ElementRole::Kind::endpoint, ends[e].interval, ends[e].right};
    for (std::size_t i = 0; i < n; ++i) {
        out.roles[2 * n + i] = {ElementRole::Kind::interval, i, false};
        out.interval_element[i] = static_cast<Element>(2 * n + i);
    }

    std::vector<std::vector<Element>> chains(inst.k + 1);
    for (std::size_t e = 0; e < 2 * n; ++e) chains[0].push_back(static_cast<Element>(e));
    for (std::size_t i = 0; i < n; ++i) chains[inst.intervals[i].group].push_back(out.interval_element[i]);
    auto iv = [&](Element e) -> const Interval& { return inst.intervals[e - 2 * n]; };
    for (std::size_t g = 1; g <= inst.k; ++g) {
        auto& c = chains[g];
        std::sort(c.begin(), c.end(), [&](Element x, Element y) {
            return iv(x).a < iv(y).a || (iv(x).a == iv(y).a && iv(x).b < iv(y).b);
        });
        for (std::size_t t = 1; t < c.size(); ++t)
            if (!(iv(c[t - 1]).b < iv(c[t]).b))
                throw IntervalError("improper family in group " + std::to_string(g));
    }
    chains.erase(std::remove_if(chains.begin(), chains.end(), [](const auto& c) { return c.empty(); }),
                 chains.end());

    BitMatrix rel(total);
    for (std::size_t e = 0; e < total; ++e) rel.set(e, e);
    for (std::size_t d1 = 0; d1 < 2 * n; ++d1)
        for (std::size_t d2 = d1; d2 < 2 * n; ++d2) rel.set(d1, d2);
    for (const auto& c : chains)
        if (out.roles[c.front()].kind == ElementRole::Kind::interval)
            for (std::size_t s = 0; s < c.size(); ++s)
                for (std::size_t t = s; t < c.size(); ++t) rel.set(c[s], c[t]);
    for (std::size_t i = 0; i < n; ++i) {
        const Element J = out.interval_element[i];
        for (std::size_t d = 0; d < 2 * n; ++d) {
            if (ends[d].x >= inst.intervals[i].b) rel.set(J, d);
            if (ends[d].x <= inst.intervals[i].a) rel.set(d, J);
        }
    }
    // intervals of different families become related through endpoints
    BitMatrix closed = Poset::transitive_closure(rel);

    std::vector<std::string> colors(total, std::string(ColorSet::default_color));
    for (std::size_t e = 0; e < 2 * n; ++e) colors[e] = endpoint_color;
    out.poset = Poset(std::move(closed), std::move(colors), std::move(chains));
    return out;
}

namespace detail {

class Interpreter {
public:
    explicit Interpreter(std::set<std::string> taken) : taken_(std::move(taken)) {}

    Formula run(const Formula& f) {
        switch (f.op()) {
        case Op::exists:
            return Formula::exists(f.var(), Formula::conj(non_endpoint(f.var()), run(f.body())));
        case Op::forall:
            return Formula::forall(f.var(), Formula::disj(endpoint(f.var()), run(f.body())));
        case Op::conj: return Formula::conj(run(f.left()), run(f.right()));
        case Op::disj: return Formula::disj(run(f.left()), run(f.right()));
        case Op::neg: return Formula::neg(run(f.left()));
        case Op::edge: return adjacency(f.var(), f.var2());
        case Op::equal: return f;
        default: throw std::invalid_argument("graph sentences use only edge and = atoms");
        }
    }

    /// A[D(d) -> ((!x<=d | !d<=y) & (!y<=d | !d<=x))] with a fresh d.
    Formula adjacency(const std::string& x, const std::string& y) {
        const std::string d = fresh();
        auto nle = [](const std::string& u, const std::string& v) {
            return Formula::neg(Formula::less_eq(u, v));
        };
        Formula apart = Formula::conj(Formula::disj(nle(x, d), nle(d, y)), Formula::disj(nle(y, d), nle(d, x)));
        return Formula::forall(d, Formula::disj(Formula::neg(endpoint(d)), apart));
    }

private:
    std::set<std::string> taken_;
    int counter_ = 0;

    static Formula endpoint(const std::string& v) { return Formula::color(endpoint_color, v); }
    static Formula non_endpoint(const std::string& v) { return Formula::neg(endpoint(v)); }

    std::string fresh() {
        for (;;) {
            std::string cand = "d" + std::to_string(++counter_);
            if (taken_.insert(cand).second) return cand;
        }
    }
};

} // namespace detail

/// Translates a graph sentence into a poset sentence over the endpoint
/// color: edge(x, y) becomes the "no endpoint in between" formula and
/// quantifiers are relativized to non-endpoint elements. Output may contain
/// negations above compound formulas; apply to_nnf for NNF.
inline Formula interpret(const Formula& graph_sentence) {
    return detail::Interpreter(variable_names(graph_sentence)).run(graph_sentence);
}

/// The poset translation of a single edge(x, y) atom.
inline Formula adjacency_formula(const std::string& x, const std::string& y) {
    return detail::Interpreter({x, y}).adjacency(x, y);
}

/// Full pipeline: perturb, build the poset, translate, check locally.
inline CheckResult check_interval_detailed(const IntervalInstance& inst, const Formula& graph_sentence,
                                           CheckOptions options = {}) {
    require_sentence(graph_sentence);
    require_graph_vocabulary(graph_sentence);
    inst.validate();
    IntervalPoset ip = build_interval_poset(perturb(inst));
    return check_local(ip.poset, to_nnf(interpret(graph_sentence)), options);
}

inline bool check_interval(const IntervalInstance& inst, const Formula& graph_sentence,
                           CheckOptions options = {}) {
    return check_interval_detailed(inst, graph_sentence, options).verdict;
}

/// Groups intervals by exact length: group g holds the intervals whose
/// length is lengths[g - 1].
inline IntervalInstance partition_by_length(const std::vector<std::pair<Rational, Rational>>& intervals,
                                            const std::vector<Rational>& lengths) {
    IntervalInstance inst;
    inst.k = lengths.size();
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& [a, b] = intervals[i];
        auto it = std::find(lengths.begin(), lengths.end(), b - a);
        if (it == lengths.end())
            throw IntervalError("interval " + std::to_string(i) + " has length " + to_string(b - a) +
                                " outside the allowed set");
        inst.intervals.push_back({a, b, static_cast<std::size_t>(it - lengths.begin()) + 1});
    }
    return inst;
}

/// Random k-fold proper instance on a half-integer grid, so coinciding
/// endpoints and duplicate intervals occur. Reproducible from the seed.
inline IntervalInstance random_interval_instance(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw IntervalError("k must be at least 1");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> group(n);
    for (std::size_t i = 0; i < n; ++i) group[i] = 1 + draw(rng, k);

    IntervalInstance inst;
    inst.k = k;
    inst.intervals.resize(n);
    for (std::size_t g = 1; g <= k; ++g) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (group[i] == g) members.push_back(i);
        std::vector<long long> lefts;
        for (std::size_t t = 0; t < members.size(); ++t)
            lefts.push_back(static_cast<long long>(draw(rng, 2 * n + 2)));
        std::sort(lefts.begin(), lefts.end());
        // left and right ends rise together; equal lefts force equal rights
        long long prev_left = -1, prev_right = -1;
        for (std::size_t t = 0; t < members.size(); ++t) {
            long long right;
            if (lefts[t] == prev_left) {
                right = prev_right;
            } else {
                right = lefts[t] + static_cast<long long>(draw(rng, 5));
                if (right <= prev_right) right = prev_right + 1 + static_cast<long long>(draw(rng, 2));
            }
            inst.intervals[members[t]] = {Rational(lefts[t], 2), Rational(right, 2), g};
            prev_left = lefts[t];
            prev_right = right;
        }
    }
    return inst;
}

} // namespace posetmc

#endif // POSETMC_INTERVAL_HPP
