#ifndef POSETMC_CANON_HPP
#define POSETMC_CANON_HPP

// Canonical forms for small rooted structures: vertex labels plus one byte
// of relation bits per ordered vertex pair. Two structures get the same
// canonical string iff some bijection mapping root to root preserves the
// labels and every relation byte.
//
// Method: color refinement seeded with (is-root, label), then
// individualization of the first non-singleton cell with exhaustive
// branching; the canonical string is the least leaf encoding.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

namespace posetmc {

struct LabeledStructure {
    std::vector<std::uint32_t> labels;  // vertex 0 is the root
    std::vector<std::uint8_t> rel;      // rel[i * size() + j]

    LabeledStructure() = default;
    explicit LabeledStructure(std::size_t m) : labels(m, 0), rel(m * m, 0) {}

    std::size_t size() const { return labels.size(); }
    std::uint8_t at(std::size_t i, std::size_t j) const { return rel[i * size() + j]; }
    std::uint8_t& at(std::size_t i, std::size_t j) { return rel[i * size() + j]; }
};

namespace detail {

class Canonizer {
public:
    explicit Canonizer(const LabeledStructure& s) : s_(s), m_(s.size()) {}

    std::string run() {
        std::vector<std::uint32_t> colors(m_);
        std::vector<std::tuple<std::uint32_t, std::uint32_t>> seeds(m_);
        for (std::size_t v = 0; v < m_; ++v) seeds[v] = {v == 0 ? 0u : 1u, s_.labels[v]};
        auto sorted = seeds;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t v = 0; v < m_; ++v)
            colors[v] = static_cast<std::uint32_t>(
                std::lower_bound(sorted.begin(), sorted.end(), seeds[v]) - sorted.begin());
        search(std::move(colors));
        return best_;
    }

    std::size_t leaves() const { return leaves_; }

private:
    const LabeledStructure& s_;
    std::size_t m_;
    std::string best_;
    bool have_best_ = false;
    std::size_t leaves_ = 0;

    using Signature = std::vector<std::uint64_t>;

    static std::size_t distinct(const std::vector<std::uint32_t>& colors) {
        auto c = colors;
        std::sort(c.begin(), c.end());
        return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
    }

    // Splits cells until stable. The old color leads each signature so the
    // relative order of existing cells is kept.
    void refine(std::vector<std::uint32_t>& colors) const {
        {
            auto order = colors;
            std::sort(order.begin(), order.end());
            order.erase(std::unique(order.begin(), order.end()), order.end());
            for (auto& c : colors)
                c = static_cast<std::uint32_t>(std::lower_bound(order.begin(), order.end(), c) -
                                               order.begin());
        }
        std::size_t count = distinct(colors);
        std::vector<Signature> sigs(m_);
        for (;;) {
            for (std::size_t v = 0; v < m_; ++v) {
                std::vector<std::uint64_t> nb;
                for (std::size_t u = 0; u < m_; ++u) {
                    if (u == v) continue;
                    const std::uint64_t out = s_.at(v, u), in = s_.at(u, v);
                    if (out == 0 && in == 0) continue;
                    nb.push_back((std::uint64_t{colors[u]} << 16) | (out << 8) | in);
                }
                std::sort(nb.begin(), nb.end());
                Signature& sig = sigs[v];
                sig.clear();
                sig.push_back(colors[v]);
                sig.push_back(s_.at(v, v));
                sig.insert(sig.end(), nb.begin(), nb.end());
            }
            auto order = sigs;
            std::sort(order.begin(), order.end());
            order.erase(std::unique(order.begin(), order.end()), order.end());
            for (std::size_t v = 0; v < m_; ++v)
                colors[v] = static_cast<std::uint32_t>(
                    std::lower_bound(order.begin(), order.end(), sigs[v]) - order.begin());
            if (order.size() == count) return;
            count = order.size();
        }
    }

    std::string encode(const std::vector<std::uint32_t>& colors) const {
        std::vector<std::size_t> at(m_);
        for (std::size_t v = 0; v < m_; ++v) at[colors[v]] = v;
        std::string out;
        out.reserve(4 + 4 * m_ + m_ * m_);
        auto put32 = [&](std::uint32_t x) {
            for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((x >> (24 - 8 * b)) & 0xff));
        };
        put32(static_cast<std::uint32_t>(m_));
        for (std::size_t i = 0; i < m_; ++i) put32(s_.labels[at[i]]);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j) out.push_back(static_cast<char>(s_.at(at[i], at[j])));
        return out;
    }

    void search(std::vector<std::uint32_t> colors) {
        refine(colors);
        // first non-singleton cell
        std::vector<std::size_t> cell_size(m_, 0);
        for (auto c : colors) ++cell_size[c];
        std::size_t target = m_;
        for (std::size_t c = 0; c < m_; ++c) {
            if (cell_size[c] > 1) {
                target = c;
                break;
            }
        }
        if (target == m_) {
            ++leaves_;
            std::string enc = encode(colors);
            if (!have_best_ || enc < best_) {
                best_ = std::move(enc);
                have_best_ = true;
            }
            return;
        }
        for (std::size_t v = 0; v < m_; ++v) {
            if (colors[v] != target) continue;
            std::vector<std::uint32_t> next(m_);
            for (std::size_t u = 0; u < m_; ++u)
                next[u] = 2 * colors[u] + ((colors[u] == target && u != v) ? 1u : 0u);
            search(std::move(next));
        }
    }
};

} // namespace detail

inline std::string canonical_form(const LabeledStructure& s) { return detail::Canonizer(s).run(); }

} // namespace posetmc

#endif // POSETMC_CANON_HPP
