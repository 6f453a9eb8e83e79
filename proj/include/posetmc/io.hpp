#ifndef POSETMC_IO_HPP
#define POSETMC_IO_HPP

// JSON file formats:
//   poset     {"n": 3, "mode": "cover" | "full", "pairs": [[0, 1]], "colors": {"2": "red"}}
//   intervals {"k": 2, "intervals": [{"a": "1/2", "b": "3", "group": 1}]}
//   result    {"verdict": true, "positions": 17, "typeCountsPerRank": [2, 3], "millis": 0}

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "posetmc/checker.hpp"
#include "posetmc/interval.hpp"
#include "posetmc/poset.hpp"

namespace posetmc {

using json = nlohmann::json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace detail {

inline json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("malformed ") + what + " JSON: " + e.what());
    }
}

template <class T>
T field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw IoError(std::string(what) + " is missing \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw IoError(std::string(what) + " field \"" + key + "\" has the wrong type");
    }
}

inline std::string rational_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw IoError("interval endpoints must be strings or integers");
}

} // namespace detail

inline Poset poset_from_json(const json& j) {
    const auto n = detail::field<std::size_t>(j, "n", "poset");
    const std::string mode = j.value("mode", std::string("cover"));
    RelationMode m;
    if (mode == "cover") m = RelationMode::cover;
    else if (mode == "full") m = RelationMode::full;
    else throw IoError("poset mode must be \"cover\" or \"full\", got \"" + mode + "\"");

    std::vector<std::pair<Element, Element>> pairs;
    if (j.contains("pairs")) {
        for (const auto& p : j.at("pairs")) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned())
                throw IoError("poset pairs must be [i, j] with non-negative integers");
            pairs.emplace_back(p[0].get<Element>(), p[1].get<Element>());
        }
    }
    std::map<Element, std::string> colors;
    if (j.contains("colors")) {
        const json& c = j.at("colors");
        if (!c.is_object()) throw IoError("poset colors must be an object");
        for (const auto& [key, value] : c.items()) {
            std::size_t used = 0;
            unsigned long idx = 0;
            try {
                idx = std::stoul(key, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != key.size() || key.empty()) throw IoError("color key \"" + key + "\" is not an element index");
            if (!value.is_string()) throw IoError("color of element " + key + " must be a string");
            colors[static_cast<Element>(idx)] = value.get<std::string>();
        }
    }
    return Poset::from_relation(n, pairs, colors, m);
}

inline Poset poset_from_text(const std::string& text) { return poset_from_json(detail::parse_json(text, "poset")); }

inline Poset load_poset(const std::string& path) { return poset_from_text(read_file(path)); }

/// Writes the cover relation; colors other than the default are listed.
inline json poset_to_json(const Poset& p) {
    json pairs = json::array();
    const std::size_t n = p.size();
    for (Element a = 0; a < n; ++a) {
        for (Element b = 0; b < n; ++b) {
            if (!p.less(a, b)) continue;
            bool cover = true;
            for (Element c = 0; c < n && cover; ++c)
                if (p.less(a, c) && p.less(c, b)) cover = false;
            if (cover) pairs.push_back({a, b});
        }
    }
    json colors = json::object();
    for (Element e = 0; e < n; ++e)
        if (p.color(e) != ColorSet::default_color) colors[std::to_string(e)] = p.color(e);
    return json{{"n", n}, {"mode", "cover"}, {"pairs", pairs}, {"colors", colors}};
}

inline IntervalInstance intervals_from_json(const json& j) {
    IntervalInstance inst;
    inst.k = detail::field<std::size_t>(j, "k", "interval file");
    const json& list = j.contains("intervals") ? j.at("intervals") : json::array();
    if (!list.is_array()) throw IoError("\"intervals\" must be an array");
    for (const auto& item : list) {
        if (!item.is_object() || !item.contains("a") || !item.contains("b"))
            throw IoError("each interval needs \"a\" and \"b\"");
        Interval iv;
        iv.a = parse_rational(detail::rational_text(item.at("a")));
        iv.b = parse_rational(detail::rational_text(item.at("b")));
        iv.group = item.value("group", std::size_t{1});
        inst.intervals.push_back(std::move(iv));
    }
    inst.validate();
    return inst;
}

inline IntervalInstance intervals_from_text(const std::string& text) {
    return intervals_from_json(detail::parse_json(text, "interval"));
}

inline IntervalInstance load_intervals(const std::string& path) { return intervals_from_text(read_file(path)); }

inline json intervals_to_json(const IntervalInstance& inst) {
    json list = json::array();
    for (const auto& iv : inst.intervals)
        list.push_back({{"a", to_string(iv.a)}, {"b", to_string(iv.b)}, {"group", iv.group}});
    return json{{"k", inst.k}, {"intervals", list}};
}

inline json result_to_json(const CheckResult& r) {
    return json{{"verdict", r.verdict},
                {"positions", r.positions},
                {"typeCountsPerRank", r.type_counts_per_rank},
                {"millis", static_cast<std::int64_t>(r.millis + 0.5)}};
}

} // namespace posetmc

#endif // POSETMC_IO_HPP
