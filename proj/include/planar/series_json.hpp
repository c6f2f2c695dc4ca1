#pragma once

// JSON form of series and germs.
//
//   {"trunc": N, "scalar": "rational", "terms": [{"tree": "(x,x)", "value": "1/2"}, ...]}
//   {"trunc": N, "scalar": "complex",  "terms": [{"tree": "(x,x)", "re": 0.5, "im": 0}, ...]}
//
// Terms are written in canonical order without zeros. A germ adds "base",
// {"re": .., "im": ..} for complex scalars or "p/q" for rationals.

#include "planar/rebase.hpp"
#include "planar/scalar.hpp"
#include "planar/series.hpp"
#include "planar/tree.hpp"

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace planar {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json scalar_fields(const Rational& v) { return Json{{"value", v.get_str()}}; }
inline Json scalar_fields(const Complex& v) { return Json{{"re", v.real()}, {"im", v.imag()}}; }

inline const char* scalar_name(const Rational*) { return "rational"; }
inline const char* scalar_name(const Complex*) { return "complex"; }

inline Json base_field(const Rational& v) { return v.get_str(); }
inline Json base_field(const Complex& v) { return Json{{"re", v.real()}, {"im", v.imag()}}; }

[[noreturn]] inline void bad_json(const std::string& what) { throw std::invalid_argument("series JSON: " + what); }

inline double read_number(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) bad_json(std::string("missing numeric field \"") + key + "\"");
    return j.at(key).get<double>();
}

inline Rational read_scalar(const Json& term, const Rational*) {
    if (!term.contains("value") || !term.at("value").is_string()) bad_json("rational term needs a string \"value\"");
    return ScalarTraits<Rational>::parse(term.at("value").get<std::string>());
}

inline Complex read_scalar(const Json& term, const Complex*) {
    return {read_number(term, "re"), read_number(term, "im")};
}

inline Rational read_base(const Json& j, const Rational*) {
    if (!j.is_string()) bad_json("rational \"base\" must be a string");
    return ScalarTraits<Rational>::parse(j.get<std::string>());
}

inline Complex read_base(const Json& j, const Complex*) {
    if (!j.is_object()) bad_json("complex \"base\" must be an object");
    return {read_number(j, "re"), read_number(j, "im")};
}

}  // namespace detail

template <typename S>
Json to_json(const TruncatedPlanarSeries<S>& f) {
    Json terms = Json::array();
    for (const auto& [t, v] : f.terms()) {
        if (v == ScalarTraits<S>::zero()) continue;
        Json term{{"tree", format(t)}};
        term.update(detail::scalar_fields(v));
        terms.push_back(std::move(term));
    }
    return Json{{"trunc", f.trunc()}, {"scalar", detail::scalar_name(static_cast<const S*>(nullptr))}, {"terms", terms}};
}

template <typename S>
Json to_json(const Germ<S>& g) {
    Json j = to_json(g.series);
    j["base"] = detail::base_field(g.base);
    return j;
}

// Scalar kind named by a series or germ document.
inline std::string scalar_kind(const Json& j) {
    if (!j.is_object() || !j.contains("scalar") || !j.at("scalar").is_string()) {
        detail::bad_json("missing \"scalar\"");
    }
    const auto s = j.at("scalar").get<std::string>();
    if (s != "rational" && s != "complex") detail::bad_json("unknown scalar \"" + s + "\"");
    return s;
}

template <typename S>
TruncatedPlanarSeries<S> series_from_json(const Json& j) {
    const S* tag = nullptr;
    if (scalar_kind(j) != detail::scalar_name(tag)) detail::bad_json("scalar kind mismatch");
    if (!j.contains("trunc") || !j.at("trunc").is_number_integer()) detail::bad_json("missing integer \"trunc\"");
    const int trunc = j.at("trunc").get<int>();
    if (trunc < 0) detail::bad_json("negative \"trunc\"");
    if (!j.contains("terms") || !j.at("terms").is_array()) detail::bad_json("missing \"terms\" array");
    std::vector<typename TruncatedPlanarSeries<S>::Term> terms;
    std::set<PlanarMonomial> seen;
    for (const auto& term : j.at("terms")) {
        if (!term.is_object() || !term.contains("tree") || !term.at("tree").is_string()) {
            detail::bad_json("term needs a string \"tree\"");
        }
        auto t = parse(term.at("tree").get<std::string>());
        if (t.degree() > trunc) detail::bad_json("term degree exceeds \"trunc\"");
        if (!seen.insert(t).second) detail::bad_json("duplicate tree " + format(t));
        terms.emplace_back(std::move(t), detail::read_scalar(term, tag));
    }
    return TruncatedPlanarSeries<S>::from_terms(trunc, std::move(terms));
}

template <typename S>
Germ<S> germ_from_json(const Json& j) {
    if (!j.contains("base")) detail::bad_json("germ needs \"base\"");
    const S* tag = nullptr;
    return {detail::read_base(j.at("base"), tag), series_from_json<S>(j)};
}

}  // namespace planar
