#ifndef BIFREE_IO_HPP
#define BIFREE_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "bifree/convolution.hpp"
#include "bifree/transforms.hpp"

namespace bifree {

using nlohmann::json;

// Exact mode serializes every coefficient as a rational string ("7/6", "5"),
// so identical inputs give byte-identical output files. Float mode uses JSON
// numbers, or [re, im] pairs when an imaginary part survives.

inline json scalar_to_json(const Rational& x) { return to_string(x); }

inline json scalar_to_json(const Complex& x) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw InternalError("refusing to serialize a non-finite coefficient");
    if (x.imag() == 0.0) return x.real();
    return json::array({x.real(), x.imag()});
}

template <typename Scalar>
Scalar scalar_from_json(const json& j);

template <>
inline Rational scalar_from_json<Rational>(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number())
        throw ParseError("exact mode needs integers or rational strings, got " + j.dump());
    throw ParseError("expected a rational value, got " + j.dump());
}

template <>
inline Complex scalar_from_json<Complex>(const json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_string())
        return Complex(parse_rational(j.get<std::string>()).convert_to<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ParseError("expected a number, rational string or [re, im], got " + j.dump());
}

// ---------------------------------------------------------------------------
// Series
// ---------------------------------------------------------------------------

template <typename Scalar>
json series_to_json(const Series1<Scalar>& f) {
    json coeffs = json::array();
    for (Index k = 0; k <= f.order(); ++k) coeffs.push_back(scalar_to_json(f[k]));
    return json{{"vars", {"z"}}, {"order", f.order()}, {"coeffs", std::move(coeffs)}};
}

template <typename Scalar>
json series_to_json(const Series2<Scalar>& f) {
    json coeffs = json::array();
    for (Index p = 0; p <= f.order(); ++p) {
        json row = json::array();
        for (Index q = 0; q <= f.order(); ++q) row.push_back(scalar_to_json(f(p, q)));
        coeffs.push_back(std::move(row));
    }
    return json{{"vars", {"z", "w"}}, {"order", f.order()}, {"coeffs", std::move(coeffs)}};
}

inline int series_json_vars(const json& j) {
    if (!j.is_object() || !j.contains("vars") || !j.contains("coeffs"))
        throw ParseError("series JSON needs \"vars\" and \"coeffs\"");
    return int(j.at("vars").size());
}

template <typename Scalar>
Series1<Scalar> series1_from_json(const json& j) {
    if (series_json_vars(j) != 1)
        throw KindMismatchError("expected a 1-variable series, got 2 variables");
    const json& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || coeffs.empty())
        throw ParseError("series coefficients must be a nonempty array");
    Series1<Scalar> f(Index(coeffs.size()) - 1);
    for (Index k = 0; k <= f.order(); ++k) f[k] = scalar_from_json<Scalar>(coeffs[k]);
    return f;
}

template <typename Scalar>
Series2<Scalar> series2_from_json(const json& j) {
    if (series_json_vars(j) != 2)
        throw KindMismatchError("expected a 2-variable series, got 1 variable");
    const json& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || coeffs.empty())
        throw ParseError("series coefficients must be a nonempty array");
    Series2<Scalar> f(Index(coeffs.size()) - 1);
    for (Index p = 0; p <= f.order(); ++p) {
        const json& row = coeffs[p];
        if (!row.is_array() || Index(row.size()) != f.order() + 1)
            throw ParseError("bivariate series needs a square coefficient matrix");
        for (Index q = 0; q <= f.order(); ++q) f(p, q) = scalar_from_json<Scalar>(row[q]);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

inline TransformKind transform_kind_from_name(const std::string& name) {
    if (name == "s") return TransformKind::s;
    if (name == "t") return TransformKind::t;
    if (name == "rtilde") return TransformKind::rtilde;
    throw ParseError("unknown transform kind \"" + name + "\"");
}

template <typename Scalar>
json transform_to_json(const PartialTransform<Scalar>& t) {
    json j = series_to_json(t.series);
    j["kind"] = transform_kind_name(t.kind);
    j["source_order"] = t.source_order;
    return j;
}

template <typename Scalar>
PartialTransform<Scalar> transform_from_json(const json& j) {
    if (!j.contains("kind")) throw ParseError("transform JSON needs a \"kind\"");
    PartialTransform<Scalar> t{transform_kind_from_name(j.at("kind").get<std::string>()),
                               series2_from_json<Scalar>(j),
                               j.value("source_order", Index(0))};
    return t;
}

// ---------------------------------------------------------------------------
// Two-band distributions
// ---------------------------------------------------------------------------

template <typename Scalar>
json two_band_to_json(const TwoBand<Scalar>& d) {
    json rows = json::array();
    for (Index p = 0; p <= d.order(); ++p) {
        json row = json::array();
        for (Index q = 0; q <= d.order(); ++q) row.push_back(scalar_to_json(d.moment(p, q)));
        rows.push_back(std::move(row));
    }
    return json{{"order", d.order()}, {"moments", std::move(rows)}};
}

namespace detail {

template <typename Scalar>
TwoBand<Scalar> two_band_from_moments(const json& moments, Index order_override) {
    if (!moments.is_array() || moments.empty())
        throw ParseError("\"moments\" must be a nonempty array of rows");
    const Index order = Index(moments.size()) - 1;
    typename TwoBand<Scalar>::Moments m(order + 1, order + 1);
    for (Index p = 0; p <= order; ++p) {
        const json& row = moments[p];
        if (!row.is_array() || Index(row.size()) != order + 1)
            throw ParseError("\"moments\" must be a square matrix");
        for (Index q = 0; q <= order; ++q) m(p, q) = scalar_from_json<Scalar>(row[q]);
    }
    TwoBand<Scalar> d(std::move(m));
    if (order_override < 0) return d;
    if (order_override > d.order())
        throw ParseError("requested order exceeds the moment data in the file");
    return d.truncated_to(order_override);
}

template <typename Scalar>
std::vector<Scalar> scalar_list(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw ParseError(std::string(what) + " must be a nonempty array");
    std::vector<Scalar> v;
    for (const json& x : j) v.push_back(scalar_from_json<Scalar>(x));
    return v;
}

}  // namespace detail

// Accepts three input shapes:
//   {"order": N, "moments": [[...], ...]}            explicit square data
//   {"order": N, "atoms": [{"x","y","weight"}, ...]} atomic measure
//   {"order": N, "factorizing": {"left": [...], "right": [...]}}
// order_override (from the CLI) truncates explicit moments or sets the
// realization order of the parametric forms.
template <typename Scalar>
TwoBand<Scalar> two_band_from_json(const json& j, Index order_override = -1) {
    if (!j.is_object()) throw ParseError("distribution file must hold a JSON object");
    Index order = order_override;
    if (order < 0 && j.contains("order")) {
        if (!j.at("order").is_number_integer())
            throw ParseError("\"order\" must be an integer");
        order = j.at("order").get<Index>();
    }
    if (j.contains("moments"))
        return detail::two_band_from_moments<Scalar>(j.at("moments"), order);
    if (order < 0)
        throw ParseError("parametric distributions need an \"order\" (or --order)");
    if (order < 1) throw ParseError("order must be >= 1");

    if (j.contains("atoms")) {
        std::vector<Atom<Scalar>> atoms;
        for (const json& a : j.at("atoms")) {
            if (a.is_array() && a.size() == 3)
                atoms.push_back({scalar_from_json<Scalar>(a[0]),
                                 scalar_from_json<Scalar>(a[1]),
                                 scalar_from_json<Scalar>(a[2])});
            else if (a.is_object())
                atoms.push_back({scalar_from_json<Scalar>(a.at("x")),
                                 scalar_from_json<Scalar>(a.at("y")),
                                 scalar_from_json<Scalar>(a.at("weight"))});
            else
                throw ParseError("atom entries must be [x, y, weight] or objects");
        }
        return TwoBand<Scalar>::from_atoms(atoms, order);
    }
    if (j.contains("factorizing")) {
        const json& f = j.at("factorizing");
        if (!f.is_object() || !f.contains("left") || !f.contains("right"))
            throw ParseError("\"factorizing\" needs \"left\" and \"right\" moment lists");
        return TwoBand<Scalar>::factorizing(
            detail::scalar_list<Scalar>(f.at("left"), "factorizing.left"),
            detail::scalar_list<Scalar>(f.at("right"), "factorizing.right"), order);
    }
    throw ParseError("distribution file needs \"moments\", \"atoms\" or \"factorizing\"");
}

inline std::string dump_pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace bifree

#endif
