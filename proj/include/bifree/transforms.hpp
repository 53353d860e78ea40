#ifndef BIFREE_TRANSFORMS_HPP
#define BIFREE_TRANSFORMS_HPP

#include <utility>

#include "bifree/distribution.hpp"

namespace bifree {

enum class TransformKind { s, t, rtilde };

inline const char* transform_kind_name(TransformKind k) {
    switch (k) {
        case TransformKind::s: return "s";
        case TransformKind::t: return "t";
        default: return "rtilde";
    }
}

// One of the three 2-variable partial transforms, in the variables (z, w).
// All three are computed through their singularity-free rearrangements, so
// the stored series is an ordinary truncated power series.
template <typename Scalar>
struct PartialTransform {
    TransformKind kind;
    Series2<Scalar> series;
    Index source_order;  // order of the two-band data it came from
};

namespace detail {

// (1+z)(1+w) truncated.
template <typename Scalar>
Series2<Scalar> unit_box(Index order) {
    Series2<Scalar> b = Series2<Scalar>::one(order);
    if (order >= 1) {
        b(1, 0) = Scalar(1);
        b(0, 1) = Scalar(1);
        b(1, 1) = Scalar(1);
    }
    return b;
}

// 1 + z + w truncated.
template <typename Scalar>
Series2<Scalar> one_plus_z_plus_w(Index order) {
    Series2<Scalar> b = Series2<Scalar>::one(order);
    if (order >= 1) {
        b(1, 0) = Scalar(1);
        b(0, 1) = Scalar(1);
    }
    return b;
}

template <typename Scalar>
void require_internal_unit(const Series2<Scalar>& f, const char* what) {
    if constexpr (ScalarTraits<Scalar>::is_exact) {
        if (f(0, 0) != Scalar(1))
            throw InternalError(std::string(what) + ": expected a unit constant term 1");
    } else {
        if (ScalarTraits<Scalar>::magnitude(f(0, 0) - Scalar(1)) > Tolerances::divisibility)
            throw InternalError(std::string(what) + ": expected a unit constant term 1");
    }
}

// Structural zero test used by the transform invariants below.
template <typename Scalar>
bool structurally_zero(const Scalar& x, const Series2<Scalar>& context) {
    return negligible(x, context);
}

// Powers z^p ktilde(z)^{-p-1} accumulated Horner-style; the p-th entry has
// valuation p so the sum over p <= order is exact at this truncation.
template <typename Scalar>
std::vector<Series1<Scalar>> resolvent_powers(const Series1<Scalar>& ktilde, Index order) {
    const Series1<Scalar> kinv = reciprocal(truncated(ktilde, order));
    const Series1<Scalar> z_kinv = truncated(shift_up(kinv, 1), order);
    std::vector<Series1<Scalar>> a{kinv};
    for (Index p = 1; p <= order; ++p) a.push_back(a.back() * z_kinv);
    return a;
}

}  // namespace detail

// Partial S-transform of a two-band distribution with nonzero means:
//   S(z, w) = (1+z)(1+w) * [(Hcirc - (1+z+w)) / (zw)] / Hcirc,
// where Hcirc(z, w) = H(chi_a(z), chi_b(w)). Divisibility of the numerator
// by zw holds identically in the moments, so a NotDivisibleError here means
// an arithmetic bug rather than bad input.
namespace detail {

inline void require_order_one(Index order, const char* what) {
    if (order < 1)
        throw PreconditionError(std::string(what) + ": moment data of order >= 1 required");
}

}  // namespace detail

template <typename Scalar>
PartialTransform<Scalar> partial_s_transform(const TwoBand<Scalar>& d) {
    detail::require_order_one(d.order(), "partial_s_transform");
    const Marginal<Scalar> left = d.marginal(Side::left);
    const Marginal<Scalar> right = d.marginal(Side::right);
    require_nonzero_mean(left, "partial_s_transform");
    require_nonzero_mean(right, "partial_s_transform");

    const Index n = d.order();
    const Series2<Scalar> hcirc = substitute(H_series(d), chi_series(left), chi_series(right));
    detail::require_internal_unit(hcirc, "partial_s_transform");
    const Series2<Scalar> numer = hcirc - detail::one_plus_z_plus_w<Scalar>(n);
    const Series2<Scalar> eta = shift_down(numer, 1, 1);  // loses one order
    const Series2<Scalar> s =
        detail::unit_box<Scalar>(n - 1) * eta * reciprocal(truncated(hcirc, n - 1));
    return {TransformKind::s, s, n};
}

// Partial T-transform, defined when the right mean is nonzero:
//   T(z, w) = (1+w) * [(D - 1) / w] / D,
// with D(z, w) = sum_{p,q} z^p ktilde_a(z)^{-p-1} chi_b(w)^q m[p][q], the
// unit-series form of F(K_a(z), chi_b(w)) / z. The w-free part of D is 1
// identically (it is G_a(K_a(z)) / z), so divisibility by w is structural.
template <typename Scalar>
PartialTransform<Scalar> partial_t_transform(const TwoBand<Scalar>& d) {
    detail::require_order_one(d.order(), "partial_t_transform");
    const Marginal<Scalar> right = d.marginal(Side::right);
    require_nonzero_mean(right, "partial_t_transform");

    const Index n = d.order();
    const auto kt = k_tilde(d.marginal(Side::left));
    const std::vector<Series1<Scalar>> a = detail::resolvent_powers(kt.ktilde, n);
    const Series1<Scalar> chi_b = chi_series(right);

    Series2<Scalar> dser(n);
    for (Index p = 0; p <= n; ++p) {
        // Horner in chi_b over the q-row of the moments.
        Series1<Scalar> row = Series1<Scalar>::constant(d.moment(p, n), n);
        for (Index q = n - 1; q >= 0; --q) row = (row * chi_b) + d.moment(p, q);
        dser = dser + outer(a[p], row);
    }
    detail::require_internal_unit(dser, "partial_t_transform");

    const Series2<Scalar> theta = shift_down(dser - Scalar(1), 0, 1);
    Series2<Scalar> one_plus_w(n - 1);
    one_plus_w(0, 0) = Scalar(1);
    if (n - 1 >= 1) one_plus_w(0, 1) = Scalar(1);
    const Series2<Scalar> t = one_plus_w * theta * reciprocal(truncated(dser, n - 1));

    // The z-degree-only part of T is the constant series 1.
    for (Index q = 0; q <= t.order(); ++q) {
        const Scalar expect = q == 0 ? Scalar(1) : Scalar(0);
        if (!detail::structurally_zero(Scalar(t(0, q) - expect), t))
            throw InternalError("partial_t_transform: T(0, w) != 1");
    }
    return {TransformKind::t, t, n};
}

// Reduced partial R-transform (no mean conditions):
//   Rtilde(z, w) = 1 - 1 / E,
// with E = sum_{m,n} z^m ktilde_a(z)^{-m-1} w^n ktilde_b(w)^{-n-1} m[m][n],
// the unit-series form of G(K_a(z), K_b(w)) / (zw). Both boundary rows of E
// collapse to the constant 1, so Rtilde vanishes on both axes.
template <typename Scalar>
PartialTransform<Scalar> partial_r_reduced(const TwoBand<Scalar>& d) {
    detail::require_order_one(d.order(), "partial_r_reduced");
    const Index n = d.order();
    const std::vector<Series1<Scalar>> az =
        detail::resolvent_powers(k_tilde(d.marginal(Side::left)).ktilde, n);
    const std::vector<Series1<Scalar>> bw =
        detail::resolvent_powers(k_tilde(d.marginal(Side::right)).ktilde, n);

    Series2<Scalar> e(n);
    for (Index p = 0; p <= n; ++p) {
        Series1<Scalar> row(n);
        for (Index q = 0; q <= n; ++q) {
            if (ScalarTraits<Scalar>::is_zero(d.moment(p, q))) continue;
            row = row + d.moment(p, q) * bw[q];
        }
        e = e + outer(az[p], row);
    }
    detail::require_internal_unit(e, "partial_r_reduced");

    const Series2<Scalar> rt = -(reciprocal(e) - Scalar(1));
    for (Index k = 0; k <= rt.order(); ++k)
        if (!detail::structurally_zero(rt(0, k), rt) ||
            !detail::structurally_zero(rt(k, 0), rt))
            throw InternalError("partial_r_reduced: boundary rows must vanish");
    return {TransformKind::rtilde, rt, n};
}

}  // namespace bifree

#endif
