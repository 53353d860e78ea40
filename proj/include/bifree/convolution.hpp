#ifndef BIFREE_CONVOLUTION_HPP
#define BIFREE_CONVOLUTION_HPP

#include "bifree/oracle.hpp"
#include "bifree/transforms.hpp"

namespace bifree {

template <typename Scalar>
struct ConvolutionResult {
    TwoBand<Scalar> result;
    ConvOp op;
    Index reliable_order;
};

namespace detail {

template <typename Scalar>
void require_same_side(const Marginal<Scalar>& x, const Marginal<Scalar>& y) {
    if (x.side() != y.side())
        throw PreconditionError("marginal convolution needs two marginals of the same side");
}

// Exact-mode consistency anchor: the left-marginal row of a reconstructed
// two-band series must reproduce the separately computed product marginal.
template <typename Scalar>
void check_left_anchor(const Series2<Scalar>& h12, const Marginal<Scalar>& left) {
    if constexpr (ScalarTraits<Scalar>::is_exact) {
        for (Index p = 0; p <= h12.order(); ++p)
            if (h12(p, 0) != left.moment(p))
                throw InternalError("convolution: left marginal anchor mismatch");
    }
}

}  // namespace detail

// Free multiplicative convolution of one-variable distributions through the
// multiplicativity of the S-transform. Both means must be nonzero.
template <typename Scalar>
Marginal<Scalar> free_mult(const Marginal<Scalar>& x, const Marginal<Scalar>& y) {
    detail::require_same_side(x, y);
    return moments_from_s(s_transform(x) * s_transform(y), x.side());
}

// Free additive convolution through the additivity of the R-transform.
template <typename Scalar>
Marginal<Scalar> free_add(const Marginal<Scalar>& x, const Marginal<Scalar>& y) {
    detail::require_same_side(x, y);
    return moments_from_r(k_tilde(x).r + k_tilde(y).r, x.side());
}

// Bi-multiplicative bi-free convolution: the joint distribution of
// (a1 a2, b1 b2) for bi-free pairs, computed by multiplying the partial
// S-transforms and inverting the defining display,
//   Hcirc = (1+z+w) / (1 - zw S / ((1+z)(1+w))),
// then returning from (z, w) to moment variables with the product psi's.
// One order is lost in the transform product; the published reliable order
// is min(order) - 1.
template <typename Scalar>
ConvolutionResult<Scalar> bb_mult(const TwoBand<Scalar>& mu, const TwoBand<Scalar>& nu) {
    const Index n = std::min(mu.order(), nu.order());
    const Series2<Scalar> s12 =
        partial_s_transform(mu).series * partial_s_transform(nu).series;

    const Marginal<Scalar> left12 =
        free_mult(mu.marginal(Side::left), nu.marginal(Side::left));
    const Marginal<Scalar> right12 =
        free_mult(mu.marginal(Side::right), nu.marginal(Side::right));

    const Series2<Scalar> scaled = s12 * reciprocal(detail::unit_box<Scalar>(n - 1));
    const Series2<Scalar> denom = Series2<Scalar>::one(n) - shift_up(scaled, 1, 1);
    detail::require_internal_unit(denom, "bb_mult");
    const Series2<Scalar> hcirc12 =
        detail::one_plus_z_plus_w<Scalar>(n) * reciprocal(denom);
    detail::require_internal_unit(hcirc12, "bb_mult");

    const Series2<Scalar> h12 =
        substitute(hcirc12, psi_series(left12), psi_series(right12));
    detail::check_left_anchor(h12, left12);

    const TwoBand<Scalar> full{typename TwoBand<Scalar>::Moments(h12.coeffs())};
    return {full.truncated_to(n - 1), ConvOp::bbmult, n - 1};
}

// Additive-multiplicative bi-free convolution: the joint distribution of
// (a1 + a2, b1 b2), computed by multiplying the partial T-transforms and
// inverting the defining display,
//   D = 1 / (1 - w T / (1+w)),
// then undoing the chi_b substitution in the second variable and the
// K_a resolvent expansion in the first. No left-mean condition.
template <typename Scalar>
ConvolutionResult<Scalar> bp_mult(const TwoBand<Scalar>& mu, const TwoBand<Scalar>& nu) {
    const Index n = std::min(mu.order(), nu.order());
    const Series2<Scalar> t12 =
        partial_t_transform(mu).series * partial_t_transform(nu).series;

    const Marginal<Scalar> left12 =
        free_add(mu.marginal(Side::left), nu.marginal(Side::left));
    const Marginal<Scalar> right12 =
        free_mult(mu.marginal(Side::right), nu.marginal(Side::right));

    Series2<Scalar> one_plus_w = Series2<Scalar>::one(n - 1);
    if (n - 1 >= 1) one_plus_w(0, 1) = Scalar(1);
    const Series2<Scalar> scaled = t12 * reciprocal(one_plus_w);
    const Series2<Scalar> denom = Series2<Scalar>::one(n - 1) - shift_up(scaled, 0, 1);
    detail::require_internal_unit(denom, "bp_mult");
    const Series2<Scalar> d12 = reciprocal(denom);

    // Replace chi_b(w) by the plain second variable, then z^p ktilde^{-p-1}
    // by the plain first variable via z = invy(t).
    const Series2<Scalar> c =
        substitute(d12, Series1<Scalar>::identity(n - 1), psi_series(right12));
    const auto kt12 = k_tilde(left12);
    const Series2<Scalar> kc = embed_z(kt12.ktilde, n - 1) * c;
    const Series2<Scalar> h12 =
        substitute(kc, truncated(kt12.invy, n - 1), Series1<Scalar>::identity(n - 1));
    detail::check_left_anchor(h12, Marginal<Scalar>(
        Side::left, typename Marginal<Scalar>::Moments(
                        left12.moments().head(n))));

    const TwoBand<Scalar> full{typename TwoBand<Scalar>::Moments(h12.coeffs())};
    return {full, ConvOp::bpmult, n - 1};
}

}  // namespace bifree

#endif
