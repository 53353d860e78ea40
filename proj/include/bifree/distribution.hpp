#ifndef BIFREE_DISTRIBUTION_HPP
#define BIFREE_DISTRIBUTION_HPP

#include <utility>
#include <vector>

#include "bifree/series.hpp"

namespace bifree {

enum class Side { left, right };

inline const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }

// Point mass at (x, y) carrying `weight` of the distribution.
template <typename Scalar>
struct Atom {
    Scalar x;
    Scalar y;
    Scalar weight;
};

// One marginal moment sequence: moments[k] = phi(a^k) or phi(b^k).
template <typename Scalar>
class Marginal {
public:
    using Moments = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Marginal(Side side, Moments moments) : side_(side), m_(std::move(moments)) {
        if (m_.size() == 0 ||
            !ScalarTraits<Scalar>::is_zero(m_(0) - Scalar(1), Tolerances::divisibility))
            throw InvalidMomentsError("marginal moment sequence must start with phi(1) = 1");
    }

    Side side() const { return side_; }
    Index order() const { return m_.size() - 1; }
    const Scalar& moment(Index k) const { return m_(k); }
    const Moments& moments() const { return m_; }
    const Scalar& mean() const { return m_(1); }

    bool operator==(const Marginal& rhs) const {
        return side_ == rhs.side_ && m_ == rhs.m_;
    }

private:
    Side side_;
    Moments m_;
};

// Two-band moment array m[p][q] = phi(a^p b^q), the joint distribution datum
// of a two-faced pair.
template <typename Scalar>
class TwoBand {
public:
    using Moments = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    explicit TwoBand(Moments moments) : m_(std::move(moments)) {
        if (m_.rows() == 0 || m_.rows() != m_.cols())
            throw InvalidMomentsError("two-band moments must form a square matrix");
        // Rejected rather than renormalized: a wrong phi(1) is a data error.
        if (!ScalarTraits<Scalar>::is_zero(m_(0, 0) - Scalar(1), Tolerances::divisibility))
            throw InvalidMomentsError("phi(1) = 1 is required: m[0][0] must equal 1");
    }

    static TwoBand from_atoms(const std::vector<Atom<Scalar>>& atoms, Index order) {
        Moments m = Moments::Zero(order + 1, order + 1);
        for (const Atom<Scalar>& a : atoms) {
            Scalar xp(1);
            for (Index p = 0; p <= order; ++p) {
                Scalar xpyq = xp;
                for (Index q = 0; q <= order; ++q) {
                    m(p, q) += a.weight * xpyq;
                    xpyq *= a.y;
                }
                xp *= a.x;
            }
        }
        return TwoBand(std::move(m));
    }

    // m[p][q] = left[p] * right[q]: the classically-independent-like case.
    static TwoBand factorizing(const std::vector<Scalar>& left,
                               const std::vector<Scalar>& right, Index order) {
        if (Index(left.size()) <= order || Index(right.size()) <= order)
            throw InvalidMomentsError("factorizing marginals shorter than requested order");
        Moments m(order + 1, order + 1);
        for (Index p = 0; p <= order; ++p)
            for (Index q = 0; q <= order; ++q) m(p, q) = left[p] * right[q];
        return TwoBand(std::move(m));
    }

    static TwoBand point_mass(const Scalar& x, const Scalar& y, Index order) {
        return from_atoms({Atom<Scalar>{x, y, Scalar(1)}}, order);
    }

    Index order() const { return m_.rows() - 1; }
    const Scalar& moment(Index p, Index q) const { return m_(p, q); }
    const Moments& moments() const { return m_; }

    Marginal<Scalar> marginal(Side side) const {
        typename Marginal<Scalar>::Moments v(order() + 1);
        for (Index k = 0; k <= order(); ++k)
            v(k) = side == Side::left ? m_(k, 0) : m_(0, k);
        return Marginal<Scalar>(side, std::move(v));
    }

    bool is_real() const {
        for (Index p = 0; p <= order(); ++p)
            for (Index q = 0; q <= order(); ++q)
                if (!ScalarTraits<Scalar>::is_real(m_(p, q))) return false;
        return true;
    }

    TwoBand truncated_to(Index order) const {
        return TwoBand(Moments(m_.topLeftCorner(order + 1, order + 1)));
    }

    bool operator==(const TwoBand& rhs) const { return m_ == rhs.m_; }

private:
    Moments m_;
};

// ---------------------------------------------------------------------------
// Named series of a distribution
// ---------------------------------------------------------------------------

// h(t) = sum_k t^k phi(a^k); h(0) = 1.
template <typename Scalar>
Series1<Scalar> h_series(const Marginal<Scalar>& d) {
    return Series1<Scalar>::from_coeffs(d.moments());
}

// psi(t) = h(t) - 1, the moment generating series without its constant term.
template <typename Scalar>
Series1<Scalar> psi_series(const Marginal<Scalar>& d) {
    Series1<Scalar> p = h_series(d);
    p[0] = Scalar(0);
    return p;
}

template <typename Scalar>
void require_nonzero_mean(const Marginal<Scalar>& d, const char* what) {
    const bool zero = ScalarTraits<Scalar>::is_exact
                          ? ScalarTraits<Scalar>::is_zero(d.mean())
                          : ScalarTraits<Scalar>::magnitude(d.mean()) <=
                                Tolerances::unit_constant;
    if (zero)
        throw ZeroMeanError(std::string(what) + ": the " + side_name(d.side()) +
                            " first moment vanishes but a nonzero mean is required");
}

// chi = the compositional inverse of psi; satisfies h(chi(z)) = z + 1.
template <typename Scalar>
Series1<Scalar> chi_series(const Marginal<Scalar>& d) {
    require_nonzero_mean(d, "chi_series");
    return compositional_inverse(psi_series(d));
}

// Full two-band generating series H(t, s) = sum t^p s^q m[p][q].
template <typename Scalar>
Series2<Scalar> H_series(const TwoBand<Scalar>& d) {
    return Series2<Scalar>::from_coeffs(d.moments());
}

// S(z) = (1+z)/z * chi(z); the constant term is 1/mean.
template <typename Scalar>
Series1<Scalar> s_transform(const Marginal<Scalar>& d) {
    require_nonzero_mean(d, "s_transform");
    const Series1<Scalar> chi_over_z = shift_down(chi_series(d), 1);
    Series1<Scalar> one_plus_z = Series1<Scalar>::one(chi_over_z.order());
    if (one_plus_z.order() >= 1) one_plus_z[1] = Scalar(1);
    return one_plus_z * chi_over_z;
}

// The additive side: invy(t) = t h(t) is the inverse of y(z) = 1 / K(z);
// ktilde(z) = z / y(z) = 1 + z R(z) keeps everything in unit power series.
template <typename Scalar>
struct KTildeSeries {
    Series1<Scalar> ktilde;  // 1 + z R(z)
    Series1<Scalar> r;       // the R-transform
    Series1<Scalar> invy;    // t h(t)
    Series1<Scalar> y;       // inverse of invy
};

template <typename Scalar>
KTildeSeries<Scalar> k_tilde(const Marginal<Scalar>& d) {
    if (d.order() < 1)
        throw PreconditionError("k_tilde: at least the first moment is required");
    const Series1<Scalar> invy = shift_up(h_series(d), 1);
    const Series1<Scalar> y = compositional_inverse(invy);
    const Series1<Scalar> ktilde = reciprocal(shift_down(y, 1));
    const Series1<Scalar> r = shift_down(ktilde - Scalar(1), 1);
    return {ktilde, r, invy, y};
}

// Reconstruct a marginal from its S-transform (inverse of s_transform).
template <typename Scalar>
Marginal<Scalar> moments_from_s(const Series1<Scalar>& s, Side side) {
    require_unit(s[0], "moments_from_s");
    Series1<Scalar> one_plus_z = Series1<Scalar>::one(s.order());
    if (one_plus_z.order() >= 1) one_plus_z[1] = Scalar(1);
    const Series1<Scalar> chi = shift_up(s * reciprocal(one_plus_z), 1);
    const Series1<Scalar> psi = compositional_inverse(chi);
    typename Marginal<Scalar>::Moments m(psi.order() + 1);
    m(0) = Scalar(1);
    for (Index k = 1; k <= psi.order(); ++k) m(k) = psi[k];
    return Marginal<Scalar>(side, std::move(m));
}

// Reconstruct a marginal from its R-transform (inverse of k_tilde).
template <typename Scalar>
Marginal<Scalar> moments_from_r(const Series1<Scalar>& r, Side side) {
    const Series1<Scalar> ktilde = shift_up(r, 1) + Scalar(1);
    const Series1<Scalar> y = shift_up(reciprocal(ktilde), 1);
    const Series1<Scalar> invy = compositional_inverse(y);
    const Series1<Scalar> h = shift_down(invy, 1);
    return Marginal<Scalar>(side, h.coeffs());
}

}  // namespace bifree

#endif
