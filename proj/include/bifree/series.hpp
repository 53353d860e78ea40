#ifndef BIFREE_SERIES_HPP
#define BIFREE_SERIES_HPP

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include "bifree/errors.hpp"
#include "bifree/scalar.hpp"

namespace bifree {

using Index = Eigen::Index;

// Shared tolerance policy for the floating coefficient field. Exact-mode
// checks ignore these and demand literal zeros.
struct Tolerances {
    static constexpr double unit_constant = 1e-12;   // reciprocal precondition
    static constexpr double divisibility = 1e-9;     // relative, vs max |coeff|
};

// Truncated power series in one variable. coeff(k) multiplies t^k and every
// index 0..order() is trustworthy; operations shrink the order whenever they
// cannot guarantee the top coefficients.
template <typename Scalar>
class Series1 {
public:
    using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit Series1(Index order) : c_(Coeffs::Zero(order + 1)) {
        if (order < 0) throw InternalError("series order must be >= 0");
    }

    static Series1 from_coeffs(Coeffs coeffs) {
        if (coeffs.size() == 0) throw InternalError("series needs a constant term");
        Series1 f(coeffs.size() - 1);
        f.c_ = std::move(coeffs);
        return f;
    }

    static Series1 from_list(std::initializer_list<Scalar> coeffs) {
        Series1 f(static_cast<Index>(coeffs.size()) - 1);
        Index k = 0;
        for (const Scalar& v : coeffs) f.c_(k++) = v;
        return f;
    }

    static Series1 constant(const Scalar& value, Index order) {
        Series1 f(order);
        f.c_(0) = value;
        return f;
    }

    static Series1 one(Index order) { return constant(Scalar(1), order); }

    // The series t itself.
    static Series1 identity(Index order) {
        Series1 f(order);
        if (order >= 1) f.c_(1) = Scalar(1);
        return f;
    }

    Index order() const { return c_.size() - 1; }
    const Coeffs& coeffs() const { return c_; }
    const Scalar& operator[](Index k) const { return c_(k); }
    Scalar& operator[](Index k) { return c_(k); }

    bool operator==(const Series1& rhs) const {
        return order() == rhs.order() && c_ == rhs.c_;
    }

private:
    Coeffs c_;
};

// Truncated power series in two variables with rectangular truncation:
// coeff(p, q) multiplies t^p s^q and every pair p, q <= order() is present.
template <typename Scalar>
class Series2 {
public:
    using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    explicit Series2(Index order) : c_(Coeffs::Zero(order + 1, order + 1)) {
        if (order < 0) throw InternalError("series order must be >= 0");
    }

    static Series2 from_coeffs(Coeffs coeffs) {
        if (coeffs.rows() == 0 || coeffs.rows() != coeffs.cols())
            throw InternalError("bivariate series needs a square coefficient matrix");
        Series2 f(coeffs.rows() - 1);
        f.c_ = std::move(coeffs);
        return f;
    }

    static Series2 constant(const Scalar& value, Index order) {
        Series2 f(order);
        f.c_(0, 0) = value;
        return f;
    }

    static Series2 one(Index order) { return constant(Scalar(1), order); }

    static Series2 monomial(Index p, Index q, Index order) {
        Series2 f(order);
        f.c_(p, q) = Scalar(1);
        return f;
    }

    Index order() const { return c_.rows() - 1; }
    const Coeffs& coeffs() const { return c_; }
    const Scalar& operator()(Index p, Index q) const { return c_(p, q); }
    Scalar& operator()(Index p, Index q) { return c_(p, q); }

    bool operator==(const Series2& rhs) const {
        return order() == rhs.order() && c_ == rhs.c_;
    }

private:
    Coeffs c_;
};

namespace detail {

template <typename Scalar>
double max_abs_coeff(const Series1<Scalar>& f) {
    double m = 0;
    for (Index k = 0; k <= f.order(); ++k)
        m = std::max(m, ScalarTraits<Scalar>::magnitude(f[k]));
    return m;
}

template <typename Scalar>
double max_abs_coeff(const Series2<Scalar>& f) {
    double m = 0;
    for (Index p = 0; p <= f.order(); ++p)
        for (Index q = 0; q <= f.order(); ++q)
            m = std::max(m, ScalarTraits<Scalar>::magnitude(f(p, q)));
    return m;
}

// Zero test for divisibility checks: literal in exact mode, relative to the
// series magnitude in float mode.
template <typename Scalar, typename SeriesT>
bool negligible(const Scalar& x, const SeriesT& context) {
    if constexpr (ScalarTraits<Scalar>::is_exact)
        return ScalarTraits<Scalar>::is_zero(x);
    else
        return ScalarTraits<Scalar>::magnitude(x) <=
               Tolerances::divisibility * (1.0 + max_abs_coeff(context));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ring operations (result order = min of operand orders)
// ---------------------------------------------------------------------------

template <typename Scalar>
Series1<Scalar> truncated(const Series1<Scalar>& f, Index order) {
    if (order > f.order())
        throw InternalError("cannot truncate a series to a higher order");
    Series1<Scalar> r(order);
    for (Index k = 0; k <= order; ++k) r[k] = f[k];
    return r;
}

template <typename Scalar>
Series2<Scalar> truncated(const Series2<Scalar>& f, Index order) {
    if (order > f.order())
        throw InternalError("cannot truncate a series to a higher order");
    Series2<Scalar> r(order);
    for (Index p = 0; p <= order; ++p)
        for (Index q = 0; q <= order; ++q) r(p, q) = f(p, q);
    return r;
}

template <typename Scalar>
Series1<Scalar> operator+(const Series1<Scalar>& f, const Series1<Scalar>& g) {
    const Index n = std::min(f.order(), g.order());
    Series1<Scalar> r(n);
    for (Index k = 0; k <= n; ++k) r[k] = f[k] + g[k];
    return r;
}

template <typename Scalar>
Series1<Scalar> operator-(const Series1<Scalar>& f, const Series1<Scalar>& g) {
    const Index n = std::min(f.order(), g.order());
    Series1<Scalar> r(n);
    for (Index k = 0; k <= n; ++k) r[k] = f[k] - g[k];
    return r;
}

template <typename Scalar>
Series1<Scalar> operator-(const Series1<Scalar>& f) {
    Series1<Scalar> r(f.order());
    for (Index k = 0; k <= f.order(); ++k) r[k] = -f[k];
    return r;
}

template <typename Scalar>
Series1<Scalar> operator*(const Series1<Scalar>& f, const Series1<Scalar>& g) {
    const Index n = std::min(f.order(), g.order());
    Series1<Scalar> r(n);
    for (Index i = 0; i <= n; ++i) {
        if (ScalarTraits<Scalar>::is_zero(f[i])) continue;
        for (Index j = 0; i + j <= n; ++j) r[i + j] += f[i] * g[j];
    }
    return r;
}

template <typename Scalar>
Series1<Scalar> operator*(const Scalar& a, const Series1<Scalar>& f) {
    Series1<Scalar> r(f.order());
    for (Index k = 0; k <= f.order(); ++k) r[k] = a * f[k];
    return r;
}

template <typename Scalar>
Series1<Scalar> operator+(const Series1<Scalar>& f, const Scalar& a) {
    Series1<Scalar> r = f;
    r[0] += a;
    return r;
}

template <typename Scalar>
Series1<Scalar> operator-(const Series1<Scalar>& f, const Scalar& a) {
    Series1<Scalar> r = f;
    r[0] -= a;
    return r;
}

template <typename Scalar>
Series2<Scalar> operator+(const Series2<Scalar>& f, const Series2<Scalar>& g) {
    const Index n = std::min(f.order(), g.order());
    Series2<Scalar> r(n);
    for (Index p = 0; p <= n; ++p)
        for (Index q = 0; q <= n; ++q) r(p, q) = f(p, q) + g(p, q);
    return r;
}

template <typename Scalar>
Series2<Scalar> operator-(const Series2<Scalar>& f, const Series2<Scalar>& g) {
    const Index n = std::min(f.order(), g.order());
    Series2<Scalar> r(n);
    for (Index p = 0; p <= n; ++p)
        for (Index q = 0; q <= n; ++q) r(p, q) = f(p, q) - g(p, q);
    return r;
}

template <typename Scalar>
Series2<Scalar> operator-(const Series2<Scalar>& f) {
    Series2<Scalar> r(f.order());
    for (Index p = 0; p <= f.order(); ++p)
        for (Index q = 0; q <= f.order(); ++q) r(p, q) = -f(p, q);
    return r;
}

template <typename Scalar>
Series2<Scalar> operator*(const Series2<Scalar>& f, const Series2<Scalar>& g) {
    const Index n = std::min(f.order(), g.order());
    Series2<Scalar> r(n);
    for (Index p1 = 0; p1 <= n; ++p1)
        for (Index q1 = 0; q1 <= n; ++q1) {
            if (ScalarTraits<Scalar>::is_zero(f(p1, q1))) continue;
            for (Index p2 = 0; p1 + p2 <= n; ++p2)
                for (Index q2 = 0; q1 + q2 <= n; ++q2)
                    r(p1 + p2, q1 + q2) += f(p1, q1) * g(p2, q2);
        }
    return r;
}

template <typename Scalar>
Series2<Scalar> operator*(const Scalar& a, const Series2<Scalar>& f) {
    Series2<Scalar> r(f.order());
    for (Index p = 0; p <= f.order(); ++p)
        for (Index q = 0; q <= f.order(); ++q) r(p, q) = a * f(p, q);
    return r;
}

template <typename Scalar>
Series2<Scalar> operator+(const Series2<Scalar>& f, const Scalar& a) {
    Series2<Scalar> r = f;
    r(0, 0) += a;
    return r;
}

template <typename Scalar>
Series2<Scalar> operator-(const Series2<Scalar>& f, const Scalar& a) {
    Series2<Scalar> r = f;
    r(0, 0) -= a;
    return r;
}

// ---------------------------------------------------------------------------
// Multiplicative inverse of a unit series
// ---------------------------------------------------------------------------

template <typename Scalar>
void require_unit(const Scalar& c0, const char* what) {
    const bool unit = ScalarTraits<Scalar>::is_exact
                          ? !ScalarTraits<Scalar>::is_zero(c0)
                          : ScalarTraits<Scalar>::magnitude(c0) > Tolerances::unit_constant;
    if (!unit) throw NotAUnitError(std::string(what) + ": constant term vanishes");
}

template <typename Scalar>
Series1<Scalar> reciprocal(const Series1<Scalar>& f) {
    require_unit(f[0], "reciprocal");
    const Index n = f.order();
    Series1<Scalar> g(n);
    const Scalar inv0 = Scalar(1) / f[0];
    g[0] = inv0;
    for (Index k = 1; k <= n; ++k) {
        Scalar acc(0);
        for (Index j = 1; j <= k; ++j) acc += f[j] * g[k - j];
        g[k] = -inv0 * acc;
    }
    return g;
}

namespace detail {

template <typename Scalar>
Series1<Scalar> w_slice(const Series2<Scalar>& f, Index q) {
    Series1<Scalar> s(f.order());
    for (Index p = 0; p <= f.order(); ++p) s[p] = f(p, q);
    return s;
}

template <typename Scalar>
void set_w_slice(Series2<Scalar>& f, Index q, const Series1<Scalar>& s) {
    for (Index p = 0; p <= f.order(); ++p) f(p, q) = s[p];
}

}  // namespace detail

template <typename Scalar>
Series2<Scalar> reciprocal(const Series2<Scalar>& f) {
    require_unit(f(0, 0), "reciprocal");
    const Index n = f.order();
    // Triangular in the s-degree: each s^q slice of f * g = 1 determines the
    // next slice of g from the previous ones.
    std::vector<Series1<Scalar>> fq, gq;
    for (Index q = 0; q <= n; ++q) fq.push_back(detail::w_slice(f, q));
    gq.push_back(reciprocal(fq[0]));
    for (Index q = 1; q <= n; ++q) {
        Series1<Scalar> acc(n);
        for (Index j = 1; j <= q; ++j) acc = acc + fq[j] * gq[q - j];
        gq.push_back(-(gq[0] * acc));
    }
    Series2<Scalar> g(n);
    for (Index q = 0; q <= n; ++q) detail::set_w_slice(g, q, gq[q]);
    return g;
}

// ---------------------------------------------------------------------------
// Composition and compositional inversion
// ---------------------------------------------------------------------------

template <typename Scalar>
void require_zero_base(const Scalar& c0, const char* what) {
    if (!ScalarTraits<Scalar>::is_zero(c0))
        throw CompositionBaseError(std::string(what) +
                                   ": inner series has a nonzero constant term");
}

// f(g(t)) truncated to min(order f, order g); requires g(0) = 0.
template <typename Scalar>
Series1<Scalar> compose(const Series1<Scalar>& f, const Series1<Scalar>& g) {
    require_zero_base(g[0], "compose");
    const Index n = std::min(f.order(), g.order());
    Series1<Scalar> r = Series1<Scalar>::constant(f[f.order()], n);
    for (Index k = f.order() - 1; k >= 0; --k) r = (r * g) + f[k];
    return r;
}

// Compositional inverse: g with f(g(z)) = z and g(f(t)) = t to order f.
// Solved order by order; each new coefficient is fixed by the requirement
// that f(g) has a vanishing z^k coefficient.
template <typename Scalar>
Series1<Scalar> compositional_inverse(const Series1<Scalar>& f) {
    if (!ScalarTraits<Scalar>::is_zero(f[0]))
        throw NotInvertibleError("compositional_inverse: f(0) != 0");
    const Index n = f.order();
    if (n < 1 || ScalarTraits<Scalar>::is_zero(f[1]))
        throw NotInvertibleError("compositional_inverse: f'(0) == 0");
    Series1<Scalar> g(n);
    const Scalar inv1 = Scalar(1) / f[1];
    g[1] = inv1;
    for (Index k = 2; k <= n; ++k) {
        // g is correct below k and zero at k, so compose(f, g)[k] is the
        // defect that f[1] * g[k] must cancel.
        const Series1<Scalar> fg = compose(truncated(f, k), truncated(g, k));
        g[k] = -inv1 * fg[k];
    }
    return g;
}

// H(u(z), v(w)) for univariate arguments with u(0) = v(0) = 0.
template <typename Scalar>
Series2<Scalar> substitute(const Series2<Scalar>& H, const Series1<Scalar>& u,
                           const Series1<Scalar>& v) {
    require_zero_base(u[0], "substitute");
    require_zero_base(v[0], "substitute");
    const Index n = std::min({H.order(), u.order(), v.order()});
    const Series1<Scalar> ut = truncated(u, n);
    const Series1<Scalar> vt = truncated(v, n);
    std::vector<Series1<Scalar>> upow{Series1<Scalar>::one(n)};
    std::vector<Series1<Scalar>> vpow{Series1<Scalar>::one(n)};
    for (Index k = 1; k <= n; ++k) {
        upow.push_back(upow.back() * ut);
        vpow.push_back(vpow.back() * vt);
    }
    Series2<Scalar> r(n);
    for (Index p = 0; p <= std::min(H.order(), n); ++p)
        for (Index q = 0; q <= std::min(H.order(), n); ++q) {
            const Scalar& c = H(p, q);
            if (ScalarTraits<Scalar>::is_zero(c)) continue;
            // u^p v^q has valuation (p, q); nothing to add beyond order n.
            if (p > n || q > n) continue;
            for (Index i = p; i <= n; ++i) {
                if (ScalarTraits<Scalar>::is_zero(upow[p][i])) continue;
                for (Index j = q; j <= n; ++j)
                    r(i, j) += c * upow[p][i] * vpow[q][j];
            }
        }
    return r;
}

// ---------------------------------------------------------------------------
// Monomial shifts
// ---------------------------------------------------------------------------

// Multiplication by t^k; the result carries k extra trustworthy orders.
template <typename Scalar>
Series1<Scalar> shift_up(const Series1<Scalar>& f, Index k) {
    Series1<Scalar> r(f.order() + k);
    for (Index i = 0; i <= f.order(); ++i) r[i + k] = f[i];
    return r;
}

// Exact division by t^k; the k leading coefficients must vanish and the
// result loses k orders. Float mode zeroes boundary noise below tolerance.
template <typename Scalar>
Series1<Scalar> shift_down(const Series1<Scalar>& f, Index k) {
    if (k > f.order())
        throw InternalError("shift_down: shift exceeds series order");
    for (Index i = 0; i < k; ++i)
        if (!detail::negligible(f[i], f))
            throw NotDivisibleError("shift_down: nonvanishing coefficient", i);
    Series1<Scalar> r(f.order() - k);
    for (Index i = 0; i <= r.order(); ++i) r[i] = f[i + k];
    return r;
}

template <typename Scalar>
Series2<Scalar> shift_up(const Series2<Scalar>& f, Index i, Index j) {
    Series2<Scalar> r(f.order() + std::min(i, j));
    for (Index p = 0; p <= f.order() && p + i <= r.order(); ++p)
        for (Index q = 0; q <= f.order() && q + j <= r.order(); ++q)
            r(p + i, q + j) = f(p, q);
    return r;
}

template <typename Scalar>
Series2<Scalar> shift_down(const Series2<Scalar>& f, Index i, Index j) {
    if (std::max(i, j) > f.order())
        throw InternalError("shift_down: shift exceeds series order");
    for (Index p = 0; p <= f.order(); ++p)
        for (Index q = 0; q <= f.order(); ++q)
            if ((p < i || q < j) && !detail::negligible(f(p, q), f))
                throw NotDivisibleError("shift_down: nonvanishing coefficient", p, q);
    Series2<Scalar> r(f.order() - std::max(i, j));
    for (Index p = 0; p <= r.order(); ++p)
        for (Index q = 0; q <= r.order(); ++q) r(p, q) = f(p + i, q + j);
    return r;
}

// ---------------------------------------------------------------------------
// Assembly helpers
// ---------------------------------------------------------------------------

// u(z) * v(w) as a bivariate series.
template <typename Scalar>
Series2<Scalar> outer(const Series1<Scalar>& u, const Series1<Scalar>& v) {
    const Index n = std::min(u.order(), v.order());
    Series2<Scalar> r(n);
    for (Index p = 0; p <= n; ++p) {
        if (ScalarTraits<Scalar>::is_zero(u[p])) continue;
        for (Index q = 0; q <= n; ++q) r(p, q) = u[p] * v[q];
    }
    return r;
}

// f(z) viewed as a bivariate series constant in w, truncated to `order`.
template <typename Scalar>
Series2<Scalar> embed_z(const Series1<Scalar>& f, Index order) {
    Series2<Scalar> r(order);
    for (Index p = 0; p <= std::min(order, f.order()); ++p) r(p, 0) = f[p];
    return r;
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Series1<Scalar>& f) {
    os << "[";
    for (Index k = 0; k <= f.order(); ++k)
        os << (k ? ", " : "") << f[k];
    return os << "]";
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Series2<Scalar>& f) {
    os << "[";
    for (Index p = 0; p <= f.order(); ++p) {
        os << (p ? "; " : "");
        for (Index q = 0; q <= f.order(); ++q) os << (q ? ", " : "") << f(p, q);
    }
    return os << "]";
}

}  // namespace bifree

#endif
