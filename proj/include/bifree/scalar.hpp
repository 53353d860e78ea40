#ifndef BIFREE_SCALAR_HPP
#define BIFREE_SCALAR_HPP

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "bifree/errors.hpp"

namespace bifree {

// Exact coefficient field: arbitrary-precision rationals backed by GMP,
// expression templates off so the type behaves as a plain value scalar.
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

// Floating coefficient field used by the matrix harness and float mode.
using Complex = std::complex<double>;

// GMP assumes canonical form (gcd(num, den) = 1, den > 0) in every mpq
// operation, but assignment from a string does not canonicalize.
inline Rational& canonicalize(Rational& q) {
    mpq_canonicalize(q.backend().data());
    return q;
}

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw ParseError("rational with zero denominator");
    Rational q(num, den);
    return canonicalize(q);
}

// Accepts "p", "p/q", optional leading sign, arbitrary precision.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    Rational q;
    try {
        q.assign(text);
    } catch (const std::exception&) {
        throw ParseError("malformed rational literal: \"" + text + "\"");
    }
    if (denominator(q) == 0)
        throw ParseError("rational with zero denominator: \"" + text + "\"");
    return canonicalize(q);
}

inline std::string to_string(const Rational& q) {
    return q.str();  // canonical "p" or "p/q"
}

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool is_exact = true;

    static bool is_zero(const Rational& x) { return x.is_zero(); }
    static bool is_zero(const Rational& x, double /*tol*/) { return x.is_zero(); }
    static double magnitude(const Rational& x) {
        return std::abs(x.template convert_to<double>());
    }
    static bool is_real(const Rational&) { return true; }
    static Rational one() { return Rational(1); }
    static Rational from_int(long n) { return Rational(n); }
};

template <>
struct ScalarTraits<Complex> {
    static constexpr bool is_exact = false;

    static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
    static bool is_zero(const Complex& x, double tol) { return std::abs(x) <= tol; }
    static double magnitude(const Complex& x) { return std::abs(x); }
    static bool is_real(const Complex& x) { return x.imag() == 0.0; }
    static Complex one() { return Complex(1.0, 0.0); }
    static Complex from_int(long n) { return Complex(double(n), 0.0); }
};

}  // namespace bifree

#endif
