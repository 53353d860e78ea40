#ifndef BIFREE_ORACLE_HPP
#define BIFREE_ORACLE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "bifree/distribution.hpp"

namespace bifree {

// Which generator of a commuting pair acts: the left face multiplies by x,
// the right face by y.
enum class Var : std::uint8_t { x, y };

enum class ConvOp { bbmult, bpmult, bbadd };

inline const char* conv_op_name(ConvOp op) {
    switch (op) {
        case ConvOp::bbmult: return "bbmult";
        case ConvOp::bpmult: return "bpmult";
        default: return "bbadd";
    }
}

// One tensor slot of a free-product word: the reduced basis vector
// e_{p,q} = x^p y^q - m[p][q] of the given factor, (p, q) != (0, 0).
struct WordLetter {
    std::uint8_t factor;  // 1 or 2
    std::uint8_t xdeg;
    std::uint8_t ydeg;
    auto operator<=>(const WordLetter&) const = default;
};

// Alternating-factor tensor word; the empty word is the vacuum vector xi.
using Word = std::vector<WordLetter>;

inline bool alternating(const Word& w) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i].factor == w[i - 1].factor) return false;
    return true;
}

// Multiplication-operator realization of one two-band distribution: x and y
// act on polynomials with per-variable degree capped at the data's order,
// and the expectation of x^p y^q is m[p][q].
template <typename Scalar>
class PairModel {
public:
    explicit PairModel(TwoBand<Scalar> dist) : dist_(std::move(dist)) {
        if (dist_.order() < 1)
            throw PreconditionError("pair model needs moment data of order >= 1");
    }

    Index capacity() const { return dist_.order(); }
    const Scalar& moment(Index p, Index q) const { return dist_.moment(p, q); }
    const Scalar& mean(Var v) const {
        return v == Var::x ? dist_.moment(1, 0) : dist_.moment(0, 1);
    }
    const TwoBand<Scalar>& distribution() const { return dist_; }

    // Expectation of a polynomial given by its coefficient matrix.
    Scalar expectation(const typename TwoBand<Scalar>::Moments& coeffs) const {
        Scalar acc(0);
        for (Index p = 0; p < coeffs.rows(); ++p)
            for (Index q = 0; q < coeffs.cols(); ++q)
                acc += coeffs(p, q) * dist_.moment(p, q);
        return acc;
    }

private:
    TwoBand<Scalar> dist_;
};

// Sparse vector in the free product of two pointed vector spaces, stored as
// a map from alternating words to coefficients. Map order is structural, so
// iteration (hence every computation) is deterministic.
template <typename Scalar>
class FreeProductState {
public:
    static FreeProductState vacuum() {
        FreeProductState s;
        s.terms_[Word{}] = Scalar(1);
        return s;
    }

    void add(const Word& w, const Scalar& c) {
        if (ScalarTraits<Scalar>::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (ScalarTraits<Scalar>::is_zero(it->second)) terms_.erase(it);
        }
    }

    Scalar vacuum_coefficient() const {
        const auto it = terms_.find(Word{});
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    const std::map<Word, Scalar>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    FreeProductState operator+(const FreeProductState& rhs) const {
        FreeProductState r = *this;
        for (const auto& [w, c] : rhs.terms_) r.add(w, c);
        return r;
    }

    bool operator==(const FreeProductState& rhs) const { return terms_ == rhs.terms_; }

private:
    std::map<Word, Scalar> terms_;
};

namespace detail {

template <typename Scalar>
void bump_degrees(const PairModel<Scalar>& model, Var v, std::uint8_t& p, std::uint8_t& q) {
    if (v == Var::x) ++p;
    else ++q;
    if (Index(p) > model.capacity() || Index(q) > model.capacity())
        throw DegreeOverflowError(
            "operator application leaves the truncated monomial box; "
            "supply moment data of higher order");
}

// Core action on one word. `front` selects the lambda (leftmost-slot) or rho
// (rightmost-slot) action of multiplication by v on factor `k`.
template <typename Scalar>
void apply_letter(const PairModel<Scalar>& model, std::uint8_t k, Var v, bool front,
                  const Word& w, const Scalar& c, FreeProductState<Scalar>& out) {
    const bool boundary_is_k = !w.empty() && (front ? w.front() : w.back()).factor == k;
    if (!boundary_is_k) {
        // T xi_k = mean * xi_k + e_basis: the word keeps its slots and also
        // grows by one reduced slot of factor k.
        out.add(w, c * model.mean(v));
        Word grown;
        grown.reserve(w.size() + 1);
        const WordLetter fresh{k, std::uint8_t(v == Var::x ? 1 : 0),
                               std::uint8_t(v == Var::y ? 1 : 0)};
        if (front) {
            grown.push_back(fresh);
            grown.insert(grown.end(), w.begin(), w.end());
        } else {
            grown = w;
            grown.push_back(fresh);
        }
        out.add(grown, c);
        return;
    }
    // Absorb into the boundary slot:
    //   T e_{p,q} = (m[p'][q'] - m[p][q] mean) xi + e_{p',q'} - m[p][q] e_basis.
    const WordLetter head = front ? w.front() : w.back();
    std::uint8_t p = head.xdeg, q = head.ydeg;
    const Scalar mpq = model.moment(head.xdeg, head.ydeg);
    bump_degrees(model, v, p, q);

    Word rest;
    rest.reserve(w.size() - 1);
    if (front) rest.assign(w.begin() + 1, w.end());
    else rest.assign(w.begin(), w.end() - 1);

    out.add(rest, c * (model.moment(p, q) - mpq * model.mean(v)));

    Word bumped = w;
    (front ? bumped.front() : bumped.back()) = WordLetter{k, p, q};
    out.add(bumped, c);

    Word swapped = w;
    (front ? swapped.front() : swapped.back()) =
        WordLetter{k, std::uint8_t(v == Var::x ? 1 : 0), std::uint8_t(v == Var::y ? 1 : 0)};
    out.add(swapped, -(c * mpq));
}

}  // namespace detail

// lambda_k(v): the left action of multiplication by v on factor k.
template <typename Scalar>
FreeProductState<Scalar> apply_left(const PairModel<Scalar>& model, std::uint8_t k, Var v,
                                    const FreeProductState<Scalar>& s) {
    FreeProductState<Scalar> out;
    for (const auto& [w, c] : s.terms()) detail::apply_letter(model, k, v, true, w, c, out);
    return out;
}

// rho_k(v): the right action of multiplication by v on factor k.
template <typename Scalar>
FreeProductState<Scalar> apply_right(const PairModel<Scalar>& model, std::uint8_t k, Var v,
                                     const FreeProductState<Scalar>& s) {
    FreeProductState<Scalar> out;
    for (const auto& [w, c] : s.terms()) detail::apply_letter(model, k, v, false, w, c, out);
    return out;
}

// Joint moments of (a1 a2, b1 b2), (a1 + a2, b1 b2) or (a1 + a2, b1 + b2)
// for the bi-free pair realized on the free product of the two models,
// computed from first principles. Exact: no truncation is involved beyond
// the degree capacity of the supplied data.
template <typename Scalar>
TwoBand<Scalar> oracle_moments(ConvOp op, const TwoBand<Scalar>& mu,
                               const TwoBand<Scalar>& nu, Index pmax, Index qmax) {
    const Index n = std::max(pmax, qmax);
    if (mu.order() < n || nu.order() < n)
        throw DegreeOverflowError(
            "oracle inputs must carry moments up to max(pmax, qmax)");
    const PairModel<Scalar> m1(mu), m2(nu);
    using State = FreeProductState<Scalar>;

    const auto left_block = [&](const State& s) {
        if (op == ConvOp::bbmult)  // a1 a2 acts as lambda_1(x) lambda_2(x)
            return apply_left(m1, 1, Var::x, apply_left(m2, 2, Var::x, s));
        return apply_left(m1, 1, Var::x, s) + apply_left(m2, 2, Var::x, s);
    };
    const auto right_block = [&](const State& s) {
        if (op == ConvOp::bbadd)
            return apply_right(m1, 1, Var::y, s) + apply_right(m2, 2, Var::y, s);
        return apply_right(m1, 1, Var::y, apply_right(m2, 2, Var::y, s));
    };

    typename TwoBand<Scalar>::Moments result(n + 1, n + 1);
    State column = State::vacuum();
    for (Index q = 0; q <= n; ++q) {
        if (q > 0) column = right_block(column);
        State s = column;
        result(0, q) = s.vacuum_coefficient();
        for (Index p = 1; p <= n; ++p) {
            s = left_block(s);
            result(p, q) = s.vacuum_coefficient();
        }
    }
    return TwoBand<Scalar>(std::move(result));
}

}  // namespace bifree

#endif
