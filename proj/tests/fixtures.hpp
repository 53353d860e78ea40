#ifndef BIFREE_TESTS_FIXTURES_HPP
#define BIFREE_TESTS_FIXTURES_HPP

// Shared distribution fixtures for the test suites: small atomic two-band
// distributions with exact rational data.

#include <vector>

#include "bifree/distribution.hpp"
#include "oracle_helpers.hpp"

namespace bifree::testing {

inline Rational Q(long n, long d = 1) { return make_rational(n, d); }

// (1/2) delta_(1,1) + (1/2) delta_(3,2)
inline TwoBand<Rational> mixed_pair_a(Index order) {
    return TwoBand<Rational>::from_atoms({{Q(1), Q(1), Q(1, 2)}, {Q(3), Q(2), Q(1, 2)}},
                                         order);
}

// (1/2) delta_(1,1) + (1/2) delta_(2,1)
inline TwoBand<Rational> mixed_pair_b(Index order) {
    return TwoBand<Rational>::from_atoms({{Q(1), Q(1), Q(1, 2)}, {Q(2), Q(1), Q(1, 2)}},
                                         order);
}

// (1/2) delta_(0,1) + (1/2) delta_(1,2): zero-free right face, left mean 1/2.
inline TwoBand<Rational> mixed_pair_c(Index order) {
    return TwoBand<Rational>::from_atoms({{Q(0), Q(1), Q(1, 2)}, {Q(1), Q(2), Q(1, 2)}},
                                         order);
}

// 2-4 atoms with weights summing to one. positive_x / positive_y force the
// corresponding coordinates (hence the means) to be strictly positive;
// zero_left_mean overrides the x-coordinates with a symmetric +/- pattern.
inline TwoBand<Rational> random_two_band(RationalGen& gen, Index order,
                                         bool positive_x = true, bool positive_y = true,
                                         bool zero_left_mean = false) {
    const int n_atoms = 2 + int(gen.rng() % 3);
    std::vector<Atom<Rational>> atoms;
    Rational wsum(0);
    for (int i = 0; i < n_atoms; ++i) {
        Atom<Rational> a;
        a.x = positive_x ? gen.positive() : gen.next();
        a.y = positive_y ? gen.positive() : gen.nonzero();
        a.weight = gen.positive();
        wsum += a.weight;
        atoms.push_back(a);
    }
    for (auto& a : atoms) a.weight /= wsum;
    if (zero_left_mean) {
        // Pair the atoms so the first-moment contributions cancel.
        const Rational c = gen.positive();
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            atoms[i].x = (i % 2 == 0) ? c : -c;
            atoms[i].weight = Q(1, long(atoms.size()));
        }
        if (atoms.size() % 2 == 1) atoms.back().x = 0;
    }
    return TwoBand<Rational>::from_atoms(atoms, order);
}

inline TwoBand<Rational> random_factorizing(RationalGen& gen, Index order) {
    std::vector<Rational> lm{Q(1)}, rm{Q(1)};
    for (Index k = 1; k <= order; ++k) {
        lm.push_back(gen.next());
        rm.push_back(gen.next());
    }
    return TwoBand<Rational>::factorizing(lm, rm, order);
}

}  // namespace bifree::testing

#endif
