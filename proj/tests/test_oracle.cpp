#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bifree/oracle.hpp"
#include "fixtures.hpp"

using namespace bifree;
using namespace bifree::testing;

namespace {

using State = FreeProductState<Rational>;
using Model = PairModel<Rational>;

State random_state(RationalGen& gen, int n_words) {
    State s;
    for (int i = 0; i < n_words; ++i) {
        Word w;
        const std::size_t len = gen.rng() % 4;
        std::uint8_t factor = 1 + std::uint8_t(gen.rng() % 2);
        for (std::size_t j = 0; j < len; ++j) {
            std::uint8_t p = std::uint8_t(gen.rng() % 3);
            std::uint8_t q = std::uint8_t((p == 0 ? 1 : 0) + gen.rng() % 2);
            w.push_back({factor, p, q});
            factor = std::uint8_t(3 - factor);
        }
        s.add(w, gen.nonzero());
    }
    return s;
}

bool all_alternating(const State& s) {
    for (const auto& [w, c] : s.terms())
        if (!alternating(w)) return false;
    return true;
}

}  // namespace

TEST_CASE("pair model expectation and reduction") {
    const Model model(mixed_pair_a(3));
    CHECK(model.mean(Var::x) == Q(2));
    CHECK(model.mean(Var::y) == Q(3, 2));

    RationalGen gen(1234);
    for (int rep = 0; rep < 10; ++rep) {
        TwoBand<Rational>::Moments v(4, 4);
        for (Index p = 0; p <= 3; ++p)
            for (Index q = 0; q <= 3; ++q) v(p, q) = gen.next();
        // Reduce v against the state; the reduced part is in the kernel, so
        // reducing twice is the same as reducing once.
        TwoBand<Rational>::Moments reduced = v;
        reduced(0, 0) -= model.expectation(v);
        CHECK(model.expectation(reduced) == 0);
    }
}

TEST_CASE("left action on the vacuum") {
    const Model m1(mixed_pair_a(3));
    const State s = apply_left(m1, 1, Var::x, State::vacuum());
    // x = mean * 1 + (x - mean): one vacuum term, one length-1 word.
    CHECK(s.size() == 2);
    CHECK(s.vacuum_coefficient() == m1.mean(Var::x));
    const Word basis{{1, 1, 0}};
    CHECK(s.terms().at(basis) == 1);
}

TEST_CASE("p-fold application reproduces the marginal moments") {
    const Model m1(mixed_pair_a(6));
    State s = State::vacuum();
    for (Index p = 1; p <= 6; ++p) {
        s = apply_left(m1, 1, Var::x, s);
        CHECK(s.vacuum_coefficient() == m1.moment(p, 0));
    }
    State r = State::vacuum();
    for (Index q = 1; q <= 6; ++q) {
        r = apply_right(m1, 1, Var::y, r);
        CHECK(r.vacuum_coefficient() == m1.moment(0, q));
    }
}

TEST_CASE("left and right actions of different factors commute") {
    const Model m1(mixed_pair_a(4));
    const Model m2(mixed_pair_b(4));
    RationalGen gen(4321);
    for (int rep = 0; rep < 12; ++rep) {
        const State s = random_state(gen, 5);
        for (Var v1 : {Var::x, Var::y})
            for (Var v2 : {Var::x, Var::y}) {
                const State ab = apply_left(m1, 1, v1, apply_right(m2, 2, v2, s));
                const State ba = apply_right(m2, 2, v2, apply_left(m1, 1, v1, s));
                CHECK(ab == ba);
            }
    }
}

TEST_CASE("actions preserve word alternation") {
    const Model m1(mixed_pair_a(5));
    const Model m2(mixed_pair_b(5));
    State s = State::vacuum();
    RationalGen gen(999);
    for (int step = 0; step < 6; ++step) {
        const std::uint8_t k = 1 + std::uint8_t(gen.rng() % 2);
        const Model& m = k == 1 ? m1 : m2;
        s = (gen.rng() % 2) ? apply_left(m, k, Var::x, s) : apply_right(m, k, Var::y, s);
        CHECK(all_alternating(s));
    }
}

TEST_CASE("lowest oracle moments") {
    const auto mu = mixed_pair_a(3);
    const auto nu = mixed_pair_b(3);
    const auto mom = oracle_moments(ConvOp::bbmult, mu, nu, 3, 3);
    CHECK(mom.moment(0, 0) == 1);
    // Freeness kills the centered cross term at first order.
    CHECK(mom.moment(1, 0) == mu.moment(1, 0) * nu.moment(1, 0));
    CHECK(mom.moment(0, 1) == mu.moment(0, 1) * nu.moment(0, 1));
    // Hand-expanded word algebra at (1,1): phi(a1 a2 b1 b2) = m11 * n11.
    CHECK(mom.moment(1, 1) == Q(21, 4));

    const auto add = oracle_moments(ConvOp::bpmult, mu, nu, 2, 2);
    CHECK(add.moment(1, 0) == mu.moment(1, 0) + nu.moment(1, 0));
    CHECK(add.moment(0, 1) == mu.moment(0, 1) * nu.moment(0, 1));

    const auto both = oracle_moments(ConvOp::bbadd, mu, nu, 2, 2);
    CHECK(both.moment(1, 0) == mu.moment(1, 0) + nu.moment(1, 0));
    CHECK(both.moment(0, 1) == mu.moment(0, 1) + nu.moment(0, 1));
    CHECK(both.moment(1, 1) ==
          mu.moment(1, 1) + mu.moment(1, 0) * nu.moment(0, 1) +
              nu.moment(1, 0) * mu.moment(0, 1) + nu.moment(1, 1));
}

TEST_CASE("oracle results do not depend on capacity head-room") {
    RationalGen gen(31415);
    for (ConvOp op : {ConvOp::bbmult, ConvOp::bpmult, ConvOp::bbadd}) {
        const auto mu4 = random_two_band(gen, 4);
        const auto nu4 = random_two_band(gen, 4);
        const auto tight = oracle_moments(op, mu4.truncated_to(3), nu4.truncated_to(3), 3, 3);
        const auto slack = oracle_moments(op, mu4, nu4, 3, 3);
        const auto wide = oracle_moments(op, mu4, nu4, 4, 4);
        CHECK(tight == slack);
        for (Index p = 0; p <= 3; ++p)
            for (Index q = 0; q <= 3; ++q)
                CHECK(tight.moment(p, q) == wide.moment(p, q));
    }
}

TEST_CASE("oracle is symmetric in its inputs") {
    RationalGen gen(2718);
    for (ConvOp op : {ConvOp::bbmult, ConvOp::bpmult, ConvOp::bbadd}) {
        const auto mu = random_two_band(gen, 3);
        const auto nu = random_two_band(gen, 3);
        CHECK(oracle_moments(op, mu, nu, 3, 3) == oracle_moments(op, nu, mu, 3, 3));
    }
}

TEST_CASE("undersized inputs overflow the monomial box") {
    const auto mu = mixed_pair_a(2);
    const auto nu = mixed_pair_b(2);
    CHECK_THROWS_AS(oracle_moments(ConvOp::bbmult, mu, nu, 3, 3), DegreeOverflowError);
}
