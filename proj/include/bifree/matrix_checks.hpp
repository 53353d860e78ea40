#ifndef BIFREE_MATRIX_CHECKS_HPP
#define BIFREE_MATRIX_CHECKS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bifree/scalar.hpp"

namespace bifree {

// Floating-point harness verifying the two purely algebraic three-factor
// resolvent identities behind the transform multiplicativity proofs, on
// random finite-dimensional algebras with the vector state phi(T) = T(0,0).

struct AlgebraSample {
    Eigen::MatrixXcd a1;
    Eigen::MatrixXcd a2;

    Eigen::Index dim() const { return a1.rows(); }
    static AlgebraSample random(Eigen::Index dim, std::mt19937_64& rng);
};

Complex state(const Eigen::MatrixXcd& t);
double op_norm(const Eigen::MatrixXcd& m);

// h(t) = phi((1 - t a)^{-1}) and its centered resolvent (1-ta)^{-1} - h(t) 1.
Complex h_resolvent(const Eigen::MatrixXcd& a, Complex t);
Eigen::MatrixXcd centered_resolvent(const Eigen::MatrixXcd& a, Complex t);

enum class MatchKind { mult, add };

// Newton-solve for t2 with h_{a2}(t2) = target (mult) or t2 h_{a2}(t2) =
// target (add), to residual 1e-12. Throws NonConvergenceError after 50
// iterations; callers resample.
Complex solve_h_match(const Eigen::MatrixXcd& a2, Complex target, MatchKind kind);

// Relative residual of
//   (1-t1 a1)(1-rho a1(t1) a2(t2))(1-t2 a2) = (1/h) (1 - t a1 a2)
// with h = h_{a1}(t1) = h_{a2}(t2), rho = 1/(h(h-1)), t = h/(h-1) t1 t2.
// Requires |h-1| >= 1e-6 and |h| >= 1e-6; throws NonConvergenceError when the
// sample misses that margin so the driver can resample.
double check_mult_factorization(const AlgebraSample& s, Complex t1);

// Relative residual of
//   (1-t1 a1)(1-rho a1(t1) a2(t2))(1-t2 a2)
//     = ((h1+h2-1)/(h1 h2)) (1 - t (a1+a2))
// with t1 h1 = t2 h2, rho = 1/(h1 h2), t = t1 h1 / (h1+h2-1).
double check_add_factorization(const AlgebraSample& s, Complex t1);

struct SelfCheckRecord {
    Eigen::Index dim;
    std::uint64_t seed;
    double mult_residual;
    double add_residual;
    bool pass;
};

// One record per (dim, seed) pair; resamples internally on margin misses.
std::vector<SelfCheckRecord> run_self_checks(const std::vector<Eigen::Index>& dims,
                                             int seeds_per_dim, std::uint64_t base_seed,
                                             double tolerance = 1e-9);

}  // namespace bifree

#endif
