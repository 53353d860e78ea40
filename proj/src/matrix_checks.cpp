#include "bifree/matrix_checks.hpp"

namespace bifree {

namespace {

Eigen::MatrixXcd resolvent(const Eigen::MatrixXcd& a, Complex t) {
    const Eigen::Index d = a.rows();
    const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d) - t * a;
    return m.partialPivLu().solve(Eigen::MatrixXcd::Identity(d, d));
}

}  // namespace

AlgebraSample AlgebraSample::random(Eigen::Index dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&](Eigen::Index) {
        Eigen::MatrixXcd m(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(u(rng), u(rng));
        return m;
    };
    return {draw(dim), draw(dim)};
}

Complex state(const Eigen::MatrixXcd& t) { return t(0, 0); }

double op_norm(const Eigen::MatrixXcd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

Complex h_resolvent(const Eigen::MatrixXcd& a, Complex t) {
    return state(resolvent(a, t));
}

Eigen::MatrixXcd centered_resolvent(const Eigen::MatrixXcd& a, Complex t) {
    const Eigen::MatrixXcd r = resolvent(a, t);
    return r - state(r) * Eigen::MatrixXcd::Identity(a.rows(), a.rows());
}

Complex solve_h_match(const Eigen::MatrixXcd& a2, Complex target, MatchKind kind) {
    const Complex mean = state(a2);
    Complex t = kind == MatchKind::mult ? (target - 1.0) / mean : target;
    for (int iter = 0; iter < 50; ++iter) {
        const Eigen::MatrixXcd r = resolvent(a2, t);
        const Complex h = state(r);
        const Complex dh = state(r * a2 * r);  // d/dt phi((1-ta)^{-1})
        Complex g, dg;
        if (kind == MatchKind::mult) {
            g = h - target;
            dg = dh;
        } else {
            g = t * h - target;
            dg = h + t * dh;
        }
        if (std::abs(g) <= 1e-12) return t;
        if (std::abs(dg) < 1e-300)
            throw NonConvergenceError("solve_h_match: vanishing derivative");
        t -= g / dg;
    }
    throw NonConvergenceError("solve_h_match: no convergence after 50 iterations");
}

namespace {

double relative_scale(const AlgebraSample& s) {
    return 1.0 + op_norm(s.a1) + op_norm(s.a2);
}

Eigen::MatrixXcd three_factor(const AlgebraSample& s, Complex t1, Complex t2, Complex rho) {
    const Eigen::Index d = s.dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd c1 = centered_resolvent(s.a1, t1);
    const Eigen::MatrixXcd c2 = centered_resolvent(s.a2, t2);
    return (id - t1 * s.a1) * (id - rho * c1 * c2) * (id - t2 * s.a2);
}

}  // namespace

double check_mult_factorization(const AlgebraSample& s, Complex t1) {
    const Complex h = h_resolvent(s.a1, t1);
    if (std::abs(h) < 1e-6 || std::abs(h - 1.0) < 1e-6)
        throw NonConvergenceError("check_mult_factorization: h margin miss, resample");
    const Complex t2 = solve_h_match(s.a2, h, MatchKind::mult);
    const Complex rho = 1.0 / (h * (h - 1.0));
    const Complex t = h / (h - 1.0) * t1 * t2;
    const Eigen::MatrixXcd lhs = three_factor(s, t1, t2, rho);
    const Eigen::MatrixXcd rhs =
        (Eigen::MatrixXcd::Identity(s.dim(), s.dim()) - t * (s.a1 * s.a2)) / h;
    return op_norm(lhs - rhs) / relative_scale(s);
}

double check_add_factorization(const AlgebraSample& s, Complex t1) {
    const Complex h1 = h_resolvent(s.a1, t1);
    const Complex z = t1 * h1;
    const Complex t2 = solve_h_match(s.a2, z, MatchKind::add);
    const Complex h2 = h_resolvent(s.a2, t2);
    if (std::abs(h1 * h2) < 1e-6 || std::abs(h1 + h2 - 1.0) < 1e-6)
        throw NonConvergenceError("check_add_factorization: margin miss, resample");
    const Complex rho = 1.0 / (h1 * h2);
    const Complex t = t1 * h1 / (h1 + h2 - 1.0);
    const Eigen::MatrixXcd lhs = three_factor(s, t1, t2, rho);
    const Eigen::MatrixXcd rhs =
        (h1 + h2 - 1.0) / (h1 * h2) *
        (Eigen::MatrixXcd::Identity(s.dim(), s.dim()) - t * (s.a1 + s.a2));
    return op_norm(lhs - rhs) / relative_scale(s);
}

std::vector<SelfCheckRecord> run_self_checks(const std::vector<Eigen::Index>& dims,
                                             int seeds_per_dim, std::uint64_t base_seed,
                                             double tolerance) {
    std::vector<SelfCheckRecord> records;
    for (const Eigen::Index d : dims) {
        for (int i = 0; i < seeds_per_dim; ++i) {
            const std::uint64_t seed =
                base_seed + 1000003ull * std::uint64_t(d) + std::uint64_t(i);
            std::mt19937_64 rng(seed);
            SelfCheckRecord rec{d, seed, 0.0, 0.0, false};
            for (int attempt = 0; attempt < 20; ++attempt) {
                const AlgebraSample s = AlgebraSample::random(d, rng);
                // phi(a2) bounded away from zero keeps the Newton start sane.
                if (std::abs(state(s.a2)) < 0.05 || std::abs(state(s.a1)) < 0.05)
                    continue;
                const Complex t1 = Complex(0.01 / op_norm(s.a1), 0.0);
                try {
                    rec.mult_residual = check_mult_factorization(s, t1);
                    rec.add_residual = check_add_factorization(s, t1);
                } catch (const NonConvergenceError&) {
                    continue;  // margin miss: resample
                }
                rec.pass = rec.mult_residual <= tolerance && rec.add_residual <= tolerance;
                break;
            }
            records.push_back(rec);
        }
    }
    return records;
}

}  // namespace bifree
