#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "jclass/common.hpp"

namespace jclass {

// Norm-constrained least squares
//
//     minimize ||A e - b||_2   subject to   ||e||_2 <= delta
//
// solved globally through the SVD A = U S V^H. With beta = U^H b, the
// active-constraint multiplier is the unique root lambda > 0 of the secular
// equation
//
//     sum_i (s_i beta_i / (s_i^2 + lambda))^2 = delta^2,
//
// located by a safeguarded Newton iteration with bisection fallback. The
// complex case needs no special treatment: |beta_i| replaces the sign carried
// in the real theory.
//
// Reference: More & Sorensen, "Computing a trust region step", SIAM J. Sci.
// Stat. Comput. 4 (1983).

struct TrsResult {
    Eigen::VectorXcd minimizer;   // e*
    double residual = 0;          // ||A e* - b||
    double multiplier = 0;        // lambda, 0 when the constraint is inactive
    bool constraint_active = false;
    double null_space_floor = 0;  // ||(I - P_range(A)) b||, fixed part of the residual
    int iterations = 0;
    bool converged = true;        // false only on secular-iteration cap
};

namespace detail {

struct SecularSolution {
    double lambda = 0;
    int iterations = 0;
    bool converged = true;
};

// Root of sum_i (s_i b_i / (s_i^2 + lambda))^2 = delta^2 for lambda > 0.
// Requires the norm at lambda=0 to exceed delta. Tolerance is relative on
// | ||e(lambda)|| - delta |.
inline SecularSolution solve_secular(const std::vector<double>& sigma, const std::vector<double>& beta_abs,
                                     double delta, double tol_rel = 1e-12, int max_iter = 200) {
    auto norm_at = [&](double lambda) {
        double s = 0;
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            double t = sigma[i] * beta_abs[i] / (sigma[i] * sigma[i] + lambda);
            s += t * t;
        }
        return std::sqrt(s);
    };
    auto dnorm2_at = [&](double lambda) {
        double s = 0;
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            double sb = sigma[i] * beta_abs[i];
            double d = sigma[i] * sigma[i] + lambda;
            s += -2.0 * sb * sb / (d * d * d);
        }
        return s;
    };

    double sigma_max = 0, bnorm = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        sigma_max = std::max(sigma_max, sigma[i]);
        bnorm += beta_abs[i] * beta_abs[i];
    }
    bnorm = std::sqrt(bnorm);

    // bracket [lo, hi] with ||e(lo)|| > delta >= ||e(hi)||
    double lo = 0.0;
    double hi = std::max(sigma_max * sigma_max, 1.0) * bnorm / delta;
    int expand_guard = 0;
    while (norm_at(hi) > delta && expand_guard++ < 200) hi *= 2.0;

    SecularSolution out;
    double lambda = 0.5 * hi;
    for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
        double n = norm_at(lambda);
        double f = n - delta;
        if (std::abs(f) <= tol_rel * delta) {
            out.lambda = lambda;
            return out;
        }
        if (f > 0)
            lo = lambda;
        else
            hi = lambda;
        // Newton on 1/||e|| - 1/delta: monotone and quadratic near the root
        double g = 1.0 / n - 1.0 / delta;
        double gp = -dnorm2_at(lambda) / (2.0 * n * n * n);
        double next = lambda - g / gp;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        lambda = next;
    }
    out.lambda = lambda;
    out.converged = false;
    return out;
}

}  // namespace detail

inline TrsResult constrained_lsq(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, double delta,
                                 double sv_floor_rel = 1e-12) {
    if (!(delta > 0)) fail(Errc::InvalidArgument, "constrained_lsq: delta must be positive");
    if (!a.allFinite() || !b.allFinite())
        fail(Errc::InvalidArgument, "constrained_lsq: non-finite input");
    if (a.rows() != b.size()) fail(Errc::InvalidArgument, "constrained_lsq: dimension mismatch");

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) fail(Errc::NumericalBreakdown, "constrained_lsq: SVD failed");

    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::VectorXcd beta = svd.matrixU().adjoint() * b;
    long long r = sv.size();
    double sigma_max = r > 0 ? sv(0) : 0.0;
    double cutoff = sv_floor_rel * sigma_max;

    std::vector<double> sigma_eff;
    std::vector<double> beta_eff;
    double range_b2 = 0;
    for (long long i = 0; i < r; ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) {
            sigma_eff.push_back(sv(i));
            beta_eff.push_back(std::abs(beta(i)));
            range_b2 += std::norm(beta(i));
        }
    }

    TrsResult out;
    out.null_space_floor = std::sqrt(std::max(0.0, b.squaredNorm() - range_b2));

    auto build_minimizer = [&](double lambda) {
        Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(r);
        for (long long i = 0; i < r; ++i)
            if (sv(i) > cutoff && sv(i) > 0.0)
                coeff(i) = sv(i) / (sv(i) * sv(i) + lambda) * beta(i);
        return (svd.matrixV() * coeff).eval();
    };

    // min-norm unconstrained solution first
    double unconstrained_norm2 = 0;
    for (std::size_t i = 0; i < sigma_eff.size(); ++i) {
        double t = beta_eff[i] / sigma_eff[i];
        unconstrained_norm2 += t * t;
    }
    if (std::sqrt(unconstrained_norm2) <= delta) {
        out.minimizer = build_minimizer(0.0);
        out.residual = (a * out.minimizer - b).norm();
        out.multiplier = 0.0;
        out.constraint_active = false;
        return out;
    }

    detail::SecularSolution sec = detail::solve_secular(sigma_eff, beta_eff, delta);
    out.minimizer = build_minimizer(sec.lambda);
    out.residual = (a * out.minimizer - b).norm();
    out.multiplier = sec.lambda;
    out.constraint_active = true;
    out.iterations = sec.iterations;
    out.converged = sec.converged;
    return out;
}

// Diagonal closed-form route for the same problem, used where every output
// coordinate depends on exactly one input coordinate (shift truncations):
// minimize sum_i |c_i e_i - r_i|^2 over ||e|| <= delta. Shares the secular
// solver with the dense SVD route and serves as its independent cross-check.
struct DiagonalTrsResult {
    std::vector<Complex> minimizer;  // aligned with the (c_i, r_i) rows
    double residual = 0;
    double multiplier = 0;
    bool constraint_active = false;
    bool converged = true;
};

inline DiagonalTrsResult diagonal_constrained_lsq(const std::vector<Complex>& c,
                                                  const std::vector<Complex>& rhs, double delta,
                                                  double sv_floor_rel = 1e-12) {
    if (!(delta > 0)) fail(Errc::InvalidArgument, "diagonal_constrained_lsq: delta must be positive");
    if (c.size() != rhs.size()) fail(Errc::InvalidArgument, "diagonal_constrained_lsq: size mismatch");
    double cmax = 0;
    for (Complex ci : c) cmax = std::max(cmax, std::abs(ci));
    double cutoff = sv_floor_rel * cmax;

    std::vector<double> sigma, beta;
    double floor2 = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double m = std::abs(c[i]);
        if (m > cutoff && m > 0.0)
            sigma.push_back(m), beta.push_back(std::abs(rhs[i]));
        else
            floor2 += std::norm(rhs[i]);
    }

    double un2 = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        double t = beta[i] / sigma[i];
        un2 += t * t;
    }

    DiagonalTrsResult out;
    double lambda = 0.0;
    if (std::sqrt(un2) > delta) {
        auto sec = detail::solve_secular(sigma, beta, delta);
        lambda = sec.lambda;
        out.constraint_active = true;
        out.converged = sec.converged;
    }
    out.multiplier = lambda;
    out.minimizer.assign(c.size(), Complex{0, 0});
    double res2 = floor2;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double m = std::abs(c[i]);
        if (m > cutoff && m > 0.0) {
            // e_i = conj(c_i) r_i / (|c_i|^2 + lambda)
            out.minimizer[i] = std::conj(c[i]) * rhs[i] / (m * m + lambda);
            Complex res = c[i] * out.minimizer[i] - rhs[i];
            res2 += std::norm(res);
        }
    }
    out.residual = std::sqrt(res2);
    return out;
}

}  // namespace jclass
