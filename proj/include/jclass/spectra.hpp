#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "jclass/operators.hpp"

namespace jclass {

enum class Ternary { Yes, No, Unknown };

inline const char* ternary_name(Ternary t) {
    switch (t) {
        case Ternary::Yes: return "yes";
        case Ternary::No: return "no";
        case Ternary::Unknown: return "unknown";
    }
    return "unknown";
}

// Family-analytic description of the spectrum: outer/inner modulus bounds and
// whether the spectrum meets the unit circle. Approximate data is marked, and
// classifiers never disqualify on it.
struct SpectrumSummary {
    double radius = 0;        // sup |sigma(T)|
    bool radius_exact = false;
    double inner = 0;         // inf |sigma(T)|
    bool inner_exact = false;
    Ternary meets_unit_circle = Ternary::Unknown;
};

namespace detail {

constexpr double kCircleTol = 1e-9;

inline Ternary circle_from_interval(double lo, double hi) {
    // spectrum is exactly { |z| in [lo, hi] } x (full circles): disk or annulus
    if (lo <= 1.0 + kCircleTol && hi >= 1.0 - kCircleTol) return Ternary::Yes;
    return Ternary::No;
}

inline Ternary circle_from_point(double modulus) {
    return std::abs(modulus - 1.0) <= kCircleTol ? Ternary::Yes : Ternary::No;
}

// Distinct moduli in the closure of a diagonal entry sequence.
inline std::vector<double> diag_closure_moduli(const DiagSeq& d, const SpaceTag& space) {
    std::vector<double> mods;
    if (space.is_finite_dim()) {
        for (long long j = 1; j <= space.dim; ++j) mods.push_back(std::abs(d.at(j)));
        return mods;
    }
    switch (d.kind) {
        case SeqGenKind::Constant: mods.push_back(std::abs(d.constant)); break;
        case SeqGenKind::FiniteListThenTail:
            for (const auto& z : d.list) mods.push_back(std::abs(z));
            mods.push_back(std::abs(d.tail));
            break;
        case SeqGenKind::Geometric: {
            double r = std::abs(d.ratio), s = std::abs(d.scale);
            if (r == 1.0) {
                mods.push_back(s);
            } else {
                // entries s*r^(j-1) for j >= 1 plus the closure point 0
                double v = s;
                for (int j = 0; j < 4096 && v > 0; ++j) {
                    mods.push_back(v);
                    double nv = v * r;
                    if (nv == v) break;
                    v = nv;
                    if (v < 1e-300) break;
                }
                mods.push_back(0.0);
            }
            break;
        }
        case SeqGenKind::TwoSidedSplit:
            mods.push_back(std::abs(d.positive_value));
            if (space.is_bilateral()) mods.push_back(std::abs(d.nonpositive_value));
            break;
    }
    return mods;
}

inline bool eigenvalues(const Eigen::MatrixXcd& m, Eigen::VectorXcd& out) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success) return false;
    out = es.eigenvalues();
    return true;
}

// Gelfand-type upper bound for the spectral radius of a weighted shift:
// ||T^n|| = sup_j prod_{i=j}^{j+n-1} a_i, and ||T^n||^{1/n} decreases to r(T),
// so the min over a finite horizon is a converging upper estimate.
inline double shift_gelfand_estimate(const WeightSeq& w, bool bilateral, int n_horizon = 64,
                                     long long j_span = 256) {
    double best = std::numeric_limits<double>::infinity();
    long long j_lo = bilateral ? -j_span : 1;
    long long j_hi = j_span;
    for (int n = 1; n <= n_horizon; ++n) {
        double sup_log = -std::numeric_limits<double>::infinity();
        double running = 0.0;
        for (long long i = j_lo; i < j_lo + n; ++i) running += std::log(w.at(i));
        for (long long j = j_lo; j <= j_hi; ++j) {
            sup_log = std::max(sup_log, running);
            running += std::log(w.at(j + n)) - std::log(w.at(j));
        }
        best = std::min(best, std::exp(sup_log / n));
    }
    return best;
}

}  // namespace detail

inline SpectrumSummary spectrum_summary(const OperatorSpec& op) {
    SpectrumSummary s;
    if (auto sf = shift_form(op)) {
        double a = std::abs(sf->scale);
        if (sf->weights.kind == SeqGenKind::Constant ||
            (!sf->bilateral && sf->weights.kind == SeqGenKind::TwoSidedSplit)) {
            double c = a * (sf->weights.kind == SeqGenKind::Constant ? sf->weights.constant
                                                                     : sf->weights.positive_value);
            if (sf->bilateral) {
                // invertible constant-weight bilateral shift: circle of radius c
                s = {c, true, c, true, detail::circle_from_point(c)};
            } else {
                // unilateral constant-weight shift: closed disk of radius c
                s = {c, true, 0.0, true, detail::circle_from_interval(0.0, c)};
            }
            return s;
        }
        s.radius = a * detail::shift_gelfand_estimate(sf->weights, sf->bilateral);
        s.radius_exact = false;
        s.inner = 0.0;
        s.inner_exact = false;
        s.meets_unit_circle = Ternary::Unknown;
        return s;
    }
    if (const auto* d = op.as<DiagonalOp>()) {
        auto mods = detail::diag_closure_moduli(d->entries, op.space());
        double hi = 0, lo = std::numeric_limits<double>::infinity();
        Ternary meets = Ternary::No;
        for (double m : mods) {
            hi = std::max(hi, m);
            lo = std::min(lo, m);
            if (detail::circle_from_point(m) == Ternary::Yes) meets = Ternary::Yes;
        }
        return {hi, true, lo, true, meets};
    }
    if (const auto* sc = op.as<ScalarIdentityOp>()) {
        double m = std::abs(sc->lambda);
        return {m, true, m, true, detail::circle_from_point(m)};
    }
    if (const auto* j = op.as<JordanBlockOp>()) {
        double m = std::abs(j->lambda);
        return {m, true, m, true, detail::circle_from_point(m)};
    }
    if (const auto* fm = op.as<FiniteMatrixOp>()) {
        Eigen::VectorXcd eig;
        if (!detail::eigenvalues(fm->entries, eig)) {
            // fall back to the norm bound, marked approximate
            return {op.norm_bound(), false, 0.0, false, Ternary::Unknown};
        }
        double hi = 0, lo = std::numeric_limits<double>::infinity();
        Ternary meets = Ternary::No;
        for (long long i = 0; i < eig.size(); ++i) {
            double m = std::abs(eig(i));
            hi = std::max(hi, m);
            lo = std::min(lo, m);
            if (detail::circle_from_point(m) == Ternary::Yes) meets = Ternary::Yes;
        }
        return {hi, true, lo, true, meets};
    }
    if (const auto* ds = op.as<DirectSumOp>()) {
        double hi = 0, lo = std::numeric_limits<double>::infinity();
        bool hi_exact = true, lo_exact = true;
        Ternary meets = Ternary::No;
        for (const auto& p : ds->parts) {
            SpectrumSummary ps = spectrum_summary(p);
            hi = std::max(hi, ps.radius);
            lo = std::min(lo, ps.inner);
            hi_exact = hi_exact && ps.radius_exact;
            lo_exact = lo_exact && ps.inner_exact;
            if (ps.meets_unit_circle == Ternary::Yes)
                meets = Ternary::Yes;
            else if (ps.meets_unit_circle == Ternary::Unknown && meets == Ternary::No)
                meets = Ternary::Unknown;
        }
        return {hi, hi_exact, lo, lo_exact, meets};
    }
    if (const auto* p = op.as<PolynomialOfOp>()) {
        // spectral mapping for point/diagonal bases; the scaled-shift case was
        // already taken by shift_form above
        if (const auto* sc = p->base->as<ScalarIdentityOp>()) {
            double m = std::abs(p->coeffs.eval(sc->lambda));
            return {m, true, m, true, detail::circle_from_point(m)};
        }
        if (const auto* jb = p->base->as<JordanBlockOp>()) {
            double m = std::abs(p->coeffs.eval(jb->lambda));
            return {m, true, m, true, detail::circle_from_point(m)};
        }
        if (const auto* dg = p->base->as<DiagonalOp>()) {
            if (dg->entries.kind != SeqGenKind::Geometric) {
                // spectral mapping over the (finite) entry value set
                std::vector<Complex> pts;
                const DiagSeq& e = dg->entries;
                const SpaceTag& sp = p->base->space();
                if (sp.is_finite_dim())
                    for (long long j = 1; j <= sp.dim; ++j) pts.push_back(e.at(j));
                else if (e.kind == SeqGenKind::Constant)
                    pts.push_back(e.constant);
                else if (e.kind == SeqGenKind::FiniteListThenTail) {
                    pts = e.list;
                    pts.push_back(e.tail);
                } else {
                    pts.push_back(e.positive_value);
                    if (sp.is_bilateral()) pts.push_back(e.nonpositive_value);
                }
                double hi = 0, lo = std::numeric_limits<double>::infinity();
                Ternary meets = Ternary::No;
                for (Complex z : pts) {
                    double m = std::abs(p->coeffs.eval(z));
                    hi = std::max(hi, m);
                    lo = std::min(lo, m);
                    if (detail::circle_from_point(m) == Ternary::Yes) meets = Ternary::Yes;
                }
                return {hi, true, lo, true, meets};
            }
        }
        return {op.norm_bound(), false, 0.0, false, Ternary::Unknown};
    }
    // backstop: the norm bound, approximate
    return {op.norm_bound(), false, 0.0, false, Ternary::Unknown};
}

// Spectral radius with an exactness flag. Exact families use closed forms;
// general weighted shifts report the Gelfand horizon estimate, approximate.
inline std::pair<double, bool> spectral_radius(const OperatorSpec& op) {
    SpectrumSummary s = spectrum_summary(op);
    return {s.radius, s.radius_exact};
}

inline Ternary spectrum_meets_unit_circle(const OperatorSpec& op) {
    return spectrum_summary(op).meets_unit_circle;
}

}  // namespace jclass
