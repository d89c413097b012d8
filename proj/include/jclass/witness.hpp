#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jclass/operators.hpp"
#include "jclass/spectra.hpp"

namespace jclass {

enum class WitnessDirection { Forward, Backward };

struct WitnessPair {
    long long k = 1;     // strictly increasing, positive
    SeqVector x;         // the perturbed base x_n
};

// Finite certified prefix of sequences (k_n, x_n) with x_n -> base and
// T^{k_n} x_n -> target (forward direction; backward verifies against the
// inverse). Carries its documented error schedules so a witness file is
// self-checking.
class Witness {
public:
    Witness(OperatorSpec op, WitnessDirection dir, SeqVector base, SeqVector target,
            std::vector<WitnessPair> pairs, std::vector<double> base_tols,
            std::vector<double> target_tols)
        : op_(std::move(op)),
          direction_(dir),
          base_(std::move(base)),
          target_(std::move(target)),
          pairs_(std::move(pairs)),
          base_tols_(std::move(base_tols)),
          target_tols_(std::move(target_tols)) {
        validate();
    }

    const OperatorSpec& op() const { return op_; }
    WitnessDirection direction() const { return direction_; }
    const SeqVector& base() const { return base_; }
    const SeqVector& target() const { return target_; }
    const std::vector<WitnessPair>& pairs() const { return pairs_; }
    const std::vector<double>& base_tols() const { return base_tols_; }
    const std::vector<double>& target_tols() const { return target_tols_; }

private:
    void validate() const {
        if (pairs_.empty()) fail(Errc::InvalidArgument, "witness: needs at least one pair");
        if (base_tols_.size() != pairs_.size() || target_tols_.size() != pairs_.size())
            fail(Errc::InvalidArgument, "witness: schedules must match the pair count");
        long long prev_k = 0;
        double prev_err = std::numeric_limits<double>::infinity();
        // roundoff slack on the monotone base-error requirement
        const double atol = 1e-9 * (1.0 + base_.norm());
        for (const auto& p : pairs_) {
            if (p.k <= prev_k) fail(Errc::InvalidArgument, "witness: k_n must be strictly increasing");
            prev_k = p.k;
            if (!(p.x.space() == base_.space()))
                fail(Errc::SpaceMismatch, "witness: pair vector on the wrong space");
            double err = distance(p.x, base_);
            if (err > prev_err + atol)
                fail(Errc::InvalidArgument, "witness: base errors must be nonincreasing");
            prev_err = std::max(err, 0.0);
        }
        if (!(target_.space() == base_.space()))
            fail(Errc::SpaceMismatch, "witness: base/target space mismatch");
        if (!(op_.space() == base_.space()))
            fail(Errc::SpaceMismatch, "witness: operator/vector space mismatch");
    }

    OperatorSpec op_;
    WitnessDirection direction_;
    SeqVector base_;
    SeqVector target_;
    std::vector<WitnessPair> pairs_;
    std::vector<double> base_tols_;
    std::vector<double> target_tols_;
};

struct VerificationRow {
    long long k = 0;
    double base_error = 0;
    double target_error = 0;
    double base_tol = 0;
    double target_tol = 0;
    bool ok = false;
};

struct VerificationReport {
    std::vector<VerificationRow> rows;
    bool pass = false;
};

// Recomputes both error columns with exact iteration. Backward witnesses
// verify against inverse(op), which must exist.
inline VerificationReport verify_witness(const Witness& w, const std::vector<double>& base_tols,
                                         const std::vector<double>& target_tols) {
    if (base_tols.size() != w.pairs().size() || target_tols.size() != w.pairs().size())
        fail(Errc::InvalidArgument, "verify_witness: schedule length mismatch");
    std::optional<OperatorSpec> iter_op;
    if (w.direction() == WitnessDirection::Forward)
        iter_op = w.op();
    else
        iter_op = inverse(w.op());

    VerificationReport report;
    report.rows.reserve(w.pairs().size());
    bool pass = true;
    for (std::size_t i = 0; i < w.pairs().size(); ++i) {
        const auto& p = w.pairs()[i];
        VerificationRow row;
        row.k = p.k;
        row.base_error = distance(p.x, w.base());
        row.target_error = distance(iterate(*iter_op, p.x, p.k), w.target());
        row.base_tol = base_tols[i];
        row.target_tol = target_tols[i];
        row.ok = row.base_error <= row.base_tol && row.target_error <= row.target_tol;
        pass = pass && row.ok;
        report.rows.push_back(row);
    }
    report.pass = pass;
    return report;
}

inline VerificationReport verify_witness(const Witness& w) {
    return verify_witness(w, w.base_tols(), w.target_tols());
}

namespace detail {
inline double combine_block_errors(NormKind k, double a, double b) {
    return k == NormKind::Sup ? std::max(a, b) : std::hypot(a, b);
}
}  // namespace detail

// --- exact constructions --------------------------------------------------------

// Witness for an expanding scalar multiple of the backward shift on the
// sup-norm space: from base mu*e_1, the n-th pair places y scaled by
// lambda^{-n} behind n zeros, so the n-th iterate recovers y exactly.
inline Witness linf_shift_witness(Complex lambda, const SeqVector& y, const std::vector<long long>& n_list,
                                  Complex base_scale = Complex{1, 0}) {
    if (!(std::abs(lambda) > 1.0)) fail(Errc::BadModulus, "linf_shift_witness: need |lambda| > 1");
    if (n_list.empty()) fail(Errc::InvalidArgument, "linf_shift_witness: empty n list");
    if (!(y.space() == unilateral_linf()))
        fail(Errc::SpaceMismatch, "linf_shift_witness: target must live on linf");

    OperatorSpec op = make_scaled_backward_shift(lambda, unilateral_linf());
    SeqVector base = scaled(SeqVector::basis(unilateral_linf(), 1), base_scale);
    double ynorm = y.sup_norm();

    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    long long prev = 0;
    IndexWindow ysup = y.support();
    for (long long n : n_list) {
        if (n <= prev) fail(Errc::InvalidArgument, "linf_shift_witness: n list must be strictly increasing");
        prev = n;
        // x_n = base + lambda^{-n} * (y carried n places to the right)
        Complex inv_pow{1, 0};
        for (long long i = 0; i < n; ++i) inv_pow /= lambda;
        IndexWindow w{1, ysup.hi + n};
        check_window_budget(w, default_max_dimension(), "linf_shift_witness");
        std::vector<Complex> coords(static_cast<std::size_t>(w.size()), Complex{0, 0});
        coords[0] = base_scale;
        for (long long j = ysup.lo; j <= ysup.hi; ++j)
            coords[static_cast<std::size_t>(n + j - 1)] = inv_pow * y.at(j);
        pairs.push_back({n, SeqVector::from_coords(unilateral_linf(), w, std::move(coords))});
        double shrink = std::pow(std::abs(lambda), static_cast<double>(-n));
        base_tols.push_back(ynorm * shrink * (1.0 + 1e-12));
        target_tols.push_back(1e-12 * (1.0 + ynorm));
    }
    return Witness(std::move(op), WitnessDirection::Forward, std::move(base), y, std::move(pairs),
                   std::move(base_tols), std::move(target_tols));
}

// Witness for (lambda I) (+) S from a certified tail on the S block: the
// first block of the n-th pair holds mu / lambda^{k_n}, which the k_n-th
// iterate maps back to mu exactly.
inline Witness first_coord_sum_witness(Complex mu_first, Complex lambda_scale, const Witness& tail) {
    if (!(std::abs(lambda_scale) > 1.0)) fail(Errc::BadModulus, "first_coord_sum_witness: need |lambda| > 1");
    if (tail.direction() != WitnessDirection::Forward)
        fail(Errc::InvalidArgument, "first_coord_sum_witness: forward tail required");

    OperatorSpec head = make_scalar_identity(lambda_scale, finite_dim(1));
    OperatorSpec op = make_direct_sum({head, tail.op()});
    NormKind nk = norm_kind(op.space());

    SeqVector base = SeqVector::sum_of(op.space(), {SeqVector::zero(finite_dim(1)), tail.base()});
    SeqVector head_target = SeqVector::from_coords(finite_dim(1), {1, 1}, {mu_first});
    SeqVector target = SeqVector::sum_of(op.space(), {head_target, tail.target()});

    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    for (std::size_t i = 0; i < tail.pairs().size(); ++i) {
        long long k = tail.pairs()[i].k;
        Complex inv_pow{1, 0};
        for (long long j = 0; j < k; ++j) inv_pow /= lambda_scale;
        SeqVector head_part = SeqVector::from_coords(finite_dim(1), {1, 1}, {mu_first * inv_pow});
        pairs.push_back({k, SeqVector::sum_of(op.space(), {head_part, tail.pairs()[i].x})});
        double head_err = std::abs(mu_first) * std::pow(std::abs(lambda_scale), static_cast<double>(-k));
        base_tols.push_back(detail::combine_block_errors(nk, head_err * (1.0 + 1e-12), tail.base_tols()[i]));
        target_tols.push_back(detail::combine_block_errors(nk, 1e-12 * (1.0 + std::abs(mu_first)),
                                                           tail.target_tols()[i]));
    }
    return Witness(std::move(op), WitnessDirection::Forward, std::move(base), std::move(target),
                   std::move(pairs), std::move(base_tols), std::move(target_tols));
}

// Witness for S (+) T where sigma(S) lies outside the closed unit disk:
// pairs S^{-k} x (+) z_k; the S block of the k-th iterate is x exactly and
// the base defect ||S^{-k} x|| decays geometrically.
inline Witness expanding_inverse_witness(const OperatorSpec& s, const SeqVector& x_block,
                                         const Witness& tail) {
    OperatorSpec s_inv = inverse(s);  // throws NotInvertible
    auto [r_inv, exact] = spectral_radius(s_inv);
    if (!exact || !(r_inv < 1.0))
        fail(Errc::NotExpanding, "expanding_inverse_witness: need family-exact sigma(S) outside the unit disk");
    if (!(x_block.space() == s.space()))
        fail(Errc::SpaceMismatch, "expanding_inverse_witness: x block on the wrong space");
    if (tail.direction() != WitnessDirection::Forward)
        fail(Errc::InvalidArgument, "expanding_inverse_witness: forward tail required");

    OperatorSpec op = make_direct_sum({s, tail.op()});
    NormKind nk = norm_kind(op.space());
    SeqVector base = SeqVector::sum_of(op.space(), {SeqVector::zero(s.space()), tail.base()});
    SeqVector target = SeqVector::sum_of(op.space(), {x_block, tail.target()});

    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    double xnorm = x_block.norm();
    for (std::size_t i = 0; i < tail.pairs().size(); ++i) {
        long long k = tail.pairs()[i].k;
        SeqVector shrunk = iterate(s_inv, x_block, k);
        double head_err = shrunk.norm();
        pairs.push_back({k, SeqVector::sum_of(op.space(), {std::move(shrunk), tail.pairs()[i].x})});
        base_tols.push_back(
            detail::combine_block_errors(nk, head_err * (1.0 + 1e-10), tail.base_tols()[i]));
        target_tols.push_back(
            detail::combine_block_errors(nk, 1e-10 * (1.0 + xnorm), tail.target_tols()[i]));
    }
    return Witness(std::move(op), WitnessDirection::Forward, std::move(base), std::move(target),
                   std::move(pairs), std::move(base_tols), std::move(target_tols));
}

// --- transformations --------------------------------------------------------------

// Forward witness for y under T becomes a backward witness for x under T:
// the reversed pairs are (k_n, T^{k_n} x_n), verified against inverse(T).
inline Witness reverse_witness(const Witness& w) {
    if (w.direction() != WitnessDirection::Forward)
        fail(Errc::InvalidArgument, "reverse_witness: forward witness required");
    OperatorSpec inv = inverse(w.op());  // throws NotInvertible
    double inv_bound = inv.norm_bound();

    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    for (std::size_t i = 0; i < w.pairs().size(); ++i) {
        long long k = w.pairs()[i].k;
        pairs.push_back({k, iterate(w.op(), w.pairs()[i].x, k)});
        base_tols.push_back(w.target_tols()[i]);
        double amp = std::max(1.0, std::pow(inv_bound, static_cast<double>(k)));
        target_tols.push_back(w.base_tols()[i] * amp * (1.0 + 1e-9) + 1e-15 * (1.0 + w.base().norm()));
    }
    return Witness(w.op(), WitnessDirection::Backward, w.target(), w.base(), std::move(pairs),
                   std::move(base_tols), std::move(target_tols));
}

// J-sets are T-invariant: a witness for target y promotes to one for Ty by
// spending one extra iterate.
inline Witness promote_witness(const Witness& w) {
    if (w.direction() != WitnessDirection::Forward)
        fail(Errc::InvalidArgument, "promote_witness: forward witness required");
    SeqVector new_target = apply(w.op(), w.target());
    std::vector<WitnessPair> pairs;
    std::vector<double> target_tols;
    for (std::size_t i = 0; i < w.pairs().size(); ++i) {
        pairs.push_back({w.pairs()[i].k + 1, w.pairs()[i].x});
        target_tols.push_back(w.op().norm_bound() * w.target_tols()[i] + 1e-15 * (1.0 + new_target.norm()));
    }
    return Witness(w.op(), WitnessDirection::Forward, w.base(), std::move(new_target), std::move(pairs),
                   w.base_tols(), std::move(target_tols));
}

// Inverse transport of promote_witness: for invertible T, a witness for Ty
// yields one for y with pairs (k_n - 1, x_n). Pairs at k_n = 1 are dropped.
inline Witness demote_witness(const Witness& w) {
    if (w.direction() != WitnessDirection::Forward)
        fail(Errc::InvalidArgument, "demote_witness: forward witness required");
    OperatorSpec inv = inverse(w.op());  // throws NotInvertible
    SeqVector new_target = apply(inv, w.target());
    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    for (std::size_t i = 0; i < w.pairs().size(); ++i) {
        if (w.pairs()[i].k < 2) continue;
        pairs.push_back({w.pairs()[i].k - 1, w.pairs()[i].x});
        base_tols.push_back(w.base_tols()[i]);
        target_tols.push_back(inv.norm_bound() * w.target_tols()[i] + 1e-15 * (1.0 + new_target.norm()));
    }
    if (pairs.empty()) fail(Errc::InsufficientPairs, "demote_witness: every pair had k = 1");
    return Witness(w.op(), w.direction(), w.base(), std::move(new_target), std::move(pairs),
                   std::move(base_tols), std::move(target_tols));
}

// Linearity: mu x -> mu y with errors scaled by |mu|.
inline Witness scale_witness(const Witness& w, Complex mu) {
    if (mu == Complex{0, 0}) fail(Errc::ZeroScale, "scale_witness: mu must be nonzero");
    double m = std::abs(mu);
    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    for (std::size_t i = 0; i < w.pairs().size(); ++i) {
        pairs.push_back({w.pairs()[i].k, scaled(w.pairs()[i].x, mu)});
        base_tols.push_back(m * w.base_tols()[i] * (1.0 + 1e-12));
        target_tols.push_back(m * w.target_tols()[i] * (1.0 + 1e-12));
    }
    return Witness(w.op(), w.direction(), scaled(w.base(), mu), scaled(w.target(), mu), std::move(pairs),
                   std::move(base_tols), std::move(target_tols));
}

// Diagonal extraction: witnesses for bases lambda_m x with lambda_m -> 0 and
// a common target produce a witness from base 0. From w_m, take the first
// pair whose base error is at most |lambda_m| ||x|| + 1/m and whose k exceeds
// every previously selected k.
inline Witness zero_base_witness(const std::vector<Witness>& ws, const std::vector<Complex>& lambdas,
                                 const SeqVector& x) {
    if (ws.empty() || ws.size() != lambdas.size())
        fail(Errc::InvalidArgument, "zero_base_witness: need one lambda per witness");
    double prev_mod = std::numeric_limits<double>::infinity();
    for (Complex l : lambdas) {
        double m = std::abs(l);
        if (!(m < prev_mod) || m == 0.0)
            fail(Errc::InvalidArgument, "zero_base_witness: lambda moduli must strictly decrease and stay nonzero");
        prev_mod = m;
    }
    const SeqVector& target = ws[0].target();
    for (const auto& w : ws) {
        if (!spec_equal(w.op(), ws[0].op()))
            fail(Errc::InvalidArgument, "zero_base_witness: witnesses use different operators");
        if (distance(w.target(), target) > 1e-12 * (1.0 + target.norm()))
            fail(Errc::InvalidArgument, "zero_base_witness: witnesses have different targets");
    }

    double xnorm = x.norm();
    SeqVector zero = SeqVector::zero(ws[0].op().space());
    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    long long k_prev = 0;
    double err_prev = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < ws.size(); ++m) {
        double budget = std::abs(lambdas[m]) * xnorm + 1.0 / static_cast<double>(m + 1);
        SeqVector scaled_base = scaled(x, lambdas[m]);
        bool found = false;
        for (std::size_t i = 0; i < ws[m].pairs().size(); ++i) {
            const auto& p = ws[m].pairs()[i];
            if (p.k <= k_prev) continue;
            if (distance(p.x, scaled_base) > budget) continue;
            double zero_err = p.x.norm();
            if (zero_err > err_prev * (1.0 + 1e-9) + 1e-15) continue;
            pairs.push_back(p);
            base_tols.push_back(budget + std::abs(lambdas[m]) * xnorm);  // triangle through lambda_m x
            target_tols.push_back(ws[m].target_tols()[i]);
            k_prev = p.k;
            err_prev = zero_err;
            found = true;
            break;
        }
        if (!found)
            fail(Errc::DiagonalFailure, "zero_base_witness: witness " + std::to_string(m + 1) +
                                            " has no qualifying pair");
    }
    return Witness(ws[0].op(), WitnessDirection::Forward, std::move(zero), target, std::move(pairs),
                   std::move(base_tols), std::move(target_tols));
}

// Base-0 witnesses transfer to powers: write k_n = l_n m + rho, keep the
// largest residue class, and absorb T^rho into the pair vectors.
inline Witness zero_power_witness(const Witness& w, long long m) {
    if (m < 1) fail(Errc::InvalidArgument, "zero_power_witness: m must be positive");
    if (w.direction() != WitnessDirection::Forward)
        fail(Errc::InvalidArgument, "zero_power_witness: forward witness required");
    if (w.base().norm() > 1e-12)
        fail(Errc::InvalidArgument, "zero_power_witness: base must be the zero vector");
    if (m == 1) return w;
    if (static_cast<long long>(w.pairs().size()) < m)
        fail(Errc::InsufficientPairs, "zero_power_witness: need at least m pairs");

    std::map<long long, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < w.pairs().size(); ++i) classes[w.pairs()[i].k % m].push_back(i);
    long long rho = 0;
    std::size_t best = 0;
    for (const auto& [r, idx] : classes) {
        if (idx.size() > best) {
            best = idx.size();
            rho = r;
        }
    }

    OperatorSpec power_op = [&] {
        std::vector<Complex> mono(static_cast<std::size_t>(m) + 1, Complex{0, 0});
        mono.back() = Complex{1, 0};
        return make_polynomial_of(w.op(), make_polynomial(std::move(mono)));
    }();

    double norm_rho = std::pow(w.op().norm_bound(), static_cast<double>(rho));
    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    for (std::size_t i : classes[rho]) {
        long long l = (w.pairs()[i].k - rho) / m;
        if (l < 1) continue;
        pairs.push_back({l, iterate(w.op(), w.pairs()[i].x, rho)});
        base_tols.push_back(norm_rho * w.base_tols()[i] * (1.0 + 1e-12));
        target_tols.push_back(w.target_tols()[i]);
    }
    if (pairs.empty())
        fail(Errc::InsufficientPairs, "zero_power_witness: residue class left no positive powers");
    return Witness(std::move(power_op), WitnessDirection::Forward, w.base(), w.target(), std::move(pairs),
                   std::move(base_tols), std::move(target_tols));
}

// Inverse regrouping: a witness for T^m with pairs (l_n, u_n) is a witness
// for T with pairs (m l_n, u_n). Expects op to be the monomial z^m of T.
inline Witness expand_power_witness(const Witness& w) {
    const auto* p = w.op().as<PolynomialOfOp>();
    if (!p) fail(Errc::InvalidArgument, "expand_power_witness: operator is not a power monomial");
    const auto& c = p->coeffs.coeffs;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        if (c[i] != Complex{0, 0})
            fail(Errc::InvalidArgument, "expand_power_witness: operator is not a power monomial");
    if (c.back() != Complex{1, 0})
        fail(Errc::InvalidArgument, "expand_power_witness: operator is not a power monomial");
    long long m = static_cast<long long>(c.size()) - 1;
    if (m < 1) fail(Errc::InvalidArgument, "expand_power_witness: degree must be >= 1");

    std::vector<WitnessPair> pairs;
    for (const auto& pr : w.pairs()) pairs.push_back({pr.k * m, pr.x});
    return Witness(*p->base, w.direction(), w.base(), w.target(), std::move(pairs), w.base_tols(),
                   w.target_tols());
}

// Regular orbit data: z_n -> z with T^n z_n -> w0, sampled at the power
// indices a witness will consume. Fixed points, kernel vectors and periodic
// points generate such data exactly.
struct RegularOrbit {
    SeqVector z;
    SeqVector w0;
    std::vector<std::pair<long long, SeqVector>> samples;  // (n, z_n), n ascending

    const SeqVector* sample_at(long long n) const {
        for (const auto& [idx, v] : samples)
            if (idx == n) return &v;
        return nullptr;
    }
};

inline RegularOrbit fixed_point_orbit(const OperatorSpec& op, const SeqVector& z,
                                      const std::vector<long long>& ks) {
    if (distance(apply(op, z), z) > 1e-10 * (1.0 + z.norm()))
        fail(Errc::InvalidArgument, "fixed_point_orbit: z is not a fixed point");
    RegularOrbit orbit{z, z, {}};
    for (long long k : ks) orbit.samples.emplace_back(k, z);
    return orbit;
}

inline RegularOrbit kernel_orbit(const OperatorSpec& op, const SeqVector& z,
                                 const std::vector<long long>& ks) {
    if (apply(op, z).norm() > 1e-10 * (1.0 + z.norm()))
        fail(Errc::InvalidArgument, "kernel_orbit: z is not in the kernel");
    RegularOrbit orbit{z, SeqVector::zero(z.space()), {}};
    for (long long k : ks) {
        if (k < 1) fail(Errc::InvalidArgument, "kernel_orbit: powers must be positive");
        orbit.samples.emplace_back(k, z);
    }
    return orbit;
}

// Translation along a regular orbit: a base-0 witness for target y - w0
// becomes a witness from base z for target y via pairs (k_n, x_n + z_{k_n}).
inline Witness translate_witness(const Witness& w, const RegularOrbit& orbit) {
    if (w.direction() != WitnessDirection::Forward)
        fail(Errc::InvalidArgument, "translate_witness: forward witness required");
    if (w.base().norm() > 1e-12)
        fail(Errc::InvalidArgument, "translate_witness: base must be the zero vector");

    SeqVector target = add(w.target(), orbit.w0);
    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    for (std::size_t i = 0; i < w.pairs().size(); ++i) {
        long long k = w.pairs()[i].k;
        const SeqVector* zk = orbit.sample_at(k);
        if (!zk)
            fail(Errc::IndexMismatch,
                 "translate_witness: orbit data missing at k = " + std::to_string(k));
        double orbit_base_err = distance(*zk, orbit.z);
        double orbit_target_err = distance(iterate(w.op(), *zk, k), orbit.w0);
        pairs.push_back({k, add(w.pairs()[i].x, *zk)});
        base_tols.push_back(w.base_tols()[i] + orbit_base_err * (1.0 + 1e-12) + 1e-15 * (1.0 + orbit.z.norm()));
        target_tols.push_back(w.target_tols()[i] + orbit_target_err * (1.0 + 1e-12) +
                              1e-15 * (1.0 + target.norm()));
    }
    return Witness(w.op(), WitnessDirection::Forward, orbit.z, std::move(target), std::move(pairs),
                   std::move(base_tols), std::move(target_tols));
}

}  // namespace jclass
