#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "jclass/config.hpp"
#include "jclass/operators.hpp"
#include "jclass/trs.hpp"
#include "jclass/witness.hpp"

namespace jclass {

// Quantitative membership probe for the extended limit set: the distance from
// a target y to T^k(ball(x, delta)) on a truncation. Exact on the truncation,
// an upper bound for the unrestricted distance, and nonincreasing as the
// perturbation window grows.
struct ReachQuery {
    OperatorSpec op;
    SeqVector x;
    SeqVector y;
    long long k = 1;
    double delta = 1.0;
    IndexWindow out_window{1, 64};
};

struct ReachDiagnostics {
    double null_space_floor = 0;
    int iterations = 0;
    bool converged = true;
    BlockWindows in;
    BlockWindows out;
};

struct ReachResult {
    double distance = 0;
    SeqVector perturbation;      // the minimizer e*, supported in the in-windows
    double multiplier = 0;       // Lagrange multiplier, 0 when inactive
    bool constraint_active = false;
    ReachDiagnostics diag;
};

namespace detail {

inline void check_target_support(const SeqVector& y, const BlockWindows& out) {
    std::vector<const SeqVector*> leaves;
    collect_leaves(y, leaves);
    if (leaves.size() != out.size()) fail(Errc::SpaceMismatch, "reach: target block mismatch");
    for (std::size_t b = 0; b < leaves.size(); ++b) {
        IndexWindow sup = leaves[b]->support();
        if (leaves[b]->at(sup.lo) == Complex{0, 0} && sup.lo == sup.hi) continue;  // zero block
        if (sup.lo < out[b].lo || sup.hi > out[b].hi)
            fail(Errc::InvalidArgument, "reach: target must be supported within the out window");
    }
}

}  // namespace detail

// Closed-form reachability for weighted shifts: after k steps every output
// coordinate depends on exactly one input coordinate with coefficient
// c_j = scale^k prod of k successive weights. The sup-norm distance decouples
// per coordinate; the l2 distance runs the diagonal secular route.
inline ReachResult shift_reach_distance(const OperatorSpec& op, const SeqVector& x, const SeqVector& y,
                                        long long k, double delta, IndexWindow out_window,
                                        const RunConfig& cfg = {}) {
    auto sf = shift_form(op);
    if (!sf) fail(Errc::NotAShift, "shift_reach_distance: weighted shift operators only");
    if (!(delta > 0)) fail(Errc::InvalidArgument, "shift_reach_distance: delta must be positive");
    if (!(x.space() == op.space()) || !(y.space() == op.space()))
        fail(Errc::SpaceMismatch, "shift_reach_distance: space mismatch");

    IndexWindow out = clamp_window(op.space(), out_window);
    check_window_budget(out, cfg.max_dim, "shift_reach_distance");
    detail::check_target_support(y, {out});

    Complex scale_k{1, 0};
    for (long long i = 0; i < k; ++i) scale_k *= sf->scale;

    // output j reads input j + k (backward) or j - k (forward)
    auto source_index = [&](long long j) { return sf->backward ? j + k : j - k; };
    auto coefficient = [&](long long j) -> Complex {
        double p = sf->backward ? weight_product(sf->weights, j, j + k - 1)
                                : weight_product(sf->weights, j - k, j - 1);
        return scale_k * p;
    };

    std::vector<Complex> c(static_cast<std::size_t>(out.size()));
    std::vector<Complex> rhs(static_cast<std::size_t>(out.size()));
    for (long long j = out.lo; j <= out.hi; ++j) {
        std::size_t row = static_cast<std::size_t>(j - out.lo);
        long long src = source_index(j);
        bool src_valid = sf->bilateral || src >= 1;
        c[row] = src_valid ? coefficient(j) : Complex{0, 0};
        rhs[row] = y.at(j) - c[row] * x.at(src_valid ? src : 1);
    }

    IndexWindow in = sf->backward ? IndexWindow{out.lo + k, out.hi + k}
                                  : IndexWindow{out.lo - k, out.hi - k};
    if (!sf->bilateral) in.lo = std::max(in.lo, 1LL);

    ReachResult result;
    result.diag.in = {in};
    result.diag.out = {out};

    NormKind nk = norm_kind(op.space());
    if (nk == NormKind::Sup) {
        // per-coordinate clipping: residual_j = max(0, |r_j| - |c_j| delta)
        double dist = 0;
        std::vector<Complex> e(static_cast<std::size_t>(in.size()), Complex{0, 0});
        bool clipped = false;
        for (long long j = out.lo; j <= out.hi; ++j) {
            std::size_t row = static_cast<std::size_t>(j - out.lo);
            long long src = source_index(j);
            if (!sf->bilateral && src < 1) {
                dist = std::max(dist, std::abs(rhs[row]));
                continue;
            }
            double cm = std::abs(c[row]);
            double rm = std::abs(rhs[row]);
            if (cm == 0.0) {
                dist = std::max(dist, rm);
                continue;
            }
            double want = rm / cm;  // perturbation modulus that zeroes this row
            double use = std::min(want, delta);
            if (use < want) clipped = true;
            if (rm > 0 && in.contains(src))
                e[static_cast<std::size_t>(src - in.lo)] = (rhs[row] / c[row]) * (use / want);
            dist = std::max(dist, std::max(0.0, rm - cm * delta));
        }
        result.distance = dist;
        result.constraint_active = clipped;
        result.multiplier = 0.0;
        result.perturbation = SeqVector::from_coords(op.space(), in, std::move(e));
        return result;
    }

    DiagonalTrsResult diag = diagonal_constrained_lsq(c, rhs, delta, cfg.sv_floor_rel);
    std::vector<Complex> e(static_cast<std::size_t>(in.size()), Complex{0, 0});
    for (long long j = out.lo; j <= out.hi; ++j) {
        std::size_t row = static_cast<std::size_t>(j - out.lo);
        long long src = source_index(j);
        if ((sf->bilateral || src >= 1) && in.contains(src))
            e[static_cast<std::size_t>(src - in.lo)] = diag.minimizer[row];
    }
    result.distance = diag.residual;
    result.multiplier = diag.multiplier;
    result.constraint_active = diag.constraint_active;
    result.diag.converged = diag.converged;
    result.perturbation = SeqVector::from_coords(op.space(), in, std::move(e));
    return result;
}

// General route: dense truncation of T^k plus the norm-constrained solver.
// b is formed from the exact iterate of x, so x may extend past the window.
inline ReachResult j_distance(const ReachQuery& q, const RunConfig& cfg = {}) {
    if (!(q.delta > 0)) fail(Errc::InvalidArgument, "j_distance: delta must be positive");
    if (!(q.x.space() == q.op.space()) || !(q.y.space() == q.op.space()))
        fail(Errc::SpaceMismatch, "j_distance: space mismatch");

    NormKind nk = norm_kind(q.op.space());
    if (nk == NormKind::Sup) {
        if (!shift_form(q.op))
            fail(Errc::NotAShift, "j_distance: sup-norm reachability is only available for shifts");
        return shift_reach_distance(q.op, q.x, q.y, q.k, q.delta, q.out_window, cfg);
    }

    BlockWindows out = clamp_block_windows(q.op.space(), q.out_window);
    for (const auto& w : out) check_window_budget(w, cfg.max_dim, "j_distance");
    detail::check_target_support(q.y, out);

    Truncation tr = truncation_matrix(q.op, q.k, out, cfg.max_dim);
    Eigen::VectorXcd b = flatten(q.y, out) - flatten(iterate(q.op, q.x, q.k), out);
    TrsResult trs = constrained_lsq(tr.matrix, b, q.delta, cfg.sv_floor_rel);

    ReachResult result;
    result.distance = trs.residual;
    result.multiplier = trs.multiplier;
    result.constraint_active = trs.constraint_active;
    result.perturbation = unflatten(trs.minimizer, q.op.space(), tr.in);
    result.diag.null_space_floor = trs.null_space_floor;
    result.diag.iterations = trs.iterations;
    result.diag.converged = trs.converged;
    result.diag.in = tr.in;
    result.diag.out = tr.out;
    return result;
}

// Orbit distance: min over 0 <= k <= K of ||T^k x - y||, smallest k wins ties.
struct LDistance {
    double distance = 0;
    long long argmin_k = 0;
    std::vector<double> per_k;  // distances at k = 0..K
};

inline LDistance l_distance(const OperatorSpec& op, const SeqVector& x, const SeqVector& y,
                            long long k_horizon) {
    if (k_horizon < 0) fail(Errc::InvalidArgument, "l_distance: horizon must be nonnegative");
    LDistance out;
    out.per_k.reserve(static_cast<std::size_t>(k_horizon) + 1);
    SeqVector cur = x;
    double best = std::numeric_limits<double>::infinity();
    for (long long k = 0; k <= k_horizon; ++k) {
        if (k > 0) cur = iterate(op, x, k);
        double d = distance(cur, y);
        out.per_k.push_back(d);
        if (d < best) {
            best = d;
            out.argmin_k = k;
        }
    }
    out.distance = best;
    return out;
}

// Distance profile over (k, delta): the finite surrogate for "for every pair
// of neighborhoods". A delta level is certified when some k <= K reaches the
// target within eps_accept.
struct ProfileEntry {
    long long k = 0;
    double delta = 0;
    double distance = 0;
    bool active = false;
    double multiplier = 0;
};

struct DistanceProfile {
    std::vector<ProfileEntry> entries;   // sorted by k, then by descending delta
    std::vector<double> schedule;
    std::vector<double> min_distance;    // per delta level
    std::vector<long long> best_k;       // smallest k attaining min per level
    double eps_accept = 1e-6;
    bool certified_all_levels = false;

    // power-bounded routing data (empty unless the operator is flagged)
    bool power_bounded = false;
    double power_bound = 0;
    std::vector<double> l_per_k;  // ||T^k x - y|| for k = 0..K

    bool level_certified(std::size_t level) const {
        return level < min_distance.size() && min_distance[level] <= eps_accept;
    }
};

inline bool power_bounded_flag(const OperatorSpec& op, double* bound = nullptr) {
    // family-exact uniform bound: exact operator norm <= 1 gives sup_n ||T^n|| <= 1
    if (op.norm_bound_exact() && op.norm_bound() <= 1.0) {
        if (bound) *bound = 1.0;
        return true;
    }
    return false;
}

inline DistanceProfile j_profile(const OperatorSpec& op, const SeqVector& x, const SeqVector& y,
                                 long long k_horizon, const std::vector<double>& delta_schedule,
                                 IndexWindow out_window, const RunConfig& cfg = {}) {
    if (delta_schedule.empty()) fail(Errc::InvalidArgument, "j_profile: empty delta schedule");
    for (std::size_t i = 0; i + 1 < delta_schedule.size(); ++i)
        if (!(delta_schedule[i] > delta_schedule[i + 1]))
            fail(Errc::InvalidArgument, "j_profile: schedule must be strictly decreasing");
    for (double d : delta_schedule)
        if (!(d > 0)) fail(Errc::InvalidArgument, "j_profile: deltas must be positive");

    DistanceProfile profile;
    profile.schedule = delta_schedule;
    profile.eps_accept = cfg.eps_accept;
    profile.min_distance.assign(delta_schedule.size(), std::numeric_limits<double>::infinity());
    profile.best_k.assign(delta_schedule.size(), 0);

    for (long long k = 1; k <= k_horizon; ++k) {
        for (std::size_t level = 0; level < delta_schedule.size(); ++level) {
            ReachQuery q{op, x, y, k, delta_schedule[level], out_window};
            ReachResult r = j_distance(q, cfg);
            profile.entries.push_back({k, delta_schedule[level], r.distance, r.constraint_active,
                                       r.multiplier});
            if (r.distance < profile.min_distance[level]) {
                profile.min_distance[level] = r.distance;
                profile.best_k[level] = k;
            }
        }
    }
    profile.certified_all_levels = true;
    for (std::size_t level = 0; level < delta_schedule.size(); ++level)
        profile.certified_all_levels = profile.certified_all_levels && profile.level_certified(level);

    double bound = 0;
    if (power_bounded_flag(op, &bound)) {
        profile.power_bounded = true;
        profile.power_bound = bound;
        profile.l_per_k = l_distance(op, x, y, k_horizon).per_k;
    }
    return profile;
}

// Image of x under T^k restricted to the out windows (blockwise).
inline SeqVector restrict_to_out(const OperatorSpec& op, const SeqVector& x, long long k,
                                 IndexWindow out_window) {
    SeqVector img = iterate(op, x, k);
    BlockWindows out = clamp_block_windows(op.space(), out_window);
    return unflatten(flatten(img, out), op.space(), out);
}

// Turns a fully certified profile into a witness: one strictly increasing k
// per delta level, re-solved to recover the perturbation. Monotone base
// errors are kept by capping each level's ball at the previous minimizer norm.
inline Witness extract_witness(const DistanceProfile& profile, const OperatorSpec& op, const SeqVector& x,
                               const SeqVector& y, IndexWindow out_window, const RunConfig& cfg = {}) {
    for (std::size_t level = 0; level < profile.schedule.size(); ++level)
        if (!profile.level_certified(level))
            fail(Errc::NotCertifiable,
                 "extract_witness: delta level " + std::to_string(level + 1) + " is not certified");

    std::vector<WitnessPair> pairs;
    std::vector<double> base_tols, target_tols;
    long long k_prev = 0;
    double prev_norm = std::numeric_limits<double>::infinity();
    for (std::size_t level = 0; level < profile.schedule.size(); ++level) {
        double delta = profile.schedule[level];
        bool placed = false;
        for (const auto& entry : profile.entries) {
            if (entry.delta != delta || entry.k <= k_prev || entry.distance > profile.eps_accept) continue;
            double delta_eff = std::min(delta, prev_norm);
            ReachResult r;
            if (delta_eff <= 0.0) {
                // previous pair was exact; this level must also work unperturbed
                double d = distance(restrict_to_out(op, x, entry.k, out_window), y);
                if (d > profile.eps_accept) continue;
                r.distance = d;
                r.perturbation = SeqVector::zero(op.space());
            } else {
                ReachQuery q{op, x, y, entry.k, delta_eff, out_window};
                r = j_distance(q, cfg);
                if (r.distance > profile.eps_accept) continue;
            }
            SeqVector xn = add(x, r.perturbation);
            double base_err = distance(xn, x);
            pairs.push_back({entry.k, std::move(xn)});
            base_tols.push_back(std::min(delta, std::max(base_err * (1.0 + 1e-12), 1e-300)));
            target_tols.push_back(profile.eps_accept);
            k_prev = entry.k;
            prev_norm = base_err;
            placed = true;
            break;
        }
        if (!placed)
            fail(Errc::NotCertifiable, "extract_witness: no admissible power at delta level " +
                                           std::to_string(level + 1));
    }
    return Witness(op, WitnessDirection::Forward, x, y, std::move(pairs), std::move(base_tols),
                   std::move(target_tols));
}

// ||T^k x||-restricted helper used by extract_witness's zero-perturbation path.
inline SeqVector restrict_to_out(const OperatorSpec& op, const SeqVector& x, long long k,
                                 IndexWindow out_window, const RunConfig& cfg) {
    (void)cfg;
    SeqVector img = iterate(op, x, k);
    if (img.is_sum()) return img;
    return restrict_to(img, clamp_window(op.space(), out_window));
}

}  // namespace jclass
