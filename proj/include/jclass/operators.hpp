#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jclass/common.hpp"
#include "jclass/space.hpp"
#include "jclass/vector.hpp"
#include "jclass/weights.hpp"

namespace jclass {

class OperatorSpec;

// User-declared structural assertions; they feed classifier short-circuits
// and are never derived from the operator itself.
struct OperatorFlags {
    bool compact = false;
    bool positive = false;
    bool hyponormal = false;

    friend bool operator==(const OperatorFlags& a, const OperatorFlags& b) {
        return a.compact == b.compact && a.positive == b.positive && a.hyponormal == b.hyponormal;
    }
};

struct PolynomialCoeffs {
    std::vector<Complex> coeffs;  // coeffs[i] multiplies z^i

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    Complex eval(Complex z) const {
        Complex r{0, 0};
        for (std::size_t i = coeffs.size(); i-- > 0;) r = r * z + coeffs[i];
        return r;
    }

    friend bool operator==(const PolynomialCoeffs& a, const PolynomialCoeffs& b) {
        return a.coeffs == b.coeffs;
    }
};

inline PolynomialCoeffs make_polynomial(std::vector<Complex> coeffs) {
    if (coeffs.empty()) fail(Errc::EmptyPolynomial, "polynomial needs at least one coefficient");
    for (Complex c : coeffs)
        if (!is_finite(c)) fail(Errc::InvalidArgument, "polynomial coefficient must be finite");
    if (coeffs.size() > 1 && coeffs.back() == Complex{0, 0})
        fail(Errc::EmptyPolynomial, "leading polynomial coefficient must be nonzero");
    if (coeffs.size() == 1 && coeffs[0] == Complex{0, 0})
        fail(Errc::EmptyPolynomial, "zero polynomial is not allowed");
    return PolynomialCoeffs{std::move(coeffs)};
}

// Convention used throughout: a backward shift acts as (Tx)_j = a_j x_{j+1},
// and the matching forward shift as (Fx)_m = a_{m-1} x_{m-1}, so that on l2
// the forward shift with the same weights is exactly the adjoint.
struct BackwardShiftOp {
    WeightSeq weights;
    bool bilateral = false;
    bool sup_norm = false;  // unilateral l-infinity variant
};

struct ForwardShiftOp {
    WeightSeq weights;
    bool bilateral = false;
};

struct DiagonalOp {
    DiagSeq entries;
};

struct ScalarIdentityOp {
    Complex lambda;
};

// Upper bidiagonal block: (Ax)_m = lambda x_m + x_{m+1}, x_{l+1} = 0.
struct JordanBlockOp {
    Complex lambda;
    long long size = 1;
};

struct FiniteMatrixOp {
    Eigen::MatrixXcd entries;
};

struct DirectSumOp {
    std::vector<OperatorSpec> parts;
};

struct PolynomialOfOp {
    std::shared_ptr<const OperatorSpec> base;
    PolynomialCoeffs coeffs;
};

using OperatorVariant = std::variant<BackwardShiftOp, ForwardShiftOp, DiagonalOp, ScalarIdentityOp,
                                     JordanBlockOp, FiniteMatrixOp, DirectSumOp, PolynomialOfOp>;

// Validated, immutable description of an operator from the closed family.
// Construction computes an analytic norm bound for the family and records
// whether that bound is the exact operator norm.
class OperatorSpec {
public:
    OperatorSpec(OperatorVariant v, SpaceTag space, OperatorFlags flags, double norm_bound,
                 bool norm_exact)
        : v_(std::move(v)),
          space_(std::move(space)),
          flags_(flags),
          norm_bound_(norm_bound),
          norm_exact_(norm_exact) {}

    const OperatorVariant& variant() const { return v_; }
    const SpaceTag& space() const { return space_; }
    const OperatorFlags& flags() const { return flags_; }
    double norm_bound() const { return norm_bound_; }
    bool norm_bound_exact() const { return norm_exact_; }

    template <class T>
    const T* as() const {
        return std::get_if<T>(&v_);
    }

private:
    OperatorVariant v_;
    SpaceTag space_;
    OperatorFlags flags_;
    double norm_bound_;
    bool norm_exact_;
};

// --- constructors -------------------------------------------------------------

inline OperatorSpec make_backward_shift(WeightSeq weights, const SpaceTag& space,
                                        OperatorFlags flags = {}) {
    bool bilateral = space.kind == SpaceKind::BilateralL2;
    bool sup = space.kind == SpaceKind::UnilateralLinf;
    if (!bilateral && !sup && space.kind != SpaceKind::UnilateralL2)
        fail(Errc::InvalidArgument, "backward shift: space must be l2, bilateral l2 or linf");
    WeightBounds wb = validate_weights(weights, bilateral);
    // ||T|| = sup_j a_j on every one of these spaces.
    return OperatorSpec(BackwardShiftOp{std::move(weights), bilateral, sup}, space, flags, wb.sup, true);
}

inline OperatorSpec make_forward_shift(WeightSeq weights, const SpaceTag& space,
                                       OperatorFlags flags = {}) {
    bool bilateral = space.kind == SpaceKind::BilateralL2;
    if (!bilateral && space.kind != SpaceKind::UnilateralL2)
        fail(Errc::InvalidArgument, "forward shift: space must be l2 or bilateral l2");
    WeightBounds wb = validate_weights(weights, bilateral);
    return OperatorSpec(ForwardShiftOp{std::move(weights), bilateral}, space, flags, wb.sup, true);
}

inline OperatorSpec make_diagonal(DiagSeq entries, const SpaceTag& space, OperatorFlags flags = {}) {
    if (space.is_sum()) fail(Errc::InvalidArgument, "diagonal: leaf spaces only");
    if (space.is_finite_dim() && entries.kind == SeqGenKind::FiniteListThenTail &&
        static_cast<long long>(entries.list.size()) < space.dim)
        fail(Errc::InvalidArgument, "diagonal on C^d needs at least d listed entries");
    DiagBounds db = validate_entries(entries, space.is_bilateral(), space.is_finite_dim(), space.dim);
    return OperatorSpec(DiagonalOp{std::move(entries)}, space, flags, db.sup_abs, true);
}

inline OperatorSpec make_scalar_identity(Complex lambda, const SpaceTag& space,
                                         OperatorFlags flags = {}) {
    if (!is_finite(lambda)) fail(Errc::InvalidArgument, "scalar identity: lambda must be finite");
    return OperatorSpec(ScalarIdentityOp{lambda}, space, flags, std::abs(lambda), true);
}

inline OperatorSpec make_jordan_block(Complex lambda, long long size, OperatorFlags flags = {}) {
    if (size < 1) fail(Errc::InvalidArgument, "jordan block: size must be >= 1");
    if (!is_finite(lambda)) fail(Errc::InvalidArgument, "jordan block: lambda must be finite");
    // |lambda| + 1 is a crude upper bound; an exact norm is never needed here.
    return OperatorSpec(JordanBlockOp{lambda, size}, finite_dim(size), flags, std::abs(lambda) + 1.0,
                        false);
}

inline OperatorSpec make_finite_matrix(Eigen::MatrixXcd entries, OperatorFlags flags = {}) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        fail(Errc::InvalidArgument, "finite matrix: square nonempty matrix required");
    if (!entries.allFinite()) fail(Errc::InvalidArgument, "finite matrix: entries must be finite");
    long long d = entries.rows();
    // sqrt(||M||_1 ||M||_inf) is a cheap submultiplicative bound on ||M||_2.
    double n1 = 0, ninf = 0;
    for (long long j = 0; j < d; ++j) n1 = std::max(n1, entries.col(j).cwiseAbs().sum());
    for (long long i = 0; i < d; ++i) ninf = std::max(ninf, entries.row(i).cwiseAbs().sum());
    double bound = std::min(std::sqrt(n1 * ninf), entries.norm());
    return OperatorSpec(FiniteMatrixOp{std::move(entries)}, finite_dim(d), flags, bound, false);
}

inline OperatorSpec make_direct_sum(std::vector<OperatorSpec> parts, OperatorFlags flags = {}) {
    if (parts.size() < 2) fail(Errc::InvalidArgument, "direct sum: at least two components");
    std::vector<SpaceTag> spaces;
    spaces.reserve(parts.size());
    double bound = 0;
    bool exact = true;
    for (const auto& p : parts) {
        spaces.push_back(p.space());
        bound = std::max(bound, p.norm_bound());
        exact = exact && p.norm_bound_exact();
    }
    SpaceTag space = direct_sum_space(std::move(spaces));  // rejects mixed norms
    return OperatorSpec(DirectSumOp{std::move(parts)}, space, flags, bound, exact);
}

inline OperatorSpec make_polynomial_of(OperatorSpec base, PolynomialCoeffs coeffs,
                                       OperatorFlags flags = {}) {
    if (coeffs.coeffs.empty()) fail(Errc::EmptyPolynomial, "polynomial operator needs coefficients");
    SpaceTag space = base.space();
    double b = base.norm_bound();
    double bound = 0, pw = 1;
    for (std::size_t i = 0; i < coeffs.coeffs.size(); ++i) {
        bound += std::abs(coeffs.coeffs[i]) * pw;
        pw *= b;
    }
    // A degree-1 monomial c*z is a plain scalar multiple, so exactness survives.
    bool monomial_scale = coeffs.coeffs.size() == 2 && coeffs.coeffs[0] == Complex{0, 0};
    bool exact = monomial_scale && base.norm_bound_exact();
    if (monomial_scale) bound = std::abs(coeffs.coeffs[1]) * b;
    return OperatorSpec(PolynomialOfOp{std::make_shared<OperatorSpec>(std::move(base)), std::move(coeffs)},
                        space, flags, bound, exact);
}

// lambda * backward shift; real positive lambda stays a plain weighted shift,
// everything else is wrapped as the monomial lambda*z of the unit shift.
inline OperatorSpec make_scaled_backward_shift(Complex lambda, const SpaceTag& space,
                                               OperatorFlags flags = {}) {
    if (lambda.imag() == 0.0 && lambda.real() > 0.0)
        return make_backward_shift(constant_weights(lambda.real()), space, flags);
    return make_polynomial_of(make_backward_shift(constant_weights(1.0), space),
                              make_polynomial({Complex{0, 0}, lambda}), flags);
}

// --- structural helpers --------------------------------------------------------

inline bool spec_equal(const OperatorSpec& a, const OperatorSpec& b);

namespace detail {
inline bool variant_equal(const OperatorVariant& a, const OperatorVariant& b) {
    if (a.index() != b.index()) return false;
    if (const auto* s = std::get_if<BackwardShiftOp>(&a)) {
        const auto& t = std::get<BackwardShiftOp>(b);
        return s->weights == t.weights && s->bilateral == t.bilateral && s->sup_norm == t.sup_norm;
    }
    if (const auto* s = std::get_if<ForwardShiftOp>(&a)) {
        const auto& t = std::get<ForwardShiftOp>(b);
        return s->weights == t.weights && s->bilateral == t.bilateral;
    }
    if (const auto* s = std::get_if<DiagonalOp>(&a)) return s->entries == std::get<DiagonalOp>(b).entries;
    if (const auto* s = std::get_if<ScalarIdentityOp>(&a))
        return s->lambda == std::get<ScalarIdentityOp>(b).lambda;
    if (const auto* s = std::get_if<JordanBlockOp>(&a)) {
        const auto& t = std::get<JordanBlockOp>(b);
        return s->lambda == t.lambda && s->size == t.size;
    }
    if (const auto* s = std::get_if<FiniteMatrixOp>(&a)) {
        const auto& t = std::get<FiniteMatrixOp>(b);
        return s->entries.rows() == t.entries.rows() && s->entries == t.entries;
    }
    if (const auto* s = std::get_if<DirectSumOp>(&a)) {
        const auto& t = std::get<DirectSumOp>(b);
        if (s->parts.size() != t.parts.size()) return false;
        for (std::size_t i = 0; i < s->parts.size(); ++i)
            if (!spec_equal(s->parts[i], t.parts[i])) return false;
        return true;
    }
    if (const auto* s = std::get_if<PolynomialOfOp>(&a)) {
        const auto& t = std::get<PolynomialOfOp>(b);
        return s->coeffs == t.coeffs && spec_equal(*s->base, *t.base);
    }
    return false;
}
}  // namespace detail

inline bool spec_equal(const OperatorSpec& a, const OperatorSpec& b) {
    return a.space() == b.space() && detail::variant_equal(a.variant(), b.variant());
}

// Normal form of a shift-like operator: scale * (backward|forward shift).
struct ShiftForm {
    WeightSeq weights;
    Complex scale{1.0, 0.0};
    bool backward = true;
    bool bilateral = false;
    bool sup_norm = false;
};

inline std::optional<ShiftForm> shift_form(const OperatorSpec& op) {
    if (const auto* s = op.as<BackwardShiftOp>())
        return ShiftForm{s->weights, {1, 0}, true, s->bilateral, s->sup_norm};
    if (const auto* s = op.as<ForwardShiftOp>())
        return ShiftForm{s->weights, {1, 0}, false, s->bilateral, false};
    if (const auto* p = op.as<PolynomialOfOp>()) {
        if (p->coeffs.coeffs.size() == 2 && p->coeffs.coeffs[0] == Complex{0, 0}) {
            auto inner_form = shift_form(*p->base);
            if (inner_form) {
                inner_form->scale *= p->coeffs.coeffs[1];
                return inner_form;
            }
        }
    }
    return std::nullopt;
}

// Product of weights a_lo * ... * a_hi (empty product for hi < lo).
inline double weight_product(const WeightSeq& w, long long lo, long long hi) {
    double p = 1.0;
    for (long long i = lo; i <= hi; ++i) p *= w.at(i);
    return p;
}

// --- application ---------------------------------------------------------------

inline SeqVector apply(const OperatorSpec& op, const SeqVector& v);
inline SeqVector iterate(const OperatorSpec& op, const SeqVector& v, long long k);

namespace detail {

inline SeqVector apply_backward(const BackwardShiftOp& s, const SpaceTag& space, const SeqVector& v,
                                Complex scale, long long k) {
    // (T^k v)_j = scale^k * prod_{i=j}^{j+k-1} a_i * v_{j+k}
    if (k == 0) return scale == Complex{1, 0} ? v : scaled(v, scale);
    IndexWindow in = v.window();
    long long lo = in.lo - k, hi = in.hi - k;
    if (!s.bilateral) lo = std::max(lo, min_index(space));
    if (hi < lo) return SeqVector::zero(space);
    Complex sk{1, 0};
    for (long long i = 0; i < k; ++i) sk *= scale;
    std::vector<Complex> coords(static_cast<std::size_t>(hi - lo + 1));
    double prod = weight_product(s.weights, lo, lo + k - 1);
    for (long long j = lo; j <= hi; ++j) {
        coords[static_cast<std::size_t>(j - lo)] = sk * prod * v.at(j + k);
        // slide the product window: drop a_j, pick up a_{j+k}
        if (j < hi) prod = prod / s.weights.at(j) * s.weights.at(j + k);
    }
    return SeqVector::from_coords(space, {lo, hi}, std::move(coords));
}

inline SeqVector apply_forward(const ForwardShiftOp& s, const SpaceTag& space, const SeqVector& v,
                               Complex scale, long long k) {
    // (F^k v)_m = scale^k * prod_{i=m-k}^{m-1} a_i * v_{m-k}
    if (k == 0) return scale == Complex{1, 0} ? v : scaled(v, scale);
    IndexWindow in = v.window();
    long long lo = in.lo + k, hi = in.hi + k;
    check_window_budget({std::min(lo, in.lo), std::max(hi, in.hi)}, default_max_dimension(), "forward shift");
    Complex sk{1, 0};
    for (long long i = 0; i < k; ++i) sk *= scale;
    std::vector<Complex> coords(static_cast<std::size_t>(hi - lo + 1));
    double prod = weight_product(s.weights, lo - k, lo - 1);
    for (long long m = lo; m <= hi; ++m) {
        coords[static_cast<std::size_t>(m - lo)] = sk * prod * v.at(m - k);
        if (m < hi) prod = prod / s.weights.at(m - k) * s.weights.at(m);
    }
    return SeqVector::from_coords(space, {lo, hi}, std::move(coords));
}

inline Eigen::MatrixXcd jordan_dense(const JordanBlockOp& j) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(j.size, j.size);
    for (long long i = 0; i < j.size; ++i) {
        m(i, i) = j.lambda;
        if (i + 1 < j.size) m(i, i + 1) = Complex{1, 0};
    }
    return m;
}

inline SeqVector apply_dense(const Eigen::MatrixXcd& m, const SpaceTag& space, const SeqVector& v) {
    long long d = m.rows();
    Eigen::VectorXcd x(d);
    for (long long i = 0; i < d; ++i) x(i) = v.at(i + 1);
    Eigen::VectorXcd y = m * x;
    std::vector<Complex> coords(static_cast<std::size_t>(d));
    for (long long i = 0; i < d; ++i) coords[static_cast<std::size_t>(i)] = y(i);
    return SeqVector::from_coords(space, {1, d}, std::move(coords));
}

inline Eigen::MatrixXcd dense_power(Eigen::MatrixXcd m, long long k) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    while (k > 0) {
        if (k & 1) r = r * m;
        m = m * m;
        k >>= 1;
    }
    return r;
}

}  // namespace detail

inline SeqVector polynomial_apply(const OperatorSpec& op, const PolynomialCoeffs& p, const SeqVector& v) {
    if (!(op.space() == v.space())) fail(Errc::SpaceMismatch, "polynomial_apply: space mismatch");
    if (p.coeffs.empty()) fail(Errc::EmptyPolynomial, "polynomial_apply: empty polynomial");
    // Horner over operator application: r <- T r + c_i v
    SeqVector r = scaled(v, p.coeffs.back());
    for (std::size_t i = p.coeffs.size() - 1; i-- > 0;) r = axpy({1, 0}, apply(op, r), p.coeffs[i], v);
    return r;
}

inline SeqVector apply(const OperatorSpec& op, const SeqVector& v) {
    if (!(op.space() == v.space())) fail(Errc::SpaceMismatch, "apply: operator/vector space mismatch");
    const SpaceTag& space = op.space();
    if (const auto* s = op.as<BackwardShiftOp>()) return detail::apply_backward(*s, space, v, {1, 0}, 1);
    if (const auto* s = op.as<ForwardShiftOp>()) return detail::apply_forward(*s, space, v, {1, 0}, 1);
    if (const auto* s = op.as<DiagonalOp>()) {
        std::vector<Complex> coords = v.coords();
        for (long long j = v.window().lo; j <= v.window().hi; ++j)
            coords[static_cast<std::size_t>(j - v.window().lo)] *= s->entries.at(j);
        return SeqVector::from_coords(space, v.window(), std::move(coords));
    }
    if (const auto* s = op.as<ScalarIdentityOp>()) return scaled(v, s->lambda);
    if (const auto* s = op.as<JordanBlockOp>()) {
        // (Av)_m = lambda v_m + v_{m+1}
        long long d = s->size;
        std::vector<Complex> coords(static_cast<std::size_t>(d));
        for (long long m = 1; m <= d; ++m)
            coords[static_cast<std::size_t>(m - 1)] = s->lambda * v.at(m) + (m + 1 <= d ? v.at(m + 1) : Complex{0, 0});
        return SeqVector::from_coords(space, {1, d}, std::move(coords));
    }
    if (const auto* s = op.as<FiniteMatrixOp>()) return detail::apply_dense(s->entries, space, v);
    if (const auto* s = op.as<DirectSumOp>()) {
        std::vector<SeqVector> blocks;
        blocks.reserve(s->parts.size());
        for (std::size_t i = 0; i < s->parts.size(); ++i)
            blocks.push_back(apply(s->parts[i], v.blocks()[i]));
        return SeqVector::sum_of(space, std::move(blocks));
    }
    if (const auto* s = op.as<PolynomialOfOp>()) return polynomial_apply(*s->base, s->coeffs, v);
    fail(Errc::InvalidArgument, "apply: unknown operator variant");
}

inline SeqVector iterate(const OperatorSpec& op, const SeqVector& v, long long k) {
    if (k < 0) fail(Errc::InvalidArgument, "iterate: power must be nonnegative");
    if (!(op.space() == v.space())) fail(Errc::SpaceMismatch, "iterate: operator/vector space mismatch");
    if (k == 0) return v;
    const SpaceTag& space = op.space();
    if (const auto* s = op.as<BackwardShiftOp>()) return detail::apply_backward(*s, space, v, {1, 0}, k);
    if (const auto* s = op.as<ForwardShiftOp>()) return detail::apply_forward(*s, space, v, {1, 0}, k);
    if (const auto* s = op.as<DiagonalOp>()) {
        std::vector<Complex> coords = v.coords();
        for (long long j = v.window().lo; j <= v.window().hi; ++j) {
            Complex d = s->entries.at(j), p{1, 0};
            for (long long i = 0; i < k; ++i) p *= d;
            coords[static_cast<std::size_t>(j - v.window().lo)] *= p;
        }
        return SeqVector::from_coords(space, v.window(), std::move(coords));
    }
    if (const auto* s = op.as<ScalarIdentityOp>()) {
        Complex p{1, 0};
        for (long long i = 0; i < k; ++i) p *= s->lambda;
        return scaled(v, p);
    }
    if (const auto* s = op.as<JordanBlockOp>())
        return detail::apply_dense(detail::dense_power(detail::jordan_dense(*s), k), space, v);
    if (const auto* s = op.as<FiniteMatrixOp>())
        return detail::apply_dense(detail::dense_power(s->entries, k), space, v);
    if (const auto* s = op.as<DirectSumOp>()) {
        std::vector<SeqVector> blocks;
        blocks.reserve(s->parts.size());
        for (std::size_t i = 0; i < s->parts.size(); ++i)
            blocks.push_back(iterate(s->parts[i], v.blocks()[i], k));
        return SeqVector::sum_of(space, std::move(blocks));
    }
    if (op.as<PolynomialOfOp>()) {
        // Scaled shifts keep an exact closed form; general polynomials fold.
        if (auto sf = shift_form(op)) {
            if (sf->backward) {
                BackwardShiftOp bs{sf->weights, sf->bilateral, sf->sup_norm};
                return detail::apply_backward(bs, space, v, sf->scale, k);
            }
            ForwardShiftOp fs{sf->weights, sf->bilateral};
            return detail::apply_forward(fs, space, v, sf->scale, k);
        }
        SeqVector r = v;
        for (long long i = 0; i < k; ++i) r = apply(op, r);
        return r;
    }
    fail(Errc::InvalidArgument, "iterate: unknown operator variant");
}

// --- truncation ----------------------------------------------------------------

// Per-leaf windows describing a finite slice of a (possibly direct-sum) space.
using BlockWindows = std::vector<IndexWindow>;

inline BlockWindows clamp_block_windows(const SpaceTag& space, IndexWindow requested) {
    std::vector<const SpaceTag*> leaves;
    leaf_spaces(space, leaves);
    BlockWindows out;
    out.reserve(leaves.size());
    for (const SpaceTag* leaf : leaves) {
        if (leaf->is_finite_dim())
            out.push_back({1, leaf->dim});
        else
            out.push_back(clamp_window(*leaf, requested));
    }
    return out;
}

inline long long total_size(const BlockWindows& w) {
    long long n = 0;
    for (const auto& b : w) n += b.size();
    return n;
}

namespace detail {

// Dependency window of one application, per leaf. Windows only ever grow
// (the output window is always contained), so composition is monotone.
inline IndexWindow dep_window_leaf(const OperatorSpec& op, const SpaceTag& leaf, IndexWindow out) {
    if (const auto* s = op.as<BackwardShiftOp>()) {
        (void)s;
        return clamp_window(leaf, {out.lo, out.hi + 1});
    }
    if (op.as<ForwardShiftOp>()) return clamp_window(leaf, {out.lo - 1, out.hi});
    if (leaf.is_finite_dim()) return {1, leaf.dim};
    return out;  // diagonal / scalar identity
}

inline void dep_windows(const OperatorSpec& op, const std::vector<const SpaceTag*>& leaves,
                        std::size_t& cursor, BlockWindows& windows, long long k);

inline void dep_windows_one(const OperatorSpec& op, const std::vector<const SpaceTag*>& leaves,
                            std::size_t& cursor, BlockWindows& windows) {
    if (const auto* s = op.as<DirectSumOp>()) {
        for (const auto& part : s->parts) dep_windows(part, leaves, cursor, windows, 1);
        return;
    }
    if (const auto* s = op.as<PolynomialOfOp>()) {
        // one application of p(T) reads at most deg(p) successive dependency hops
        dep_windows(*s->base, leaves, cursor, windows, s->coeffs.degree());
        return;
    }
    windows[cursor] = dep_window_leaf(op, *leaves[cursor], windows[cursor]);
    ++cursor;
}

inline void dep_windows(const OperatorSpec& op, const std::vector<const SpaceTag*>& leaves,
                        std::size_t& cursor, BlockWindows& windows, long long k) {
    std::size_t mark = cursor;
    for (long long i = 0; i < k; ++i) {
        cursor = mark;
        dep_windows_one(op, leaves, cursor, windows);
    }
    if (k == 0) {
        std::vector<const SpaceTag*> mine;
        leaf_spaces(op.space(), mine);
        cursor = mark + mine.size();
    }
}

}  // namespace detail

// Input window needed so that (T^k v)|out is exact for any v supported there.
inline BlockWindows truncation_in_windows(const OperatorSpec& op, long long k, const BlockWindows& out,
                                          long long max_dim = default_max_dimension()) {
    std::vector<const SpaceTag*> leaves;
    leaf_spaces(op.space(), leaves);
    if (leaves.size() != out.size()) fail(Errc::SpaceMismatch, "truncation: wrong block count");
    BlockWindows in = out;
    std::size_t cursor = 0;
    detail::dep_windows(op, leaves, cursor, in, k);
    for (std::size_t i = 0; i < in.size(); ++i) check_window_budget(in[i], max_dim, "truncation");
    return in;
}

namespace detail {
inline void collect_leaves(const SeqVector& v, std::vector<const SeqVector*>& out) {
    if (v.is_sum())
        for (const auto& b : v.blocks()) collect_leaves(b, out);
    else
        out.push_back(&v);
}
}  // namespace detail

// Flatten the block-restricted coordinates of v (leaf windows given) into a
// single dense column, and back.
inline Eigen::VectorXcd flatten(const SeqVector& v, const BlockWindows& windows) {
    std::vector<const SeqVector*> order;
    detail::collect_leaves(v, order);
    if (order.size() != windows.size()) fail(Errc::SpaceMismatch, "flatten: wrong block count");
    Eigen::VectorXcd out(total_size(windows));
    long long at = 0;
    for (std::size_t b = 0; b < windows.size(); ++b)
        for (long long j = windows[b].lo; j <= windows[b].hi; ++j) out(at++) = order[b]->at(j);
    return out;
}

inline SeqVector unflatten(const Eigen::VectorXcd& data, const SpaceTag& space, const BlockWindows& windows,
                           std::size_t* cursor_blocks = nullptr, long long* cursor_data = nullptr) {
    std::size_t blocks0 = 0;
    long long data0 = 0;
    std::size_t& cb = cursor_blocks ? *cursor_blocks : blocks0;
    long long& cd = cursor_data ? *cursor_data : data0;
    if (space.is_sum()) {
        std::vector<SeqVector> blocks;
        blocks.reserve(space.parts.size());
        for (const auto& p : space.parts) blocks.push_back(unflatten(data, p, windows, &cb, &cd));
        return SeqVector::sum_of(space, std::move(blocks));
    }
    IndexWindow w = windows[cb++];
    std::vector<Complex> coords(static_cast<std::size_t>(w.size()));
    for (long long i = 0; i < w.size(); ++i) coords[static_cast<std::size_t>(i)] = data(cd++);
    return SeqVector::from_coords(space, w, std::move(coords));
}

struct Truncation {
    Eigen::MatrixXcd matrix;  // |out| x |in|
    BlockWindows in;
    BlockWindows out;
};

// Dense matrix of T^k between the in/out block windows; exact for any vector
// supported in the in windows. Columns are iterate() images of basis vectors,
// so shift families inherit the closed-form product coefficients.
inline Truncation truncation_matrix(const OperatorSpec& op, long long k, const BlockWindows& out,
                                    long long max_dim = default_max_dimension()) {
    if (k < 0) fail(Errc::InvalidArgument, "truncation: power must be nonnegative");
    for (const auto& w : out) check_window_budget(w, max_dim, "truncation");
    BlockWindows in = truncation_in_windows(op, k, out, max_dim);
    long long rows = total_size(out), cols = total_size(in);
    Eigen::MatrixXcd m(rows, cols);
    std::vector<const SpaceTag*> leaves;
    leaf_spaces(op.space(), leaves);
    long long col = 0;
    for (std::size_t b = 0; b < in.size(); ++b) {
        for (long long j = in[b].lo; j <= in[b].hi; ++j, ++col) {
            // embed leaf basis vector into the sum structure
            Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(cols);
            unit(col) = Complex{1, 0};
            SeqVector e = unflatten(unit, op.space(), in);
            m.col(col) = flatten(iterate(op, e, k), out);
        }
    }
    return Truncation{std::move(m), std::move(in), out};
}

inline Truncation truncation_matrix(const OperatorSpec& op, long long k, IndexWindow out,
                                    long long max_dim = default_max_dimension()) {
    return truncation_matrix(op, k, clamp_block_windows(op.space(), out), max_dim);
}

// --- adjoint / inverse -----------------------------------------------------------

inline OperatorSpec adjoint(const OperatorSpec& op) {
    if (norm_kind(op.space()) == NormKind::Sup)
        fail(Errc::NoAdjointForSupNorm, "adjoint: defined on Hilbert-space variants only");
    if (const auto* s = op.as<BackwardShiftOp>())
        return make_forward_shift(s->weights, op.space(), op.flags());
    if (const auto* s = op.as<ForwardShiftOp>())
        return make_backward_shift(s->weights, op.space(), op.flags());
    if (const auto* s = op.as<DiagonalOp>())
        return make_diagonal(conjugated(s->entries), op.space(), op.flags());
    if (const auto* s = op.as<ScalarIdentityOp>())
        return make_scalar_identity(std::conj(s->lambda), op.space(), op.flags());
    if (const auto* s = op.as<JordanBlockOp>())
        return make_finite_matrix(detail::jordan_dense(*s).adjoint(), op.flags());
    if (const auto* s = op.as<FiniteMatrixOp>())
        return make_finite_matrix(s->entries.adjoint(), op.flags());
    if (const auto* s = op.as<DirectSumOp>()) {
        std::vector<OperatorSpec> parts;
        parts.reserve(s->parts.size());
        for (const auto& p : s->parts) parts.push_back(adjoint(p));
        return make_direct_sum(std::move(parts), op.flags());
    }
    if (const auto* s = op.as<PolynomialOfOp>()) {
        std::vector<Complex> conj_coeffs = s->coeffs.coeffs;
        for (auto& c : conj_coeffs) c = std::conj(c);
        return make_polynomial_of(adjoint(*s->base), make_polynomial(std::move(conj_coeffs)), op.flags());
    }
    fail(Errc::InvalidArgument, "adjoint: unknown operator variant");
}

inline OperatorSpec inverse(const OperatorSpec& op) {
    if (const auto* s = op.as<BackwardShiftOp>()) {
        if (!s->bilateral) fail(Errc::NotInvertible, "unilateral backward shift has nontrivial kernel");
        WeightBounds wb = validate_weights(s->weights, true);
        if (!(wb.inf > 0)) fail(Errc::NotInvertible, "bilateral shift with inf weight 0");
        return make_forward_shift(reciprocal(s->weights), op.space(), op.flags());
    }
    if (const auto* s = op.as<ForwardShiftOp>()) {
        if (!s->bilateral) fail(Errc::NotInvertible, "unilateral forward shift is not surjective");
        WeightBounds wb = validate_weights(s->weights, true);
        if (!(wb.inf > 0)) fail(Errc::NotInvertible, "bilateral shift with inf weight 0");
        return make_backward_shift(reciprocal(s->weights), op.space(), op.flags());
    }
    if (const auto* s = op.as<DiagonalOp>()) {
        DiagBounds db = validate_entries(s->entries, op.space().is_bilateral(), op.space().is_finite_dim(),
                                         op.space().dim);
        if (!(db.inf_abs > 0)) fail(Errc::NotInvertible, "diagonal with entries approaching 0");
        return make_diagonal(reciprocal(s->entries), op.space(), op.flags());
    }
    if (const auto* s = op.as<ScalarIdentityOp>()) {
        if (s->lambda == Complex{0, 0}) fail(Errc::NotInvertible, "zero scalar identity");
        return make_scalar_identity(1.0 / s->lambda, op.space(), op.flags());
    }
    if (const auto* s = op.as<JordanBlockOp>()) {
        if (s->lambda == Complex{0, 0}) fail(Errc::NotInvertible, "jordan block with eigenvalue 0");
        Eigen::MatrixXcd m = detail::jordan_dense(*s);
        return make_finite_matrix(m.inverse(), op.flags());
    }
    if (const auto* s = op.as<FiniteMatrixOp>()) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s->entries);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 1e-12 * sv(0)) fail(Errc::NotInvertible, "numerically singular matrix");
        return make_finite_matrix(s->entries.inverse(), op.flags());
    }
    if (const auto* s = op.as<DirectSumOp>()) {
        std::vector<OperatorSpec> parts;
        parts.reserve(s->parts.size());
        for (const auto& p : s->parts) parts.push_back(inverse(p));
        return make_direct_sum(std::move(parts), op.flags());
    }
    fail(Errc::NotInvertible, "no family-level inverse for this variant");
}

}  // namespace jclass
