#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "jclass/common.hpp"

namespace jclass {

enum class SeqGenKind { Constant, FiniteListThenTail, Geometric, TwoSidedSplit };

// Symbolic generator for a value sequence over the index set of a space:
// weights of a shift (positive reals) or entries of a diagonal (complex).
// Keeping the generator symbolic makes sup/inf and serialization exact.
template <class T>
struct SeqGen {
    SeqGenKind kind = SeqGenKind::Constant;
    T constant{};
    std::vector<T> list;   // FiniteListThenTail: values at indices 1..list.size()
    T tail{};              // FiniteListThenTail: every other index
    T scale{};             // Geometric: scale * ratio^(j-1) at index j >= 1
    T ratio{};
    T positive_value{};    // TwoSidedSplit: indices >= 1
    T nonpositive_value{}; // TwoSidedSplit: indices <= 0

    T at(long long j) const {
        switch (kind) {
            case SeqGenKind::Constant: return constant;
            case SeqGenKind::FiniteListThenTail:
                if (j >= 1 && j <= static_cast<long long>(list.size()))
                    return list[static_cast<std::size_t>(j - 1)];
                return tail;
            case SeqGenKind::Geometric: {
                T v = scale;
                if (j >= 1) {
                    for (long long i = 1; i < j; ++i) v *= ratio;
                } else {
                    for (long long i = j; i < 1; ++i) v /= ratio;
                }
                return v;
            }
            case SeqGenKind::TwoSidedSplit: return j >= 1 ? positive_value : nonpositive_value;
        }
        return constant;
    }

    friend bool operator==(const SeqGen& a, const SeqGen& b) {
        return a.kind == b.kind && a.constant == b.constant && a.list == b.list && a.tail == b.tail &&
               a.scale == b.scale && a.ratio == b.ratio && a.positive_value == b.positive_value &&
               a.nonpositive_value == b.nonpositive_value;
    }
};

using WeightSeq = SeqGen<double>;
using DiagSeq = SeqGen<Complex>;

inline WeightSeq constant_weights(double a) {
    WeightSeq w;
    w.kind = SeqGenKind::Constant;
    w.constant = a;
    return w;
}

inline WeightSeq list_weights(std::vector<double> values, double tail) {
    WeightSeq w;
    w.kind = SeqGenKind::FiniteListThenTail;
    w.list = std::move(values);
    w.tail = tail;
    return w;
}

inline WeightSeq geometric_weights(double scale, double ratio) {
    WeightSeq w;
    w.kind = SeqGenKind::Geometric;
    w.scale = scale;
    w.ratio = ratio;
    return w;
}

inline WeightSeq two_sided_weights(double positive_side, double nonpositive_side) {
    WeightSeq w;
    w.kind = SeqGenKind::TwoSidedSplit;
    w.positive_value = positive_side;
    w.nonpositive_value = nonpositive_side;
    return w;
}

inline DiagSeq constant_entries(Complex z) {
    DiagSeq d;
    d.kind = SeqGenKind::Constant;
    d.constant = z;
    return d;
}

inline DiagSeq list_entries(std::vector<Complex> values, Complex tail) {
    DiagSeq d;
    d.kind = SeqGenKind::FiniteListThenTail;
    d.list = std::move(values);
    d.tail = tail;
    return d;
}

inline DiagSeq two_sided_entries(Complex positive_side, Complex nonpositive_side) {
    DiagSeq d;
    d.kind = SeqGenKind::TwoSidedSplit;
    d.positive_value = positive_side;
    d.nonpositive_value = nonpositive_side;
    return d;
}

// --- weight validation -------------------------------------------------------

// Checks positivity and boundedness of a weight sequence over the index set
// implied by `bilateral`, and returns (sup, inf). inf may legitimately be 0;
// invertibility requirements are enforced later, only where an inverse is
// actually requested.
struct WeightBounds {
    double sup = 0;
    double inf = 0;
};

inline WeightBounds validate_weights(const WeightSeq& w, bool bilateral) {
    auto positive = [](double a) { return std::isfinite(a) && a > 0.0; };
    switch (w.kind) {
        case SeqGenKind::Constant:
            if (!positive(w.constant)) fail(Errc::NonPositiveWeight, "constant weight must be > 0");
            return {w.constant, w.constant};
        case SeqGenKind::FiniteListThenTail: {
            if (!positive(w.tail)) fail(Errc::NonPositiveWeight, "tail weight must be > 0");
            double sup = w.tail, inf = w.tail;
            for (double a : w.list) {
                if (!positive(a)) fail(Errc::NonPositiveWeight, "list weight must be > 0");
                sup = std::max(sup, a);
                inf = std::min(inf, a);
            }
            return {sup, inf};
        }
        case SeqGenKind::Geometric: {
            if (!positive(w.scale) || !positive(w.ratio))
                fail(Errc::NonPositiveWeight, "geometric weights need scale > 0 and ratio > 0");
            if (bilateral && w.ratio != 1.0)
                fail(Errc::UnboundedWeights, "geometric weights are unbounded on a bilateral index set");
            if (w.ratio > 1.0) fail(Errc::UnboundedWeights, "geometric weights with ratio > 1 are unbounded");
            // ratio <= 1 on indices >= 1: sup at j=1, inf is the j -> inf limit.
            return {w.scale, w.ratio == 1.0 ? w.scale : 0.0};
        }
        case SeqGenKind::TwoSidedSplit: {
            if (!positive(w.positive_value) || !positive(w.nonpositive_value))
                fail(Errc::NonPositiveWeight, "two-sided weights must be > 0");
            if (!bilateral) return {w.positive_value, w.positive_value};
            return {std::max(w.positive_value, w.nonpositive_value),
                    std::min(w.positive_value, w.nonpositive_value)};
        }
    }
    fail(Errc::InvalidArgument, "unknown weight generator");
}

inline WeightSeq reciprocal(const WeightSeq& w) {
    WeightSeq r = w;
    switch (w.kind) {
        case SeqGenKind::Constant: r.constant = 1.0 / w.constant; break;
        case SeqGenKind::FiniteListThenTail:
            for (auto& a : r.list) a = 1.0 / a;
            r.tail = 1.0 / w.tail;
            break;
        case SeqGenKind::Geometric:
            r.scale = 1.0 / w.scale;
            r.ratio = 1.0 / w.ratio;
            break;
        case SeqGenKind::TwoSidedSplit:
            r.positive_value = 1.0 / w.positive_value;
            r.nonpositive_value = 1.0 / w.nonpositive_value;
            break;
    }
    return r;
}

// --- diagonal entry summaries ------------------------------------------------

struct DiagBounds {
    double sup_abs = 0;
    double inf_abs = 0;        // over the closure of the entry set
    bool exact = true;
};

inline DiagBounds validate_entries(const DiagSeq& d, bool bilateral, bool finite, long long dim) {
    auto finite_ok = [](Complex z) {
        if (!is_finite(z)) fail(Errc::InvalidArgument, "diagonal entry must be finite");
    };
    switch (d.kind) {
        case SeqGenKind::Constant:
            finite_ok(d.constant);
            return {std::abs(d.constant), std::abs(d.constant), true};
        case SeqGenKind::FiniteListThenTail: {
            finite_ok(d.tail);
            double sup = 0, inf = std::numeric_limits<double>::infinity();
            long long fence = finite ? dim : static_cast<long long>(d.list.size()) + 1;
            for (long long j = 1; j <= fence; ++j) {
                Complex z = d.at(j);
                finite_ok(z);
                sup = std::max(sup, std::abs(z));
                inf = std::min(inf, std::abs(z));
            }
            if (!finite && bilateral) {
                sup = std::max(sup, std::abs(d.tail));
                inf = std::min(inf, std::abs(d.tail));
            }
            return {sup, inf, true};
        }
        case SeqGenKind::Geometric: {
            finite_ok(d.scale);
            finite_ok(d.ratio);
            if (finite) {
                double sup = 0, inf = std::numeric_limits<double>::infinity();
                for (long long j = 1; j <= dim; ++j) {
                    sup = std::max(sup, std::abs(d.at(j)));
                    inf = std::min(inf, std::abs(d.at(j)));
                }
                return {sup, inf, true};
            }
            if (bilateral && std::abs(d.ratio) != 1.0)
                fail(Errc::UnboundedWeights, "geometric entries are unbounded on a bilateral index set");
            double r = std::abs(d.ratio), s = std::abs(d.scale);
            if (r > 1.0) fail(Errc::UnboundedWeights, "geometric entries with |ratio| > 1 are unbounded");
            // |scale|*r^(j-1): sup at j=1; closure adds 0 when r < 1.
            return {s, r == 1.0 ? s : 0.0, true};
        }
        case SeqGenKind::TwoSidedSplit: {
            finite_ok(d.positive_value);
            finite_ok(d.nonpositive_value);
            double a = std::abs(d.positive_value), b = std::abs(d.nonpositive_value);
            if (!bilateral) return {a, a, true};
            return {std::max(a, b), std::min(a, b), true};
        }
    }
    fail(Errc::InvalidArgument, "unknown entry generator");
}

inline DiagSeq conjugated(const DiagSeq& d) {
    DiagSeq c = d;
    c.constant = std::conj(d.constant);
    for (auto& z : c.list) z = std::conj(z);
    c.tail = std::conj(d.tail);
    c.scale = std::conj(d.scale);
    c.ratio = std::conj(d.ratio);
    c.positive_value = std::conj(d.positive_value);
    c.nonpositive_value = std::conj(d.nonpositive_value);
    return c;
}

inline DiagSeq reciprocal(const DiagSeq& d) {
    DiagSeq r = d;
    switch (d.kind) {
        case SeqGenKind::Constant: r.constant = 1.0 / d.constant; break;
        case SeqGenKind::FiniteListThenTail:
            for (auto& z : r.list) z = 1.0 / z;
            r.tail = 1.0 / d.tail;
            break;
        case SeqGenKind::Geometric:
            r.scale = 1.0 / d.scale;
            r.ratio = 1.0 / d.ratio;
            break;
        case SeqGenKind::TwoSidedSplit:
            r.positive_value = 1.0 / d.positive_value;
            r.nonpositive_value = 1.0 / d.nonpositive_value;
            break;
    }
    return r;
}

}  // namespace jclass
