#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "jclass/common.hpp"
#include "jclass/space.hpp"

namespace jclass {

// Finitely supported coordinate vector. Leaf spaces store a window plus the
// coordinates aligned to it; direct-sum spaces store one block per component.
// Coordinates outside the window are implicitly zero.
class SeqVector {
public:
    SeqVector() : space_(unilateral_l2()), window_{1, 1}, coords_(1, Complex{0.0, 0.0}) {}

    static SeqVector zero(const SpaceTag& space) {
        SeqVector v;
        v.space_ = space;
        if (space.is_sum()) {
            v.coords_.clear();
            v.blocks_.reserve(space.parts.size());
            for (const auto& p : space.parts) v.blocks_.push_back(zero(p));
        } else {
            v.window_ = {min_index_or(space), min_index_or(space)};
            v.coords_.assign(1, Complex{0.0, 0.0});
        }
        return v;
    }

    // Unit coordinate vector e_j of a leaf space.
    static SeqVector basis(const SpaceTag& space, long long j) {
        if (space.is_sum()) fail(Errc::InvalidArgument, "basis: leaf spaces only");
        SeqVector v;
        v.space_ = space;
        if (space.is_finite_dim()) {
            if (j < 1 || j > space.dim) fail(Errc::InvalidArgument, "basis: index outside C^d");
            v.window_ = {1, space.dim};
            v.coords_.assign(static_cast<std::size_t>(space.dim), Complex{0.0, 0.0});
            v.coords_[static_cast<std::size_t>(j - 1)] = Complex{1.0, 0.0};
        } else {
            if (has_min_index(space) && j < min_index(space))
                fail(Errc::InvalidArgument, "basis: index outside the space");
            v.window_ = {j, j};
            v.coords_.assign(1, Complex{1.0, 0.0});
        }
        return v;
    }

    static SeqVector from_coords(const SpaceTag& space, IndexWindow window, std::vector<Complex> coords) {
        if (space.is_sum()) fail(Errc::InvalidArgument, "from_coords: leaf spaces only");
        validate_leaf_window(space, window, "SeqVector");
        if (static_cast<long long>(coords.size()) != window.size())
            fail(Errc::InvalidArgument, "SeqVector: coordinate count does not match window size");
        for (Complex z : coords)
            if (!is_finite(z)) fail(Errc::InvalidArgument, "SeqVector: non-finite coordinate");
        SeqVector v;
        v.space_ = space;
        v.window_ = window;
        v.coords_ = std::move(coords);
        return v;
    }

    static SeqVector sum_of(const SpaceTag& space, std::vector<SeqVector> blocks) {
        if (!space.is_sum()) fail(Errc::InvalidArgument, "sum_of: direct-sum space required");
        if (blocks.size() != space.parts.size())
            fail(Errc::SpaceMismatch, "sum_of: block count does not match the space");
        for (std::size_t i = 0; i < blocks.size(); ++i)
            if (!(blocks[i].space() == space.parts[i]))
                fail(Errc::SpaceMismatch, "sum_of: block lives on the wrong component space");
        SeqVector v;
        v.space_ = space;
        v.coords_.clear();
        v.blocks_ = std::move(blocks);
        return v;
    }

    const SpaceTag& space() const { return space_; }
    bool is_sum() const { return space_.is_sum(); }
    IndexWindow window() const { return window_; }
    const std::vector<Complex>& coords() const { return coords_; }
    const std::vector<SeqVector>& blocks() const { return blocks_; }
    std::vector<SeqVector>& blocks() { return blocks_; }

    Complex at(long long j) const {
        if (is_sum()) fail(Errc::InvalidArgument, "at: use blocks() on direct-sum vectors");
        if (!window_.contains(j)) return {0.0, 0.0};
        return coords_[static_cast<std::size_t>(j - window_.lo)];
    }

    void set(long long j, Complex z) {
        if (is_sum()) fail(Errc::InvalidArgument, "set: use blocks() on direct-sum vectors");
        if (!window_.contains(j)) fail(Errc::InvalidArgument, "set: index outside window");
        coords_[static_cast<std::size_t>(j - window_.lo)] = z;
    }

    double norm() const { return norm_as(norm_kind(space_)); }

    double sup_norm() const { return norm_as(NormKind::Sup); }
    double l2_norm() const { return norm_as(NormKind::L2); }

    // Window of the actual support (trailing/leading zeros trimmed); for the
    // zero vector returns the minimal window around `window_.lo`.
    IndexWindow support() const {
        if (is_sum()) fail(Errc::InvalidArgument, "support: leaf vectors only");
        long long lo = window_.lo, hi = window_.hi;
        while (lo < hi && at(lo) == Complex{0.0, 0.0}) ++lo;
        while (hi > lo && at(hi) == Complex{0.0, 0.0}) --hi;
        return {lo, hi};
    }

private:
    static long long min_index_or(const SpaceTag& s) { return has_min_index(s) ? min_index(s) : 0; }

    double norm_as(NormKind k) const {
        if (is_sum()) {
            NormKind mine = norm_kind(space_);
            if (k == NormKind::Neutral) k = mine;
            if (k == NormKind::Sup) {
                double m = 0;
                for (const auto& b : blocks_) m = std::max(m, b.norm_as(NormKind::Sup));
                return m;
            }
            double s = 0;
            for (const auto& b : blocks_) {
                double n = b.norm_as(NormKind::L2);
                s += n * n;
            }
            return std::sqrt(s);
        }
        if (k == NormKind::Sup) {
            double m = 0;
            for (Complex z : coords_) m = std::max(m, std::abs(z));
            return m;
        }
        double s = 0;
        for (Complex z : coords_) s += std::norm(z);
        return std::sqrt(s);
    }

    SpaceTag space_;
    IndexWindow window_;
    std::vector<Complex> coords_;
    std::vector<SeqVector> blocks_;
};

// --- algebra ------------------------------------------------------------------

inline SeqVector axpy(Complex a, const SeqVector& x, Complex b, const SeqVector& y) {
    if (!(x.space() == y.space())) fail(Errc::SpaceMismatch, "axpy: vectors live on different spaces");
    if (x.is_sum()) {
        std::vector<SeqVector> blocks;
        blocks.reserve(x.blocks().size());
        for (std::size_t i = 0; i < x.blocks().size(); ++i)
            blocks.push_back(axpy(a, x.blocks()[i], b, y.blocks()[i]));
        return SeqVector::sum_of(x.space(), std::move(blocks));
    }
    IndexWindow w = IndexWindow::hull(x.window(), y.window());
    std::vector<Complex> coords(static_cast<std::size_t>(w.size()));
    for (long long j = w.lo; j <= w.hi; ++j)
        coords[static_cast<std::size_t>(j - w.lo)] = a * x.at(j) + b * y.at(j);
    return SeqVector::from_coords(x.space(), w, std::move(coords));
}

inline SeqVector add(const SeqVector& x, const SeqVector& y) { return axpy({1, 0}, x, {1, 0}, y); }
inline SeqVector subtract(const SeqVector& x, const SeqVector& y) { return axpy({1, 0}, x, {-1, 0}, y); }

inline SeqVector scaled(const SeqVector& x, Complex a) {
    if (x.is_sum()) {
        std::vector<SeqVector> blocks;
        blocks.reserve(x.blocks().size());
        for (const auto& b : x.blocks()) blocks.push_back(scaled(b, a));
        return SeqVector::sum_of(x.space(), std::move(blocks));
    }
    std::vector<Complex> coords = x.coords();
    for (auto& z : coords) z *= a;
    return SeqVector::from_coords(x.space(), x.window(), std::move(coords));
}

inline double distance(const SeqVector& x, const SeqVector& y) { return subtract(x, y).norm(); }

// Hilbert-space pairing <x, y> = sum x_j * conj(y_j); rejected on sup-norm spaces.
inline Complex inner(const SeqVector& x, const SeqVector& y) {
    if (!(x.space() == y.space())) fail(Errc::SpaceMismatch, "inner: vectors live on different spaces");
    if (norm_kind(x.space()) == NormKind::Sup)
        fail(Errc::NoAdjointForSupNorm, "inner: no inner product on sup-norm spaces");
    if (x.is_sum()) {
        Complex s{0, 0};
        for (std::size_t i = 0; i < x.blocks().size(); ++i) s += inner(x.blocks()[i], y.blocks()[i]);
        return s;
    }
    IndexWindow w = IndexWindow::hull(x.window(), y.window());
    Complex s{0, 0};
    for (long long j = w.lo; j <= w.hi; ++j) s += x.at(j) * std::conj(y.at(j));
    return s;
}

// Restriction to a window (leaf vectors); entries outside are dropped.
inline SeqVector restrict_to(const SeqVector& x, IndexWindow w) {
    if (x.is_sum()) fail(Errc::InvalidArgument, "restrict_to: leaf vectors only");
    std::vector<Complex> coords(static_cast<std::size_t>(w.size()));
    for (long long j = w.lo; j <= w.hi; ++j) coords[static_cast<std::size_t>(j - w.lo)] = x.at(j);
    return SeqVector::from_coords(x.space(), w, std::move(coords));
}

}  // namespace jclass
