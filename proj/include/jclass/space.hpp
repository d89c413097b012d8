#pragma once

#include <string>
#include <vector>

#include "jclass/common.hpp"

namespace jclass {

enum class SpaceKind { UnilateralL2, BilateralL2, UnilateralLinf, FiniteDim, DirectSum };

enum class NormKind {
    L2,
    Sup,
    Neutral,  // one-dimensional blocks, where the two norms coincide
};

// Tag describing which sequence space an operator or vector lives on. Direct
// sums carry their component tags; mixed-norm sums are rejected except for
// one-dimensional blocks.
struct SpaceTag {
    SpaceKind kind = SpaceKind::UnilateralL2;
    long long dim = 0;             // FiniteDim only
    std::vector<SpaceTag> parts;   // DirectSum only

    bool is_sum() const { return kind == SpaceKind::DirectSum; }
    bool is_bilateral() const { return kind == SpaceKind::BilateralL2; }
    bool is_finite_dim() const { return kind == SpaceKind::FiniteDim; }

    friend bool operator==(const SpaceTag& a, const SpaceTag& b) {
        if (a.kind != b.kind || a.dim != b.dim || a.parts.size() != b.parts.size()) return false;
        for (std::size_t i = 0; i < a.parts.size(); ++i)
            if (!(a.parts[i] == b.parts[i])) return false;
        return true;
    }
};

inline NormKind norm_kind(const SpaceTag& s);

namespace detail {
inline NormKind combine_norm_kinds(const std::vector<SpaceTag>& parts) {
    NormKind combined = NormKind::Neutral;
    for (const auto& p : parts) {
        NormKind k = norm_kind(p);
        if (k == NormKind::Neutral) continue;
        if (combined == NormKind::Neutral)
            combined = k;
        else if (combined != k)
            fail(Errc::MixedNormSum, "direct sum mixes l2 and sup norms");
    }
    return combined == NormKind::Neutral ? NormKind::L2 : combined;
}
}  // namespace detail

inline NormKind norm_kind(const SpaceTag& s) {
    switch (s.kind) {
        case SpaceKind::UnilateralL2:
        case SpaceKind::BilateralL2: return NormKind::L2;
        case SpaceKind::UnilateralLinf: return NormKind::Sup;
        case SpaceKind::FiniteDim: return s.dim == 1 ? NormKind::Neutral : NormKind::L2;
        case SpaceKind::DirectSum: return detail::combine_norm_kinds(s.parts);
    }
    return NormKind::L2;
}

inline SpaceTag unilateral_l2() { return {SpaceKind::UnilateralL2, 0, {}}; }
inline SpaceTag bilateral_l2() { return {SpaceKind::BilateralL2, 0, {}}; }
inline SpaceTag unilateral_linf() { return {SpaceKind::UnilateralLinf, 0, {}}; }

inline SpaceTag finite_dim(long long d) {
    if (d < 1) fail(Errc::InvalidArgument, "finite_dim: dimension must be positive");
    return {SpaceKind::FiniteDim, d, {}};
}

inline SpaceTag direct_sum_space(std::vector<SpaceTag> parts) {
    if (parts.size() < 2) fail(Errc::InvalidArgument, "direct sum needs at least two components");
    SpaceTag s{SpaceKind::DirectSum, 0, std::move(parts)};
    (void)norm_kind(s);  // validates mixed-norm rejection
    return s;
}

// Smallest legal index of a leaf space; bilateral spaces are unbounded below.
inline bool has_min_index(const SpaceTag& s) { return s.kind != SpaceKind::BilateralL2; }
inline long long min_index(const SpaceTag& s) { return 1; }

inline bool has_max_index(const SpaceTag& s) { return s.kind == SpaceKind::FiniteDim; }
inline long long max_index(const SpaceTag& s) { return s.dim; }

// Clamp a requested window onto the legal index range of a leaf space.
inline IndexWindow clamp_window(const SpaceTag& s, IndexWindow w) {
    if (s.is_sum()) fail(Errc::InvalidArgument, "clamp_window: leaf spaces only");
    if (has_min_index(s) && w.lo < min_index(s)) w.lo = min_index(s);
    if (has_max_index(s) && w.hi > max_index(s)) w.hi = max_index(s);
    if (!w.valid()) fail(Errc::InvalidArgument, "clamp_window: window does not meet the space");
    return w;
}

inline void validate_leaf_window(const SpaceTag& s, IndexWindow w, const char* who) {
    if (!w.valid()) fail(Errc::InvalidArgument, std::string(who) + ": lo > hi");
    if (has_min_index(s) && w.lo < min_index(s))
        fail(Errc::InvalidArgument, std::string(who) + ": window starts below the space's first index");
    if (s.kind == SpaceKind::FiniteDim && !(w.lo == 1 && w.hi == s.dim))
        fail(Errc::InvalidArgument, std::string(who) + ": finite-dimensional vectors use the full window [1,d]");
}

inline std::string space_name(const SpaceTag& s) {
    switch (s.kind) {
        case SpaceKind::UnilateralL2: return "l2";
        case SpaceKind::BilateralL2: return "bilateral_l2";
        case SpaceKind::UnilateralLinf: return "linf";
        case SpaceKind::FiniteDim: return "C^" + std::to_string(s.dim);
        case SpaceKind::DirectSum: {
            std::string out = "(";
            for (std::size_t i = 0; i < s.parts.size(); ++i) {
                if (i) out += " + ";
                out += space_name(s.parts[i]);
            }
            return out + ")";
        }
    }
    return "?";
}

inline void leaf_spaces(const SpaceTag& s, std::vector<const SpaceTag*>& out) {
    if (s.is_sum())
        for (const auto& p : s.parts) leaf_spaces(p, out);
    else
        out.push_back(&s);
}

}  // namespace jclass
