#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace jclass {

using Complex = std::complex<double>;

// Error codes shared across the library. Every throwing path uses Error so
// the CLI can map failures onto structured reports and exit codes.
enum class Errc {
    NonPositiveWeight,
    UnboundedWeights,
    MixedNormSum,
    EmptyPolynomial,
    SpaceMismatch,
    WindowOverflow,
    NoAdjointForSupNorm,
    NotInvertible,
    NumericalBreakdown,
    NotAShift,
    NotFiniteDim,
    BadModulus,
    NotExpanding,
    NotCertifiable,
    ZeroScale,
    DiagonalFailure,
    InsufficientPairs,
    IndexMismatch,
    PreconditionUnmet,
    DegenerateSeed,
    UnknownCase,
    InvalidArgument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonPositiveWeight: return "NonPositiveWeight";
        case Errc::UnboundedWeights: return "UnboundedWeights";
        case Errc::MixedNormSum: return "MixedNormSum";
        case Errc::EmptyPolynomial: return "EmptyPolynomial";
        case Errc::SpaceMismatch: return "SpaceMismatch";
        case Errc::WindowOverflow: return "WindowOverflow";
        case Errc::NoAdjointForSupNorm: return "NoAdjointForSupNorm";
        case Errc::NotInvertible: return "NotInvertible";
        case Errc::NumericalBreakdown: return "NumericalBreakdown";
        case Errc::NotAShift: return "NotAShift";
        case Errc::NotFiniteDim: return "NotFiniteDim";
        case Errc::BadModulus: return "BadModulus";
        case Errc::NotExpanding: return "NotExpanding";
        case Errc::NotCertifiable: return "NotCertifiable";
        case Errc::ZeroScale: return "ZeroScale";
        case Errc::DiagonalFailure: return "DiagonalFailure";
        case Errc::InsufficientPairs: return "InsufficientPairs";
        case Errc::IndexMismatch: return "IndexMismatch";
        case Errc::PreconditionUnmet: return "PreconditionUnmet";
        case Errc::DegenerateSeed: return "DegenerateSeed";
        case Errc::UnknownCase: return "UnknownCase";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Inclusive index window [lo, hi]. Vectors are finitely supported; the window
// is the stored slice, coordinates outside it are implicitly zero.
struct IndexWindow {
    long long lo = 1;
    long long hi = 1;

    long long size() const { return hi - lo + 1; }
    bool contains(long long j) const { return j >= lo && j <= hi; }
    bool valid() const { return lo <= hi; }

    static IndexWindow hull(IndexWindow a, IndexWindow b) {
        return {a.lo < b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi};
    }

    friend bool operator==(const IndexWindow& a, const IndexWindow& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

// Global cap on any materialized window or truncation (JCLASS_MAX_DIM
// overrides the 4096 default; RunConfig can lower it per call site).
inline long long default_max_dimension() {
    static const long long cached = [] {
        if (const char* env = std::getenv("JCLASS_MAX_DIM")) {
            long long v = std::atoll(env);
            if (v > 0) return v;
        }
        return 4096LL;
    }();
    return cached;
}

inline void check_window_budget(IndexWindow w, long long max_dim, const char* who) {
    if (!w.valid()) fail(Errc::InvalidArgument, std::string(who) + ": empty window");
    if (w.size() > max_dim)
        fail(Errc::WindowOverflow, std::string(who) + ": window size " + std::to_string(w.size()) +
                                       " exceeds max dimension " + std::to_string(max_dim));
}

}  // namespace jclass
