#pragma once

#include <cstdint>
#include <vector>

#include "jclass/common.hpp"

namespace jclass {

// Run-wide knobs. Defaults are the ones used by the gallery and the
// acceptance suite; everything is overridable from a JSON config file.
struct RunConfig {
    long long max_dim = default_max_dimension();

    // reach engine
    int kmax = 40;
    std::vector<double> delta_schedule = {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
    double eps_accept = 1e-6;
    long long trunc_dim = 64;       // truncation span for l2 sequence blocks
    long long linf_trunc_dim = 32;  // truncation span for sup-norm blocks
    double sv_floor_rel = 1e-12;    // singular values below this (relative) are rank floor

    // shift criteria
    int salas_horizon = 512;
    double salas_m_big = 1e6;
    double salas_m_small = 1e-6;
    int q_lo = -8;
    int q_hi = 8;

    // c0 membership surrogate
    double tail_tol = 0.1;
    long long tail_start = 16;

    // numerical rank threshold (relative to sigma_max)
    double rank_rel_tol = 1e-10;

    std::uint64_t seed = 0x5a1a5u;
    int threads = 1;

    void validate() const {
        if (max_dim < 1) fail(Errc::InvalidArgument, "config: max_dim must be positive");
        if (kmax < 1) fail(Errc::InvalidArgument, "config: kmax must be positive");
        if (delta_schedule.empty()) fail(Errc::InvalidArgument, "config: empty delta schedule");
        double prev = 0;
        for (std::size_t i = 0; i < delta_schedule.size(); ++i) {
            double d = delta_schedule[i];
            if (d <= 0) fail(Errc::InvalidArgument, "config: delta schedule values must be positive");
            if (i > 0 && d >= prev)
                fail(Errc::InvalidArgument, "config: delta schedule must be strictly decreasing");
            prev = d;
        }
        if (eps_accept <= 0) fail(Errc::InvalidArgument, "config: eps_accept must be positive");
        if (salas_horizon < 1) fail(Errc::InvalidArgument, "config: salas horizon must be positive");
        if (!(salas_m_big > 1.0) || !(salas_m_small > 0.0) || !(salas_m_small < 1.0))
            fail(Errc::InvalidArgument, "config: need M0 > 1 > m0 > 0");
        if (q_lo > q_hi) fail(Errc::InvalidArgument, "config: q range is empty");
        if (trunc_dim < 2 || linf_trunc_dim < 2)
            fail(Errc::InvalidArgument, "config: truncation spans must be at least 2");
        if (threads < 1) fail(Errc::InvalidArgument, "config: threads must be positive");
    }
};

}  // namespace jclass
