#pragma once

#include <cstdint>

#include "crs/fading.hpp"
#include "crs/system.hpp"

namespace crs {

/// Number of fixed substreams; sample i always draws from stream i mod kStreams.
inline constexpr std::uint64_t kStreams = 256;

struct MCSettings {
    std::uint64_t n = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0: one per hardware thread

    /// Throws ConfigError for n < 10^4.
    void validate() const;
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(n)
    std::uint64_t n = 0;
};

struct SimulatedRates {
    MCEstimate c_s1;
    MCEstimate c_s2;
    MCEstimate c_oma;
};

/// Instantaneous-rate averages of s1, s2 and the OMA benchmark.
SimulatedRates simulate_rates(const SystemConfig& cfg, const LinkTriple& links,
                              const MCSettings& s);

struct SimulatedOutage {
    MCEstimate p1;
    MCEstimate p2;
    // Event counts of the disjoint decomposition of O2.
    std::uint64_t e1 = 0;
    std::uint64_t e2 = 0;
    std::uint64_t e3 = 0;
};

/// Outage frequencies by event counting. O2 is counted twice, as E1 + E2 + E3
/// and as {lambda_sr < Phi_max} or {lambda_rd < eta2 / rho}; a mismatch on
/// any draw throws std::logic_error.
SimulatedOutage simulate_outage(const SystemConfig& cfg, const LinkTriple& links,
                                const MCSettings& s);

struct OutageAudit {
    std::uint64_t n = 0;
    std::uint64_t o1_threshold = 0;
    std::uint64_t o1_rate = 0;
    std::uint64_t o2_threshold = 0;
    std::uint64_t o2_rate = 0;

    bool consistent() const { return o1_threshold == o1_rate && o2_threshold == o2_rate; }
};

/// Counts outage once from gain thresholds and once from per-draw rates
/// compared with the targets.
OutageAudit audit_outage_forms(const SystemConfig& cfg, const LinkTriple& links,
                               std::uint64_t n, std::uint64_t seed);

/// Monte-Carlo OMA rate 0.5 E[log2(1 + rho min(lambda_sr, lambda_sd + lambda_rd))].
MCEstimate avg_rate_oma(const SystemConfig& cfg, const LinkTriple& links, std::uint64_t n,
                        std::uint64_t seed);

}  // namespace crs
