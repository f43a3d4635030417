#pragma once

#include <optional>
#include <string>

#include "tierline/device_model.hpp"

namespace tierline {

/// Application-level read latency goals. Unset targets impose no bound.
struct LatencyTargets {
    std::optional<double> mean_target_s;
    double tail_percentile = 0.99;
    std::optional<double> tail_target_s;

    void validate() const;
};

enum class IopsLimiter { latency, host_budget, device_peak };

struct FeasibleIops {
    double rho_max = 1.0;
    double usable_iops_per_ssd = 0.0;
    IopsLimiter limiter = IopsLimiter::device_peak;
};

/// Mean read service latency of the SSD modeled as per-channel M/D/1 queues
/// at utilization rho, plus the NAND sense time.
double mean_latency(double peak_iops, uint32_t n_channels, double tau_sense_s,
                    double rho);

/// p-th percentile read latency under the heavy-traffic exponential
/// waiting-time approximation.
double tail_latency(double peak_iops, uint32_t n_channels, double tau_sense_s,
                    double p, double rho);

/// Largest utilization in (0,1) meeting every set target. Bisection to
/// absolute tolerance 1e-4; returns exactly 1.0 when no target is set.
/// Throws InfeasibleError naming the violated target when even the
/// zero-load latency exceeds it.
double solve_rho_max(double peak_iops, uint32_t n_channels, double tau_sense_s,
                     const LatencyTargets& targets);

/// Usable IOPS per SSD: latency-admissible share of the device peak, further
/// capped by the host's aggregate IOPS budget split across n_ssd drives.
FeasibleIops usable_ssd_iops(double rho_max, double peak_iops,
                             double host_budget_iops, uint32_t n_ssd);

/// Tail-latency tier presets "tier70".."tier99" keyed by block size
/// (512/1024/2048/4096), each tuned to admit the matching utilization on
/// the Storage-Next SLC device.
LatencyTargets latency_tier_preset(const std::string& name, uint64_t block_size_b);

const char* to_string(IopsLimiter limiter);

} // namespace tierline
