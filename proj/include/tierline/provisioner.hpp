#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tierline/access_profile.hpp"
#include "tierline/feasibility.hpp"
#include "tierline/platform_econ.hpp"

namespace tierline {

enum class Verdict { viable, dram_bw_limited, ssd_limited, jointly_limited };

struct BandwidthUse {
    double cached_bps = 0.0;    // Ψ_c(T)
    double miss_path_bps = 0.0; // 2 Ψ_d(T)
    double total_bps = 0.0;     // Ψ_c + 2 Ψ_d
};

struct ProvisionInputs {
    HostPlatform platform;
    SsdConfig ssd;
    WorkloadMix mix;
    LatencyTargets targets;          // read latency goals (may be empty)
    double host_budget_iops = INFINITY;
    uint32_t n_ssd = 1;
    double dram_bandwidth_bps = 0.0; // system-level host DRAM bandwidth
    std::optional<double> dram_capacity_b;
    /// Scales usable SSD IOPS and host DRAM/host budget bandwidth terms for
    /// desk-scale replays of large workloads; break-even economics stay at
    /// device scale.
    double resource_scale = 1.0;
};

struct ProvisionReport {
    double t_b_s = 0.0;
    double t_s_s = 0.0;
    std::optional<double> t_c_s;
    double t_v_s = 0.0; // max(T_B, T_S)
    double t_o_s = 0.0; // max(tau_break_even, T_v)
    double break_even_s = 0.0;
    double usable_iops_per_ssd = 0.0;
    double rho_max = 1.0;
    IopsLimiter iops_limiter = IopsLimiter::device_peak;
    double min_dram_viable_b = 0.0;  // C_DRAM^(V)
    double min_dram_optimal_b = 0.0; // C_DRAM^(O)
    BandwidthUse bw_at_viable;
    BandwidthUse bw_at_optimal;
    std::optional<BandwidthUse> bw_at_capacity; // at T_C when capacity given
    Verdict verdict = Verdict::viable;
    std::vector<std::string> advice;
};

/// Full workload-aware viability analysis: thresholds, verdict, minimum
/// viable/economics-optimal DRAM capacities and upgrade advice.
ProvisionReport provision(const AccessProfile& profile, const ProvisionInputs& in);

const char* to_string(Verdict verdict);

/// Human-readable multi-line summary of a report.
std::string describe(const ProvisionReport& report, const AccessProfile& profile);

} // namespace tierline
