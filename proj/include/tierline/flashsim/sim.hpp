#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tierline/device_model.hpp"
#include "tierline/rng.hpp"

namespace tierline::flashsim {

enum class ArrivalModel { closed_loop, poisson };

struct GcConfig {
    double trigger_free_fraction = 0.05; // start GC below this free share
    double over_provisioning = 0.07;     // physical spare beyond the address space
};

struct EccConfig {
    double bch_fail_prob = 0.0;            // p_BCH per 512B sector
    double bch_decode_latency_s = 200e-9;  // per successful sector decode
    double ldpc_base_latency_s = 1e-6;     // escalation base
    double ldpc_per_iteration_latency_s = 250e-9;
    double mean_iterations = 4.0;
};

/// Discrete-event model of the SSD back end: SCA command bursts on a
/// dedicated command/address path, data transfers on the channel data path,
/// independent per-plane sensing, page-granular programs, greedy GC.
struct SimConfig {
    SsdConfig ssd;
    WorkloadMix mix;
    uint32_t queue_count = 64;
    uint32_t queue_depth = 16;
    ArrivalModel arrival = ArrivalModel::closed_loop;
    double poisson_rate_iops = 0.0;    // used when arrival == poisson
    uint64_t address_space_b = 2ull << 30;
    GcConfig gc;
    EccConfig ecc;
    double warmup_s = -1.0;            // < 0: default to 20% of duration
    double duration_s = 0.05;          // measurement window
    uint64_t seed = 42;
    uint32_t pages_per_block = 32;
    double host_link_bps = 121e9;      // aggregate host interface cap
    double aging_churn = 2.0;          // pre-aging overwrites, in address spans

    void validate() const;
};

struct SimResult {
    double achieved_iops = 0.0;
    double latency_mean_s = 0.0;
    double latency_p99_s = 0.0;
    double channel_utilization = 0.0; // data-path busy fraction
    double die_utilization = 0.0;     // plane occupancy fraction
    double measured_waf = 1.0;
    uint64_t ecc_escalations = 0;
    uint64_t ios_completed = 0;
    // secondary observables
    double ca_utilization = 0.0;
    uint64_t reads_completed = 0;
    uint64_t writes_completed = 0;
};

SimResult run_sim(const SimConfig& config);

struct EccOutcome {
    uint64_t extra_transfer_b = 0; // beyond the nominal sector payload
    double extra_latency_s = 0.0;  // decode latency added to the read
    uint32_t escalations = 0;      // outer codewords that needed LDPC
};

/// Concatenated BCH/LDPC read path for a request of contiguous 512B
/// sectors: failed inner codewords escalate to fetching and decoding the
/// full 4KB outer codeword.
EccOutcome ecc_read_path(uint32_t request_sectors, const EccConfig& ecc, Rng& rng);

struct ModelComparison {
    double model_peak_iops = 0.0;
    double sim_iops = 0.0;
    double ratio = 0.0; // sim / model
    SimResult sim;
};

/// Runs the analytic device model and the simulator on identical
/// parameters. The simulator overlaps command, sense and transfer phases
/// the closed-form model serializes, so ratios above 1 are expected.
ModelComparison validate_against_model(const SimConfig& config);

/// Per-1%-percentile latency table (index 1..100) of the last run window.
struct LatencyPercentiles {
    std::vector<double> percentile_s; // [0] unused, [p] = p-th percentile
};

SimResult run_sim_with_percentiles(const SimConfig& config,
                                   LatencyPercentiles* percentiles);

} // namespace tierline::flashsim
