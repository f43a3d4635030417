#pragma once

#include <string>

#include "tierline/device_model.hpp"

namespace tierline {

/// Normalized cost and capability of a processor + DRAM pairing.
/// DRAM bandwidth/capacity are per die; costs are in NAND-die units.
struct HostPlatform {
    double cost_core = 0.0;            // α_CORE
    double iops_per_core = 0.0;        // IOPS_CORE
    double cost_dram_die = 0.0;        // α_H_DRAM
    double dram_die_bandwidth_bps = 0.0; // B_H_DRAM
    double dram_die_capacity_b = 0.0;    // C_H_DRAM
    std::string label;

    void validate() const;
};

/// Break-even interval decomposed into the three per-access cost sources.
struct BreakEvenResult {
    double processor_term_s = 0.0;
    double dram_term_s = 0.0;
    double ssd_term_s = 0.0;
    double total_s = 0.0;
};

/// Per-access saved cost of serving one block from SSD instead of DRAM:
/// host-processor share + host-DRAM transfer share + SSD share.
double saving_rate(const HostPlatform& platform, double ssd_cost_normalized,
                   double usable_iops, uint64_t block_size_b);

/// DRAM rent for keeping one block resident.
double dram_rent(const HostPlatform& platform, uint64_t block_size_b);

/// Calibrated break-even interval: the access interval at which DRAM rent
/// equals the per-access saving. usable_iops is an explicit input so the
/// same computation serves unconstrained and feasibility-capped studies.
BreakEvenResult break_even(const HostPlatform& platform, const SsdConfig& ssd,
                           const WorkloadMix& mix, double usable_iops);

/// As above with a precomputed SSD cost (avoids re-deriving it in sweeps).
BreakEvenResult break_even_with_cost(const HostPlatform& platform,
                                     double ssd_cost_normalized,
                                     uint64_t block_size_b, double usable_iops);

/// The 1987 rule, kept as a reference output for comparison reports.
double classical_break_even(double pages_per_mb, double drive_iops,
                            double drive_cost, double dram_mb_cost);

/// Built-in platform presets "cpu-ddr" and "gpu-gddr".
HostPlatform platform_preset(const std::string& name);

} // namespace tierline
