#include "tierline/platform_econ.hpp"

namespace tierline {

void HostPlatform::validate() const {
    if (cost_core <= 0.0 || iops_per_core <= 0.0 || cost_dram_die <= 0.0 ||
        dram_die_bandwidth_bps <= 0.0 || dram_die_capacity_b <= 0.0)
        throw ConfigError("platform fields must all be > 0");
}

double saving_rate(const HostPlatform& platform, double ssd_cost_normalized,
                   double usable_iops, uint64_t block_size_b) {
    platform.validate();
    if (usable_iops <= 0.0) throw ConfigError("usable_iops must be > 0");
    const double blk = static_cast<double>(block_size_b);
    return platform.cost_core / platform.iops_per_core +
           blk * platform.cost_dram_die / platform.dram_die_bandwidth_bps +
           ssd_cost_normalized / usable_iops;
}

double dram_rent(const HostPlatform& platform, uint64_t block_size_b) {
    platform.validate();
    const double blk = static_cast<double>(block_size_b);
    if (blk > platform.dram_die_capacity_b)
        throw ConfigError("block_size exceeds one DRAM die capacity");
    return blk / platform.dram_die_capacity_b * platform.cost_dram_die;
}

BreakEvenResult break_even_with_cost(const HostPlatform& platform,
                                     double ssd_cost_normalized,
                                     uint64_t block_size_b, double usable_iops) {
    platform.validate();
    if (usable_iops <= 0.0) throw ConfigError("usable_iops must be > 0");
    const double blk = static_cast<double>(block_size_b);
    // Each saving term divided by the rent rate per second of residency.
    const double per_rent =
        platform.dram_die_capacity_b / (blk * platform.cost_dram_die);
    BreakEvenResult out;
    out.processor_term_s = platform.cost_core / platform.iops_per_core * per_rent;
    out.dram_term_s =
        blk * platform.cost_dram_die / platform.dram_die_bandwidth_bps * per_rent;
    out.ssd_term_s = ssd_cost_normalized / usable_iops * per_rent;
    out.total_s = out.processor_term_s + out.dram_term_s + out.ssd_term_s;
    return out;
}

BreakEvenResult break_even(const HostPlatform& platform, const SsdConfig& ssd,
                           const WorkloadMix& mix, double usable_iops) {
    return break_even_with_cost(platform, ssd_cost(ssd).total, mix.block_size_b,
                                usable_iops);
}

double classical_break_even(double pages_per_mb, double drive_iops,
                            double drive_cost, double dram_mb_cost) {
    if (pages_per_mb <= 0.0 || drive_iops <= 0.0 || dram_mb_cost <= 0.0)
        throw ConfigError("classical rule inputs must be > 0");
    if (drive_cost < 0.0) throw ConfigError("drive_cost must be >= 0");
    return pages_per_mb / drive_iops * (drive_cost / dram_mb_cost);
}

HostPlatform platform_preset(const std::string& name) {
    if (name == "cpu-ddr")
        return {4.0, 1e6, 1.0, 3.0 * kGB, 3.0 * kGB, "CPU+DDR"};
    if (name == "gpu-gddr")
        return {3.0, 4e6, 2.0, 80.0 * kGB, 2.0 * kGB, "GPU+GDDR"};
    throw ConfigError("unknown platform preset '" + name +
                      "' (expected cpu-ddr, gpu-gddr)");
}

} // namespace tierline
