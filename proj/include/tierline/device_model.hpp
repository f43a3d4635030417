#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "tierline/errors.hpp"
#include "tierline/units.hpp"

namespace tierline {

/// Physical timing, geometry and capacity of one NAND die.
struct NandChipSpec {
    double tau_sense_s = 0.0;     ///< array sense time per page read
    double tau_prog_s = 0.0;      ///< program time per page
    uint64_t page_size_b = 0;     ///< physical page size
    uint32_t n_plane = 0;         ///< independently readable planes per die
    uint64_t die_capacity_b = 0;  ///< user capacity of one die
    std::string label;

    void validate() const;
};

/// NAND channel characteristics shared by all dies on the channel.
struct ChannelSpec {
    double tau_cmd_s = 0.0;       ///< command/address burst time (SCA)
    double bandwidth_bps = 0.0;   ///< data bandwidth

    void validate() const;
};

enum class IopsMode {
    scalable,   // Storage-Next: IOPS keeps rising below 4KB
    flat_at_4k, // conventional SSD: sub-4KB requests served at the 4KB rate
};

/// Full SSD description: one chip type replicated over a channel/die grid,
/// plus controller and FTL-DRAM cost inputs (normalized to one NAND die).
struct SsdConfig {
    NandChipSpec chip;
    ChannelSpec channel;
    uint32_t n_channels = 1;
    uint32_t dies_per_channel = 1;
    uint32_t ftl_entry_bytes = 4;
    uint64_t internal_dram_die_b = 0;
    double cost_ctrl = 0.0;
    double cost_nand_die = 1.0;
    double cost_internal_dram_die = 0.0;
    IopsMode iops_mode = IopsMode::scalable;

    void validate() const;
};

/// Host-visible access mix. read_write_ratio is reads per write
/// (90:10 -> 9); INFINITY denotes a read-only workload.
struct WorkloadMix {
    double read_write_ratio = INFINITY; // Γ_RW
    double write_amp = 1.0;             // Φ_AW, >= 1
    uint64_t block_size_b = 512;        // l_blk

    void validate() const;
};

struct ReadWriteFractions {
    double read = 1.0;
    double write = 0.0;
};

/// Fraction of NAND-level operations that are reads/writes once GC
/// amplification is folded in. Sums to one.
ReadWriteFractions nand_read_write_fractions(const WorkloadMix& mix);

/// Peak IOPS one die sustains at the given mix and block size.
double nand_die_peak_iops(const NandChipSpec& chip, const WorkloadMix& mix);

/// Peak IOPS one channel sustains when command and data bursts serialize.
double channel_peak_iops(const NandChipSpec& chip, const ChannelSpec& channel,
                         const WorkloadMix& mix);

/// Host-visible peak IOPS of the whole SSD (device/channel minimum, scaled
/// by the host-op share of NAND traffic). flat_at_4k evaluates sub-4KB
/// block sizes at 4KB.
double ssd_peak_iops(const SsdConfig& ssd, const WorkloadMix& mix);

struct SsdCostBreakdown {
    double controller = 0.0;
    double nand = 0.0;
    double internal_dram = 0.0;
    double total = 0.0;
    double ftl_bytes = 0.0;        // C_FTL
    uint64_t internal_dram_dies = 0;
};

/// Normalized SSD cost: controller + NAND dies + FTL DRAM dies.
SsdCostBreakdown ssd_cost(const SsdConfig& ssd);

/// Built-in device presets "slc", "pslc", "tlc" (Storage-Next channel/grid).
SsdConfig ssd_preset(const std::string& name);

/// Parse "90:10" / "9" / "inf" into a read:write ratio.
double parse_rw_ratio(const std::string& text);

} // namespace tierline
