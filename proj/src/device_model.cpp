#include "tierline/device_model.hpp"

#include <algorithm>
#include <cmath>

namespace tierline {

namespace {

bool is_power_of_two(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

} // namespace

void NandChipSpec::validate() const {
    if (tau_sense_s <= 0.0) throw ConfigError("chip.tau_sense must be > 0");
    if (tau_prog_s <= 0.0) throw ConfigError("chip.tau_prog must be > 0");
    if (page_size_b < 512 || !is_power_of_two(page_size_b))
        throw ConfigError("chip.page_size must be a power of two >= 512");
    if (n_plane < 1) throw ConfigError("chip.n_plane must be >= 1");
    if (die_capacity_b == 0) throw ConfigError("chip.die_capacity must be > 0");
}

void ChannelSpec::validate() const {
    if (tau_cmd_s < 0.0) throw ConfigError("channel.tau_cmd must be >= 0");
    if (bandwidth_bps <= 0.0) throw ConfigError("channel.bandwidth must be > 0");
}

void SsdConfig::validate() const {
    chip.validate();
    channel.validate();
    if (n_channels < 1) throw ConfigError("ssd.n_channels must be >= 1");
    if (dies_per_channel < 1) throw ConfigError("ssd.dies_per_channel must be >= 1");
    if (ftl_entry_bytes < 4 || ftl_entry_bytes > 8)
        throw ConfigError("ssd.ftl_entry_bytes must be in [4, 8]");
    if (internal_dram_die_b == 0)
        throw ConfigError("ssd.internal_dram_die_capacity must be > 0");
    if (cost_ctrl < 0.0 || cost_nand_die < 0.0 || cost_internal_dram_die < 0.0)
        throw ConfigError("ssd costs must be >= 0");
}

void WorkloadMix::validate() const {
    if (std::isnan(read_write_ratio) || read_write_ratio < 0.0)
        throw ConfigError("mix.read_write_ratio must be >= 0 or infinite");
    if (write_amp < 1.0) throw ConfigError("mix.write_amp must be >= 1");
    if (block_size_b == 0 || block_size_b % 512 != 0)
        throw ConfigError("mix.block_size must be a positive multiple of 512 bytes");
}

ReadWriteFractions nand_read_write_fractions(const WorkloadMix& mix) {
    mix.validate();
    if (std::isinf(mix.read_write_ratio)) return {1.0, 0.0};
    const double gamma = mix.read_write_ratio;
    const double phi = mix.write_amp;
    const double denom = gamma + 2.0 * phi - 1.0;
    return {(gamma + phi - 1.0) / denom, phi / denom};
}

namespace {

double die_peak_at(const NandChipSpec& chip, const WorkloadMix& mix,
                   uint64_t block_b) {
    const auto frac = nand_read_write_fractions(mix);
    const double pages_per_block =
        std::ceil(static_cast<double>(block_b) / static_cast<double>(chip.page_size_b));
    const double read_rate = chip.n_plane / (chip.tau_sense_s * pages_per_block);
    const double write_rate = chip.n_plane * static_cast<double>(chip.page_size_b) /
                              (chip.tau_prog_s * static_cast<double>(block_b));
    return frac.read * read_rate + frac.write * write_rate;
}

double channel_peak_at(const NandChipSpec& chip, const ChannelSpec& channel,
                       const WorkloadMix& mix, uint64_t block_b) {
    const auto frac = nand_read_write_fractions(mix);
    const double blk = static_cast<double>(block_b);
    const double xfer = blk / channel.bandwidth_bps;
    const double read_rate = 1.0 / (channel.tau_cmd_s + xfer);
    // A program moves one full page; each page commits page/block host blocks,
    // so the per-block command share shrinks by the same factor.
    const double write_rate =
        1.0 / ((blk / static_cast<double>(chip.page_size_b)) * channel.tau_cmd_s + xfer);
    return frac.read * read_rate + frac.write * write_rate;
}

} // namespace

double nand_die_peak_iops(const NandChipSpec& chip, const WorkloadMix& mix) {
    chip.validate();
    mix.validate();
    if (mix.block_size_b > chip.page_size_b * static_cast<uint64_t>(chip.n_plane))
        throw ConfigError("block_size exceeds page_size * n_plane");
    return die_peak_at(chip, mix, mix.block_size_b);
}

double channel_peak_iops(const NandChipSpec& chip, const ChannelSpec& channel,
                         const WorkloadMix& mix) {
    chip.validate();
    channel.validate();
    mix.validate();
    return channel_peak_at(chip, channel, mix, mix.block_size_b);
}

double ssd_peak_iops(const SsdConfig& ssd, const WorkloadMix& mix) {
    ssd.validate();
    mix.validate();

    uint64_t eval_block = mix.block_size_b;
    if (ssd.iops_mode == IopsMode::flat_at_4k && eval_block < 4096) eval_block = 4096;
    if (eval_block > ssd.chip.page_size_b * static_cast<uint64_t>(ssd.chip.n_plane))
        throw ConfigError("block_size exceeds page_size * n_plane");

    double prefactor = 1.0;
    if (!std::isinf(mix.read_write_ratio)) {
        const double gamma = mix.read_write_ratio;
        prefactor = (gamma + 1.0) / (gamma + 2.0 * mix.write_amp - 1.0);
    }
    const double die = die_peak_at(ssd.chip, mix, eval_block);
    const double chan = channel_peak_at(ssd.chip, ssd.channel, mix, eval_block);
    return prefactor * ssd.n_channels *
           std::min(static_cast<double>(ssd.dies_per_channel) * die, chan);
}

SsdCostBreakdown ssd_cost(const SsdConfig& ssd) {
    ssd.validate();
    SsdCostBreakdown out;
    const double n_dies =
        static_cast<double>(ssd.n_channels) * static_cast<double>(ssd.dies_per_channel);
    out.ftl_bytes = n_dies * static_cast<double>(ssd.chip.die_capacity_b) *
                    static_cast<double>(ssd.ftl_entry_bytes) / kMinAccessGranularity;
    out.internal_dram_dies = static_cast<uint64_t>(
        std::ceil(out.ftl_bytes / static_cast<double>(ssd.internal_dram_die_b)));
    out.controller = ssd.cost_ctrl;
    out.nand = n_dies * ssd.cost_nand_die;
    out.internal_dram =
        static_cast<double>(out.internal_dram_dies) * ssd.cost_internal_dram_die;
    out.total = out.controller + out.nand + out.internal_dram;
    return out;
}

SsdConfig ssd_preset(const std::string& name) {
    SsdConfig ssd;
    ssd.channel.tau_cmd_s = 150e-9;
    ssd.channel.bandwidth_bps = 3.6 * kGB;
    ssd.n_channels = 20;
    ssd.dies_per_channel = 4;
    ssd.ftl_entry_bytes = 4;
    ssd.internal_dram_die_b = static_cast<uint64_t>(3.0 * kGB);
    ssd.cost_ctrl = 15.0;
    ssd.cost_nand_die = 1.0;
    ssd.cost_internal_dram_die = 1.0;
    ssd.iops_mode = IopsMode::scalable;

    if (name == "slc") {
        ssd.chip = {5e-6, 50e-6, 4096, 6, static_cast<uint64_t>(32.0 * kGiB), "SLC"};
    } else if (name == "pslc") {
        ssd.chip = {20e-6, 150e-6, 16384, 4, static_cast<uint64_t>(42.0 * kGiB), "pSLC"};
    } else if (name == "tlc") {
        ssd.chip = {40e-6, 1e-3, 16384, 4, static_cast<uint64_t>(128.0 * kGiB), "TLC"};
    } else {
        throw ConfigError("unknown SSD preset '" + name + "' (expected slc, pslc, tlc)");
    }
    return ssd;
}

double parse_rw_ratio(const std::string& text) {
    if (text == "inf" || text == "INF" || text == "read-only") return INFINITY;
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        try {
            return std::stod(text);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse read:write ratio '" + text + "'");
        }
    }
    double reads = 0.0, writes = 0.0;
    try {
        reads = std::stod(text.substr(0, colon));
        writes = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ConfigError("cannot parse read:write ratio '" + text + "'");
    }
    if (reads < 0.0 || writes < 0.0)
        throw ConfigError("read:write ratio parts must be >= 0");
    if (writes == 0.0) return INFINITY;
    return reads / writes;
}

} // namespace tierline
