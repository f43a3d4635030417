#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tierline/errors.hpp"

namespace tierline {

/// Per-block access-interval distribution of a working set, held as a
/// quantized histogram of (interval, block-count) bins sorted by interval.
/// Bin intervals are per-bin harmonic means, so the aggregate access rate
/// sum(1/tau_i) is preserved exactly through quantization.
class AccessProfile {
  public:
    struct Bin {
        double interval_s = 0.0; // representative tau for the bin
        uint64_t count = 0;      // blocks in the bin
    };

    AccessProfile() = default;
    AccessProfile(uint64_t block_size_b, std::vector<Bin> bins);

    uint64_t block_size_b() const { return block_size_b_; }
    uint64_t n_blocks() const { return n_blocks_; }
    const std::vector<Bin>& bins() const { return bins_; }

    double total_rate() const { return total_rate_; }          // sum 1/tau_i
    double total_throughput_bps() const;                       // l_blk * total rate
    double max_interval_s() const;
    double total_bytes() const;

    /// Blocks with interval <= threshold (whole bins; lowest-bin tie-break).
    uint64_t cached_blocks(double threshold_s) const;
    /// Aggregate access rate of the cached set.
    double cached_rate(double threshold_s) const;

  private:
    uint64_t block_size_b_ = 512;
    uint64_t n_blocks_ = 0;
    double total_rate_ = 0.0;
    std::vector<Bin> bins_;
    std::vector<uint64_t> cum_count_;
    std::vector<double> cum_rate_;
};

struct PsiSplit {
    double cached_bps = 0.0;   // Ψ_c
    double uncached_bps = 0.0; // Ψ_d
};

/// Lognormal(mu, sigma) access intervals over n_blocks blocks, with mu
/// chosen in closed form (and an exact final rescale) so that
/// l_blk * sum(1/tau_i) equals total_throughput. Deterministic per seed.
AccessProfile lognormal_profile(uint64_t n_blocks, double sigma,
                                double total_throughput_bps,
                                uint64_t block_size_b, uint64_t seed,
                                uint32_t max_bins = 65536);

/// Cached/uncached byte throughput at a caching threshold.
PsiSplit psi_split(const AccessProfile& profile, double threshold_s);

/// Host-DRAM bandwidth demand Ψ_c + 2Ψ_d (miss path crosses DRAM twice).
double dram_bw_demand(const AccessProfile& profile, double threshold_s);

/// Smallest threshold whose DRAM traffic fits the available bandwidth.
/// Throws InfeasibleError when even full caching cannot (bandwidth < total).
double threshold_t_b(const AccessProfile& profile, double dram_bandwidth_bps);

/// Smallest threshold confining uncached traffic to the aggregate usable
/// SSD bandwidth l_blk * n_ssd * usable_iops.
double threshold_t_s(const AccessProfile& profile, double usable_iops_per_ssd,
                     uint32_t n_ssd);

/// Largest threshold whose cached set fits the DRAM capacity: the K-th
/// smallest interval with K = floor(capacity / l_blk).
double threshold_t_c(const AccessProfile& profile, double dram_capacity_b);

/// CSV with header "interval_s,block_count".
void write_profile_csv(const AccessProfile& profile, std::ostream& os);
AccessProfile read_profile_csv(std::istream& is, uint64_t block_size_b);

} // namespace tierline
