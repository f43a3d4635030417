#include "tierline/case_studies.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tierline/access_profile.hpp"
#include "tierline/rng.hpp"

namespace tierline {

double cuckoo_expected_displacements(double alpha, uint32_t bucket_entries) {
    if (bucket_entries < 1) throw ConfigError("bucket_entries must be >= 1");
    if (alpha <= 0.0) return 0.0;
    if (alpha >= 1.0) throw ConfigError("load factor must lie in (0,1)");
    const double b = static_cast<double>(bucket_entries);
    return std::pow(alpha, 2.0 * b) / (1.0 - std::pow(alpha, b));
}

double cuckoo_critical_load(uint32_t bucket_entries) {
    switch (bucket_entries) {
        case 0: throw ConfigError("bucket_entries must be >= 1");
        case 1: return 0.5;
        case 2: return 0.897;
        case 3: return 0.959;
        default: return 0.98; // exceeds 0.95 for any B >= 4
    }
}

namespace {

constexpr uint32_t kModelItems = 1u << 20;
constexpr uint32_t kModelBuckets = 1u << 16;

struct OperatingPoint {
    double x_host;
    double x_ssd;
    double x_dram;
};

CaseResult pick_bottleneck(const OperatingPoint& pt) {
    CaseResult out;
    out.throughput = std::min({pt.x_host, pt.x_ssd, pt.x_dram});
    if (out.throughput <= 0.0) throw ConfigError("operating point collapsed to zero");
    if (pt.x_ssd <= pt.x_host && pt.x_ssd <= pt.x_dram)
        out.bottleneck = Bottleneck::ssd_iops;
    else if (pt.x_host <= pt.x_dram)
        out.bottleneck = Bottleneck::host_iops;
    else
        out.bottleneck = Bottleneck::dram_bandwidth;
    out.component_demands["host_iops"] = out.throughput / pt.x_host;
    out.component_demands["ssd_iops"] = out.throughput / pt.x_ssd;
    out.component_demands["dram_bandwidth"] = out.throughput / pt.x_dram;
    return out;
}

} // namespace

double lognormal_hit_fraction(double item_fraction, double sigma, uint64_t seed) {
    if (item_fraction <= 0.0) return 0.0;
    if (item_fraction >= 1.0) return 1.0;
    // Interval scale is irrelevant for the hit curve; any throughput works.
    const auto profile = lognormal_profile(kModelItems, sigma, 1.0, 512, seed, 16384);
    const auto target = static_cast<uint64_t>(item_fraction * kModelItems);
    if (target == 0) return 0.0;
    uint64_t seen = 0;
    for (const auto& bin : profile.bins()) {
        seen += bin.count;
        if (seen >= target)
            return profile.cached_rate(bin.interval_s) / profile.total_rate();
    }
    return 1.0;
}

namespace {

/// Expected fraction of WAL-window updates that touch distinct buckets,
/// i.e. the residual read-modify-write rate after consolidation. Bucket
/// popularity is modeled as the sum of `per_bucket` lognormal item rates.
double consolidation_factor(double window_updates, double n_buckets,
                            uint32_t per_bucket, double sigma, uint64_t seed) {
    if (window_updates <= 1.0 || n_buckets <= 0.0) return 1.0;
    Rng rng(seed);
    std::vector<double> rate(kModelBuckets);
    double total = 0.0;
    for (auto& r : rate) {
        double sum = 0.0;
        for (uint32_t j = 0; j < per_bucket; ++j)
            sum += std::exp(sigma * rng.next_normal());
        r = sum;
        total += sum;
    }
    double distinct = 0.0;
    const double buckets_per_sample = n_buckets / kModelBuckets;
    for (const auto& r : rate) {
        const double q = r / total / buckets_per_sample; // per real bucket
        distinct += buckets_per_sample * (1.0 - std::exp(-window_updates * q));
    }
    return std::min(1.0, distinct / window_updates);
}

} // namespace

CaseResult kv_throughput(const KvConfig& cfg) {
    cfg.platform.validate();
    cfg.ssd.validate();
    if (cfg.n_items == 0 || cfg.item_size_b == 0) throw ConfigError("empty KV store");
    if (cfg.bucket_block_b % 512 != 0 || cfg.bucket_block_b < cfg.item_size_b)
        throw ConfigError("bucket_block must be a 512-multiple holding >= 1 item");
    if (cfg.ssd_util_cap <= 0.0 || cfg.ssd_util_cap > 1.0)
        throw ConfigError("ssd_util_cap must lie in (0,1]");
    if (cfg.host_budget_iops <= 0.0 || cfg.dram_bandwidth_bps <= 0.0)
        throw ConfigError("host budget and DRAM bandwidth must be > 0");
    if (cfg.n_ssd < 1) throw ConfigError("n_ssd must be >= 1");

    const uint32_t bucket_entries =
        static_cast<uint32_t>(cfg.bucket_block_b / cfg.item_size_b);
    if (cfg.load_factor >= cuckoo_critical_load(bucket_entries))
        throw ConfigError("load factor exceeds the cuckoo critical threshold for B=" +
                          std::to_string(bucket_entries));

    const double displacements =
        cuckoo_expected_displacements(cfg.load_factor, bucket_entries);

    const double item_fraction =
        cfg.dram_capacity_b /
        (static_cast<double>(cfg.item_size_b) * static_cast<double>(cfg.n_items));
    const double h = lognormal_hit_fraction(item_fraction, cfg.locality_sigma, cfg.seed);

    const double get_frac = std::isinf(cfg.get_put_ratio)
                                ? 1.0
                                : cfg.get_put_ratio / (cfg.get_put_ratio + 1.0);
    const double put_frac = 1.0 - get_frac;

    const double n_buckets = static_cast<double>(cfg.n_items) /
                             (cfg.load_factor * bucket_entries);
    const double window_updates =
        cfg.wal_window_bytes / static_cast<double>(cfg.item_size_b);
    const double consolidation =
        put_frac > 0.0 ? consolidation_factor(window_updates, n_buckets, bucket_entries,
                                              cfg.locality_sigma, cfg.seed + 1)
                       : 1.0;

    const double blk = static_cast<double>(cfg.bucket_block_b);
    const double item = static_cast<double>(cfg.item_size_b);
    const double insert_rmw = cfg.insert_fraction_of_puts * displacements;

    // Per-op expected demands. GET miss: one or two bucket reads (1.5 avg);
    // PUT: amortized WAL append plus one consolidated bucket read-modify-write,
    // with displacement chains adding RMWs on inserts.
    const double ssd_reads =
        get_frac * (1.0 - h) * 1.5 + put_frac * (consolidation + insert_rmw);
    const double ssd_writes =
        put_frac * (item / blk + consolidation + insert_rmw);
    const double host_ios = ssd_reads + ssd_writes;

    const double dram_bytes =
        get_frac * (h * item + (1.0 - h) * 1.5 * 2.0 * blk) +
        put_frac * (2.0 * item + (consolidation + insert_rmw) * 4.0 * blk);

    WorkloadMix device_mix;
    device_mix.read_write_ratio =
        ssd_writes > 0.0 ? ssd_reads / ssd_writes : INFINITY;
    device_mix.write_amp = cfg.device_write_amp;
    device_mix.block_size_b = cfg.bucket_block_b;
    const double peak = ssd_peak_iops(cfg.ssd, device_mix);

    OperatingPoint pt{};
    pt.x_host = cfg.host_budget_iops / host_ios;
    pt.x_ssd = cfg.ssd_util_cap * peak * cfg.n_ssd / host_ios;
    pt.x_dram = cfg.dram_bandwidth_bps / dram_bytes;
    return pick_bottleneck(pt);
}

CaseResult ann_throughput(const AnnConfig& cfg) {
    cfg.platform.validate();
    cfg.ssd.validate();
    if (cfg.promotion_fraction < 0.0 || cfg.promotion_fraction > 1.0)
        throw ConfigError("promotion_fraction must lie in [0,1]");
    if (cfg.full_size_b < cfg.reduced_size_b)
        throw ConfigError("full_size must be >= reduced_size");
    if (cfg.reduced_size_b % 512 != 0 || cfg.full_size_b % 512 != 0)
        throw ConfigError("vector sizes must be multiples of 512");
    if (cfg.reduced_reads_per_query <= 0.0) throw ConfigError("V_r must be > 0");
    if (cfg.ssd_util_cap <= 0.0 || cfg.ssd_util_cap > 1.0)
        throw ConfigError("ssd_util_cap must lie in (0,1]");
    if (cfg.host_budget_iops <= 0.0 || cfg.dram_bandwidth_bps <= 0.0)
        throw ConfigError("host budget and DRAM bandwidth must be > 0");
    if (cfg.n_ssd < 1) throw ConfigError("n_ssd must be >= 1");

    const double item_fraction =
        cfg.dram_capacity_b / (static_cast<double>(cfg.reduced_size_b) *
                               static_cast<double>(cfg.n_vectors));
    const double h = lognormal_hit_fraction(item_fraction, cfg.node_sigma, cfg.seed);

    const double vr = cfg.reduced_reads_per_query;
    const double f = cfg.promotion_fraction;
    const double reduced = static_cast<double>(cfg.reduced_size_b);
    const double full = static_cast<double>(cfg.full_size_b);

    WorkloadMix reduced_mix{INFINITY, 1.0, cfg.reduced_size_b};
    WorkloadMix full_mix{INFINITY, 1.0, cfg.full_size_b};
    const double peak_reduced = ssd_peak_iops(cfg.ssd, reduced_mix);
    const double peak_full = ssd_peak_iops(cfg.ssd, full_mix);

    const double miss_reads = (1.0 - h) * vr;
    const double promoted_reads = f * vr;
    const double host_ios = miss_reads + promoted_reads;

    // Fractional device-time use per query; full-vector fetches are contiguous
    // multi-block reads served at that size's own IOPS rate.
    const double ssd_time = miss_reads / peak_reduced + promoted_reads / peak_full;

    // Cached probes read DRAM once; misses cross twice (DMA + compute read);
    // promoted vectors additionally feed the re-rank pass.
    const double dram_bytes = h * vr * reduced + miss_reads * 2.0 * reduced +
                              promoted_reads * (2.0 + cfg.rerank_dram_passes) * full;

    OperatingPoint pt{};
    pt.x_host = cfg.host_budget_iops / host_ios;
    pt.x_ssd = cfg.ssd_util_cap * cfg.n_ssd / ssd_time;
    pt.x_dram = cfg.dram_bandwidth_bps / dram_bytes;
    return pick_bottleneck(pt);
}

const char* to_string(Bottleneck bottleneck) {
    switch (bottleneck) {
        case Bottleneck::host_iops: return "host_iops";
        case Bottleneck::ssd_iops: return "ssd_iops";
        case Bottleneck::dram_bandwidth: return "dram_bandwidth";
    }
    return "?";
}

} // namespace tierline
