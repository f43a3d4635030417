#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tierline/feasibility.hpp"
#include "tierline/platform_econ.hpp"

namespace tierline {

enum class Bottleneck { host_iops, ssd_iops, dram_bandwidth };

struct CaseResult {
    double throughput = 0.0; // ops/s or queries/s
    Bottleneck bottleneck = Bottleneck::ssd_iops;
    /// Resource utilizations at the reported operating point; the binding
    /// resource sits at 1.0.
    std::map<std::string, double> component_demands;
};

/// Expected displacement-chain length of a blocked cuckoo insert at load
/// factor alpha with bucket_entries slots per bucket.
double cuckoo_expected_displacements(double alpha, uint32_t bucket_entries);

/// Approximate critical load factor for two-choice blocked cuckoo hashing.
double cuckoo_critical_load(uint32_t bucket_entries);

/// SSD-resident blocked-Cuckoo KV store (hash buckets on flash, DRAM caches
/// hot pairs, write-ahead log consolidates same-bucket updates).
struct KvConfig {
    uint64_t n_items = 80'000'000'000ull;
    uint32_t item_size_b = 64;          // l_KV
    double load_factor = 0.7;           // alpha
    uint64_t bucket_block_b = 512;      // l_blk (512 Storage-Next, 4096 Normal)
    double dram_capacity_b = 0.0;
    double get_put_ratio = INFINITY;    // GETs per PUT; INFINITY = 100:0
    double insert_fraction_of_puts = 0.2;
    double locality_sigma = 1.2;        // lognormal item-popularity spread
    HostPlatform platform;
    SsdConfig ssd;
    uint32_t n_ssd = 4;
    double ssd_util_cap = 0.7;
    double host_budget_iops = 0.0;
    double dram_bandwidth_bps = 0.0;
    double wal_window_bytes = 64e6;     // updates consolidated per WAL flush
    double device_write_amp = 3.0;      // Φ_AW assumed for the device model
    uint64_t seed = 42;
};

CaseResult kv_throughput(const KvConfig& config);

/// Two-stage progressive ANN search: reduced vectors prune, a promoted
/// fraction re-ranks against full vectors; DRAM caches hot upper-layer nodes.
struct AnnConfig {
    uint64_t n_vectors = 8'000'000'000ull;
    uint64_t reduced_size_b = 512;
    uint64_t full_size_b = 2048;
    double promotion_fraction = 0.05;   // f
    double reduced_reads_per_query = 26'700.0; // V_r, calibration knob
    double dram_capacity_b = 0.0;
    double node_sigma = 1.0;            // lognormal node-popularity spread
    double rerank_dram_passes = 1.5;    // extra DRAM passes over promoted vectors
    HostPlatform platform;
    SsdConfig ssd;
    uint32_t n_ssd = 4;
    double ssd_util_cap = 1.0;
    double host_budget_iops = 0.0;
    double dram_bandwidth_bps = 0.0;
    uint64_t seed = 42;
};

CaseResult ann_throughput(const AnnConfig& config);

/// Rate-weighted hit fraction when the hottest `item_fraction` of items is
/// cached, for a lognormal popularity profile. Exposed for tests and sweeps.
double lognormal_hit_fraction(double item_fraction, double sigma, uint64_t seed);

const char* to_string(Bottleneck bottleneck);

} // namespace tierline
