#include "doctest.h"

#include <cmath>

#include "tierline/case_studies.hpp"

using namespace tierline;

namespace {

constexpr double kInf = INFINITY;

KvConfig kv_base(const char* platform, const char* ssd_name) {
    KvConfig cfg;
    cfg.platform = platform_preset(platform);
    cfg.ssd = ssd_preset(ssd_name);
    if (std::string(platform) == "cpu-ddr") {
        cfg.host_budget_iops = 100e6;
        cfg.dram_bandwidth_bps = 540e9;
    } else {
        cfg.host_budget_iops = 400e6;
        cfg.dram_bandwidth_bps = 640e9;
    }
    return cfg;
}

KvConfig kv_normal(const char* platform) {
    auto cfg = kv_base(platform, "slc");
    cfg.ssd.iops_mode = IopsMode::flat_at_4k;
    cfg.bucket_block_b = 4096;
    return cfg;
}

AnnConfig ann_base(const char* platform, uint64_t full_b, double f) {
    AnnConfig cfg;
    cfg.platform = platform_preset(platform);
    cfg.ssd = ssd_preset("slc");
    cfg.full_size_b = full_b;
    cfg.promotion_fraction = f;
    if (std::string(platform) == "cpu-ddr") {
        cfg.host_budget_iops = 100e6;
        cfg.dram_bandwidth_bps = 540e9;
    } else {
        cfg.host_budget_iops = 400e6;
        cfg.dram_bandwidth_bps = 640e9;
    }
    return cfg;
}

} // namespace

TEST_CASE("cuckoo displacement expectation") {
    // direct substitution: 0.7^16 / (1 - 0.7^8)
    const double expect = std::pow(0.7, 16) / (1.0 - std::pow(0.7, 8));
    CHECK(cuckoo_expected_displacements(0.7, 8) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(cuckoo_expected_displacements(0.7, 8) - 0.00353) < 1e-5);

    CHECK(cuckoo_expected_displacements(0.0, 8) == 0.0);
    CHECK(cuckoo_expected_displacements(1e-6, 8) < 1e-90);
    // 4KB blocks of 64B entries: chains are negligible
    CHECK(cuckoo_expected_displacements(0.7, 64) < 1e-9);
    CHECK_THROWS_AS(cuckoo_expected_displacements(1.0, 8), ConfigError);
    CHECK(cuckoo_critical_load(8) > 0.95);
}

TEST_CASE("hit fraction curve") {
    CHECK(lognormal_hit_fraction(0.0, 1.0, 1) == 0.0);
    CHECK(lognormal_hit_fraction(1.0, 1.0, 1) == 1.0);
    // skew concentrates rate in the hot fraction
    const double h10_strong = lognormal_hit_fraction(0.10, 1.2, 1);
    const double h10_weak = lognormal_hit_fraction(0.10, 0.4, 1);
    CHECK(h10_strong > h10_weak);
    CHECK(h10_strong > 0.10);
    // analytic value for the lognormal: Phi(Phi^-1(0.1) + sigma)
    CHECK(h10_strong == doctest::Approx(0.467).epsilon(0.02));
    CHECK(h10_weak == doctest::Approx(0.189).epsilon(0.03));
    // monotone in cached fraction
    double prev = -1.0;
    for (double x : {0.01, 0.05, 0.2, 0.5, 0.9}) {
        const double h = lognormal_hit_fraction(x, 1.0, 1);
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("KV store throughput") {
    SUBCASE("GPU + Storage-Next, read-only, strong locality tops 100M ops/s") {
        auto cfg = kv_base("gpu-gddr", "slc");
        cfg.dram_capacity_b = 512e9;
        const auto r = kv_throughput(cfg);
        CHECK(r.throughput >= 100e6);
        CHECK(r.bottleneck == Bottleneck::ssd_iops);
        CHECK(r.component_demands.at("ssd_iops") == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("CPU + Storage-Next is host-limited and slower") {
        auto gpu = kv_base("gpu-gddr", "slc");
        auto cpu = kv_base("cpu-ddr", "slc");
        gpu.dram_capacity_b = cpu.dram_capacity_b = 512e9;
        const auto rg = kv_throughput(gpu);
        const auto rc = kv_throughput(cpu);
        CHECK(rc.throughput < rg.throughput);
        CHECK(rc.bottleneck == Bottleneck::host_iops);
    }
    SUBCASE("Normal SSDs collapse CPU and GPU into one curve") {
        for (double cap : {128e9, 512e9, 1000e9}) {
            auto cpu = kv_normal("cpu-ddr");
            auto gpu = kv_normal("gpu-gddr");
            cpu.dram_capacity_b = gpu.dram_capacity_b = cap;
            for (double ratio : {kInf, 9.0}) {
                cpu.get_put_ratio = gpu.get_put_ratio = ratio;
                const auto rc = kv_throughput(cpu);
                const auto rg = kv_throughput(gpu);
                CHECK(rc.bottleneck == Bottleneck::ssd_iops);
                CHECK(rg.bottleneck == Bottleneck::ssd_iops);
                CHECK(rc.throughput == doctest::Approx(rg.throughput).epsilon(1e-9));
            }
        }
    }
    SUBCASE("write share monotonicity") {
        auto cfg = kv_base("gpu-gddr", "slc");
        cfg.dram_capacity_b = 256e9;
        double prev = INFINITY;
        for (double ratio : {kInf, 9.0, 7.0 / 3.0, 1.0}) {
            cfg.get_put_ratio = ratio;
            const double x = kv_throughput(cfg).throughput;
            CHECK(x <= prev + 1e-6);
            prev = x;
        }
    }
    SUBCASE("locality and DRAM monotonicity") {
        auto strong = kv_base("gpu-gddr", "slc");
        auto weak = strong;
        strong.locality_sigma = 1.2;
        weak.locality_sigma = 0.4;
        double prev = 0.0;
        for (double cap : {64e9, 256e9, 512e9, 1024e9}) {
            strong.dram_capacity_b = weak.dram_capacity_b = cap;
            const double xs = kv_throughput(strong).throughput;
            const double xw = kv_throughput(weak).throughput;
            CHECK(xs >= xw - 1e-6);
            CHECK(xs >= prev - 1e-6);
            prev = xs;
        }
    }
    SUBCASE("Storage-Next beats Normal by >= 2x at 512B-dominated points") {
        auto sn = kv_base("gpu-gddr", "slc");
        auto nr = kv_normal("gpu-gddr");
        sn.dram_capacity_b = nr.dram_capacity_b = 512e9;
        CHECK(kv_throughput(sn).throughput >= 2.0 * kv_throughput(nr).throughput);
    }
    SUBCASE("infeasible load factor is rejected") {
        auto cfg = kv_base("gpu-gddr", "slc");
        cfg.dram_capacity_b = 64e9;
        cfg.load_factor = 0.99;
        CHECK_THROWS_AS(kv_throughput(cfg), ConfigError);
    }
}

TEST_CASE("ANN throughput") {
    SUBCASE("2KB promotion: calibration point lands in band, SSD-bound") {
        auto cfg = ann_base("gpu-gddr", 2048, 0.05);
        cfg.dram_capacity_b = 512e9;
        const auto r = ann_throughput(cfg);
        CHECK(r.throughput >= 13e3);
        CHECK(r.throughput <= 17e3);
        CHECK(r.bottleneck == Bottleneck::ssd_iops);
    }
    SUBCASE("2KB promotion stays SSD-bound over the sweep") {
        auto cfg = ann_base("gpu-gddr", 2048, 0.05);
        double prev = 0.0;
        for (double cap : {32e9, 64e9, 128e9, 256e9, 384e9, 512e9}) {
            cfg.dram_capacity_b = cap;
            const auto r = ann_throughput(cfg);
            CHECK(r.bottleneck == Bottleneck::ssd_iops);
            CHECK(r.throughput >= prev - 1e-9);
            prev = r.throughput;
        }
    }
    SUBCASE("6KB promotion transitions to a DRAM-bandwidth plateau") {
        auto cfg = ann_base("gpu-gddr", 6144, 0.15);
        cfg.dram_capacity_b = 32e9;
        CHECK(ann_throughput(cfg).bottleneck == Bottleneck::ssd_iops);
        cfg.dram_capacity_b = 384e9;
        const auto near_top = ann_throughput(cfg);
        cfg.dram_capacity_b = 512e9;
        const auto top = ann_throughput(cfg);
        CHECK(near_top.bottleneck == Bottleneck::dram_bandwidth);
        CHECK(top.bottleneck == Bottleneck::dram_bandwidth);
        CHECK(std::abs(top.throughput - near_top.throughput) / top.throughput < 0.05);
    }
    SUBCASE("CPU + Storage-Next is capped by the host budget") {
        auto cfg = ann_base("cpu-ddr", 2048, 0.05);
        cfg.dram_capacity_b = 512e9;
        const auto r = ann_throughput(cfg);
        CHECK(r.bottleneck == Bottleneck::host_iops);
        CHECK(r.throughput < 13e3);
    }
    SUBCASE("Storage-Next holds >= 2x over Normal SSDs") {
        auto sn = ann_base("gpu-gddr", 2048, 0.05);
        auto nr = sn;
        nr.ssd.iops_mode = IopsMode::flat_at_4k;
        for (double cap : {64e9, 256e9, 512e9}) {
            sn.dram_capacity_b = nr.dram_capacity_b = cap;
            CHECK(ann_throughput(sn).throughput >=
                  2.0 * ann_throughput(nr).throughput);
        }
    }
    SUBCASE("degenerate single-read query is host or DRAM bound") {
        auto cfg = ann_base("gpu-gddr", 2048, 0.0);
        cfg.reduced_reads_per_query = 1.0;
        cfg.dram_capacity_b = 4096e9; // effectively full cache
        const auto r = ann_throughput(cfg);
        CHECK(r.bottleneck != Bottleneck::ssd_iops);
    }
    SUBCASE("throughput is non-decreasing in resources") {
        auto cfg = ann_base("gpu-gddr", 4096, 0.10);
        cfg.dram_capacity_b = 256e9;
        const double base = ann_throughput(cfg).throughput;
        auto more_ssd = cfg;
        more_ssd.n_ssd = 8;
        CHECK(ann_throughput(more_ssd).throughput >= base - 1e-9);
        auto more_host = cfg;
        more_host.host_budget_iops *= 2.0;
        CHECK(ann_throughput(more_host).throughput >= base - 1e-9);
    }
}
