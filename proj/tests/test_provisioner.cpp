#include "doctest.h"

#include <cmath>

#include "tierline/provisioner.hpp"

using namespace tierline;

namespace {

// Scaled replay of the workload-aware study: 1e6 blocks, 200 MB/s total,
// resources scaled by the same 1e-3 factor as the block population.
ProvisionInputs scaled_inputs(const char* platform, const char* ssd, uint64_t blk,
                              double dram_bw_bps, double host_budget) {
    ProvisionInputs in;
    in.platform = platform_preset(platform);
    in.ssd = ssd_preset(ssd);
    in.mix = {9.0, 3.0, blk};
    in.targets = latency_tier_preset("tier90", blk);
    in.host_budget_iops = host_budget;
    in.n_ssd = 4;
    in.dram_bandwidth_bps = dram_bw_bps * 1e-3;
    in.resource_scale = 1e-3;
    return in;
}

AccessProfile scaled_profile(uint64_t blk, uint64_t seed, double sigma = 0.4) {
    return lognormal_profile(1'000'000, sigma, 200e6, blk, seed);
}

} // namespace

TEST_CASE("provision thresholds and capacities on the scaled study") {
    SUBCASE("CPU+DDR with Storage-Next at 512B: optimum caches everything") {
        const auto profile = scaled_profile(512, 1);
        const auto rep = provision(profile, scaled_inputs("cpu-ddr", "slc", 512, 540e9, 100e6));
        CHECK(rep.usable_iops_per_ssd == doctest::Approx(25e6)); // host 100M / 4
        CHECK(rep.iops_limiter == IopsLimiter::host_budget);
        CHECK(rep.t_b_s == 0.0); // 540 MB/s scaled vs 400 MB/s worst-case demand
        CHECK(rep.t_s_s > 0.0);
        CHECK(rep.break_even_s > profile.max_interval_s());
        CHECK(rep.min_dram_optimal_b == doctest::Approx(profile.total_bytes()));
        CHECK(rep.bw_at_optimal.miss_path_bps == doctest::Approx(0.0));
    }

    SUBCASE("GPU+GDDR with Storage-Next at 2KB and 4KB: viable == optimal") {
        for (uint64_t blk : {2048, 4096}) {
            const auto profile = scaled_profile(blk, 2);
            const auto rep =
                provision(profile, scaled_inputs("gpu-gddr", "slc", blk, 640e9, 400e6));
            INFO("block ", blk);
            CHECK(rep.t_s_s >= rep.break_even_s);
            CHECK(rep.t_o_s == doctest::Approx(rep.t_v_s));
            CHECK(rep.min_dram_optimal_b == doctest::Approx(rep.min_dram_viable_b));
        }
    }

    SUBCASE("GPU+GDDR at 512B: economics dominates viability") {
        const auto profile = scaled_profile(512, 3);
        const auto rep = provision(profile, scaled_inputs("gpu-gddr", "slc", 512, 640e9, 400e6));
        CHECK(rep.break_even_s > rep.t_v_s);
        CHECK(rep.min_dram_optimal_b > rep.min_dram_viable_b);
    }

    SUBCASE("Storage-Next needs less viable DRAM than a Normal SSD") {
        const auto profile = scaled_profile(512, 4);
        auto sn = scaled_inputs("cpu-ddr", "slc", 512, 540e9, 100e6);
        auto nr = sn;
        nr.ssd.iops_mode = IopsMode::flat_at_4k;
        const auto rep_sn = provision(profile, sn);
        const auto rep_nr = provision(profile, nr);
        CHECK(rep_sn.min_dram_viable_b < rep_nr.min_dram_viable_b);
    }
}

TEST_CASE("verdict classification against capacity") {
    const auto profile = scaled_profile(512, 5);
    auto in = scaled_inputs("cpu-ddr", "slc", 512, 540e9, 100e6);

    SUBCASE("ample capacity is viable") {
        in.dram_capacity_b = profile.total_bytes();
        const auto rep = provision(profile, in);
        CHECK(rep.verdict == Verdict::viable);
        REQUIRE(rep.t_c_s.has_value());
        CHECK(*rep.t_c_s >= rep.t_v_s);
    }
    SUBCASE("capacity below the viable set flags the SSD path here") {
        const auto base = provision(profile, in); // T_B == 0, T_S > 0
        REQUIRE(base.min_dram_viable_b > 0.0);
        in.dram_capacity_b = base.min_dram_viable_b / 2.0;
        const auto rep = provision(profile, in);
        CHECK(rep.verdict == Verdict::ssd_limited);
        CHECK(!rep.advice.empty());
    }
    SUBCASE("verdict is viable exactly when max(T_B,T_S) <= T_C") {
        for (double frac : {0.01, 0.1, 0.3, 0.6, 1.0}) {
            in.dram_capacity_b = frac * profile.total_bytes();
            const auto rep = provision(profile, in);
            const bool fits = rep.t_v_s <= *rep.t_c_s;
            CHECK((rep.verdict == Verdict::viable) == fits);
        }
    }
}

TEST_CASE("threshold monotonicity in resources") {
    const auto profile = scaled_profile(512, 6);

    double prev_tb = INFINITY;
    for (double bw : {250e6, 300e6, 400e6, 600e6}) {
        const double tb = threshold_t_b(profile, bw);
        CHECK(tb <= prev_tb);
        prev_tb = tb;
    }

    double prev_ts = INFINITY, prev_cv = INFINITY;
    for (double iops : {5e3, 10e3, 25e3, 60e3, 200e3}) {
        const double ts = threshold_t_s(profile, iops, 4);
        CHECK(ts <= prev_ts);
        prev_ts = ts;
        const double cv = static_cast<double>(profile.cached_blocks(ts)) * 512.0;
        CHECK(cv <= prev_cv);
        prev_cv = cv;
    }
}

TEST_CASE("fully cached capacity yields a quiet miss path") {
    const auto profile = scaled_profile(512, 7);
    auto in = scaled_inputs("cpu-ddr", "slc", 512, 540e9, 100e6);
    in.dram_capacity_b = profile.total_bytes();
    const auto rep = provision(profile, in);
    REQUIRE(rep.bw_at_capacity.has_value());
    CHECK(rep.bw_at_capacity->miss_path_bps == doctest::Approx(0.0));
    CHECK(rep.bw_at_capacity->total_bps ==
          doctest::Approx(profile.total_throughput_bps()).epsilon(1e-9));
    CHECK(rep.verdict == Verdict::viable);
}
