#include "doctest.h"

#include "tierline/platform_econ.hpp"

using namespace tierline;

namespace {
const WorkloadMix kMix{9.0, 3.0, 512};
}

TEST_CASE("saving rate matches direct substitution") {
    const auto cpu = platform_preset("cpu-ddr");
    const auto gpu = platform_preset("gpu-gddr");
    const auto ssd = ssd_preset("slc");
    const double cost = ssd_cost(ssd).total;
    const double peak = ssd_peak_iops(ssd, kMix);

    const double cpu_expect = 4.0 / 1e6 + 512.0 * 1.0 / 3e9 + cost / peak;
    CHECK(saving_rate(cpu, cost, peak, 512) == doctest::Approx(cpu_expect).epsilon(1e-12));
    CHECK(saving_rate(cpu, cost, peak, 512) == doctest::Approx(5.965e-6).epsilon(2e-3));

    const double gpu_expect = 3.0 / 4e6 + 512.0 * 2.0 / 80e9 + cost / peak;
    CHECK(saving_rate(gpu, cost, peak, 512) == doctest::Approx(gpu_expect).epsilon(1e-12));
    CHECK(saving_rate(gpu, cost, peak, 512) == doctest::Approx(2.557e-6).epsilon(2e-3));

    CHECK_THROWS_AS(saving_rate(cpu, cost, 0.0, 512), ConfigError);
}

TEST_CASE("dram rent") {
    const auto cpu = platform_preset("cpu-ddr");
    const auto gpu = platform_preset("gpu-gddr");
    CHECK(dram_rent(cpu, 512) == doctest::Approx(512.0 / 3e9).epsilon(1e-12));
    CHECK(dram_rent(gpu, 512) == doctest::Approx(512.0 / 2e9 * 2.0).epsilon(1e-12));
    // whole-die rent equals the die cost
    CHECK(dram_rent(cpu, static_cast<uint64_t>(3e9)) == doctest::Approx(1.0));
}

TEST_CASE("calibrated break-even reproduces the unconstrained study") {
    const auto cpu = platform_preset("cpu-ddr");
    const auto gpu = platform_preset("gpu-gddr");
    const auto ssd = ssd_preset("slc");

    const double peak512 = ssd_peak_iops(ssd, kMix);
    const auto cpu512 = break_even(cpu, ssd, kMix, peak512);
    CHECK(cpu512.total_s == doctest::Approx(cpu512.processor_term_s + cpu512.dram_term_s +
                                            cpu512.ssd_term_s).epsilon(1e-12));
    CHECK(cpu512.total_s > 34.0);
    CHECK(cpu512.total_s < 36.0);

    WorkloadMix mix4k{9.0, 3.0, 4096};
    const auto cpu4k = break_even(cpu, ssd, mix4k, ssd_peak_iops(ssd, mix4k));
    CHECK(cpu4k.total_s > 10.0);
    CHECK(cpu4k.total_s < 11.0);

    const auto gpu512 = break_even(gpu, ssd, kMix, peak512);
    CHECK(gpu512.total_s == doctest::Approx(5.0).epsilon(0.1));
    CHECK(cpu512.total_s / gpu512.total_s == doctest::Approx(7.0).epsilon(0.15));

    SUBCASE("ssd term has the documented closed form") {
        const double cost = ssd_cost(ssd).total;
        const double expect = cost / peak512 * (3e9 / (512.0 * 1.0));
        CHECK(cpu512.ssd_term_s == doctest::Approx(expect).epsilon(1e-12));
    }

    SUBCASE("strictly decreasing in usable IOPS") {
        const auto slower = break_even(cpu, ssd, kMix, peak512 / 2.0);
        CHECK(slower.total_s > cpu512.total_s);
    }

    SUBCASE("scaling every normalized cost leaves the interval unchanged") {
        auto scaled_platform = cpu;
        scaled_platform.cost_core *= 3.0;
        scaled_platform.cost_dram_die *= 3.0;
        auto scaled_ssd = ssd;
        scaled_ssd.cost_ctrl *= 3.0;
        scaled_ssd.cost_nand_die *= 3.0;
        scaled_ssd.cost_internal_dram_die *= 3.0;
        const auto scaled = break_even(scaled_platform, scaled_ssd, kMix, peak512);
        CHECK(scaled.total_s == doctest::Approx(cpu512.total_s).epsilon(1e-12));
    }

    SUBCASE("free host with infinite DRAM bandwidth reduces to the classical shape") {
        HostPlatform free_host = cpu;
        free_host.cost_core = 1e-30;
        free_host.dram_die_bandwidth_bps = 1e30;
        const auto r = break_even(free_host, ssd, kMix, peak512);
        const double classical_like =
            ssd_cost(ssd).total / peak512 * (3e9 / (512.0 * 1.0));
        CHECK(r.total_s == doctest::Approx(classical_like).epsilon(1e-9));
    }
}

TEST_CASE("classical 1987 reference") {
    CHECK(classical_break_even(128, 15, 2000, 5) ==
          doctest::Approx(128.0 / 15.0 * 400.0).epsilon(1e-12));
    CHECK(classical_break_even(128, 1e30, 2000, 5) == doctest::Approx(0.0));
    CHECK(classical_break_even(128, 15, 0.0, 5) == doctest::Approx(0.0));
}
