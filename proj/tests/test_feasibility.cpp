#include "doctest.h"

#include <cmath>
#include <vector>

#include "tierline/feasibility.hpp"

using namespace tierline;

namespace {

struct SlcPoint {
    uint64_t block;
    double peak;
};

// Storage-Next SLC peaks at 90:10, phi=3 for each block size.
std::vector<SlcPoint> slc_points() {
    const auto ssd = ssd_preset("slc");
    std::vector<SlcPoint> out;
    for (uint64_t blk : {512, 1024, 2048, 4096})
        out.push_back({blk, ssd_peak_iops(ssd, {9.0, 3.0, blk})});
    return out;
}

} // namespace

TEST_CASE("mean latency") {
    const auto ssd = ssd_preset("slc");
    const double peak = ssd_peak_iops(ssd, {9.0, 3.0, 512});
    const double service = 20.0 / peak;

    CHECK(mean_latency(peak, 20, 5e-6, 0.0) == doctest::Approx(service + 5e-6).epsilon(1e-12));
    CHECK(mean_latency(peak, 20, 5e-6, 0.9) ==
          doctest::Approx(service * 5.5 + 5e-6).epsilon(1e-12));
    CHECK(mean_latency(peak, 20, 5e-6, 0.9) == doctest::Approx(6.92e-6).epsilon(5e-3));

    // strictly increasing toward saturation
    double prev = 0.0;
    for (double rho : {0.0, 0.3, 0.6, 0.9, 0.99, 0.99999}) {
        const double v = mean_latency(peak, 20, 5e-6, rho);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(mean_latency(peak, 20, 5e-6, 1.0), ConfigError);
}

TEST_CASE("tail latency") {
    const auto ssd = ssd_preset("slc");
    const double peak = ssd_peak_iops(ssd, {9.0, 3.0, 512});
    const double service = 20.0 / peak;

    const double t99 = tail_latency(peak, 20, 5e-6, 0.99, 0.9);
    CHECK(t99 == doctest::Approx(service * (1.0 + 4.5 * std::log(100.0)) + 5e-6)
                     .epsilon(1e-12));
    CHECK(t99 == doctest::Approx(12.57e-6).epsilon(5e-3));

    CHECK(tail_latency(peak, 20, 5e-6, 0.99, 0.0) ==
          doctest::Approx(mean_latency(peak, 20, 5e-6, 0.0)).epsilon(1e-12));

    // p = 1 - 1/e makes the log factor exactly one
    const double p_e = 1.0 - std::exp(-1.0);
    CHECK(tail_latency(peak, 20, 5e-6, p_e, 0.7) ==
          doctest::Approx(mean_latency(peak, 20, 5e-6, 0.7)).epsilon(1e-9));
}

TEST_CASE("rho_max solver") {
    const auto pts = slc_points();
    const double peak512 = pts[0].peak;

    LatencyTargets t13;
    t13.tail_target_s = 13e-6;
    const double rho = solve_rho_max(peak512, 20, 5e-6, t13);
    CHECK(rho == doctest::Approx(0.905).epsilon(0.025));
    // solver result is consistent with the latency model at tolerance scale
    CHECK(tail_latency(peak512, 20, 5e-6, 0.99, rho) <= 13e-6 + 1e-12);
    CHECK(tail_latency(peak512, 20, 5e-6, 0.99, std::min(rho + 2.5e-4, 0.9999999)) >
          13e-6);

    LatencyTargets t44;
    t44.tail_target_s = 44e-6;
    CHECK(solve_rho_max(pts[3].peak, 20, 5e-6, t44) == doctest::Approx(0.90).epsilon(0.025));

    SUBCASE("no targets -> exactly 1.0") {
        CHECK(solve_rho_max(peak512, 20, 5e-6, LatencyTargets{}) == 1.0);
    }
    SUBCASE("infeasible target names the problem") {
        LatencyTargets too_tight;
        too_tight.tail_target_s = 1e-6; // below sense time alone
        CHECK_THROWS_AS(solve_rho_max(peak512, 20, 5e-6, too_tight), InfeasibleError);
    }
    SUBCASE("loosening a target never decreases rho_max") {
        double prev = 0.0;
        for (double us : {7.0, 13.0, 85.0, 300.0}) {
            LatencyTargets t;
            t.tail_target_s = us * 1e-6;
            const double r = solve_rho_max(peak512, 20, 5e-6, t);
            CHECK(r >= prev);
            prev = r;
        }
    }
    SUBCASE("mean target also binds") {
        LatencyTargets both;
        both.mean_target_s = 6e-6;
        both.tail_target_s = 1.0; // slack
        const double r = solve_rho_max(peak512, 20, 5e-6, both);
        CHECK(mean_latency(peak512, 20, 5e-6, r) <= 6e-6 + 1e-12);
    }
}

TEST_CASE("Table-3 tier reproduction across block sizes") {
    const auto pts = slc_points();
    const struct {
        const char* tier;
        double rho;
    } rows[] = {{"tier70", 0.70}, {"tier80", 0.80}, {"tier90", 0.90}, {"tier99", 0.99}};
    for (const auto& row : rows) {
        for (const auto& pt : pts) {
            const auto targets = latency_tier_preset(row.tier, pt.block);
            const double rho = solve_rho_max(pt.peak, 20, 5e-6, targets);
            INFO(row.tier, " block=", pt.block, " rho=", rho);
            CHECK(std::abs(rho - row.rho) <= 0.03);
        }
    }
}

TEST_CASE("usable IOPS under host budget") {
    const double peak = 57.43e6;
    auto a = usable_ssd_iops(0.9, peak, 100e6, 4);
    CHECK(a.usable_iops_per_ssd == doctest::Approx(25e6));
    CHECK(a.limiter == IopsLimiter::host_budget);

    auto b = usable_ssd_iops(0.9, peak, 400e6, 4);
    CHECK(b.usable_iops_per_ssd == doctest::Approx(0.9 * peak));
    CHECK(b.limiter == IopsLimiter::latency);

    auto c = usable_ssd_iops(1.0, peak, INFINITY, 4);
    CHECK(c.usable_iops_per_ssd == doctest::Approx(peak));
    CHECK(c.limiter == IopsLimiter::device_peak);

    CHECK_THROWS_AS(usable_ssd_iops(0.9, peak, 100e6, 0), ConfigError);
}

TEST_CASE("latency tier presets validate input") {
    CHECK_THROWS_AS(latency_tier_preset("tier50", 512), ConfigError);
    CHECK_THROWS_AS(latency_tier_preset("tier90", 777), ConfigError);
    const auto t = latency_tier_preset("tier90", 2048);
    CHECK(t.tail_target_s.value() == doctest::Approx(26e-6));
}
