#include "doctest.h"

#include <cmath>
#include <sstream>

#include "tierline/access_profile.hpp"

using namespace tierline;

TEST_CASE("two-block hand profile") {
    AccessProfile p(512, {{1.0, 1}, {4.0, 1}});
    CHECK(p.total_rate() == doctest::Approx(1.25));

    auto split = psi_split(p, 2.0);
    CHECK(split.cached_bps == doctest::Approx(512.0));
    CHECK(split.uncached_bps == doctest::Approx(128.0));

    CHECK(dram_bw_demand(p, 2.0) == doctest::Approx(768.0));
    CHECK(dram_bw_demand(p, 0.0) == doctest::Approx(2.0 * 640.0));
    CHECK(dram_bw_demand(p, 100.0) == doctest::Approx(640.0));

    CHECK(psi_split(p, 0.0).cached_bps == doctest::Approx(0.0));
    CHECK(psi_split(p, 1e9).uncached_bps == doctest::Approx(0.0));

    SUBCASE("capacity threshold is an order statistic") {
        CHECK(threshold_t_c(p, 512.0) == doctest::Approx(1.0));
        CHECK(threshold_t_c(p, 100.0) == 0.0);
        CHECK(threshold_t_c(p, 4096.0) == doctest::Approx(4.0));
    }

    SUBCASE("bandwidth thresholds") {
        CHECK(threshold_t_b(p, 2.0 * 640.0) == 0.0);
        CHECK(threshold_t_b(p, 640.0) == doctest::Approx(4.0)); // everything cached
        CHECK(threshold_t_b(p, 768.0) == doctest::Approx(1.0));
        CHECK_THROWS_AS(threshold_t_b(p, 100.0), InfeasibleError);

        // SSDs absorbing everything need no caching at all
        CHECK(threshold_t_s(p, 10.0, 1) == 0.0);
        CHECK(threshold_t_s(p, 1e-12, 1) == doctest::Approx(4.0));
        // confine uncached to 128 B/s -> cache the 1 s block
        CHECK(threshold_t_s(p, 128.0 / 512.0, 1) == doctest::Approx(1.0));
    }
}

TEST_CASE("lognormal profile generation") {
    const double throughput = 200e6;
    const auto p = lognormal_profile(1'000'000, 0.4, throughput, 512, 42);

    CHECK(p.n_blocks() == 1'000'000);
    CHECK(p.total_throughput_bps() == doctest::Approx(throughput).epsilon(5e-3));
    CHECK(p.bins().size() <= 65536);

    SUBCASE("determinism per seed") {
        const auto q = lognormal_profile(1'000'000, 0.4, throughput, 512, 42);
        REQUIRE(q.bins().size() == p.bins().size());
        for (size_t i = 0; i < p.bins().size(); ++i) {
            CHECK(q.bins()[i].interval_s == p.bins()[i].interval_s);
            CHECK(q.bins()[i].count == p.bins()[i].count);
        }
        const auto r = lognormal_profile(1'000'000, 0.4, throughput, 512, 43);
        CHECK(r.bins()[0].interval_s != p.bins()[0].interval_s);
    }

    SUBCASE("degenerate sigma gives equal intervals") {
        const auto d = lognormal_profile(1000, 0.0, 512000.0, 512, 7);
        REQUIRE(d.bins().size() == 1);
        CHECK(d.bins()[0].interval_s == doctest::Approx(1000.0 * 512.0 / 512000.0));
    }

    SUBCASE("conservation and monotonicity over thresholds") {
        const double total = p.total_throughput_bps();
        double prev_demand = INFINITY;
        for (size_t i = 0; i < p.bins().size(); i += 1024) {
            const double t = p.bins()[i].interval_s;
            const auto s = psi_split(p, t);
            CHECK(std::abs(s.cached_bps + s.uncached_bps - total) <= 1e-9 * total);
            const double d = dram_bw_demand(p, t);
            CHECK(d < prev_demand);
            prev_demand = d;
        }
    }
}

TEST_CASE("profile CSV round trip") {
    const auto p = lognormal_profile(100'000, 1.2, 10e6, 1024, 9);
    std::stringstream ss;
    write_profile_csv(p, ss);
    const auto q = read_profile_csv(ss, 1024);
    REQUIRE(q.bins().size() == p.bins().size());
    CHECK(q.total_rate() == doctest::Approx(p.total_rate()).epsilon(1e-9));
    CHECK(q.n_blocks() == p.n_blocks());

    std::stringstream bad("interval_s,block_count\nxyz,3\n");
    CHECK_THROWS_AS(read_profile_csv(bad, 512), ConfigError);
}
