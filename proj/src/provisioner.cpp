#include "tierline/provisioner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tierline {

namespace {

BandwidthUse bw_use_at(const AccessProfile& profile, double threshold_s) {
    const PsiSplit psi = psi_split(profile, threshold_s);
    BandwidthUse use;
    use.cached_bps = psi.cached_bps;
    use.miss_path_bps = 2.0 * psi.uncached_bps;
    use.total_bps = use.cached_bps + use.miss_path_bps;
    return use;
}

} // namespace

ProvisionReport provision(const AccessProfile& profile, const ProvisionInputs& in) {
    in.platform.validate();
    in.ssd.validate();
    in.mix.validate();
    if (in.n_ssd < 1) throw ConfigError("n_ssd must be >= 1");
    if (in.dram_bandwidth_bps <= 0.0) throw ConfigError("dram_bandwidth must be > 0");
    if (in.resource_scale <= 0.0) throw ConfigError("resource_scale must be > 0");
    if (in.mix.block_size_b != profile.block_size_b())
        throw ConfigError("profile block size does not match workload mix");

    ProvisionReport rep;

    const double peak = ssd_peak_iops(in.ssd, in.mix);
    rep.rho_max = solve_rho_max(peak, in.ssd.n_channels, in.ssd.chip.tau_sense_s,
                                in.targets);
    const FeasibleIops usable =
        usable_ssd_iops(rep.rho_max, peak, in.host_budget_iops, in.n_ssd);
    rep.usable_iops_per_ssd = usable.usable_iops_per_ssd;
    rep.iops_limiter = usable.limiter;

    // Economics at device scale; thresholds at (possibly scaled) system scale.
    rep.break_even_s = break_even(in.platform, in.ssd, in.mix,
                                  rep.usable_iops_per_ssd).total_s;

    const double scaled_usable = rep.usable_iops_per_ssd * in.resource_scale;
    rep.t_b_s = threshold_t_b(profile, in.dram_bandwidth_bps);
    rep.t_s_s = threshold_t_s(profile, scaled_usable, in.n_ssd);
    rep.t_v_s = std::max(rep.t_b_s, rep.t_s_s);
    rep.t_o_s = std::max(rep.break_even_s, rep.t_v_s);

    const double blk = static_cast<double>(profile.block_size_b());
    rep.min_dram_viable_b = static_cast<double>(profile.cached_blocks(rep.t_v_s)) * blk;
    rep.min_dram_optimal_b = static_cast<double>(profile.cached_blocks(rep.t_o_s)) * blk;
    rep.bw_at_viable = bw_use_at(profile, rep.t_v_s);
    rep.bw_at_optimal = bw_use_at(profile, rep.t_o_s);

    if (in.dram_capacity_b) {
        const double t_c = threshold_t_c(profile, *in.dram_capacity_b);
        rep.t_c_s = t_c;
        rep.bw_at_capacity = bw_use_at(profile, t_c);
        const bool b_fits = rep.t_b_s <= t_c;
        const bool s_fits = rep.t_s_s <= t_c;
        if (b_fits && s_fits) {
            rep.verdict = Verdict::viable;
            if (rep.break_even_s < rep.t_v_s || rep.break_even_s > t_c) {
                rep.advice.push_back(
                    "viable but off-optimum: size DRAM toward the economics-optimal "
                    "capacity (see min_dram_optimal)");
            }
        } else if (!b_fits && s_fits) {
            rep.verdict = Verdict::dram_bw_limited;
            rep.advice.push_back(
                "raise host DRAM bandwidth (more DDR/GDDR channels, higher data "
                "rates, or HBM)");
        } else if (b_fits && !s_fits) {
            rep.verdict = Verdict::ssd_limited;
            rep.advice.push_back(
                "raise aggregate SSD throughput: add SSDs, pick higher-IOPS devices"
                + std::string(rep.iops_limiter == IopsLimiter::host_budget
                                  ? ", or raise the host IOPS budget (currently the"
                                    " sub-limiter)"
                                  : ""));
        } else {
            rep.verdict = Verdict::jointly_limited;
            rep.advice.push_back(
                "bandwidth and capacity jointly insufficient: grow DRAM capacity to "
                "cover max(T_B,T_S), or upgrade DRAM/SSD bandwidth to shrink it");
        }
    } else {
        rep.verdict = Verdict::viable;
    }
    return rep;
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::viable: return "viable";
        case Verdict::dram_bw_limited: return "dram_bw_limited";
        case Verdict::ssd_limited: return "ssd_limited";
        case Verdict::jointly_limited: return "jointly_limited";
    }
    return "?";
}

std::string describe(const ProvisionReport& rep, const AccessProfile& profile) {
    std::ostringstream os;
    auto gb = [](double bytes) { return bytes / 1e9; };
    os << "workload: " << profile.n_blocks() << " blocks x "
       << profile.block_size_b() << " B (" << gb(profile.total_bytes())
       << " GB), total " << gb(profile.total_throughput_bps()) << " GB/s\n";
    os << "usable SSD IOPS: " << rep.usable_iops_per_ssd / 1e6
       << " M per SSD (rho_max " << rep.rho_max << ", limiter "
       << to_string(rep.iops_limiter) << ")\n";
    os << "thresholds: T_B " << rep.t_b_s << " s, T_S " << rep.t_s_s
       << " s, T_v " << rep.t_v_s << " s";
    if (rep.t_c_s) os << ", T_C " << *rep.t_c_s << " s";
    os << "\nbreak-even " << rep.break_even_s << " s, T_o " << rep.t_o_s << " s\n";
    os << "min DRAM: viable " << gb(rep.min_dram_viable_b) << " GB, optimal "
       << gb(rep.min_dram_optimal_b) << " GB\n";
    os << "DRAM bandwidth at T_v: cached " << gb(rep.bw_at_viable.cached_bps)
       << " GB/s + miss-path " << gb(rep.bw_at_viable.miss_path_bps)
       << " GB/s; at T_o: cached " << gb(rep.bw_at_optimal.cached_bps)
       << " GB/s + miss-path " << gb(rep.bw_at_optimal.miss_path_bps) << " GB/s\n";
    os << "verdict: " << to_string(rep.verdict) << "\n";
    for (const auto& a : rep.advice) os << "advice: " << a << "\n";
    return os.str();
}

} // namespace tierline
