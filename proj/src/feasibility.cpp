#include "tierline/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace tierline {

namespace {

constexpr double kRhoUpper = 1.0 - 1e-6;
constexpr double kRhoTolerance = 1e-4;

double queue_factor(double rho) { return rho / (2.0 * (1.0 - rho)); }

} // namespace

void LatencyTargets::validate() const {
    if (tail_percentile <= 0.0 || tail_percentile >= 1.0)
        throw ConfigError("tail_percentile must lie in (0,1)");
    if (mean_target_s && *mean_target_s <= 0.0)
        throw ConfigError("mean latency target must be > 0");
    if (tail_target_s && *tail_target_s <= 0.0)
        throw ConfigError("tail latency target must be > 0");
}

double mean_latency(double peak_iops, uint32_t n_channels, double tau_sense_s,
                    double rho) {
    if (peak_iops <= 0.0 || n_channels == 0) throw ConfigError("invalid peak/channels");
    if (rho < 0.0 || rho >= 1.0) throw ConfigError("rho must lie in [0,1)");
    const double service = n_channels / peak_iops;
    return service * (1.0 + queue_factor(rho)) + tau_sense_s;
}

double tail_latency(double peak_iops, uint32_t n_channels, double tau_sense_s,
                    double p, double rho) {
    if (peak_iops <= 0.0 || n_channels == 0) throw ConfigError("invalid peak/channels");
    if (rho < 0.0 || rho >= 1.0) throw ConfigError("rho must lie in [0,1)");
    if (p <= 0.0 || p >= 1.0) throw ConfigError("percentile must lie in (0,1)");
    const double service = n_channels / peak_iops;
    return service * (1.0 + queue_factor(rho) * std::log(1.0 / (1.0 - p))) +
           tau_sense_s;
}

double solve_rho_max(double peak_iops, uint32_t n_channels, double tau_sense_s,
                     const LatencyTargets& targets) {
    targets.validate();
    if (!targets.mean_target_s && !targets.tail_target_s) return 1.0;

    auto meets = [&](double rho) {
        if (targets.mean_target_s &&
            mean_latency(peak_iops, n_channels, tau_sense_s, rho) > *targets.mean_target_s)
            return false;
        if (targets.tail_target_s &&
            tail_latency(peak_iops, n_channels, tau_sense_s, targets.tail_percentile,
                         rho) > *targets.tail_target_s)
            return false;
        return true;
    };

    if (!meets(0.0)) {
        const double zero_load = n_channels / peak_iops + tau_sense_s;
        std::string which = "latency";
        if (targets.mean_target_s && zero_load > *targets.mean_target_s)
            which = "mean latency";
        else if (targets.tail_target_s)
            which = "tail latency";
        throw InfeasibleError(which + " target below zero-load latency (" +
                              std::to_string(zero_load) + " s)");
    }
    if (meets(kRhoUpper)) return kRhoUpper;

    double lo = 0.0, hi = kRhoUpper; // meets(lo), !meets(hi)
    while (hi - lo > kRhoTolerance) {
        const double mid = 0.5 * (lo + hi);
        (meets(mid) ? lo : hi) = mid;
    }
    return lo;
}

FeasibleIops usable_ssd_iops(double rho_max, double peak_iops,
                             double host_budget_iops, uint32_t n_ssd) {
    if (n_ssd < 1) throw ConfigError("n_ssd must be >= 1");
    if (peak_iops <= 0.0) throw ConfigError("peak_iops must be > 0");
    if (rho_max <= 0.0 || rho_max > 1.0) throw ConfigError("rho_max must lie in (0,1]");
    FeasibleIops out;
    out.rho_max = rho_max;
    const double latency_bound = rho_max * peak_iops;
    const double host_bound = host_budget_iops / n_ssd;
    if (host_bound < latency_bound) {
        out.usable_iops_per_ssd = host_bound;
        out.limiter = IopsLimiter::host_budget;
    } else {
        out.usable_iops_per_ssd = latency_bound;
        out.limiter = rho_max < 1.0 ? IopsLimiter::latency : IopsLimiter::device_peak;
    }
    return out;
}

LatencyTargets latency_tier_preset(const std::string& name, uint64_t block_size_b) {
    struct Tier {
        const char* name;
        double us_by_block[4]; // 512B, 1KB, 2KB, 4KB
    };
    static const Tier tiers[] = {
        {"tier70", {7, 9, 11, 16}},
        {"tier80", {9, 11, 15, 23}},
        {"tier90", {13, 17, 26, 44}},
        {"tier99", {85, 135, 230, 418}},
    };
    int col = -1;
    switch (block_size_b) {
        case 512: col = 0; break;
        case 1024: col = 1; break;
        case 2048: col = 2; break;
        case 4096: col = 3; break;
        default:
            throw ConfigError("latency tiers are defined for block sizes 512/1024/2048/4096");
    }
    for (const auto& t : tiers) {
        if (name == t.name) {
            LatencyTargets lt;
            lt.tail_percentile = 0.99;
            lt.tail_target_s = t.us_by_block[col] * 1e-6;
            return lt;
        }
    }
    throw ConfigError("unknown latency tier '" + name +
                      "' (expected tier70, tier80, tier90, tier99)");
}

const char* to_string(IopsLimiter limiter) {
    switch (limiter) {
        case IopsLimiter::latency: return "latency";
        case IopsLimiter::host_budget: return "host_budget";
        case IopsLimiter::device_peak: return "device_peak";
    }
    return "?";
}

} // namespace tierline
