#include "tierline/access_profile.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tierline/rng.hpp"

namespace tierline {

AccessProfile::AccessProfile(uint64_t block_size_b, std::vector<Bin> bins)
    : block_size_b_(block_size_b), bins_(std::move(bins)) {
    if (block_size_b_ == 0) throw ConfigError("profile block_size must be > 0");
    std::sort(bins_.begin(), bins_.end(),
              [](const Bin& a, const Bin& b) { return a.interval_s < b.interval_s; });
    cum_count_.reserve(bins_.size());
    cum_rate_.reserve(bins_.size());
    long double count_acc = 0.0L, rate_acc = 0.0L;
    for (const auto& bin : bins_) {
        if (bin.interval_s <= 0.0) throw ConfigError("profile intervals must be > 0");
        if (bin.count == 0) throw ConfigError("profile bin counts must be > 0");
        count_acc += bin.count;
        rate_acc += static_cast<long double>(bin.count) / bin.interval_s;
        cum_count_.push_back(static_cast<uint64_t>(count_acc));
        cum_rate_.push_back(static_cast<double>(rate_acc));
    }
    n_blocks_ = static_cast<uint64_t>(count_acc);
    total_rate_ = static_cast<double>(rate_acc);
}

double AccessProfile::total_throughput_bps() const {
    return static_cast<double>(block_size_b_) * total_rate_;
}

double AccessProfile::max_interval_s() const {
    return bins_.empty() ? 0.0 : bins_.back().interval_s;
}

double AccessProfile::total_bytes() const {
    return static_cast<double>(block_size_b_) * static_cast<double>(n_blocks_);
}

namespace {

// Index of the last bin with interval <= threshold, or -1.
ptrdiff_t last_cached_bin(const std::vector<AccessProfile::Bin>& bins,
                          double threshold_s) {
    auto it = std::upper_bound(
        bins.begin(), bins.end(), threshold_s,
        [](double t, const AccessProfile::Bin& b) { return t < b.interval_s; });
    return it - bins.begin() - 1;
}

} // namespace

uint64_t AccessProfile::cached_blocks(double threshold_s) const {
    const ptrdiff_t k = last_cached_bin(bins_, threshold_s);
    return k < 0 ? 0 : cum_count_[static_cast<size_t>(k)];
}

double AccessProfile::cached_rate(double threshold_s) const {
    const ptrdiff_t k = last_cached_bin(bins_, threshold_s);
    return k < 0 ? 0.0 : cum_rate_[static_cast<size_t>(k)];
}

AccessProfile lognormal_profile(uint64_t n_blocks, double sigma,
                                double total_throughput_bps,
                                uint64_t block_size_b, uint64_t seed,
                                uint32_t max_bins) {
    if (n_blocks == 0) throw ConfigError("n_blocks must be > 0");
    if (sigma < 0.0) throw ConfigError("sigma must be >= 0");
    if (total_throughput_bps <= 0.0) throw ConfigError("throughput must be > 0");
    if (block_size_b == 0) throw ConfigError("block_size must be > 0");
    if (max_bins == 0) throw ConfigError("max_bins must be > 0");

    const double target_rate = total_throughput_bps / static_cast<double>(block_size_b);

    // E[1/tau] = exp(-mu + sigma^2/2)  =>  mu matching the target in expectation.
    const double mu =
        std::log(static_cast<double>(n_blocks) / target_rate) + 0.5 * sigma * sigma;

    if (sigma == 0.0) {
        return AccessProfile(block_size_b,
                             {{static_cast<double>(n_blocks) / target_rate, n_blocks}});
    }

    Rng rng(seed);

    struct Acc {
        uint64_t count = 0;
        long double sum_inv = 0.0L;
    };

    // Stream samples into fine log-space micro-bins, then merge to at most
    // max_bins near-equal-count bins. Keeps 1e9-block sets in memory.
    constexpr uint32_t kMicroBins = 1u << 20;
    const double z_span = 9.0;
    const double lo = mu - z_span * sigma;
    const double scale = kMicroBins / (2.0 * z_span * sigma);

    std::vector<Acc> micro(kMicroBins);
    for (uint64_t i = 0; i < n_blocks; ++i) {
        const double log_tau = mu + sigma * rng.next_normal();
        ptrdiff_t idx = static_cast<ptrdiff_t>((log_tau - lo) * scale);
        idx = std::clamp<ptrdiff_t>(idx, 0, kMicroBins - 1);
        auto& acc = micro[static_cast<size_t>(idx)];
        acc.count += 1;
        acc.sum_inv += std::exp(-log_tau);
    }

    const uint64_t per_bin = std::max<uint64_t>(1, (n_blocks + max_bins - 1) / max_bins);
    std::vector<AccessProfile::Bin> bins;
    bins.reserve(max_bins + 1);
    long double sum_inv_total = 0.0L;
    Acc open;
    auto flush = [&]() {
        if (open.count == 0) return;
        bins.push_back({static_cast<double>(open.count / open.sum_inv), open.count});
        sum_inv_total += open.sum_inv;
        open = Acc{};
    };
    for (const auto& m : micro) {
        if (m.count == 0) continue;
        open.count += m.count;
        open.sum_inv += m.sum_inv;
        if (open.count >= per_bin) flush();
    }
    flush();

    // Exact normalization: scaling every interval by c keeps the shape
    // lognormal and pins l_blk * sum(1/tau) to the requested throughput.
    const double c = static_cast<double>(sum_inv_total) / target_rate;
    for (auto& b : bins) b.interval_s *= c;

    return AccessProfile(block_size_b, std::move(bins));
}

PsiSplit psi_split(const AccessProfile& profile, double threshold_s) {
    if (threshold_s < 0.0) throw ConfigError("threshold must be >= 0");
    const double blk = static_cast<double>(profile.block_size_b());
    PsiSplit out;
    out.cached_bps = blk * profile.cached_rate(threshold_s);
    out.uncached_bps = blk * profile.total_rate() - out.cached_bps;
    if (out.uncached_bps < 0.0) out.uncached_bps = 0.0;
    return out;
}

double dram_bw_demand(const AccessProfile& profile, double threshold_s) {
    const PsiSplit psi = psi_split(profile, threshold_s);
    return psi.cached_bps + 2.0 * psi.uncached_bps;
}

namespace {

// Smallest bin interval T with metric(T) <= limit, where metric decreases
// as more bins are cached. Returns 0 when caching nothing already fits.
template <typename Metric>
double smallest_threshold(const AccessProfile& profile, Metric metric, double limit) {
    if (metric(-1) <= limit) return 0.0;
    const auto& bins = profile.bins();
    size_t lo = 0, hi = bins.size(); // invariant: metric(hi-ish) satisfies
    while (lo < hi) {
        const size_t mid = lo + (hi - lo) / 2;
        if (metric(static_cast<ptrdiff_t>(mid)) <= limit)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo >= bins.size()) return profile.max_interval_s();
    return bins[lo].interval_s;
}

} // namespace

double threshold_t_b(const AccessProfile& profile, double dram_bandwidth_bps) {
    const double total = profile.total_throughput_bps();
    if (dram_bandwidth_bps < total)
        throw InfeasibleError(
            "DRAM bandwidth below total workload throughput; no caching threshold exists");
    const auto& bins = profile.bins();
    const double blk = static_cast<double>(profile.block_size_b());
    auto demand_after = [&](ptrdiff_t k) {
        // caching bins [0..k] inclusive; k == -1 caches nothing
        const double cached =
            k < 0 ? 0.0 : blk * profile.cached_rate(bins[static_cast<size_t>(k)].interval_s);
        return cached + 2.0 * (total - cached);
    };
    return smallest_threshold(profile, demand_after, dram_bandwidth_bps);
}

double threshold_t_s(const AccessProfile& profile, double usable_iops_per_ssd,
                     uint32_t n_ssd) {
    if (usable_iops_per_ssd <= 0.0) throw ConfigError("usable_iops must be > 0");
    if (n_ssd < 1) throw ConfigError("n_ssd must be >= 1");
    const double blk = static_cast<double>(profile.block_size_b());
    const double ssd_bw = blk * n_ssd * usable_iops_per_ssd;
    const double total = profile.total_throughput_bps();
    const auto& bins = profile.bins();
    auto uncached_after = [&](ptrdiff_t k) {
        const double cached =
            k < 0 ? 0.0 : blk * profile.cached_rate(bins[static_cast<size_t>(k)].interval_s);
        return total - cached;
    };
    return smallest_threshold(profile, uncached_after, ssd_bw);
}

double threshold_t_c(const AccessProfile& profile, double dram_capacity_b) {
    if (dram_capacity_b < 0.0) throw ConfigError("dram_capacity must be >= 0");
    const uint64_t k =
        static_cast<uint64_t>(dram_capacity_b / static_cast<double>(profile.block_size_b()));
    if (k == 0) return 0.0;
    if (k >= profile.n_blocks()) return profile.max_interval_s();
    // bin containing the k-th smallest interval
    uint64_t seen = 0;
    for (const auto& bin : profile.bins()) {
        seen += bin.count;
        if (seen >= k) return bin.interval_s;
    }
    return profile.max_interval_s();
}

void write_profile_csv(const AccessProfile& profile, std::ostream& os) {
    os << "interval_s,block_count\n";
    char buf[64];
    for (const auto& bin : profile.bins()) {
        std::snprintf(buf, sizeof(buf), "%.12g", bin.interval_s);
        os << buf << ',' << bin.count << '\n';
    }
}

AccessProfile read_profile_csv(std::istream& is, uint64_t block_size_b) {
    std::string line;
    std::vector<AccessProfile::Bin> bins;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("interval_s", 0) == 0) continue;
        }
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw ConfigError("malformed profile CSV row: " + line);
        try {
            bins.push_back({std::stod(a), static_cast<uint64_t>(std::stoull(b))});
        } catch (const std::exception&) {
            throw ConfigError("malformed profile CSV row: " + line);
        }
    }
    if (bins.empty()) throw ConfigError("profile CSV contains no bins");
    return AccessProfile(block_size_b, std::move(bins));
}

} // namespace tierline
