// tierline: DRAM-vs-flash provisioning and modeling toolkit.
//
// Subcommands: ssd-iops, break-even, feasibility, provision, simulate,
// case-kv, case-ann, reproduce. Every CSV starts with a schema comment
// line "# tierline-csv v1 <subject>". Exit codes: 0 success, 1 input
// error, 2 infeasible model.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "tierline/access_profile.hpp"
#include "tierline/case_studies.hpp"
#include "tierline/flashsim/sim.hpp"
#include "tierline/json_io.hpp"
#include "tierline/provisioner.hpp"

using namespace tierline;

namespace {

struct OutputSink {
    std::ofstream file;
    std::ostream* os = &std::cout;

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw ConfigError("cannot open output file '" + path + "'");
        os = &file;
    }
    std::ostream& stream() { return *os; }
};

void csv_header(std::ostream& os, const std::string& subject,
                const std::string& columns) {
    os << "# tierline-csv v1 " << subject << "\n" << columns << "\n";
}

struct DeviceArgs {
    std::string preset = "slc";
    std::string config_path;
    bool normal = false;
    std::string rw = "90:10";
    double waf = 3.0;
    uint64_t block = 512;

    void add_to(CLI::App* cmd, bool with_mix = true) {
        cmd->add_option("--ssd", preset, "device preset: slc, pslc, tlc")
            ->capture_default_str();
        cmd->add_option("--config", config_path, "JSON device/sim config file");
        cmd->add_flag("--normal", normal,
                      "Normal-SSD baseline (flat IOPS at or below 4KB)");
        if (with_mix) {
            cmd->add_option("--rw", rw, "read:write ratio, e.g. 90:10 or inf")
                ->capture_default_str();
            cmd->add_option("--waf", waf, "write amplification factor")
                ->capture_default_str();
            cmd->add_option("--block", block, "access block size in bytes")
                ->capture_default_str();
        }
    }

    SsdConfig ssd() const {
        SsdConfig dev = ssd_preset(preset);
        if (!config_path.empty())
            dev = apply_ssd_json(load_json_file(config_path), dev);
        if (normal) dev.iops_mode = IopsMode::flat_at_4k;
        return dev;
    }

    WorkloadMix mix(uint64_t block_override = 0) const {
        WorkloadMix m;
        m.read_write_ratio = parse_rw_ratio(rw);
        m.write_amp = waf;
        m.block_size_b = block_override ? block_override : block;
        m.validate();
        return m;
    }

    std::string kind() const { return normal ? "normal" : "storage-next"; }
};

double platform_default_budget(const std::string& name) {
    return name == "gpu-gddr" ? 400e6 : 100e6;
}

double platform_default_dram_bw(const std::string& name) {
    return name == "gpu-gddr" ? 640e9 : 540e9;
}

// --- subcommand bodies ----------------------------------------------------

int cmd_ssd_iops(const DeviceArgs& dev, const std::vector<uint64_t>& blocks,
                 OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "ssd_iops",
               "ssd,iops_mode,rw_ratio,write_amp,block_size_b,peak_iops");
    const auto ssd = dev.ssd();
    const auto list = blocks.empty() ? std::vector<uint64_t>{dev.block} : blocks;
    for (const auto blk : list) {
        const auto mix = dev.mix(blk);
        os << dev.preset << ',' << (dev.normal ? "flat_at_4k" : "scalable") << ','
           << dev.rw << ',' << csv_num(dev.waf) << ',' << blk << ','
           << csv_num(ssd_peak_iops(ssd, mix)) << '\n';
    }
    return 0;
}

struct FeasibilityArgs {
    std::string tier;
    double tail_us = 0.0;
    double tail_pct = 0.99;
    double mean_us = 0.0;
    double host_budget = INFINITY;
    uint32_t n_ssd = 4;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--tier", tier, "latency tier preset: tier70..tier99");
        cmd->add_option("--tail-us", tail_us, "99th-pct tail latency target (us)");
        cmd->add_option("--tail-pct", tail_pct, "tail percentile")
            ->capture_default_str();
        cmd->add_option("--mean-us", mean_us, "mean latency target (us)");
        cmd->add_option("--host-budget", host_budget,
                        "aggregate host IOPS budget (IOPS)");
        cmd->add_option("--n-ssd", n_ssd, "SSDs behind the host")
            ->capture_default_str();
    }

    LatencyTargets targets(uint64_t block) const {
        if (!tier.empty()) return latency_tier_preset(tier, block);
        LatencyTargets t;
        t.tail_percentile = tail_pct;
        if (tail_us > 0.0) t.tail_target_s = tail_us * 1e-6;
        if (mean_us > 0.0) t.mean_target_s = mean_us * 1e-6;
        return t;
    }
};

int cmd_feasibility(const DeviceArgs& dev, const FeasibilityArgs& fa,
                    OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "feasibility",
               "ssd,block_size_b,peak_iops,rho_max,usable_iops_per_ssd,limiter");
    const auto ssd = dev.ssd();
    const auto mix = dev.mix();
    const double peak = ssd_peak_iops(ssd, mix);
    const double rho = solve_rho_max(peak, ssd.n_channels, ssd.chip.tau_sense_s,
                                     fa.targets(mix.block_size_b));
    const auto usable = usable_ssd_iops(rho, peak, fa.host_budget, fa.n_ssd);
    os << dev.preset << ',' << mix.block_size_b << ',' << csv_num(peak) << ','
       << csv_num(usable.rho_max) << ',' << csv_num(usable.usable_iops_per_ssd)
       << ',' << to_string(usable.limiter) << '\n';
    return 0;
}

int cmd_break_even(const DeviceArgs& dev, const FeasibilityArgs& fa,
                   const std::string& platform_name,
                   const std::string& platform_config, double usable_override,
                   OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "break_even",
               "platform,ssd,iops_mode,block_size_b,usable_iops,"
               "processor_s,dram_s,ssd_s,total_s");
    auto platform = platform_preset(platform_name);
    if (!platform_config.empty())
        platform = apply_platform_json(load_json_file(platform_config), platform);
    const auto ssd = dev.ssd();
    const auto mix = dev.mix();
    double usable = usable_override;
    if (usable <= 0.0) {
        const double peak = ssd_peak_iops(ssd, mix);
        const double rho = solve_rho_max(peak, ssd.n_channels, ssd.chip.tau_sense_s,
                                         fa.targets(mix.block_size_b));
        usable = usable_ssd_iops(rho, peak, fa.host_budget, fa.n_ssd)
                     .usable_iops_per_ssd;
    }
    const auto be = break_even(platform, ssd, mix, usable);
    os << platform_name << ',' << dev.preset << ',' << dev.kind() << ','
       << mix.block_size_b << ',' << csv_num(usable) << ','
       << csv_num(be.processor_term_s) << ',' << csv_num(be.dram_term_s) << ','
       << csv_num(be.ssd_term_s) << ',' << csv_num(be.total_s) << '\n';
    return 0;
}

struct ProfileArgs {
    std::string path;
    uint64_t gen_blocks = 1'000'000;
    double gen_sigma = 0.4;
    double gen_throughput_gbps = 0.2;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--profile", path,
                        "access profile CSV (interval_s,block_count)");
        cmd->add_option("--gen-blocks", gen_blocks,
                        "generate: number of blocks")->capture_default_str();
        cmd->add_option("--gen-sigma", gen_sigma, "generate: lognormal sigma")
            ->capture_default_str();
        cmd->add_option("--gen-throughput-gbps", gen_throughput_gbps,
                        "generate: total access throughput (GB/s)")
            ->capture_default_str();
    }

    AccessProfile load(uint64_t block, uint64_t seed) const {
        if (!path.empty()) {
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot open profile '" + path + "'");
            return read_profile_csv(in, block);
        }
        return lognormal_profile(gen_blocks, gen_sigma, gen_throughput_gbps * kGB,
                                 block, seed);
    }
};

int cmd_provision(const DeviceArgs& dev, const FeasibilityArgs& fa,
                  const ProfileArgs& pa, const std::string& platform_name,
                  double dram_bw_gbps, double dram_cap_gb, double scale,
                  uint64_t seed, OutputSink& out) {
    const auto profile = pa.load(dev.block, seed);
    ProvisionInputs in;
    in.platform = platform_preset(platform_name);
    in.ssd = dev.ssd();
    in.mix = dev.mix();
    in.targets = fa.targets(dev.block);
    in.host_budget_iops = fa.host_budget;
    in.n_ssd = fa.n_ssd;
    in.dram_bandwidth_bps =
        (dram_bw_gbps > 0.0 ? dram_bw_gbps : platform_default_dram_bw(platform_name) / kGB) *
        kGB;
    if (dram_cap_gb > 0.0) in.dram_capacity_b = dram_cap_gb * kGB;
    in.resource_scale = scale;
    const auto rep = provision(profile, in);

    auto& os = out.stream();
    csv_header(os, "provision",
               "platform,ssd,block_size_b,t_b_s,t_s_s,t_c_s,t_v_s,t_o_s,"
               "break_even_s,usable_iops_per_ssd,min_dram_viable_gb,"
               "min_dram_optimal_gb,bw_cached_viable_gbps,bw_miss_viable_gbps,"
               "bw_cached_optimal_gbps,bw_miss_optimal_gbps,verdict");
    os << platform_name << ',' << dev.preset << ',' << dev.block << ','
       << csv_num(rep.t_b_s) << ',' << csv_num(rep.t_s_s) << ','
       << (rep.t_c_s ? csv_num(*rep.t_c_s) : "") << ',' << csv_num(rep.t_v_s) << ','
       << csv_num(rep.t_o_s) << ',' << csv_num(rep.break_even_s) << ','
       << csv_num(rep.usable_iops_per_ssd) << ','
       << csv_num(rep.min_dram_viable_b / kGB) << ','
       << csv_num(rep.min_dram_optimal_b / kGB) << ','
       << csv_num(rep.bw_at_viable.cached_bps / kGB) << ','
       << csv_num(rep.bw_at_viable.miss_path_bps / kGB) << ','
       << csv_num(rep.bw_at_optimal.cached_bps / kGB) << ','
       << csv_num(rep.bw_at_optimal.miss_path_bps / kGB) << ','
       << to_string(rep.verdict) << '\n';
    std::cerr << describe(rep, profile);
    return 0;
}

flashsim::SimConfig sim_config_from(const DeviceArgs& dev, double duration,
                                    double warmup, const std::string& queues,
                                    double span_mb, double pbch, uint64_t seed) {
    flashsim::SimConfig cfg;
    cfg.ssd = dev.ssd();
    cfg.mix = dev.mix();
    if (!dev.config_path.empty())
        cfg = apply_sim_json(load_json_file(dev.config_path), cfg);
    if (duration > 0.0) cfg.duration_s = duration;
    if (warmup >= 0.0) cfg.warmup_s = warmup;
    if (!queues.empty()) {
        const auto x = queues.find('x');
        if (x == std::string::npos)
            throw ConfigError("--queues expects COUNTxDEPTH, e.g. 64x16");
        cfg.queue_count = static_cast<uint32_t>(std::stoul(queues.substr(0, x)));
        cfg.queue_depth = static_cast<uint32_t>(std::stoul(queues.substr(x + 1)));
    }
    if (span_mb > 0.0) cfg.address_space_b = static_cast<uint64_t>(span_mb * kMiB);
    if (pbch >= 0.0) cfg.ecc.bch_fail_prob = pbch;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

int cmd_simulate(const DeviceArgs& dev, double duration, double warmup,
                 const std::string& queues, double span_mb, double pbch,
                 uint64_t seed, const std::string& latency_csv, OutputSink& out) {
    const auto cfg =
        sim_config_from(dev, duration, warmup, queues, span_mb, pbch, seed);
    flashsim::LatencyPercentiles pct;
    const auto res = flashsim::run_sim_with_percentiles(
        cfg, latency_csv.empty() ? nullptr : &pct);
    auto& os = out.stream();
    csv_header(os, "simulate", kSimResultCsvHeader);
    os << sim_result_csv_row(res) << '\n';
    if (!latency_csv.empty()) {
        std::ofstream lat(latency_csv);
        if (!lat) throw ConfigError("cannot open '" + latency_csv + "'");
        csv_header(lat, "sim_latency_percentiles", "percentile,latency_s");
        for (int p = 1; p <= 100; ++p)
            lat << p << ',' << csv_num(pct.percentile_s[p]) << '\n';
    }
    return 0;
}

const char* kCaseColumns =
    "dram_capacity_gb,platform,ssd_kind,ratio_or_shape,throughput,bottleneck";

int cmd_case_kv(const DeviceArgs& dev, const std::string& platform_name,
                const std::string& get_put, double sigma,
                std::vector<double> dram_gb, uint32_t n_ssd, double host_budget,
                double dram_bw_gbps, double util_cap, uint64_t seed,
                OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "case_kv", kCaseColumns);
    if (dram_gb.empty()) dram_gb = {64, 128, 256, 512, 1024};
    KvConfig cfg;
    cfg.platform = platform_preset(platform_name);
    cfg.ssd = dev.ssd();
    cfg.bucket_block_b = dev.normal ? 4096 : 512;
    cfg.get_put_ratio = parse_rw_ratio(get_put);
    cfg.locality_sigma = sigma;
    cfg.n_ssd = n_ssd;
    cfg.ssd_util_cap = util_cap;
    cfg.host_budget_iops =
        host_budget > 0.0 ? host_budget : platform_default_budget(platform_name);
    cfg.dram_bandwidth_bps =
        (dram_bw_gbps > 0.0 ? dram_bw_gbps
                            : platform_default_dram_bw(platform_name) / kGB) * kGB;
    cfg.seed = seed;
    const std::string shape = get_put + "/sigma=" + csv_num(sigma);
    for (const double gb : dram_gb) {
        cfg.dram_capacity_b = gb * kGB;
        const auto r = kv_throughput(cfg);
        os << csv_num(gb) << ',' << platform_name << ',' << dev.kind() << ','
           << shape << ',' << csv_num(r.throughput) << ','
           << to_string(r.bottleneck) << '\n';
    }
    return 0;
}

int cmd_case_ann(const DeviceArgs& dev, const std::string& platform_name,
                 double full_kb, std::vector<double> dram_gb, double vr,
                 uint32_t n_ssd, double host_budget, double dram_bw_gbps,
                 double util_cap, uint64_t seed, OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "case_ann", kCaseColumns);
    if (dram_gb.empty()) dram_gb = {32, 64, 128, 256, 384, 512};
    AnnConfig cfg;
    cfg.platform = platform_preset(platform_name);
    cfg.ssd = dev.ssd();
    cfg.full_size_b = static_cast<uint64_t>(full_kb * 1024.0);
    switch (static_cast<int>(full_kb)) {
        case 2: cfg.promotion_fraction = 0.05; break;
        case 4: cfg.promotion_fraction = 0.10; break;
        case 6: cfg.promotion_fraction = 0.15; break;
        case 8: cfg.promotion_fraction = 0.20; break;
        default:
            throw ConfigError("--full-kb must be one of 2, 4, 6, 8");
    }
    if (vr > 0.0) cfg.reduced_reads_per_query = vr;
    cfg.n_ssd = n_ssd;
    cfg.ssd_util_cap = util_cap;
    cfg.host_budget_iops =
        host_budget > 0.0 ? host_budget : platform_default_budget(platform_name);
    cfg.dram_bandwidth_bps =
        (dram_bw_gbps > 0.0 ? dram_bw_gbps
                            : platform_default_dram_bw(platform_name) / kGB) * kGB;
    cfg.seed = seed;
    std::ostringstream shape;
    shape << "512B->" << full_kb << "KB";
    for (const double gb : dram_gb) {
        cfg.dram_capacity_b = gb * kGB;
        const auto r = ann_throughput(cfg);
        os << csv_num(gb) << ',' << platform_name << ',' << dev.kind() << ','
           << shape.str() << ',' << csv_num(r.throughput) << ','
           << to_string(r.bottleneck) << '\n';
    }
    return 0;
}

// --- reproduce: preset sweeps behind the published figures -----------------

int reproduce_fig3(OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "ssd_iops",
               "ssd,iops_mode,rw_ratio,write_amp,block_size_b,peak_iops");
    for (const char* name : {"slc", "pslc", "tlc"}) {
        const auto ssd = ssd_preset(name);
        for (uint64_t blk : {512, 1024, 2048, 4096}) {
            os << name << ",scalable,90:10,3," << blk << ','
               << csv_num(ssd_peak_iops(ssd, {9.0, 3.0, blk})) << '\n';
        }
    }
    return 0;
}

int reproduce_fig4(OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "break_even",
               "platform,ssd,iops_mode,block_size_b,usable_iops,"
               "processor_s,dram_s,ssd_s,total_s");
    for (const char* pl : {"cpu-ddr", "gpu-gddr"}) {
        const auto platform = platform_preset(pl);
        for (const char* name : {"slc", "pslc", "tlc"}) {
            for (const bool normal : {false, true}) {
                auto ssd = ssd_preset(name);
                if (normal) ssd.iops_mode = IopsMode::flat_at_4k;
                for (uint64_t blk : {512, 1024, 2048, 4096}) {
                    const WorkloadMix mix{9.0, 3.0, blk};
                    const double peak = ssd_peak_iops(ssd, mix);
                    const auto be = break_even(platform, ssd, mix, peak);
                    os << pl << ',' << name << ','
                       << (normal ? "normal" : "storage-next") << ',' << blk << ','
                       << csv_num(peak) << ',' << csv_num(be.processor_term_s) << ','
                       << csv_num(be.dram_term_s) << ',' << csv_num(be.ssd_term_s)
                       << ',' << csv_num(be.total_s) << '\n';
                }
            }
        }
    }
    return 0;
}

int reproduce_fig5(char variant, OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "break_even_feasibility",
               "platform,block_size_b,host_budget_iops,tier,rho_max,"
               "usable_iops_per_ssd,limiter,total_s");
    const auto ssd = ssd_preset("slc");
    const bool gpu = variant == 'b' || variant == 'd';
    const auto platform = platform_preset(gpu ? "gpu-gddr" : "cpu-ddr");
    const char* pl = gpu ? "gpu-gddr" : "cpu-ddr";
    const bool budget_sweep = variant == 'a' || variant == 'b';
    const std::vector<double> budgets =
        gpu ? std::vector<double>{160e6, 240e6, 320e6, 400e6}
            : std::vector<double>{40e6, 60e6, 80e6, 100e6};
    const std::vector<std::string> tiers = {"tier70", "tier80", "tier90", "tier99"};

    for (uint64_t blk : {512, 1024, 2048, 4096}) {
        const WorkloadMix mix{9.0, 3.0, blk};
        const double peak = ssd_peak_iops(ssd, mix);
        auto emit = [&](double budget, const std::string& tier) {
            const double rho =
                tier.empty() ? 1.0
                             : solve_rho_max(peak, ssd.n_channels,
                                             ssd.chip.tau_sense_s,
                                             latency_tier_preset(tier, blk));
            const auto usable = usable_ssd_iops(rho, peak, budget, 4);
            const auto be =
                break_even(platform, ssd, mix, usable.usable_iops_per_ssd);
            os << pl << ',' << blk << ',' << csv_num(budget) << ','
               << (tier.empty() ? "none" : tier) << ',' << csv_num(usable.rho_max)
               << ',' << csv_num(usable.usable_iops_per_ssd) << ','
               << to_string(usable.limiter) << ',' << csv_num(be.total_s) << '\n';
        };
        if (budget_sweep) {
            for (const double b : budgets) emit(b, "");
        } else {
            for (const auto& tier : tiers) emit(gpu ? 400e6 : 100e6, tier);
        }
    }
    return 0;
}

int reproduce_fig7(uint64_t seed, OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "provision_study",
               "platform,ssd_kind,block_size_b,c_viable_gb,c_optimal_gb,"
               "bw_cached_viable_gbps,bw_miss_viable_gbps,"
               "bw_cached_optimal_gbps,bw_miss_optimal_gbps");
    // scaled replay of the 1e9-block / 200 GB/s study at 1e6 blocks
    constexpr double kScale = 1e-3;
    for (const char* pl : {"cpu-ddr", "gpu-gddr"}) {
        const bool gpu = std::string(pl) == "gpu-gddr";
        for (const bool normal : {false, true}) {
            for (uint64_t blk : {512, 1024, 2048, 4096}) {
                const auto profile =
                    lognormal_profile(1'000'000, 0.4, 200e9 * kScale, blk, seed);
                ProvisionInputs in;
                in.platform = platform_preset(pl);
                in.ssd = ssd_preset("slc");
                if (normal) in.ssd.iops_mode = IopsMode::flat_at_4k;
                in.mix = {9.0, 3.0, blk};
                in.targets = latency_tier_preset("tier90", blk);
                in.host_budget_iops = gpu ? 400e6 : 100e6;
                in.n_ssd = 4;
                in.dram_bandwidth_bps = (gpu ? 640e9 : 540e9) * kScale;
                in.resource_scale = kScale;
                const auto rep = provision(profile, in);
                // report at workload scale (undo the desk-scale factor)
                os << pl << ',' << (normal ? "normal" : "storage-next") << ','
                   << blk << ',' << csv_num(rep.min_dram_viable_b / kScale / kGB)
                   << ',' << csv_num(rep.min_dram_optimal_b / kScale / kGB) << ','
                   << csv_num(rep.bw_at_viable.cached_bps / kScale / kGB) << ','
                   << csv_num(rep.bw_at_viable.miss_path_bps / kScale / kGB) << ','
                   << csv_num(rep.bw_at_optimal.cached_bps / kScale / kGB) << ','
                   << csv_num(rep.bw_at_optimal.miss_path_bps / kScale / kGB)
                   << '\n';
            }
        }
    }
    return 0;
}

flashsim::SimConfig fig8_base(uint64_t seed) {
    flashsim::SimConfig cfg;
    cfg.ssd = ssd_preset("slc");
    cfg.mix = {9.0, 3.0, 512};
    cfg.seed = seed;
    cfg.duration_s = 0.04;
    return cfg;
}

int reproduce_fig8(char variant, uint64_t seed, OutputSink& out) {
    auto& os = out.stream();
    switch (variant) {
        case 'a': {
            csv_header(os, "sim_vs_model", "block_size_b,model_iops,sim_iops,ratio");
            for (uint64_t blk : {512, 1024, 2048, 4096}) {
                auto cfg = fig8_base(seed);
                cfg.mix.block_size_b = blk;
                const auto cmp = flashsim::validate_against_model(cfg);
                os << blk << ',' << csv_num(cmp.model_peak_iops) << ','
                   << csv_num(cmp.sim_iops) << ',' << csv_num(cmp.ratio) << '\n';
            }
            return 0;
        }
        case 'b': {
            csv_header(os, "sim_rw_sweep", "rw_ratio,achieved_iops,measured_waf");
            for (const char* rw : {"100:0", "90:10", "70:30", "50:50"}) {
                auto cfg = fig8_base(seed);
                cfg.mix.read_write_ratio = parse_rw_ratio(rw);
                if (cfg.mix.read_write_ratio < 3.0) cfg.duration_s = 0.08;
                const auto r = flashsim::run_sim(cfg);
                os << rw << ',' << csv_num(r.achieved_iops) << ','
                   << csv_num(r.measured_waf) << '\n';
            }
            return 0;
        }
        case 'c': {
            csv_header(os, "sim_bw_sweep", "channel_bw_gbps,achieved_iops");
            for (const double bw : {3.6, 4.8, 5.6}) {
                auto cfg = fig8_base(seed);
                cfg.ssd.channel.bandwidth_bps = bw * kGB;
                const auto r = flashsim::run_sim(cfg);
                os << csv_num(bw) << ',' << csv_num(r.achieved_iops) << '\n';
            }
            return 0;
        }
        case 'd': {
            csv_header(os, "sim_ecc_sweep",
                       "bch_fail_prob,achieved_iops,ecc_escalations");
            for (const double p : {0.0, 0.001, 0.01, 0.05, 0.1, 0.5, 1.0}) {
                auto cfg = fig8_base(seed);
                cfg.mix.read_write_ratio = INFINITY;
                cfg.ecc.bch_fail_prob = p;
                const auto r = flashsim::run_sim(cfg);
                os << csv_num(p) << ',' << csv_num(r.achieved_iops) << ','
                   << r.ecc_escalations << '\n';
            }
            return 0;
        }
        default:
            throw ConfigError("fig8 variants: fig8a, fig8b, fig8c, fig8d");
    }
}

int reproduce_fig9(uint64_t seed, OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "case_kv", kCaseColumns);
    for (const char* pl : {"cpu-ddr", "gpu-gddr"}) {
        for (const bool normal : {false, true}) {
            for (const char* mix : {"100:0", "90:10", "70:30", "50:50"}) {
                for (const double sigma : {1.2, 0.4}) {
                    KvConfig cfg;
                    cfg.platform = platform_preset(pl);
                    cfg.ssd = ssd_preset("slc");
                    if (normal) cfg.ssd.iops_mode = IopsMode::flat_at_4k;
                    cfg.bucket_block_b = normal ? 4096 : 512;
                    cfg.get_put_ratio = parse_rw_ratio(mix);
                    cfg.locality_sigma = sigma;
                    cfg.host_budget_iops = platform_default_budget(pl);
                    cfg.dram_bandwidth_bps = platform_default_dram_bw(pl);
                    cfg.seed = seed;
                    const std::string shape =
                        std::string(mix) + "/sigma=" + csv_num(sigma);
                    for (const double gb : {64.0, 128.0, 256.0, 512.0, 1024.0}) {
                        cfg.dram_capacity_b = gb * kGB;
                        const auto r = kv_throughput(cfg);
                        os << csv_num(gb) << ',' << pl << ','
                           << (normal ? "normal" : "storage-next") << ',' << shape
                           << ',' << csv_num(r.throughput) << ','
                           << to_string(r.bottleneck) << '\n';
                    }
                }
            }
        }
    }
    return 0;
}

int reproduce_fig10(uint64_t seed, OutputSink& out) {
    auto& os = out.stream();
    csv_header(os, "case_ann", kCaseColumns);
    const double promotions[] = {0.05, 0.10, 0.15, 0.20};
    const double full_kb[] = {2, 4, 6, 8};
    for (const char* pl : {"cpu-ddr", "gpu-gddr"}) {
        for (const bool normal : {false, true}) {
            for (int i = 0; i < 4; ++i) {
                AnnConfig cfg;
                cfg.platform = platform_preset(pl);
                cfg.ssd = ssd_preset("slc");
                if (normal) cfg.ssd.iops_mode = IopsMode::flat_at_4k;
                cfg.full_size_b = static_cast<uint64_t>(full_kb[i] * 1024);
                cfg.promotion_fraction = promotions[i];
                cfg.host_budget_iops = platform_default_budget(pl);
                cfg.dram_bandwidth_bps = platform_default_dram_bw(pl);
                cfg.seed = seed;
                std::ostringstream shape;
                shape << "512B->" << full_kb[i] << "KB";
                for (const double gb : {32.0, 64.0, 128.0, 256.0, 384.0, 512.0}) {
                    cfg.dram_capacity_b = gb * kGB;
                    const auto r = ann_throughput(cfg);
                    os << csv_num(gb) << ',' << pl << ','
                       << (normal ? "normal" : "storage-next") << ',' << shape.str()
                       << ',' << csv_num(r.throughput) << ','
                       << to_string(r.bottleneck) << '\n';
                }
            }
        }
    }
    return 0;
}

int cmd_reproduce(const std::string& fig, uint64_t seed, OutputSink& out) {
    if (fig == "fig3") return reproduce_fig3(out);
    if (fig == "fig4") return reproduce_fig4(out);
    if (fig == "fig5a" || fig == "fig5b" || fig == "fig5c" || fig == "fig5d")
        return reproduce_fig5(fig.back(), out);
    if (fig == "fig7") return reproduce_fig7(seed, out);
    if (fig == "fig8a" || fig == "fig8b" || fig == "fig8c" || fig == "fig8d")
        return reproduce_fig8(fig.back(), seed, out);
    if (fig == "fig9") return reproduce_fig9(seed, out);
    if (fig == "fig10") return reproduce_fig10(seed, out);
    throw ConfigError("unknown preset '" + fig +
                      "' (fig3, fig4, fig5a-d, fig7, fig8a-d, fig9, fig10)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tierline: DRAM-vs-flash provisioning and modeling toolkit"};
    app.require_subcommand(1);

    uint64_t seed = 42;
    std::string output;
    app.add_option("--seed", seed, "seed for all randomness")->capture_default_str();
    app.add_option("-o,--output", output, "output CSV path (default stdout)");

    // ssd-iops
    auto* iops_cmd = app.add_subcommand("ssd-iops", "peak SSD IOPS from the device model");
    DeviceArgs iops_dev;
    iops_dev.add_to(iops_cmd);
    std::vector<uint64_t> iops_blocks;
    iops_cmd->add_option("--blocks", iops_blocks, "sweep these block sizes");

    // break-even
    auto* be_cmd = app.add_subcommand("break-even", "calibrated break-even interval");
    DeviceArgs be_dev;
    be_dev.add_to(be_cmd);
    FeasibilityArgs be_fa;
    be_fa.add_to(be_cmd);
    std::string be_platform = "cpu-ddr", be_platform_config;
    double be_usable = 0.0;
    be_cmd->add_option("--platform", be_platform, "cpu-ddr or gpu-gddr")
        ->capture_default_str();
    be_cmd->add_option("--platform-config", be_platform_config, "platform JSON file");
    be_cmd->add_option("--usable-iops", be_usable,
                       "override usable IOPS per SSD (default: derive)");

    // feasibility
    auto* fe_cmd = app.add_subcommand("feasibility", "usable IOPS under latency targets");
    DeviceArgs fe_dev;
    fe_dev.add_to(fe_cmd);
    FeasibilityArgs fe_fa;
    fe_fa.add_to(fe_cmd);

    // provision
    auto* pr_cmd = app.add_subcommand("provision", "workload-aware viability analysis");
    DeviceArgs pr_dev;
    pr_dev.add_to(pr_cmd);
    FeasibilityArgs pr_fa;
    pr_fa.add_to(pr_cmd);
    ProfileArgs pr_prof;
    pr_prof.add_to(pr_cmd);
    std::string pr_platform = "cpu-ddr";
    double pr_dram_bw = 0.0, pr_dram_cap = 0.0, pr_scale = 1.0;
    pr_cmd->add_option("--platform", pr_platform)->capture_default_str();
    pr_cmd->add_option("--dram-bw-gbps", pr_dram_bw,
                       "system DRAM bandwidth (default: platform study value)");
    pr_cmd->add_option("--dram-cap-gb", pr_dram_cap, "installed DRAM capacity");
    pr_cmd->add_option("--scale", pr_scale,
                       "resource scale for desk-size replays of large workloads")
        ->capture_default_str();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "discrete-event flash simulator");
    DeviceArgs sim_dev;
    sim_dev.add_to(sim_cmd);
    double sim_duration = 0.0, sim_warmup = -1.0, sim_span = 0.0, sim_pbch = -1.0;
    std::string sim_queues, sim_latency_csv;
    sim_cmd->add_option("--duration", sim_duration, "measurement window (s)");
    sim_cmd->add_option("--warmup", sim_warmup, "warmup before measuring (s)");
    sim_cmd->add_option("--queues", sim_queues, "host queues as COUNTxDEPTH");
    sim_cmd->add_option("--span-mb", sim_span, "simulated address space (MiB)");
    sim_cmd->add_option("--pbch", sim_pbch, "BCH sector failure probability");
    sim_cmd->add_option("--latency-csv", sim_latency_csv,
                        "also write per-percentile latency CSV");

    // case-kv
    auto* kv_cmd = app.add_subcommand("case-kv", "SSD-resident KV store throughput model");
    DeviceArgs kv_dev;
    kv_dev.add_to(kv_cmd, false);
    std::string kv_platform = "gpu-gddr", kv_mix = "100:0";
    double kv_sigma = 1.2, kv_budget = 0.0, kv_bw = 0.0, kv_cap = 0.7;
    std::vector<double> kv_dram;
    uint32_t kv_n_ssd = 4;
    kv_cmd->add_option("--platform", kv_platform)->capture_default_str();
    kv_cmd->add_option("--get-put", kv_mix, "GET:PUT ratio")->capture_default_str();
    kv_cmd->add_option("--sigma", kv_sigma, "locality (1.2 strong, 0.4 weak)")
        ->capture_default_str();
    kv_cmd->add_option("--dram-gb", kv_dram, "DRAM capacities to sweep (GB)");
    kv_cmd->add_option("--n-ssd", kv_n_ssd)->capture_default_str();
    kv_cmd->add_option("--host-budget", kv_budget, "host IOPS budget");
    kv_cmd->add_option("--dram-bw-gbps", kv_bw, "host DRAM bandwidth");
    kv_cmd->add_option("--util-cap", kv_cap, "SSD utilization cap")
        ->capture_default_str();

    // case-ann
    auto* ann_cmd = app.add_subcommand("case-ann", "two-stage ANN search throughput model");
    DeviceArgs ann_dev;
    ann_dev.add_to(ann_cmd, false);
    std::string ann_platform = "gpu-gddr";
    double ann_full_kb = 2.0, ann_vr = 0.0, ann_budget = 0.0, ann_bw = 0.0;
    double ann_cap = 1.0;
    std::vector<double> ann_dram;
    uint32_t ann_n_ssd = 4;
    ann_cmd->add_option("--platform", ann_platform)->capture_default_str();
    ann_cmd->add_option("--full-kb", ann_full_kb, "full vector size: 2, 4, 6, 8")
        ->capture_default_str();
    ann_cmd->add_option("--dram-gb", ann_dram, "DRAM capacities to sweep (GB)");
    ann_cmd->add_option("--vr", ann_vr, "reduced reads per query (calibration)");
    ann_cmd->add_option("--n-ssd", ann_n_ssd)->capture_default_str();
    ann_cmd->add_option("--host-budget", ann_budget, "host IOPS budget");
    ann_cmd->add_option("--dram-bw-gbps", ann_bw, "host DRAM bandwidth");
    ann_cmd->add_option("--util-cap", ann_cap, "SSD utilization cap")
        ->capture_default_str();

    // reproduce
    auto* rep_cmd = app.add_subcommand("reproduce", "preset sweeps for the study figures");
    std::string rep_fig;
    rep_cmd->add_option("figure", rep_fig, "fig3, fig4, fig5a-d, fig7, fig8a-d, fig9, fig10")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        OutputSink out;
        out.open(output);
        if (iops_cmd->parsed()) return cmd_ssd_iops(iops_dev, iops_blocks, out);
        if (be_cmd->parsed())
            return cmd_break_even(be_dev, be_fa, be_platform, be_platform_config,
                                  be_usable, out);
        if (fe_cmd->parsed()) return cmd_feasibility(fe_dev, fe_fa, out);
        if (pr_cmd->parsed())
            return cmd_provision(pr_dev, pr_fa, pr_prof, pr_platform, pr_dram_bw,
                                 pr_dram_cap, pr_scale, seed, out);
        if (sim_cmd->parsed())
            return cmd_simulate(sim_dev, sim_duration, sim_warmup, sim_queues,
                                sim_span, sim_pbch, seed, sim_latency_csv, out);
        if (kv_cmd->parsed())
            return cmd_case_kv(kv_dev, kv_platform, kv_mix, kv_sigma, kv_dram,
                               kv_n_ssd, kv_budget, kv_bw, kv_cap, seed, out);
        if (ann_cmd->parsed())
            return cmd_case_ann(ann_dev, ann_platform, ann_full_kb, ann_dram,
                                ann_vr, ann_n_ssd, ann_budget, ann_bw, ann_cap,
                                seed, out);
        if (rep_cmd->parsed()) return cmd_reproduce(rep_fig, seed, out);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
