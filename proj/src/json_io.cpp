#include "tierline/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace tierline {

using nlohmann::json;

namespace {

template <typename T>
void take(const json& doc, const char* key, T& out) {
    if (doc.contains(key)) out = doc.at(key).get<T>();
}

void take_gb(const json& doc, const char* key, double scale, uint64_t& out) {
    if (doc.contains(key))
        out = static_cast<uint64_t>(doc.at(key).get<double>() * scale);
}

void take_ns(const json& doc, const char* key, double& out) {
    if (doc.contains(key)) out = doc.at(key).get<double>() * 1e-9;
}

} // namespace

SsdConfig apply_ssd_json(const json& doc, SsdConfig base) {
    take_ns(doc, "tau_sense_ns", base.chip.tau_sense_s);
    take_ns(doc, "tau_prog_ns", base.chip.tau_prog_s);
    take(doc, "page_size_b", base.chip.page_size_b);
    take(doc, "n_plane", base.chip.n_plane);
    take_gb(doc, "die_capacity_gb", kGiB, base.chip.die_capacity_b);
    take(doc, "label", base.chip.label);
    take_ns(doc, "tau_cmd_ns", base.channel.tau_cmd_s);
    if (doc.contains("channel_bw_gbps"))
        base.channel.bandwidth_bps = doc.at("channel_bw_gbps").get<double>() * kGB;
    take(doc, "n_channels", base.n_channels);
    take(doc, "dies_per_channel", base.dies_per_channel);
    take(doc, "ftl_entry_bytes", base.ftl_entry_bytes);
    take_gb(doc, "internal_dram_die_gb", kGB, base.internal_dram_die_b);
    take(doc, "cost_ctrl", base.cost_ctrl);
    take(doc, "cost_internal_dram_die", base.cost_internal_dram_die);
    if (doc.contains("iops_mode")) {
        const auto mode = doc.at("iops_mode").get<std::string>();
        if (mode == "scalable")
            base.iops_mode = IopsMode::scalable;
        else if (mode == "flat_at_4k")
            base.iops_mode = IopsMode::flat_at_4k;
        else
            throw ConfigError("iops_mode must be 'scalable' or 'flat_at_4k', got '" +
                              mode + "'");
    }
    base.validate();
    return base;
}

json ssd_to_json(const SsdConfig& ssd) {
    json doc;
    doc["tau_sense_ns"] = ssd.chip.tau_sense_s * 1e9;
    doc["tau_prog_ns"] = ssd.chip.tau_prog_s * 1e9;
    doc["page_size_b"] = ssd.chip.page_size_b;
    doc["n_plane"] = ssd.chip.n_plane;
    doc["die_capacity_gb"] = static_cast<double>(ssd.chip.die_capacity_b) / kGiB;
    doc["label"] = ssd.chip.label;
    doc["tau_cmd_ns"] = ssd.channel.tau_cmd_s * 1e9;
    doc["channel_bw_gbps"] = ssd.channel.bandwidth_bps / kGB;
    doc["n_channels"] = ssd.n_channels;
    doc["dies_per_channel"] = ssd.dies_per_channel;
    doc["ftl_entry_bytes"] = ssd.ftl_entry_bytes;
    doc["internal_dram_die_gb"] = static_cast<double>(ssd.internal_dram_die_b) / kGB;
    doc["cost_ctrl"] = ssd.cost_ctrl;
    doc["cost_internal_dram_die"] = ssd.cost_internal_dram_die;
    doc["iops_mode"] = ssd.iops_mode == IopsMode::scalable ? "scalable" : "flat_at_4k";
    return doc;
}

HostPlatform apply_platform_json(const json& doc, HostPlatform base) {
    take(doc, "cost_core", base.cost_core);
    take(doc, "iops_per_core", base.iops_per_core);
    take(doc, "cost_dram_die", base.cost_dram_die);
    if (doc.contains("dram_die_bandwidth_gbps"))
        base.dram_die_bandwidth_bps =
            doc.at("dram_die_bandwidth_gbps").get<double>() * kGB;
    if (doc.contains("dram_die_capacity_gb"))
        base.dram_die_capacity_b = doc.at("dram_die_capacity_gb").get<double>() * kGB;
    take(doc, "label", base.label);
    base.validate();
    return base;
}

json platform_to_json(const HostPlatform& platform) {
    json doc;
    doc["cost_core"] = platform.cost_core;
    doc["iops_per_core"] = platform.iops_per_core;
    doc["cost_dram_die"] = platform.cost_dram_die;
    doc["dram_die_bandwidth_gbps"] = platform.dram_die_bandwidth_bps / kGB;
    doc["dram_die_capacity_gb"] = platform.dram_die_capacity_b / kGB;
    doc["label"] = platform.label;
    return doc;
}

WorkloadMix apply_mix_json(const json& doc, WorkloadMix base) {
    if (doc.contains("rw_ratio")) {
        const auto& v = doc.at("rw_ratio");
        base.read_write_ratio =
            v.is_string() ? parse_rw_ratio(v.get<std::string>()) : v.get<double>();
    }
    take(doc, "write_amp", base.write_amp);
    take(doc, "block_size_b", base.block_size_b);
    base.validate();
    return base;
}

flashsim::SimConfig apply_sim_json(const json& doc, flashsim::SimConfig base) {
    base.ssd = apply_ssd_json(doc, base.ssd);
    if (doc.contains("workload")) base.mix = apply_mix_json(doc.at("workload"), base.mix);
    if (doc.contains("sim")) {
        const auto& sim = doc.at("sim");
        take(sim, "queue_count", base.queue_count);
        take(sim, "queue_depth", base.queue_depth);
        if (sim.contains("arrival")) {
            const auto& a = sim.at("arrival");
            if (a.is_string() && a.get<std::string>() == "closed_loop") {
                base.arrival = flashsim::ArrivalModel::closed_loop;
            } else if (a.is_object() && a.contains("poisson_rate_iops")) {
                base.arrival = flashsim::ArrivalModel::poisson;
                base.poisson_rate_iops = a.at("poisson_rate_iops").get<double>();
            } else {
                throw ConfigError(
                    "arrival must be \"closed_loop\" or {\"poisson_rate_iops\": x}");
            }
        }
        if (sim.contains("address_space_mb"))
            base.address_space_b = static_cast<uint64_t>(
                sim.at("address_space_mb").get<double>() * kMiB);
        if (sim.contains("gc")) {
            take(sim.at("gc"), "trigger_free_fraction", base.gc.trigger_free_fraction);
            take(sim.at("gc"), "over_provisioning", base.gc.over_provisioning);
        }
        if (sim.contains("ecc")) {
            const auto& e = sim.at("ecc");
            take(e, "bch_fail_prob", base.ecc.bch_fail_prob);
            take_ns(e, "bch_decode_latency_ns", base.ecc.bch_decode_latency_s);
            take_ns(e, "ldpc_base_latency_ns", base.ecc.ldpc_base_latency_s);
            take_ns(e, "ldpc_per_iteration_latency_ns",
                    base.ecc.ldpc_per_iteration_latency_s);
            take(e, "mean_iterations", base.ecc.mean_iterations);
        }
        take(sim, "warmup_s", base.warmup_s);
        take(sim, "duration_s", base.duration_s);
        take(sim, "seed", base.seed);
        take(sim, "pages_per_block", base.pages_per_block);
        if (sim.contains("host_link_gbps"))
            base.host_link_bps = sim.at("host_link_gbps").get<double>() * kGB;
        take(sim, "aging_churn", base.aging_churn);
    }
    base.validate();
    return base;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("cannot parse JSON in '" + path + "': " + e.what());
    }
    return doc;
}

const char* kSimResultCsvHeader =
    "achieved_iops,latency_mean_s,latency_p99_s,channel_utilization,"
    "die_utilization,measured_waf,ecc_escalations,ios_completed";

std::string sim_result_csv_row(const flashsim::SimResult& r) {
    std::string row;
    row += csv_num(r.achieved_iops);
    row += ',';
    row += csv_num(r.latency_mean_s);
    row += ',';
    row += csv_num(r.latency_p99_s);
    row += ',';
    row += csv_num(r.channel_utilization);
    row += ',';
    row += csv_num(r.die_utilization);
    row += ',';
    row += csv_num(r.measured_waf);
    row += ',';
    row += std::to_string(r.ecc_escalations);
    row += ',';
    row += std::to_string(r.ios_completed);
    return row;
}

std::string csv_num(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

} // namespace tierline
