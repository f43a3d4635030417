#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "tierline/case_studies.hpp"
#include "tierline/flashsim/sim.hpp"
#include "tierline/platform_econ.hpp"

namespace tierline {

/// Applies the documented device keys (tau_sense_ns, tau_prog_ns,
/// page_size_b, n_plane, die_capacity_gb, tau_cmd_ns, channel_bw_gbps,
/// n_channels, dies_per_channel, ftl_entry_bytes, internal_dram_die_gb,
/// cost_ctrl, cost_internal_dram_die, iops_mode) onto `base`. Missing keys
/// keep the base value, so presets layer under config files.
/// die_capacity_gb is binary GiB (flash convention); internal_dram_die_gb
/// is decimal GB.
SsdConfig apply_ssd_json(const nlohmann::json& doc, SsdConfig base);
nlohmann::json ssd_to_json(const SsdConfig& ssd);

HostPlatform apply_platform_json(const nlohmann::json& doc, HostPlatform base);
nlohmann::json platform_to_json(const HostPlatform& platform);

WorkloadMix apply_mix_json(const nlohmann::json& doc, WorkloadMix base);

/// Device schema plus an optional "sim" section with simulator knobs.
flashsim::SimConfig apply_sim_json(const nlohmann::json& doc,
                                   flashsim::SimConfig base);

nlohmann::json load_json_file(const std::string& path);

/// One SimResult as a CSV row; column order is part of the tool contract.
extern const char* kSimResultCsvHeader;
std::string sim_result_csv_row(const flashsim::SimResult& result);

/// Deterministic float formatting shared by all CSV writers.
std::string csv_num(double value);

} // namespace tierline
