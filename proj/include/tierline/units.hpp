#pragma once

#include <cstdint>

namespace tierline {

// Byte-size conversions. NAND die capacities follow flash convention and are
// quoted in binary GiB; DRAM capacities and all bandwidths are decimal.
inline constexpr double kKB = 1e3;
inline constexpr double kMB = 1e6;
inline constexpr double kGB = 1e9;
inline constexpr double kKiB = 1024.0;
inline constexpr double kMiB = 1024.0 * 1024.0;
inline constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;

inline constexpr double kNs = 1e-9;
inline constexpr double kUs = 1e-6;
inline constexpr double kMs = 1e-3;

/// FTL mapping granularity assumed by the cost model (bytes).
inline constexpr double kMinAccessGranularity = 512.0;

} // namespace tierline
