#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "freefront/solver.hpp"

namespace freefront {

/// Writes to a sibling temp file, then renames over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// "%.17g"; non-finite values print as nan / inf.
std::string format_number(double v);

/// Columns t, g, h, g_dot, h_dot, sup_u, probe_v; one row per recorded step.
std::string fronts_csv(const SimulationResult& result);

/// Columns x, u, v on the line grid; u is zero outside the habitat.
std::string snapshot_csv(const SimulationResult& result, const Snapshot& snap);

/// fronts.csv plus snapshots/NNNN.csv under dir.
void write_simulation_csv(const std::filesystem::path& dir, const SimulationResult& result,
                          bool with_snapshots = true);

}  // namespace freefront
