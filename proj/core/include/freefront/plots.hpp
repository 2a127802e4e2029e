#pragma once

#include <filesystem>
#include <vector>

namespace freefront {

/// Renders SVGs under dir/plots from the artifacts already in dir.
/// A run directory (fronts.csv, summary.json, snapshots/) yields fronts.svg and profiles.svg;
/// a sweep directory (phase_diagram.csv, summary.json) yields phase.svg.
/// Every input is read and checked before anything is written.
/// Returns the files written.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir);

}  // namespace freefront
