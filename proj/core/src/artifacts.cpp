#include "freefront/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "freefront/errors.hpp"

namespace freefront {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string());
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fronts_csv(const SimulationResult& result) {
  std::string out = "t,g,h,g_dot,h_dot,sup_u,probe_v\n";
  out.reserve(out.size() + result.fronts.size() * 150);
  for (const auto& r : result.fronts) {
    for (double v : {r.t, r.g, r.h, r.g_dot, r.h_dot, r.sup_u}) {
      out += format_number(v);
      out += ',';
    }
    out += format_number(r.probe_v);
    out += '\n';
  }
  return out;
}

std::string snapshot_csv(const SimulationResult& result, const Snapshot& snap) {
  const StraightGrid straight(result.numerics.n_y);
  const LineGrid line(result.numerics.L, result.numerics.n_x);
  const std::vector<double> u = interp_pred_to_line(snap.w, snap.front, straight, line);
  const auto x = line.nodes();
  std::string out = "x,u,v\n";
  out.reserve(out.size() + x.size() * 75);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out += format_number(x[i]);
    out += ',';
    out += format_number(u[i]);
    out += ',';
    out += format_number(snap.z[i]);
    out += '\n';
  }
  return out;
}

void write_simulation_csv(const fs::path& dir, const SimulationResult& result,
                          bool with_snapshots) {
  write_atomic(dir / "fronts.csv", fronts_csv(result));
  if (!with_snapshots) return;
  std::error_code ec;
  if (fs::is_directory(dir / "snapshots", ec)) {
    // Stale frames from an earlier, longer run would otherwise pass for the final one.
    for (const auto& e : fs::directory_iterator(dir / "snapshots")) {
      if (e.path().extension() == ".csv") fs::remove(e.path(), ec);
    }
  }
  for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.csv", k);
    write_atomic(dir / "snapshots" / name, snapshot_csv(result, result.snapshots[k]));
  }
}

}  // namespace freefront
