#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "freefront/model.hpp"
#include "freefront/solver.hpp"
#include "freefront/steady.hpp"

namespace freefront {

enum class RunMode { Simulate, Bisect, Sweep, Steady, Limits };

std::string_view to_string(RunMode mode);
RunMode parse_mode(std::string_view name);

/// Named initial-profile family, or samples read from a two-column CSV (x,value).
struct ProfileSpec {
  std::string family;      ///< u0: cosine | quartic | samples; v0: constant | samples
  double amplitude = 1.0;  ///< cosine / quartic height, or the constant prey level
  std::string file;        ///< samples only; stored as an absolute path after loading

  friend bool operator==(const ProfileSpec&, const ProfileSpec&) = default;
};

struct InitialSpec {
  ProfileSpec u0{"cosine", 1.0, {}};
  ProfileSpec v0{"constant", 3.0, {}};

  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

struct OutputSpec {
  std::string dir = "out";
  double snapshot_every = 1.0;
  bool plots = true;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// Post-processing applied to single runs.
struct AnalysisSpec {
  double limit_tol = 0.02;        ///< relative tolerance of the long-time limit checks
  double delta = 0.1;             ///< barrier inflation
  bool domination = true;         ///< check the run against the barrier when mu <= mu0
  double domination_u_eps = 1e-6;

  friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct BisectSpec {
  std::optional<double> mu_lo;  ///< defaults to the barrier threshold mu0
  std::optional<double> mu_hi;  ///< defaults to the large-mu bound
  int n_bisect = 8;

  friend bool operator==(const BisectSpec&, const BisectSpec&) = default;
};

struct SweepAxis {
  std::string param;  ///< a | b | c | D | mu | h0
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 2;

  double value(std::size_t i) const;
  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  std::size_t budget = 400;
  std::size_t workers = 1;  ///< 0 picks the hardware concurrency

  std::size_t cells() const;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct SteadySpec {
  LogisticBVP problem;
  std::size_t n = 400;
  double tol = 1e-10;

  friend bool operator==(const SteadySpec& x, const SteadySpec& y) {
    return x.problem.d == y.problem.d && x.problem.beta == y.problem.beta &&
           x.problem.theta == y.problem.theta && x.problem.l == y.problem.l &&
           x.problem.k == y.problem.k && x.n == y.n && x.tol == y.tol;
  }
};

struct LimitsSpec {
  std::size_t rounds = 12;

  friend bool operator==(const LimitsSpec&, const LimitsSpec&) = default;
};

struct RunConfig {
  RunMode mode = RunMode::Simulate;
  ModelParams model;
  InitialSpec initial;
  NumericsConfig numerics;  ///< L, n_x, probe_half_width = 0 mean "derive from the model";
                            ///< snapshot_every is ignored in favour of outputs.snapshot_every
  OutputSpec outputs;
  AnalysisSpec analysis;
  BisectSpec bisect;
  SweepSpec sweep;
  SteadySpec steady;
  LimitsSpec limits;

  void validate() const;
  /// `numerics` with the snapshot cadence taken from outputs.snapshot_every.
  NumericsConfig run_numerics() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a JSON document. Unknown keys are rejected; missing keys take defaults.
/// Relative sample paths resolve against base_dir.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
std::string dump_config(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

InitialData make_initial_data(const InitialSpec& spec, double h0);
SampledProfile read_profile_csv(const std::filesystem::path& path);

/// Overrides one model parameter by name (sweep axes).
void set_param(ModelParams& p, std::string_view name, double value);
double get_param(const ModelParams& p, std::string_view name);

}  // namespace freefront
