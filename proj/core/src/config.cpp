#include "freefront/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "freefront/errors.hpp"
#include "json.hpp"
#include "json_format.hpp"

namespace freefront {

using nlohmann::json;

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Simulate:
      return "simulate";
    case RunMode::Bisect:
      return "bisect";
    case RunMode::Sweep:
      return "sweep";
    case RunMode::Steady:
      return "steady";
    case RunMode::Limits:
      return "limits";
  }
  return "simulate";
}

RunMode parse_mode(std::string_view name) {
  for (RunMode m : {RunMode::Simulate, RunMode::Bisect, RunMode::Sweep, RunMode::Steady,
                    RunMode::Limits}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown mode '" + std::string(name) +
                        "' (expected simulate | bisect | sweep | steady | limits)");
}

double SweepAxis::value(std::size_t i) const {
  if (count < 2) return min;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::size_t SweepSpec::cells() const {
  std::size_t n = axes.empty() ? 0 : 1;
  for (const auto& a : axes) n *= a.count;
  return n;
}

void set_param(ModelParams& p, std::string_view name, double value) {
  if (name == "a") p.a = value;
  else if (name == "b") p.b = value;
  else if (name == "c") p.c = value;
  else if (name == "D") p.D = value;
  else if (name == "mu") p.mu = value;
  else if (name == "h0") p.h0 = value;
  else throw ValidationError("unknown model parameter '" + std::string(name) + "'");
}

double get_param(const ModelParams& p, std::string_view name) {
  if (name == "a") return p.a;
  if (name == "b") return p.b;
  if (name == "c") return p.c;
  if (name == "D") return p.D;
  if (name == "mu") return p.mu;
  if (name == "h0") return p.h0;
  throw ValidationError("unknown model parameter '" + std::string(name) + "'");
}

namespace {

// Reads typed fields out of one object and remembers which keys were consumed,
// so that leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ValidationError("");
        out = v.get<double>();
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ValidationError("");
        out = v.get<bool>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ValidationError("");
        out = v.get<std::string>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ValidationError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.get<long long>() < 0) throw ValidationError("");
        }
        out = v.get<T>();
      }
    } catch (const ValidationError&) {
      throw ValidationError(path_ + "." + key + ": wrong type (" + v.type_name() + ")");
    }
  }

  template <typename T>
  void read(const char* key, std::optional<T>& out) {
    if (!j_.contains(key) || j_.at(key).is_null()) {
      seen_.insert(key);
      return;
    }
    T v{};
    read(key, v);
    out = v;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [k, _] : j_.items()) {
      if (!seen_.count(k)) throw ValidationError(path_ + ": unknown key '" + k + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_profile(const json& j, const std::string& path, ProfileSpec& out,
                  const std::filesystem::path& base_dir) {
  Section s(j, path);
  s.read("family", out.family);
  s.read("amplitude", out.amplitude);
  s.read("file", out.file);
  s.finish();
  if (!out.file.empty()) {
    std::filesystem::path f(out.file);
    if (f.is_relative() && !base_dir.empty()) f = base_dir / f;
    out.file = f.lexically_normal().string();
  }
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace

NumericsConfig RunConfig::run_numerics() const {
  NumericsConfig n = numerics;
  n.snapshot_every = outputs.snapshot_every;
  return n;
}

void RunConfig::validate() const {
  model.validate();
  if (!(outputs.snapshot_every > 0.0)) {
    throw ValidationError("outputs.snapshot_every must be positive");
  }
  if (outputs.dir.empty()) throw ValidationError("outputs.dir must not be empty");
  if (!(analysis.limit_tol > 0.0)) throw ValidationError("analysis.limit_tol must be positive");
  if (!(analysis.delta > 0.0)) throw ValidationError("analysis.delta must be positive");
  if (!(analysis.domination_u_eps >= 0.0)) {
    throw ValidationError("analysis.domination_u_eps must be nonnegative");
  }

  const bool time_dependent =
      mode == RunMode::Simulate || mode == RunMode::Bisect || mode == RunMode::Sweep;
  if (time_dependent) {
    const NumericsConfig resolved = run_numerics().resolved(model);
    resolved.validate(model);
    // Eager check of the initial data: positivity and endpoint zeros.
    (void)initial_state(model, make_initial_data(initial, model.h0), resolved);
  }
  if (mode == RunMode::Bisect) {
    if (bisect.n_bisect < 0) throw ValidationError("bisect.n_bisect must be nonnegative");
    if (bisect.mu_lo && !(*bisect.mu_lo > 0.0)) throw ValidationError("bisect.mu_lo must be positive");
    if (bisect.mu_hi && !(*bisect.mu_hi > 0.0)) throw ValidationError("bisect.mu_hi must be positive");
    if (bisect.mu_lo && bisect.mu_hi && !(*bisect.mu_lo < *bisect.mu_hi)) {
      throw ValidationError("bisect.mu_lo must be below bisect.mu_hi");
    }
  }
  if (mode == RunMode::Sweep) {
    if (sweep.axes.empty() || sweep.axes.size() > 2) {
      throw ValidationError("sweep.axes must list one or two axes");
    }
    if (sweep.axes.size() == 2 && sweep.axes[0].param == sweep.axes[1].param) {
      throw ValidationError("sweep.axes must name distinct parameters");
    }
    for (const auto& ax : sweep.axes) {
      (void)get_param(model, ax.param);
      if (ax.count < 2) throw ValidationError("sweep axis '" + ax.param + "': count must be >= 2");
      if (!(ax.max > ax.min)) throw ValidationError("sweep axis '" + ax.param + "': max must exceed min");
      if (ax.param == "h0" && (initial.u0.family == "samples")) {
        throw ValidationError("sweep over h0 needs a named u0 family, not samples");
      }
    }
    if (sweep.cells() > sweep.budget) {
      std::ostringstream os;
      os << "sweep has " << sweep.cells() << " cells, above the budget " << sweep.budget;
      throw ValidationError(os.str());
    }
  }
  if (mode == RunMode::Steady) {
    steady.problem.validate();
    if (steady.n < 64) throw ValidationError("steady.n must be at least 64");
    if (!(steady.tol > 0.0)) throw ValidationError("steady.tol must be positive");
  }
  if (mode == RunMode::Limits && limits.rounds < 1) {
    throw ValidationError("limits.rounds must be at least 1");
  }
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "config parse error at line " << line_of_offset(text, e.byte) << ": " << e.what();
    throw ValidationError(os.str());
  }

  RunConfig cfg;
  Section root(doc, "config");
  std::string mode = "simulate";
  root.read("mode", mode);
  cfg.mode = parse_mode(mode);

  if (const json* j = root.child("model")) {
    Section s(*j, "model");
    s.read("a", cfg.model.a);
    s.read("b", cfg.model.b);
    s.read("c", cfg.model.c);
    s.read("D", cfg.model.D);
    s.read("mu", cfg.model.mu);
    s.read("h0", cfg.model.h0);
    s.finish();
  }

  cfg.initial.v0.amplitude = cfg.model.b;  // prey starts at carrying capacity unless told otherwise
  if (const json* j = root.child("initial")) {
    Section s(*j, "initial");
    if (const json* u = s.child("u0")) read_profile(*u, "initial.u0", cfg.initial.u0, base_dir);
    if (const json* v = s.child("v0")) read_profile(*v, "initial.v0", cfg.initial.v0, base_dir);
    s.finish();
  }

  if (const json* j = root.child("numerics")) {
    Section s(*j, "numerics");
    auto& n = cfg.numerics;
    s.read("dt", n.dt);
    s.read("n_y", n.n_y);
    s.read("n_x", n.n_x);
    s.read("L", n.L);
    s.read("t_max", n.t_max);
    s.read("front_stencil_order", n.front_stencil_order);
    s.read("tol_bounds", n.tol_bounds);
    s.read("probe_half_width", n.probe_half_width);
    s.read("cfl_front", n.cfl_front);
    s.read("max_halvings", n.max_halvings);
    s.read("stop_when_decided", n.stop_when_decided);
    s.finish();
  }

  if (const json* j = root.child("outputs")) {
    Section s(*j, "outputs");
    s.read("dir", cfg.outputs.dir);
    s.read("snapshot_every", cfg.outputs.snapshot_every);
    s.read("plots", cfg.outputs.plots);
    s.finish();
  }

  if (const json* j = root.child("analysis")) {
    Section s(*j, "analysis");
    s.read("limit_tol", cfg.analysis.limit_tol);
    s.read("delta", cfg.analysis.delta);
    s.read("domination", cfg.analysis.domination);
    s.read("domination_u_eps", cfg.analysis.domination_u_eps);
    s.finish();
  }

  if (const json* j = root.child("bisect")) {
    Section s(*j, "bisect");
    s.read("mu_lo", cfg.bisect.mu_lo);
    s.read("mu_hi", cfg.bisect.mu_hi);
    s.read("n_bisect", cfg.bisect.n_bisect);
    s.finish();
  }

  if (const json* j = root.child("sweep")) {
    Section s(*j, "sweep");
    if (const json* axes = s.child("axes")) {
      if (!axes->is_array()) throw ValidationError("sweep.axes: expected an array");
      for (std::size_t i = 0; i < axes->size(); ++i) {
        SweepAxis ax;
        Section a((*axes)[i], "sweep.axes[" + std::to_string(i) + "]");
        a.read("param", ax.param);
        a.read("min", ax.min);
        a.read("max", ax.max);
        a.read("count", ax.count);
        a.finish();
        cfg.sweep.axes.push_back(ax);
      }
    }
    s.read("budget", cfg.sweep.budget);
    s.read("workers", cfg.sweep.workers);
    s.finish();
  }

  if (const json* j = root.child("steady")) {
    Section s(*j, "steady");
    s.read("d", cfg.steady.problem.d);
    s.read("beta", cfg.steady.problem.beta);
    s.read("theta", cfg.steady.problem.theta);
    s.read("l", cfg.steady.problem.l);
    s.read("k", cfg.steady.problem.k);
    s.read("n", cfg.steady.n);
    s.read("tol", cfg.steady.tol);
    s.finish();
  }

  if (const json* j = root.child("limits")) {
    Section s(*j, "limits");
    s.read("rounds", cfg.limits.rounds);
    s.finish();
  }
  root.finish();

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

namespace {

json profile_json(const ProfileSpec& p) {
  json j = {{"family", p.family}, {"amplitude", p.amplitude}};
  if (!p.file.empty()) j["file"] = p.file;
  return j;
}

}  // namespace

std::string dump_config(const RunConfig& cfg) {
  const auto& n = cfg.numerics;
  json j;
  j["mode"] = std::string(to_string(cfg.mode));
  j["model"] = {{"a", cfg.model.a},   {"b", cfg.model.b},   {"c", cfg.model.c},
                {"D", cfg.model.D},   {"mu", cfg.model.mu}, {"h0", cfg.model.h0}};
  j["initial"] = {{"u0", profile_json(cfg.initial.u0)}, {"v0", profile_json(cfg.initial.v0)}};
  j["numerics"] = {{"dt", n.dt},
                   {"n_y", n.n_y},
                   {"n_x", n.n_x},
                   {"L", n.L},
                   {"t_max", n.t_max},
                   {"front_stencil_order", n.front_stencil_order},
                   {"tol_bounds", n.tol_bounds},
                   {"probe_half_width", n.probe_half_width},
                   {"cfl_front", n.cfl_front},
                   {"max_halvings", n.max_halvings},
                   {"stop_when_decided", n.stop_when_decided}};
  j["outputs"] = {{"dir", cfg.outputs.dir},
                  {"snapshot_every", cfg.outputs.snapshot_every},
                  {"plots", cfg.outputs.plots}};
  j["analysis"] = {{"limit_tol", cfg.analysis.limit_tol},
                   {"delta", cfg.analysis.delta},
                   {"domination", cfg.analysis.domination},
                   {"domination_u_eps", cfg.analysis.domination_u_eps}};
  json bis = {{"n_bisect", cfg.bisect.n_bisect}};
  bis["mu_lo"] = cfg.bisect.mu_lo ? json(*cfg.bisect.mu_lo) : json(nullptr);
  bis["mu_hi"] = cfg.bisect.mu_hi ? json(*cfg.bisect.mu_hi) : json(nullptr);
  j["bisect"] = bis;
  json axes = json::array();
  for (const auto& a : cfg.sweep.axes) {
    axes.push_back({{"param", a.param}, {"min", a.min}, {"max", a.max}, {"count", a.count}});
  }
  j["sweep"] = {{"axes", axes}, {"budget", cfg.sweep.budget}, {"workers", cfg.sweep.workers}};
  j["steady"] = {{"d", cfg.steady.problem.d},         {"beta", cfg.steady.problem.beta},
                 {"theta", cfg.steady.problem.theta}, {"l", cfg.steady.problem.l},
                 {"k", cfg.steady.problem.k},         {"n", cfg.steady.n},
                 {"tol", cfg.steady.tol}};
  j["limits"] = {{"rounds", cfg.limits.rounds}};
  return format_json(j);
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config file " + path.string());
  out << dump_config(cfg);
}

SampledProfile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open profile samples " + path.string());
  std::vector<double> xs;
  std::vector<double> vs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x = 0.0;
    double v = 0.0;
    char comma = 0;
    if (!(ls >> x >> comma >> v) || comma != ',') {
      if (lineno == 1) continue;  // header
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 'x,value'");
    }
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 3) throw ValidationError(path.string() + ": need at least 3 samples");
  const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(dx > 0.0)) throw ValidationError(path.string() + ": x must increase");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double expect = xs.front() + dx * static_cast<double>(i);
    if (std::abs(xs[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
      throw ValidationError(path.string() + ": samples must be uniformly spaced");
    }
  }
  SampledProfile s;
  s.x_lo = xs.front();
  s.x_hi = xs.back();
  s.values = std::move(vs);
  return s;
}

InitialData make_initial_data(const InitialSpec& spec, double h0) {
  InitialData d;
  const auto& u = spec.u0;
  if (u.family == "cosine") {
    d.u0 = cosine_bump(u.amplitude, h0);
  } else if (u.family == "quartic") {
    d.u0 = quartic_bump(u.amplitude, h0);
  } else if (u.family == "samples") {
    if (u.file.empty()) throw ValidationError("initial.u0: samples family needs 'file'");
    SampledProfile s = read_profile_csv(u.file);
    if (std::abs(s.x_lo + h0) > 1e-12 || std::abs(s.x_hi - h0) > 1e-12) {
      throw ValidationError("initial.u0 samples must span exactly [-h0, h0]");
    }
    d.u0 = sampled_profile(std::move(s));
  } else {
    throw ValidationError("initial.u0.family must be cosine | quartic | samples");
  }
  const auto& v = spec.v0;
  if (v.family == "constant") {
    d.v0 = constant_profile(v.amplitude);
  } else if (v.family == "samples") {
    if (v.file.empty()) throw ValidationError("initial.v0: samples family needs 'file'");
    d.v0 = sampled_profile(read_profile_csv(v.file));
  } else {
    throw ValidationError("initial.v0.family must be constant | samples");
  }
  return d;
}

}  // namespace freefront
