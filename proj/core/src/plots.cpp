#include "freefront/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "freefront/artifacts.hpp"
#include "freefront/errors.hpp"
#include "json.hpp"

namespace freefront {

namespace fs = std::filesystem;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const fs::path& src) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IoError(src.string() + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
  std::vector<double> numbers(const std::string& name, const fs::path& src) const {
    const std::size_t c = column(name, src);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(std::stod(r.at(c)));
    return out;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) out.push_back(cell);
  return out;
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw IoError(path.string() + " is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto r = split(line);
    if (r.size() != t.header.size()) throw IoError(path.string() + ": ragged row");
    t.rows.push_back(std::move(r));
  }
  if (t.rows.empty()) throw IoError(path.string() + " has no data rows");
  return t;
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Fixed 800x500 viewport with a plotting frame and linear axes.
class Canvas {
 public:
  Canvas(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    if (!(x1_ > x0_)) x1_ = x0_ + 1.0;
    if (!(y1_ > y0_)) {
      y0_ -= 0.5;
      y1_ += 0.5;
    }
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kRight - kLeft); }
  double py(double y) const { return kBottom - (y - y0_) / (y1_ - y0_) * (kBottom - kTop); }

  void frame(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    body_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
          << "\" height=\"" << kBottom - kTop << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double xv = x0_ + (x1_ - x0_) * i / 5.0;
      const double yv = y0_ + (y1_ - y0_) * i / 5.0;
      body_ << "<text x=\"" << num(px(xv)) << "\" y=\"" << kBottom + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
      body_ << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(yv) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    }
    body_ << "<text x=\"400\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << escape(title)
          << "</text>\n";
    body_ << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"490\" font-size=\"12\" "
          << "text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
    body_ << "<text x=\"16\" y=\"" << (kTop + kBottom) / 2 << "\" font-size=\"12\" "
          << "text-anchor=\"middle\" transform=\"rotate(-90 16 " << (kTop + kBottom) / 2 << ")\">"
          << escape(ylabel) << "</text>\n";
  }

  void polyline(const std::vector<double>& x, const std::vector<double>& y,
                const std::string& color, const std::string& id, bool dashed = false) {
    // Deterministic stride keeps files small for long runs.
    const std::size_t stride = std::max<std::size_t>(1, x.size() / 2000);
    body_ << "<polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "")
          << " points=\"";
    for (std::size_t i = 0; i < x.size(); i += stride) {
      body_ << num(px(x[i])) << ',' << num(py(y[i])) << ' ';
    }
    if ((x.size() - 1) % stride != 0) body_ << num(px(x.back())) << ',' << num(py(y.back()));
    body_ << "\"/>\n";
  }

  void hline(double y, const std::string& color, const std::string& id, const std::string& label) {
    body_ << "<line id=\"" << id << "\" x1=\"" << kLeft << "\" x2=\"" << kRight << "\" y1=\""
          << num(py(y)) << "\" y2=\"" << num(py(y)) << "\" stroke=\"" << color
          << "\" stroke-dasharray=\"4 3\"/>\n";
    body_ << "<text x=\"" << kRight - 4 << "\" y=\"" << num(py(y) - 4) << "\" font-size=\"11\" "
          << "text-anchor=\"end\" fill=\"" << color << "\">" << escape(label) << "</text>\n";
  }

  void rect(double xa, double xb, double ya, double yb, const std::string& fill,
            const std::string& tip) {
    const double l = std::min(px(xa), px(xb));
    const double r = std::max(px(xa), px(xb));
    const double t = std::min(py(ya), py(yb));
    const double b = std::max(py(ya), py(yb));
    body_ << "<rect x=\"" << num(l) << "\" y=\"" << num(t) << "\" width=\"" << num(r - l)
          << "\" height=\"" << num(b - t) << "\" fill=\"" << fill << "\"><title>" << escape(tip)
          << "</title></rect>\n";
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = kTop + 14;
    for (const auto& [label, color] : entries) {
      body_ << "<rect x=\"" << kRight + 10 << "\" y=\"" << num(y - 9) << "\" width=\"12\" "
            << "height=\"10\" fill=\"" << color << "\"/>\n";
      body_ << "<text x=\"" << kRight + 26 << "\" y=\"" << num(y) << "\" font-size=\"11\">"
            << escape(label) << "</text>\n";
      y += 18;
    }
  }

  void note(const std::string& text) {
    body_ << "<text x=\"" << kLeft + 6 << "\" y=\"" << kTop + 16 << "\" font-size=\"11\">"
          << escape(text) << "</text>\n";
  }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n"
           "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n" +
           body_.str() + "</svg>\n";
  }

 private:
  static constexpr double kLeft = 70.0;
  static constexpr double kRight = 680.0;
  static constexpr double kTop = 40.0;
  static constexpr double kBottom = 450.0;
  double x0_, x1_, y0_, y1_;
  std::ostringstream body_;
};

std::pair<double, double> range_of(std::initializer_list<const std::vector<double>*> series,
                                   std::initializer_list<double> extra = {}) {
  double lo = 1e300;
  double hi = -1e300;
  for (const auto* s : series) {
    for (double v : *s) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  for (double v : extra) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string fronts_svg(const Table& fronts, const fs::path& src, const nlohmann::json& summary) {
  const auto t = fronts.numbers("t", src);
  const auto g = fronts.numbers("g", src);
  const auto h = fronts.numbers("h", src);
  std::vector<double> span(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) span[i] = h[i] - g[i];
  const double lambda = summary.at("thresholds").at("lambda").get<double>();
  const auto [ylo, yhi] = range_of({&g, &h, &span}, {lambda});
  Canvas c(t.front(), t.back(), ylo, yhi);
  std::string verdict = summary.contains("verdict") ? summary["verdict"]["kind"].get<std::string>() : "";
  c.frame("Fronts g(t), h(t) and span" + (verdict.empty() ? "" : " (" + verdict + ")"), "t",
          "x");
  c.hline(lambda, "#7570b3", "lambda-guide", "critical span " + tick_label(lambda));
  c.polyline(t, g, "#1b9e77", "front-g");
  c.polyline(t, h, "#d95f02", "front-h");
  c.polyline(t, span, "#444444", "span", true);
  c.legend({{"g", "#1b9e77"}, {"h", "#d95f02"}, {"h - g", "#444444"}, {"critical span", "#7570b3"}});
  return c.str();
}

std::string profiles_svg(const Table& snap, const fs::path& src, const nlohmann::json& summary) {
  const auto x = snap.numbers("x", src);
  const auto u = snap.numbers("u", src);
  const auto v = snap.numbers("v", src);
  std::optional<double> u_lim;
  std::optional<double> v_lim;
  if (summary.contains("limit_targets")) {
    const auto& lt = summary["limit_targets"];
    if (lt.contains("u") && lt["u"].is_number()) u_lim = lt["u"].get<double>();
    if (lt.contains("v") && lt["v"].is_number()) v_lim = lt["v"].get<double>();
  }
  std::vector<double> extra;
  const auto [ylo, yhi] = range_of({&u, &v}, {u_lim.value_or(0.0), v_lim.value_or(0.0)});
  Canvas c(x.front(), x.back(), ylo, yhi);
  c.frame("Final profiles", "x", "density");
  if (u_lim) c.hline(*u_lim, "#d95f02", "u-limit", "u limit " + tick_label(*u_lim));
  if (v_lim) c.hline(*v_lim, "#1b9e77", "v-limit", "v limit " + tick_label(*v_lim));
  c.polyline(x, u, "#d95f02", "predator");
  c.polyline(x, v, "#1b9e77", "prey");
  c.legend({{"u (predator)", "#d95f02"}, {"v (prey)", "#1b9e77"}});
  return c.str();
}

std::string verdict_color(const std::string& v) {
  if (v == "Spreading") return "#d95f02";
  if (v == "Vanishing") return "#1b9e77";
  if (v == "Undecided") return "#bbbbbb";
  return "#000000";
}

// Points where 2 h0 - lambda changes sign, interpolated along the second axis
// for each value of the first (or along the only axis).
std::vector<std::pair<double, double>> critical_curve(const std::vector<double>& ax0,
                                                      const std::vector<double>& ax1,
                                                      const std::vector<double>& s,
                                                      std::size_t n0, std::size_t n1) {
  std::vector<std::pair<double, double>> pts;
  auto at = [&](std::size_t i, std::size_t j) { return i * n1 + j; };
  if (n1 == 1) {
    for (std::size_t i = 0; i + 1 < n0; ++i) {
      const double s0 = s[at(i, 0)];
      const double s1 = s[at(i + 1, 0)];
      if ((s0 <= 0.0) != (s1 <= 0.0)) {
        const double w = s0 / (s0 - s1);
        pts.emplace_back(ax0[at(i, 0)] + w * (ax0[at(i + 1, 0)] - ax0[at(i, 0)]), 0.0);
      }
    }
    return pts;
  }
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j + 1 < n1; ++j) {
      const double s0 = s[at(i, j)];
      const double s1 = s[at(i, j + 1)];
      if ((s0 <= 0.0) != (s1 <= 0.0)) {
        const double w = s0 / (s0 - s1);
        pts.emplace_back(ax0[at(i, j)], ax1[at(i, j)] + w * (ax1[at(i, j + 1)] - ax1[at(i, j)]));
      }
    }
  }
  if (!pts.empty()) return pts;
  for (std::size_t j = 0; j < n1; ++j) {
    for (std::size_t i = 0; i + 1 < n0; ++i) {
      const double s0 = s[at(i, j)];
      const double s1 = s[at(i + 1, j)];
      if ((s0 <= 0.0) != (s1 <= 0.0)) {
        const double w = s0 / (s0 - s1);
        pts.emplace_back(ax0[at(i, j)] + w * (ax0[at(i + 1, j)] - ax0[at(i, j)]), ax1[at(i, j)]);
      }
    }
  }
  return pts;
}

std::string phase_svg(const Table& phase, const fs::path& src, const nlohmann::json& summary) {
  const auto& axes = summary.at("sweep").at("axes");
  if (!axes.is_array() || axes.empty() || axes.size() > 2) {
    throw IoError("summary.json: sweep.axes must list one or two axes");
  }
  const std::string p0 = axes[0].at("param").get<std::string>();
  const std::size_t n0 = axes[0].at("count").get<std::size_t>();
  const std::string p1 = axes.size() == 2 ? axes[1].at("param").get<std::string>() : "";
  const std::size_t n1 = axes.size() == 2 ? axes[1].at("count").get<std::size_t>() : 1;
  if (phase.rows.size() != n0 * n1) throw IoError(src.string() + ": cell count does not match axes");

  const auto v0 = phase.numbers(p0, src);
  const auto v1 = p1.empty() ? std::vector<double>(v0.size(), 0.0) : phase.numbers(p1, src);
  const auto h0 = phase.numbers("h0", src);
  const auto lam = phase.numbers("lambda", src);
  const std::size_t vc = phase.column("verdict", src);

  const double d0 = n0 > 1 ? (axes[0]["max"].get<double>() - axes[0]["min"].get<double>()) / (n0 - 1) : 1.0;
  const double d1 = n1 > 1 ? (axes[1]["max"].get<double>() - axes[1]["min"].get<double>()) / (n1 - 1) : 1.0;
  const double x0 = axes[0]["min"].get<double>() - d0 / 2;
  const double x1 = axes[0]["max"].get<double>() + d0 / 2;
  const double y0 = p1.empty() ? -0.5 : axes[1]["min"].get<double>() - d1 / 2;
  const double y1 = p1.empty() ? 0.5 : axes[1]["max"].get<double>() + d1 / 2;
  Canvas c(x0, x1, y0, y1);
  c.frame("Phase diagram", p0, p1.empty() ? "" : p1);
  for (std::size_t k = 0; k < phase.rows.size(); ++k) {
    const std::string& verdict = phase.rows[k][vc];
    const double cy = p1.empty() ? 0.0 : v1[k];
    c.rect(v0[k] - d0 / 2, v0[k] + d0 / 2, cy - (p1.empty() ? 0.5 : d1 / 2),
           cy + (p1.empty() ? 0.5 : d1 / 2), verdict_color(verdict), "cell " + phase.rows[k][0] + ": " + verdict);
  }
  std::vector<double> s(h0.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = 2.0 * h0[k] - lam[k];
  const auto pts = critical_curve(v0, v1, s, n0, n1);
  if (pts.empty()) {
    c.note("2 h0 = critical span lies outside the swept range");
  } else if (p1.empty() || pts.size() == 1) {
    std::vector<double> xs{pts.front().first, pts.front().first};
    std::vector<double> ys{y0, y1};
    c.polyline(xs, ys, "#222222", "critical-curve");
  } else {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [a, b] : pts) {
      xs.push_back(a);
      ys.push_back(b);
    }
    c.polyline(xs, ys, "#222222", "critical-curve");
  }
  c.legend({{"Spreading", verdict_color("Spreading")},
            {"Vanishing", verdict_color("Vanishing")},
            {"Undecided", verdict_color("Undecided")},
            {"Error", verdict_color("Error")},
            {"2 h0 = critical span", "#222222"}});
  return c.str();
}

std::optional<fs::path> last_snapshot(const fs::path& dir) {
  std::optional<fs::path> best;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return best;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    if (!best || e.path().filename() > best->filename()) best = e.path();
  }
  return best;
}

}  // namespace

std::vector<fs::path> emit_plots(const fs::path& dir) {
  std::vector<std::pair<fs::path, std::string>> pending;
  const fs::path summary_path = dir / "summary.json";
  const fs::path phase_path = dir / "phase_diagram.csv";
  const fs::path fronts_path = dir / "fronts.csv";
  std::error_code ec;

  if (fs::exists(phase_path, ec)) {
    if (!fs::exists(summary_path, ec)) {
      throw IoError("missing plot inputs in " + dir.string() +
                    ": expected phase_diagram.csv and summary.json");
    }
    const auto summary = read_json(summary_path);
    pending.emplace_back(dir / "plots" / "phase.svg",
                         phase_svg(read_csv(phase_path), phase_path, summary));
  } else {
    const auto snap = last_snapshot(dir / "snapshots");
    std::vector<std::string> missing;
    if (!fs::exists(fronts_path, ec)) missing.push_back("fronts.csv");
    if (!fs::exists(summary_path, ec)) missing.push_back("summary.json");
    if (!snap) missing.push_back("snapshots/NNNN.csv");
    if (!missing.empty()) {
      std::string msg = "missing plot inputs in " + dir.string() + ":";
      for (const auto& m : missing) msg += " " + m;
      msg += " (expected fronts.csv, summary.json, snapshots/NNNN.csv; or phase_diagram.csv and summary.json)";
      throw IoError(msg);
    }
    const auto summary = read_json(summary_path);
    pending.emplace_back(dir / "plots" / "fronts.svg",
                         fronts_svg(read_csv(fronts_path), fronts_path, summary));
    pending.emplace_back(dir / "plots" / "profiles.svg",
                         profiles_svg(read_csv(*snap), *snap, summary));
  }

  std::vector<fs::path> written;
  for (const auto& [path, text] : pending) {
    write_atomic(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace freefront
