#include "freefront/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freefront/errors.hpp"
#include "freefront/numerics.hpp"

namespace freefront {

using numerics::kPi;

void ModelParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"a", a}, {"b", b}, {"c", c}, {"D", D}, {"mu", mu}, {"h0", h0}};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      std::ostringstream os;
      os << name << " must be positive (got " << value << ")";
      throw ValidationError(os.str());
    }
  }
}

std::string_view to_string(HuntingRegime regime) {
  switch (regime) {
    case HuntingRegime::Weak:
      return "weak";
    case HuntingRegime::Strong:
      return "strong";
    case HuntingRegime::Uncovered:
      return "uncovered";
  }
  return "unknown";
}

HuntingRegime hunting_regime(const ModelParams& p) {
  if (p.b <= p.c) return HuntingRegime::Strong;
  if (p.a * p.c < 1.0) return HuntingRegime::Weak;
  return HuntingRegime::Uncovered;
}

double SampledProfile::spacing() const {
  if (values.size() < 2) return 0.0;
  return (x_hi - x_lo) / static_cast<double>(values.size() - 1);
}

double SampledProfile::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double SampledProfile::x(std::size_t i) const {
  if (values.size() < 2) return x_lo;
  const double n = static_cast<double>(values.size() - 1);
  const double unit = (2.0 * static_cast<double>(i) - n) / n;
  return 0.5 * (x_lo + x_hi) + 0.5 * (x_hi - x_lo) * unit;
}

double lambda_threshold(const ModelParams& p) {
  p.validate();
  return kPi * std::sqrt(1.0 / (1.0 + p.a * p.b));
}

double mu_upper_bound(const ModelParams& p, const SampledProfile& u0) {
  const double lambda = lambda_threshold(p);
  if (2.0 * p.h0 >= lambda) {
    throw DomainError("mu upper bound applies only when 2 h0 < lambda; spreading is already guaranteed");
  }
  if (u0.values.size() < 3) {
    throw ValidationError("initial predator profile needs at least 3 samples");
  }
  std::vector<double> weighted(u0.values.size());
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    weighted[i] = (u0.x(i) + p.h0) * u0.values[i];
  }
  const double integral = numerics::simpson_uniform(weighted, u0.spacing());
  if (!(integral > 0.0)) {
    throw ValidationError("degenerate initial predator profile: weighted integral is not positive");
  }
  const double amplitude = std::max(1.0, u0.sup_norm());
  return amplitude * (kPi * kPi - 4.0 * p.h0 * p.h0) / (2.0 * integral);
}

double prey_bound(const ModelParams& p, double v0_sup) { return std::max(v0_sup, p.b); }

double predator_bound(const ModelParams& p, double u0_sup, double v0_sup) {
  return std::max(u0_sup, 1.0 + p.a * prey_bound(p, v0_sup));
}

LimitIterates limit_iteration(const ModelParams& p, std::size_t n_rounds, double stop_gap) {
  p.validate();
  if (hunting_regime(p) != HuntingRegime::Weak) {
    throw DomainError("limit iteration requires the weak hunting regime (b > c and a c < 1)");
  }
  if (n_rounds < 1) throw ValidationError("n_rounds must be at least 1");

  LimitIterates it;
  it.under_u.reserve(n_rounds);
  double under_u = 1.0;
  for (std::size_t i = 0; i < n_rounds; ++i) {
    const double over_v = p.b - p.c * under_u;
    const double over_u = 1.0 + p.a * over_v;
    const double under_v = p.b - p.c * over_u;
    it.under_u.push_back(under_u);
    it.over_v.push_back(over_v);
    it.over_u.push_back(over_u);
    it.under_v.push_back(under_v);
    under_u = 1.0 + p.a * under_v;
    if (stop_gap > 0.0 && over_v - under_v < stop_gap) break;
  }
  return it;
}

std::pair<double, double> spreading_limits(const ModelParams& p) {
  p.validate();
  switch (hunting_regime(p)) {
    case HuntingRegime::Weak:
      return {(1.0 + p.a * p.b) / (1.0 + p.a * p.c), (p.b - p.c) / (1.0 + p.a * p.c)};
    case HuntingRegime::Strong:
      return {1.0, 0.0};
    case HuntingRegime::Uncovered:
      break;
  }
  throw DomainError(
      "no spreading limit is known when b > c and a c >= 1 (neither weak nor strong hunting)");
}

}  // namespace freefront
