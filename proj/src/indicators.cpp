#include "sbo/indicators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sbo/closed_forms.hpp"

namespace sbo {

namespace {

// Integration range, breakpoints and tail bound for a weighted integrand
// weight(w) * thermal(w) * J(w) / w^power * kernel(wt).
struct Range {
  double lower;
  double upper;
  std::vector<double> breakpoints;
  std::optional<TailEnvelope> tail;
};

enum class Thermal { Coth, Tanh, TwoT };

Range integration_range(const Environment& env, Role role, double power,
                        Thermal thermal_kind) {
  const auto support = env.partition().support(role);
  Range r{support.lower, support.upper, env.partition().breakpoints(), {}};
  if (std::isinf(r.upper)) {
    const SpectralDensity& sd = env.density();
    const double cutoff = sd.cutoff();
    const double p = sd.ohmicity() - power;
    // TailEnvelope::truncation_point never searches below this point, so the
    // thermal factor can be bounded by its value there.
    const double start = std::max(r.lower, cutoff * (std::max(p, 0.0) + 2.0));
    double thermal = 1.0;  // tanh <= 1, and coth = 1 at T = 0
    if (thermal_kind == Thermal::Coth && env.temperature() > 0.0)
      thermal = 1.0 / std::tanh(start / (2.0 * env.temperature()));
    if (thermal_kind == Thermal::TwoT) thermal = 2.0 * env.temperature();
    r.tail = TailEnvelope{thermal * std::pow(cutoff, 1.0 - sd.ohmicity()), p, cutoff};
  }
  return r;
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::domain_error("indicators: time must be finite and >= 0");
}

// Exponent of the leading power of weight * thermal * J / w^power * kernel at
// w -> 0, where kernel_power is 2 for 1 - cos, 1 for sin and 0 without kernel.
QuadSpec with_low_power(const Environment& env, Role role, Thermal thermal,
                        double power, double kernel_power, QuadSpec spec) {
  if (!env.partition().touches_zero(role) || env.partition().support(role).lower > 0.0)
    return spec;
  double p = env.density().ohmicity() - power + kernel_power;
  if (env.temperature() > 0.0) {
    if (thermal == Thermal::Coth) p -= 1.0;
    if (thermal == Thermal::Tanh) p += 1.0;
  }
  if (p > -1.0) spec.lower_power = p;
  return spec;
}

double thermal_factor(Thermal kind, double w, const Environment& env) {
  switch (kind) {
    case Thermal::Coth:
      return thermal_coth(w, env.temperature(), env.density().cutoff());
    case Thermal::Tanh:
      return thermal_tanh(w, env.temperature());
    case Thermal::TwoT:
      return 2.0 * env.temperature();
  }
  return 0.0;
}

// int weight * thermal * J / w^power * kernel(wt) dw.
double weighted_oscillatory(const Environment& env, Role role, Thermal thermal,
                            double power, Kernel kernel, double t,
                            const QuadSpec& spec) {
  if (t == 0.0) return 0.0;
  const Range range =
      integration_range(env, role, power, thermal);
  const SpectralDensity& sd = env.density();
  const EnvPartition& part = env.partition();
  auto envelope = [&](double w) {
    const double u = part.weight(role, w);
    if (u == 0.0) return 0.0;
    return u * thermal_factor(thermal, w, env) * sd.over_power(w, power);
  };
  const double kernel_power = kernel == Kernel::Sin ? 1.0 : 2.0;
  return integrate_oscillatory(envelope, kernel, t, range.lower, range.upper,
                               with_low_power(env, role, thermal, power, kernel_power, spec),
                               range.tail, range.breakpoints)
      .value;
}

Asymptote weighted_plateau(const Environment& env, Role role, Thermal thermal,
                           const QuadSpec& spec) {
  const SpectralDensity& sd = env.density();
  const double s = sd.ohmicity();
  if (env.partition().touches_zero(role)) {
    // Near w = 0 the integrand behaves like w^(s-3) (coth at T > 0) or
    // w^(s-2) (T = 0, or tanh which then equals 1).
    const bool hot_coth = thermal == Thermal::Coth && env.temperature() > 0.0;
    const bool cold = env.temperature() == 0.0;
    if ((hot_coth && s <= 2.0) || (cold && s <= 1.0)) {
      return {-std::numeric_limits<double>::infinity(), true};
    }
  }
  const Range range = integration_range(env, role, 2.0, thermal);
  const EnvPartition& part = env.partition();
  auto f = [&](double w) {
    const double u = part.weight(role, w);
    if (u == 0.0) return 0.0;
    return u * thermal_factor(thermal, w, env) * sd.over_power(w, 2.0);
  };
  const QuadResult r =
      integrate(f, range.lower, range.upper, with_low_power(env, role, thermal, 2.0, 0.0, spec),
                range.tail, range.breakpoints);
  return {-2.0 * r.value, false};
}

}  // namespace

Environment::Environment(SpectralDensity density, EnvPartition partition,
                         double temperature)
    : density_(density), partition_(partition), temperature_(temperature) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw std::domain_error("environment: temperature must be finite and >= 0");
}

double thermal_coth(double w, double temperature, double cutoff) {
  if (temperature == 0.0) return 1.0;
  if (w < 1e-3 * std::min(temperature, cutoff))
    return 2.0 * temperature / w + w / (6.0 * temperature);
  return 1.0 / std::tanh(w / (2.0 * temperature));
}

double thermal_tanh(double w, double temperature) {
  if (temperature == 0.0) return 1.0;
  return std::tanh(w / (2.0 * temperature));
}

double log_decoherence(const Environment& env, double t, Role role,
                       const QuadSpec& spec) {
  check_time(t);
  return -2.0 * weighted_oscillatory(env, role, Thermal::Coth, 2.0,
                                     Kernel::OneMinusCos, t, spec);
}

double log_fidelity(const Environment& env, double t, Role role,
                    const QuadSpec& spec) {
  check_time(t);
  return -2.0 * weighted_oscillatory(env, role, Thermal::Tanh, 2.0,
                                     Kernel::OneMinusCos, t, spec);
}

double gamma_rate(const Environment& env, double t, Role role,
                  const QuadSpec& spec) {
  check_time(t);
  return weighted_oscillatory(env, role, Thermal::Coth, 1.0, Kernel::Sin, t, spec);
}

double gamma_rate_high_temperature(const Environment& env, double t, Role role,
                                   const QuadSpec& spec) {
  check_time(t);
  if (!(env.temperature() > 0.0))
    throw std::domain_error("gamma_rate_high_temperature: needs T > 0");
  return weighted_oscillatory(env, role, Thermal::TwoT, 2.0, Kernel::Sin, t, spec);
}

Asymptote asymptotic_log_decoherence(const Environment& env, Role role,
                                     const QuadSpec& spec) {
  return weighted_plateau(env, role, Thermal::Coth, spec);
}

Asymptote asymptotic_log_fidelity(const Environment& env, Role role,
                                  const QuadSpec& spec) {
  return weighted_plateau(env, role, Thermal::Tanh, spec);
}

IndicatorSeries indicator_series(const Environment& env,
                                 std::span<const double> times, Method method,
                                 const QuadSpec& spec) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    check_time(times[i]);
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("indicator_series: times must be strictly increasing");
  }
  const double s = env.density().ohmicity();
  if (method == Method::ClosedForm &&
      (env.partition().kind() != PartitionKind::Uncut || !(s > 1.0))) {
    throw std::domain_error(
        "indicator_series: closed form needs the uncut partition and s > 1");
  }
  IndicatorSeries out;
  out.method = method;
  out.times.assign(times.begin(), times.end());
  const double T = env.temperature();
  const double cutoff = env.density().cutoff();
  for (const double t : times) {
    if (method == Method::ClosedForm) {
      out.log_dec.push_back(closed_log_decoherence(s, T, cutoff, t));
      out.log_fid.push_back(closed_log_fidelity(s, T, cutoff, t));
      out.gamma.push_back(closed_gamma_rate(s, T, cutoff, t));
    } else {
      out.log_dec.push_back(log_decoherence(env, t, Role::Unobserved, spec));
      out.log_fid.push_back(log_fidelity(env, t, Role::Observed, spec));
      out.gamma.push_back(gamma_rate(env, t, Role::Unobserved, spec));
    }
  }
  return out;
}

}  // namespace sbo
