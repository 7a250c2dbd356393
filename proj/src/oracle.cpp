#include <cmath>
#include <stdexcept>
#include <string>

#include "sbo/indicators.hpp"
#include "sbo/oracle.hpp"

namespace sbo {

namespace {

// coth(w/2T) and tanh(w/2T) with the T = 0 limits.
double mode_coth(double omega, double temperature) {
  if (temperature == 0.0) return 1.0;
  return 1.0 / std::tanh(omega / (2.0 * temperature));
}

void check_mode_args(double temperature, double t, const char* who) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw std::domain_error(std::string(who) + ": temperature must be >= 0");
  if (!std::isfinite(t)) throw std::domain_error(std::string(who) + ": t must be finite");
}

// |alpha|^2 = (g/w)^2 |1 - e^{iwt}|^2 = 4 (g/w)^2 sin^2(wt/2).
double alpha_squared(const Mode& mode, double t) {
  const double r = mode.g / mode.omega;
  const double s = std::sin(0.5 * mode.omega * t);
  return 4.0 * r * r * s * s;
}

}  // namespace

Complex displacement_amplitude(const Mode& mode, double t) {
  const double r = mode.g / mode.omega;
  const double phase = mode.omega * t;
  // 1 - e^{i phase} = 2 sin^2(phase/2) - i sin(phase)
  const double sh = std::sin(0.5 * phase);
  return r * Complex(2.0 * sh * sh, -std::sin(phase));
}

double mean_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw std::domain_error("mean_occupation: omega must be > 0");
  if (!(temperature >= 0.0)) throw std::domain_error("mean_occupation: T must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

Complex mode_decoherence_factor(const Mode& mode, double temperature, double t) {
  check_mode_args(temperature, t, "mode_decoherence_factor");
  return {std::exp(-2.0 * alpha_squared(mode, t) * mode_coth(mode.omega, temperature)),
          0.0};
}

double mode_fidelity(const Mode& mode, double temperature, double t) {
  check_mode_args(temperature, t, "mode_fidelity");
  return std::exp(-2.0 * alpha_squared(mode, t) * thermal_tanh(mode.omega, temperature));
}

ProductIndicators product_indicators(const ModeSet& modes, double temperature,
                                     double t) {
  check_mode_args(temperature, t, "product_indicators");
  ProductIndicators out{0.0, 0.0};
  for (const Mode& m : modes.modes()) {
    const double a2 = alpha_squared(m, t);
    out.log_dec -= 2.0 * a2 * mode_coth(m.omega, temperature);
    out.log_fid -= 2.0 * a2 * thermal_tanh(m.omega, temperature);
  }
  return out;
}

double product_gamma_rate(const ModeSet& modes, double temperature, double t) {
  check_mode_args(temperature, t, "product_gamma_rate");
  double out = 0.0;
  for (const Mode& m : modes.modes())
    out += 2.0 * m.g * m.g * mode_coth(m.omega, temperature) * std::sin(m.omega * t) /
           m.omega;
  return out;
}

}  // namespace sbo
