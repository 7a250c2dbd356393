#pragma once

#include <span>
#include <vector>

#include "sbo/quad_engine.hpp"
#include "sbo/spectral_model.hpp"

namespace sbo {

/// Spectral density, partition and bath temperature (k_B = 1; T = 0 is the
/// exact vacuum, where coth and tanh are both replaced by 1).
class Environment {
 public:
  /// Throws std::domain_error for negative or non-finite temperature.
  Environment(SpectralDensity density, EnvPartition partition, double temperature);

  const SpectralDensity& density() const noexcept { return density_; }
  const EnvPartition& partition() const noexcept { return partition_; }
  double temperature() const noexcept { return temperature_; }

 private:
  SpectralDensity density_;
  EnvPartition partition_;
  double temperature_;
};

/// coth(w / 2T), switching to the Laurent series 2T/w + w/(6T) below
/// w = 1e-3 min(T, cutoff); exactly 1 at T = 0.
double thermal_coth(double w, double temperature, double cutoff);
/// tanh(w / 2T); exactly 1 at T = 0.
double thermal_tanh(double w, double temperature);

/// log|Gamma(t)| = -2 int u(w) coth(w/2T) J(w) (1 - cos wt) / w^2 dw, with u
/// the weight of `role` (the unobserved part by default).
double log_decoherence(const Environment& env, double t,
                       Role role = Role::Unobserved, const QuadSpec& spec = {});

/// log B(t) = -2 int w(w) tanh(w/2T) J(w) (1 - cos wt) / w^2 dw over the
/// observed weight by default.
double log_fidelity(const Environment& env, double t, Role role = Role::Observed,
                    const QuadSpec& spec = {});

/// Canonical decoherence rate gamma(t) = -(1/2) d/dt log|Gamma(t)|
///   = int u(w) coth(w/2T) J(w) sin(wt) / w dw.
/// Positive at all times iff the evolution is Markovian.
double gamma_rate(const Environment& env, double t, Role role = Role::Unobserved,
                  const QuadSpec& spec = {});

/// High-temperature form 2T int u(w) J(w) sin(wt) / w^2 dw (leading term of
/// coth(x) = 1/x + ...). Requires T > 0.
double gamma_rate_high_temperature(const Environment& env, double t,
                                   Role role = Role::Unobserved,
                                   const QuadSpec& spec = {});

/// Long-time plateau of a log indicator. `divergent` means the plateau is
/// -inf (the factor decays to exactly zero); value is then -inf as well.
struct Asymptote {
  double value;
  bool divergent;
};

/// -2 int u(w) coth(w/2T) J(w) / w^2 dw. Divergent when the weight reaches
/// w = 0 and s <= 2 (T > 0) or s <= 1 (T = 0).
Asymptote asymptotic_log_decoherence(const Environment& env,
                                     Role role = Role::Unobserved,
                                     const QuadSpec& spec = {});

/// -2 int w(w) tanh(w/2T) J(w) / w^2 dw. Finite for T > 0; at T = 0 it
/// coincides with the decoherence plateau and diverges for s <= 1.
Asymptote asymptotic_log_fidelity(const Environment& env,
                                  Role role = Role::Observed,
                                  const QuadSpec& spec = {});

enum class Method { Quadrature, ClosedForm };

struct IndicatorSeries {
  std::vector<double> times;
  std::vector<double> log_dec;
  std::vector<double> log_fid;
  std::vector<double> gamma;
  Method method = Method::Quadrature;
};

/// Evaluates the three indicators on a strictly increasing time grid. The
/// closed-form method is limited to the uncut partition with s > 1.
IndicatorSeries indicator_series(const Environment& env,
                                 std::span<const double> times,
                                 Method method = Method::Quadrature,
                                 const QuadSpec& spec = {});

}  // namespace sbo
