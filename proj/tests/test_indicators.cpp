#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sbo/closed_forms.hpp"
#include "sbo/indicators.hpp"

using namespace sbo;

namespace {

Environment uncut(double s, double T, double cutoff = 1.0) {
  return Environment(SpectralDensity(s, cutoff), EnvPartition::uncut(), T);
}

// First t on a grid of step h where f changes sign from + to -, refined by
// bisection.
double first_down_crossing(const std::function<double(double)>& f, double h, double t_end) {
  double a = h;
  double fa = f(a);
  for (double b = 2 * h; b <= t_end; b += h) {
    const double fb = f(b);
    if (fa > 0.0 && fb < 0.0) {
      double lo = a, hi = b;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
  }
  return -1.0;
}

}  // namespace

TEST_CASE("values at t = 0 are exactly zero") {
  const Environment envs[] = {
      uncut(2.0, 1.0), uncut(0.5, 0.0),
      Environment(SpectralDensity(3.0, 1.0), EnvPartition::single_cut(2.0), 1.0),
      Environment(SpectralDensity(3.0, 2.0), EnvPartition::soft_window(1.0, 3.0, 0.1), 0.3)};
  for (const auto& env : envs) {
    CHECK(log_decoherence(env, 0.0) == 0.0);
    CHECK(log_fidelity(env, 0.0) == 0.0);
    CHECK(gamma_rate(env, 0.0) == 0.0);
  }
  CHECK(gamma_rate_high_temperature(uncut(4.0, 2.0), 0.0) == 0.0);
}

TEST_CASE("ohmic s = 2 at zero temperature") {
  const Environment env = uncut(2.0, 0.0);
  CHECK(log_decoherence(env, 1.0) == doctest::Approx(-1.0).epsilon(1e-11));
  CHECK(log_fidelity(env, 1.0) == doctest::Approx(-1.0).epsilon(1e-11));
  const double t = 1e4;
  CHECK(log_decoherence(env, t) == doctest::Approx(-2.0 * t * t / (1.0 + t * t)).epsilon(1e-9));
}

TEST_CASE("fidelity tends to one at high temperature") {
  double prev = -1.0;
  for (double T : {1.0, 10.0, 100.0, 1000.0}) {
    const double v = log_fidelity(uncut(2.0, T), 1.0);
    CHECK(v > prev);
    CHECK(v <= 0.0);
    prev = v;
  }
  CHECK(prev > -2e-3);
}

TEST_CASE("canonical rate zero crossings at zero temperature") {
  for (double s : {3.0, 4.0, 5.0}) {
    const Environment env = uncut(s, 0.0);
    const double t0 = first_down_crossing(
        [&](double t) { return gamma_rate(env, t); }, 0.01, 10.0);
    CHECK(t0 == doctest::Approx(std::tan(std::numbers::pi / s)).epsilon(1e-9));
  }
}

TEST_CASE("high-temperature rate crosses where the w^(s-2) sine moment does") {
  for (double s : {4.0, 5.0}) {
    const Environment env = uncut(s, 3.0);
    const double t0 = first_down_crossing(
        [&](double t) { return gamma_rate_high_temperature(env, t); }, 0.01, 10.0);
    CHECK(t0 == doctest::Approx(std::tan(std::numbers::pi / (s - 1.0))).epsilon(1e-9));
  }
  // s = 3: (s - 1) atan t < pi, so the high-temperature rate never turns negative
  const Environment env3 = uncut(3.0, 2.0);
  for (double t = 0.05; t < 60.0; t += 0.05)
    CHECK(gamma_rate_high_temperature(env3, t) >= 0.0);
}

TEST_CASE("high-temperature rate approximates the full rate") {
  const Environment env = uncut(4.0, 100.0);
  const double full = gamma_rate(env, 1.0);
  const double high = gamma_rate_high_temperature(env, 1.0);
  CHECK(std::abs(high - full) <= 0.01 * std::abs(full));
  CHECK_THROWS_AS(gamma_rate_high_temperature(uncut(4.0, 0.0), 1.0), std::domain_error);
}

TEST_CASE("asymptotic values") {
  const Asymptote a5 = asymptotic_log_decoherence(uncut(5.0, 0.0));
  CHECK_FALSE(a5.divergent);
  CHECK(a5.value == doctest::Approx(-12.0).epsilon(1e-11));
  CHECK(asymptotic_log_fidelity(uncut(5.0, 0.0)).value == doctest::Approx(-12.0).epsilon(1e-11));
  const Asymptote d2 = asymptotic_log_decoherence(uncut(2.0, 0.5));
  CHECK(d2.divergent);
  CHECK(std::isinf(d2.value));
  CHECK_FALSE(asymptotic_log_fidelity(uncut(2.0, 0.5)).divergent);
  CHECK(asymptotic_log_fidelity(uncut(1.0, 0.0)).divergent);
  CHECK(asymptotic_log_fidelity(uncut(3.0, 1e4)).value > -1e-3);
  for (double s : {2.5, 4.0}) {
    const Environment env(SpectralDensity(s, 1.0), EnvPartition::window(0.5, 3.0), 0.0);
    CHECK(asymptotic_log_fidelity(env).value ==
          doctest::Approx(asymptotic_log_decoherence(env, Role::Observed).value).epsilon(1e-12));
  }
}

TEST_CASE("window complement plateau matches the asymptote") {
  const Environment env(SpectralDensity(5.0, 1.0), EnvPartition::window(3.0, 5.0), 1.0);
  const Asymptote a = asymptotic_log_decoherence(env);
  REQUIRE_FALSE(a.divergent);
  const double late = log_decoherence(env, 50.0);
  CHECK(std::abs(late - a.value) <= 0.01 * std::abs(a.value));
}

TEST_CASE("decoherence never exceeds the fidelity bound") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> s_d(0.5, 6.0), c_d(0.2, 4.0), T_d(0.01, 10.0),
      t_d(0.01, 30.0), b_d(0.3, 5.0);
  for (int i = 0; i < 60; ++i) {
    const double beta = b_d(rng);
    const EnvPartition parts[] = {EnvPartition::uncut(), EnvPartition::single_cut(beta),
                                  EnvPartition::soft_window(0.0, beta, 0.05)};
    const Environment env(SpectralDensity(s_d(rng), c_d(rng)), parts[i % 3], T_d(rng));
    const double t = t_d(rng);
    for (Role role : {Role::Observed, Role::Unobserved}) {
      const double d = log_decoherence(env, t, role);
      const double f = log_fidelity(env, t, role);
      CHECK(d <= 0.0);
      CHECK(f <= 0.0);
      CHECK(d <= f + 1e-12 * std::abs(d));
    }
  }
}

TEST_CASE("both indicators coincide as T -> 0") {
  for (double s : {1.5, 3.0, 5.0}) {
    const Environment env = uncut(s, 1e-9);
    for (double t : {0.5, 3.0}) {
      const double d = log_decoherence(env, t);
      const double f = log_fidelity(env, t);
      CHECK(std::abs(d - f) <= 1e-6 * std::abs(f));
    }
  }
}

TEST_CASE("rate is minus half the derivative of log decoherence") {
  for (double s : {2.0, 3.5}) {
    const Environment env = uncut(s, 0.7);
    const double t = 1.3;
    const double g = gamma_rate(env, t);
    std::array<double, 3> err{};
    const std::array<double, 3> hs = {1e-2, 5e-3, 2.5e-3};
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const double h = hs[i];
      const double fd = -0.5 * (log_decoherence(env, t + h) - log_decoherence(env, t - h)) / (2 * h);
      err[i] = std::abs(fd - g);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("fidelity of disjoint fractions adds") {
  const SpectralDensity sd(3.0, 1.0);
  const double T = 0.8, t = 2.5;
  const double low = log_fidelity(Environment(sd, EnvPartition::single_cut(2.0), T), t);
  const double high = log_fidelity(Environment(sd, EnvPartition::window(2.0, 5.0), T), t);
  const double both = log_fidelity(Environment(sd, EnvPartition::window(0.0, 5.0), T), t);
  CHECK(low + high == doctest::Approx(both).epsilon(1e-10));
}

TEST_CASE("single cut splits the uncut decoherence") {
  const SpectralDensity sd(2.5, 1.0);
  const Environment cut(sd, EnvPartition::single_cut(1.7), 0.4);
  const double whole = log_decoherence(uncut(2.5, 0.4), 3.0);
  const double parts = log_decoherence(cut, 3.0, Role::Observed) +
                       log_decoherence(cut, 3.0, Role::Unobserved);
  CHECK(parts == doctest::Approx(whole).epsilon(1e-10));
}

TEST_CASE("sub-ohmic and low-frequency thermal integrands") {
  // s = 0.5 at T > 0: integrand ~ w^(-1.5) (1 - cos wt) stays integrable
  const Environment env = uncut(0.5, 2.0);
  const double v = log_decoherence(env, 1.0);
  CHECK(std::isfinite(v));
  CHECK(v < 0.0);
  CHECK(thermal_coth(1e-8, 1.0, 1.0) == doctest::Approx(2e8).epsilon(1e-15));
  CHECK(thermal_coth(5.0, 0.0, 1.0) == 1.0);
  CHECK(thermal_tanh(5.0, 0.0) == 1.0);
}

TEST_CASE("indicator series") {
  const std::vector<double> times = {0.0, 0.5, 1.0, 4.0};
  const Environment env = uncut(3.0, 1.0);
  const IndicatorSeries q = indicator_series(env, times, Method::Quadrature);
  const IndicatorSeries c = indicator_series(env, times, Method::ClosedForm);
  CHECK(q.log_dec[0] == 0.0);
  CHECK(q.log_fid[0] == 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(q.log_dec[i] == doctest::Approx(c.log_dec[i]).epsilon(1e-9));
    CHECK(q.log_fid[i] == doctest::Approx(c.log_fid[i]).epsilon(1e-9));
    CHECK(q.gamma[i] == doctest::Approx(c.gamma[i]).epsilon(1e-9));
  }
  const std::vector<double> bad = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(indicator_series(env, bad, Method::Quadrature), std::invalid_argument);
  const Environment cut(SpectralDensity(3.0, 1.0), EnvPartition::single_cut(2.0), 1.0);
  CHECK_THROWS_AS(indicator_series(cut, times, Method::ClosedForm), std::domain_error);
  CHECK_THROWS_AS(log_decoherence(env, -1.0), std::domain_error);
  CHECK_THROWS_AS(Environment(SpectralDensity(3.0, 1.0), EnvPartition::uncut(), -1.0),
                  std::domain_error);
}
