#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sbo/spectral_model.hpp"

using namespace sbo;

TEST_CASE("density values") {
  CHECK(SpectralDensity(1.0, 1.0)(0.0) == 0.0);
  CHECK(SpectralDensity(2.0, 1.0)(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(SpectralDensity(4.0, 2.0)(2.0) ==
        doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(SpectralDensity(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(SpectralDensity(1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(SpectralDensity(1.0, 1.0)(-0.5), std::domain_error);
}

TEST_CASE("density is nonnegative and over_power matches the direct quotient") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> s_dist(0.2, 7.0), c_dist(0.1, 5.0),
      w_dist(1e-6, 60.0);
  for (int i = 0; i < 500; ++i) {
    const SpectralDensity sd(s_dist(rng), c_dist(rng));
    const double w = w_dist(rng);
    CHECK(sd(w) >= 0.0);
    if (sd(w) > 1e-280)
      CHECK(sd.over_power(w, 2.0) == doctest::Approx(sd(w) / (w * w)).epsilon(1e-12));
  }
}

TEST_CASE("partition weights") {
  const auto single = EnvPartition::single_cut(3.0);
  CHECK(single.observed_weight(2.0) == 1.0);
  CHECK(single.unobserved_weight(2.0) == 0.0);
  const auto window = EnvPartition::window(3.0, 5.0);
  CHECK(window.observed_weight(6.0) == 0.0);
  CHECK(window.unobserved_weight(6.0) == 1.0);
  const auto soft = EnvPartition::soft_window(3.0, 5.0, 0.05);
  CHECK(soft.observed_weight(4.0) > 0.99);
  CHECK(soft.observed_weight(4.0) <= 1.0);
  const auto uncut = EnvPartition::uncut();
  for (double w : {0.0, 0.3, 7.0, 100.0}) {
    CHECK(uncut.observed_weight(w) == 1.0);
    CHECK(uncut.unobserved_weight(w) == 1.0);
  }
}

TEST_CASE("weights are complementary except for the uncut partition") {
  const EnvPartition parts[] = {
      EnvPartition::single_cut(2.0), EnvPartition::window(1.0, 4.0),
      EnvPartition::window_from_width(4.0, 2.0), EnvPartition::soft_window(1.0, 4.0, 0.2),
      EnvPartition::soft_single_cut(2.0, 0.01)};
  for (const auto& p : parts) {
    for (double w = 0.0; w < 10.0; w += 0.0137) {
      const double o = p.observed_weight(w);
      const double u = p.unobserved_weight(w);
      CHECK(o >= 0.0);
      CHECK(o <= 1.0);
      CHECK(o + u == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("soft window approaches the sharp window as sigma shrinks") {
  const auto sharp = EnvPartition::window(2.0, 5.0);
  for (double w : {0.5, 1.9, 2.1, 3.0, 4.9, 5.1, 8.0}) {
    double prev = 1.0;
    for (double sigma : {0.1, 0.01, 0.001}) {
      const auto soft = EnvPartition::soft_window(2.0, 5.0, sigma);
      const double err = std::abs(soft.observed_weight(w) - sharp.observed_weight(w));
      CHECK(err <= prev + 1e-300);
      prev = err;
    }
    CHECK(prev < 1e-20);
  }
}

TEST_CASE("soft flanks are monotone") {
  const auto soft = EnvPartition::soft_window(3.0, 6.0, 0.3);
  double prev = -1.0;
  for (double w = 0.0; w <= 4.5; w += 0.01) {
    CHECK(soft.observed_weight(w) >= prev);
    prev = soft.observed_weight(w);
  }
  prev = 2.0;
  for (double w = 4.5; w <= 10.0; w += 0.01) {
    CHECK(soft.observed_weight(w) <= prev);
    prev = soft.observed_weight(w);
  }
}

TEST_CASE("invalid partitions are rejected") {
  CHECK_THROWS_AS(EnvPartition::single_cut(-1.0), std::domain_error);
  CHECK_THROWS_AS(EnvPartition::window(4.0, 3.0), std::domain_error);
  CHECK_THROWS_AS(EnvPartition::soft_window(1.0, 3.0, 0.0), std::domain_error);
}

TEST_CASE("mode set invariants") {
  CHECK_NOTHROW(ModeSet({{0.5, 0.1}, {1.0, 0.0}}));
  CHECK_THROWS_AS(ModeSet({{1.0, 0.1}, {1.0, 0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(ModeSet({{0.0, 0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(ModeSet({{1.0, -0.1}}), std::invalid_argument);
}

TEST_CASE("single-mode discretisation by hand") {
  const ModeSet m = discretize(SpectralDensity(2.0, 1.0), EnvPartition::uncut(),
                               Role::Unobserved, 1, 2.0);
  REQUIRE(m.size() == 1);
  CHECK(m[0].omega == doctest::Approx(1.0));
  CHECK(m[0].g * m[0].g == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("modes above a single cut carry no observed coupling") {
  const ModeSet m = discretize(SpectralDensity(3.0, 1.0), EnvPartition::single_cut(2.0),
                               Role::Observed, 100, 10.0);
  for (const Mode& mode : m.modes())
    if (mode.omega > 2.0) CHECK(mode.g == 0.0);
}

TEST_CASE("discretisation is linear in J") {
  const ModeSet m = discretize(SpectralDensity(3.0, 1.0), EnvPartition::uncut(),
                               Role::Observed, 50, 10.0);
  const ModeSet d = m.scaled(2.0);
  for (std::size_t k = 0; k < m.size(); ++k)
    CHECK(d[k].g * d[k].g == doctest::Approx(2.0 * m[k].g * m[k].g).epsilon(1e-14));
}

TEST_CASE("Riemann sums converge to the integral of J / w^2") {
  const SpectralDensity sd(2.0, 1.0);
  double prev = 16.0 * 40.0 * 40.0 / (24.0 * 100.0 * 100.0);
  for (std::size_t n : {100, 400, 1600}) {
    const ModeSet m = discretize(sd, EnvPartition::uncut(), Role::Unobserved, n, 40.0);
    double sum = 0.0;
    for (const Mode& mode : m.modes()) sum += 2.0 * mode.g * mode.g / (mode.omega * mode.omega);
    const double err = std::abs(sum - (1.0 - std::exp(-40.0)));
    // midpoint rule: quadrupling n divides the error by ~16
    CHECK(prev / err == doctest::Approx(16.0).epsilon(0.05));
    prev = err;
  }
  CHECK(prev < 3e-5);
}

TEST_CASE("default frequency range") {
  const double wmax = default_omega_max(SpectralDensity(2.0, 1.0));
  CHECK(wmax > 30.0);
  CHECK(wmax < 60.0);
}
