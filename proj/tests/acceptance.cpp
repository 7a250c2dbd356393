// Acceptance checks. One line per criterion: "criterion N PASS|FAIL: detail".
// Exit status is 1 if any selected criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sbo/closed_forms.hpp"
#include "sbo/indicators.hpp"
#include "sbo/non_markovianity.hpp"
#include "sbo/oracle.hpp"

using namespace sbo;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Environment uncut(double s, double T, double cutoff = 1.0) {
  return Environment(SpectralDensity(s, cutoff), EnvPartition::uncut(), T);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome markovian_threshold() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string d;
  for (double s : {1.5, 2.0, 3.0, 4.0, 5.0}) {
    const double v = non_markovianity(uncut(s, 1.0)).value;
    ok &= s <= 3.0 ? v <= 1e-6 : v > 1e-3;
    d += fmt("N(s=%g)=%.4g ", s, v);
  }
  const double el = seconds_since(t0);
  ok &= el < 60.0;
  return {ok, d + fmt("time=%.1fs", el)};
}

Outcome zero_crossing() {
  const double target = std::sqrt(3.0);
  const auto g = [](double t) { return closed_gamma_rate(4.0, 0.0, 1.0, t); };
  double a = 0.01, b = a;
  while (g(b) > 0.0) {
    a = b;
    b += 0.01;
  }
  while (b - a > 1e-14) {
    const double m = 0.5 * (a + b);
    (g(m) > 0.0 ? a : b) = m;
  }
  const double t0 = 0.5 * (a + b);
  const double quad = gamma_rate(uncut(4.0, 0.0), target);
  return {std::abs(t0 - target) <= 1e-6,
          fmt("first zero at %.12g, expected %.12g (gamma(sqrt3)=%.4g)", t0, target, quad)};
}

Outcome closed_vs_quadrature() {
  double worst = 0.0;
  std::string where;
  for (double s : {2.0, 3.0, 4.0, 5.0, 6.0})
    for (double T : {0.1, 1.0, 10.0})
      for (double t : {0.1, 1.0, 5.0, 20.0}) {
        const Environment env = uncut(s, T);
        const double pairs[2][2] = {
            {log_decoherence(env, t), closed_log_decoherence(s, T, 1.0, t)},
            {log_fidelity(env, t, Role::Unobserved), closed_log_fidelity(s, T, 1.0, t)}};
        for (const auto& p : pairs) {
          const double rel = std::abs(p[0] - p[1]) / std::abs(p[1]);
          if (rel > worst) {
            worst = rel;
            where = fmt("s=%g T=%g t=%g", s, T, t);
          }
        }
      }
  return {worst <= 1e-8, fmt("max relative difference %.3g at %s", worst, where.c_str())};
}

Outcome ordering_and_limits() {
  std::mt19937_64 rng(20261018);
  std::uniform_real_distribution<double> s_d(0.5, 6.0), c_d(0.2, 4.0), T_d(0.01, 10.0),
      t_d(0.01, 30.0), b_d(0.3, 5.0);
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const double beta = b_d(rng);
    const EnvPartition parts[] = {EnvPartition::uncut(), EnvPartition::single_cut(beta),
                                  EnvPartition::window(0.5 * beta, 2.0 * beta)};
    const Environment env(SpectralDensity(s_d(rng), c_d(rng)), parts[i % 3], T_d(rng));
    const double t = t_d(rng);
    const Role role = i % 2 ? Role::Observed : Role::Unobserved;
    const double d = log_decoherence(env, t, role);
    const double f = log_fidelity(env, t, role);
    if (d > f + 1e-12 * std::abs(d)) ++violations;
  }
  double worst = 0.0;
  for (double s : {1.5, 2.0, 3.0, 5.0})
    for (double t : {0.5, 2.0, 10.0}) {
      const Environment env = uncut(s, 1e-9);
      const double d = log_decoherence(env, t);
      const double f = log_fidelity(env, t, Role::Unobserved);
      worst = std::max(worst, std::abs(d - f) / std::abs(f));
    }
  return {violations == 0 && worst <= 1e-6,
          fmt("%d ordering violations in 100 sets; max relative gap at T=1e-9: %.3g",
              violations, worst)};
}

Outcome derivative_consistency() {
  bool ok = true;
  std::string d;
  for (double s : {2.0, 4.0})
    for (double T : {0.0, 1.0}) {
      const Environment env = uncut(s, T);
      const double t = 1.3;
      const double g = gamma_rate(env, t);
      double err[3];
      const double hs[3] = {1e-2, 5e-3, 2.5e-3};
      for (int i = 0; i < 3; ++i) {
        const double h = hs[i];
        const double fd = -0.5 * (log_decoherence(env, t + h) - log_decoherence(env, t - h)) / (2 * h);
        err[i] = std::abs(fd - g);
      }
      const double r1 = err[0] / err[1], r2 = err[1] / err[2];
      ok &= std::abs(r1 - 4.0) <= 0.2 && std::abs(r2 - 4.0) <= 0.2;
      d += fmt("s=%g T=%g ratios %.3f %.3f; ", s, T, r1, r2);
    }
  return {ok, d};
}

Outcome discrete_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const SpectralDensity sd(3.0, 1.0);
  const Environment env(sd, EnvPartition::uncut(), 1.0);
  const double t = 2.0;
  const ModeSet modes = discretize(sd, EnvPartition::uncut(), Role::Unobserved, 20000, 40.0);
  const ProductIndicators p = product_indicators(modes, 1.0, t);
  const double qd = log_decoherence(env, t);
  const double qf = log_fidelity(env, t, Role::Unobserved);
  const double rd = std::abs(p.log_dec - qd) / std::abs(qd);
  const double rf = std::abs(p.log_fid - qf) / std::abs(qf);
  const double el = seconds_since(t0);
  return {rd <= 1e-3 && rf <= 1e-3 && el < 60.0,
          fmt("relative error log|G| %.3g, log B %.3g, time=%.2fs", rd, rf, el)};
}

Outcome fock_ground_truth() {
  bool ok = true;
  double worst_fid = 0.0;
  std::string per;
  const Mode mode{1.0, 0.5};
  for (double nbar : {0.0, 0.5, 2.0}) {
    const double T = nbar == 0.0 ? 0.0 : mode.omega / std::log1p(1.0 / nbar);
    double worst = 0.0;
    for (double t : {0.5 * std::numbers::pi, std::numbers::pi}) {
      const Complex a = displacement_amplitude(mode, t);
      const CMatrix r0 = displaced_thermal_operator(a, a, nbar, 40);
      const CMatrix r1 = displaced_thermal_operator(-a, -a, nbar, 40);
      const double f = uhlmann_fidelity(r0 / r0.trace().real(), r1 / r1.trace().real());
      worst = std::max(worst, std::abs(f - mode_fidelity(mode, T, t)));
    }
    per += fmt("nbar=%g %.2g ", nbar, worst);
    worst_fid = std::max(worst_fid, worst);
  }
  ok &= worst_fid <= 1e-6;

  const Qubit plus = Qubit::Constant(Complex(0.5, 0.0));
  const ModeSet obs({{1.0, 0.5}, {1.7, 0.4}}), unobs({{0.6, 0.3}});
  double herm = 0.0, trace = 0.0;
  bool psd = true;
  for (double T : {0.0, 0.5})
    for (double t : {0.3, 1.3, 4.0}) {
      const StateValidity v =
          check_state(build_partially_reduced_state(obs, unobs, plus, T, t).matrix());
      herm = std::max(herm, v.hermiticity_error);
      trace = std::max(trace, v.trace_error);
      psd &= v.positive;
    }
  ok &= herm <= 1e-9 && trace <= 1e-9 && psd;

  double res[3];
  const double dts[3] = {1e-2, 5e-3, 2.5e-3};
  for (int i = 0; i < 3; ++i)
    res[i] = master_equation_residual(ModeSet({{1.0, 0.5}}), unobs, plus, 0.5, 1.0, dts[i]);
  const double r1 = res[0] / res[1], r2 = res[1] / res[2];
  ok &= std::abs(r1 - 4.0) <= 0.2 && std::abs(r2 - 4.0) <= 0.2;
  return {ok, fmt("fidelity error (%s) max %.3g; state hermiticity %.2g trace %.2g psd %s; "
                  "residual ratios %.3f %.3f",
                  per.c_str(), worst_fid, herm, trace, psd ? "yes" : "no", r1, r2)};
}

Outcome cut_induced() {
  const Environment cut(SpectralDensity(3.0, 1.0), EnvPartition::single_cut(2.0), 1.0);
  const double c = non_markovianity(cut).value;
  const double u = non_markovianity(uncut(3.0, 1.0)).value;
  return {c > 1e-3 && u <= 1e-6, fmt("N(cut)=%.4g N(uncut)=%.3g", c, u)};
}

Outcome soft_vs_sharp() {
  const SpectralDensity sd(4.0, 1.0);
  const double sharp =
      non_markovianity(Environment(sd, EnvPartition::single_cut(2.0), 1.0)).value;
  const double soft =
      non_markovianity(Environment(sd, EnvPartition::soft_single_cut(2.0, 0.01), 1.0)).value;
  const double rel = std::abs(soft - sharp) / sharp;
  return {rel <= 0.1, fmt("N(sharp)=%.6g N(soft)=%.6g relative %.3g", sharp, soft, rel)};
}

Outcome single_cut_reciprocity() {
  const SpectralDensity sd(5.0, 1.0);
  NMOptions opts;
  opts.check_horizon = false;
  std::vector<double> betas, dec, fid, nm;
  for (double b = 0.5; b <= 8.0 + 1e-12; b += 0.5) {
    const Environment env(sd, EnvPartition::single_cut(b), 1.0);
    betas.push_back(b);
    dec.push_back(-asymptotic_log_decoherence(env).value);
    fid.push_back(-asymptotic_log_fidelity(env).value);
    nm.push_back(non_markovianity(env, opts).value);
  }
  bool mono = true;
  for (std::size_t i = 1; i < betas.size(); ++i) {
    const double tol = 1e-9 * std::max(std::abs(dec[i]), std::abs(fid[i]));
    mono &= dec[i] < dec[i - 1] + tol && fid[i] > fid[i - 1] - tol;
  }
  const std::size_t k = std::max_element(nm.begin(), nm.end()) - nm.begin();
  const bool interior = k > 0 && k + 1 < nm.size();
  const bool near = std::abs(betas[k] - 4.0) <= 1.0;
  return {mono && interior && near,
          fmt("asymptotes monotone %s; N max %.4g at beta=%g (interior %s)",
              mono ? "yes" : "no", nm[k], betas[k], interior ? "yes" : "no")};
}

Outcome ohmicity_trend() {
  bool ok = true;
  std::string d;
  double pd = -INFINITY, pf = -INFINITY;
  for (double s : {2.0, 3.0, 4.0, 5.0}) {
    const Environment env = uncut(s, 1.0);
    const Asymptote a = asymptotic_log_decoherence(env);
    const double vd = -a.value;
    const double vf = -asymptotic_log_fidelity(env, Role::Unobserved).value;
    ok &= vd > pd && vf > pf;
    pd = vd;
    pf = vf;
    d += fmt("s=%g -log|G|=%.4g%s -logB=%.4g; ", s, vd, a.divergent ? " (divergent)" : "", vf);
  }
  return {ok, d};
}

Outcome high_temperature_linearity() {
  const double Ts[3] = {20.0, 40.0, 80.0};
  double n[3];
  for (int i = 0; i < 3; ++i) n[i] = non_markovianity(uncut(4.0, Ts[i])).value;
  const double mt = (Ts[0] + Ts[1] + Ts[2]) / 3.0, mn = (n[0] + n[1] + n[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (Ts[i] - mt) * (n[i] - mn);
    sxx += (Ts[i] - mt) * (Ts[i] - mt);
  }
  const double slope = sxy / sxx;
  double resid = 0.0;
  for (int i = 0; i < 3; ++i) resid = std::max(resid, std::abs(n[i] - mn - slope * (Ts[i] - mt)));
  const double range = *std::max_element(n, n + 3) - *std::min_element(n, n + 3);
  return {resid <= 0.02 * range,
          fmt("N=%.6g %.6g %.6g; slope %.6g (%s); max residual %.3g = %.3g%% of range", n[0],
              n[1], n[2], slope, slope > 0 ? "increasing" : "decreasing", resid,
              100.0 * resid / range)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::function<Outcome()>> criteria = {
      {1, markovian_threshold},    {2, zero_crossing},          {3, closed_vs_quadrature},
      {4, ordering_and_limits},    {5, derivative_consistency}, {6, discrete_oracle},
      {7, fock_ground_truth},      {8, cut_induced},            {9, soft_vs_sharp},
      {10, single_cut_reciprocity}, {11, ohmicity_trend},       {12, high_temperature_linearity}};

  bool all = true;
  for (const auto& [n, run] : criteria) {
    if (only != 0 && n != only) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all &= o.pass;
  }
  return all ? 0 : 1;
}
