#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "config.hpp"

namespace cli {

namespace {

std::string num(double v) { return format_value(v); }

std::vector<double> time_grid(const RunConfig& c, double default_tmax) {
  const double tmax = c.tmax.value_or(default_tmax / c.lambda);
  if (!(tmax > c.tmin) || c.tmin < 0.0) throw UsageError("tmax: need tmax > tmin >= 0");
  if (c.points < 2) throw UsageError("points: need at least 2");
  std::vector<double> t(c.points);
  for (int i = 0; i < c.points; ++i)
    t[i] = c.tmin + (tmax - c.tmin) * i / (c.points - 1);
  return t;
}

bool wants_quad(MethodChoice m) { return m != MethodChoice::Closed; }
bool wants_closed(MethodChoice m) { return m != MethodChoice::Quad; }

void note_divergence(Table& t, const std::vector<double>& values) {
  if (std::any_of(values.begin(), values.end(), [](double v) { return std::isinf(v); }))
    t.note("inf marks a divergent asymptote (the decoherence factor decays to zero)");
}

}  // namespace

sbo_params RunConfig::params() const {
  sbo_params p{};
  p.s = s;
  p.cutoff = lambda;
  p.temperature = temp;
  p.alpha = resolved_alpha();
  p.beta = beta;
  p.sigma = resolved_sigma();
  if (cut == "uncut") p.cut = SBO_CUT_UNCUT;
  else if (cut == "single") p.cut = SBO_CUT_SINGLE;
  else if (cut == "window") p.cut = SBO_CUT_WINDOW;
  else if (cut == "soft") p.cut = SBO_CUT_SOFT;
  else throw UsageError("cut: unknown kind '" + cut + "'");
  return p;
}

double RunConfig::resolved_alpha() const { return delta ? beta - *delta : alpha; }

sbo_quad_options RunConfig::quad() const { return {rel_tol, abs_tol, max_depth}; }

const char* method_name(MethodChoice m) {
  switch (m) {
    case MethodChoice::Quad: return "quadrature";
    case MethodChoice::Closed: return "closed_form";
    case MethodChoice::Both: return "quadrature+closed_form";
  }
  return "";
}

void RunConfig::describe(Table& t) const {
  t.meta("artifact", std::string("sbo ") + sbo_version());
  t.meta("scenario", scenario);
  if (!tag.empty()) t.meta("tag", tag);
  t.meta("s", s);
  t.meta("lambda", lambda);
  t.meta("temp", temp);
  t.meta("cut", cut);
  t.meta("alpha", resolved_alpha());
  t.meta("beta", beta);
  t.meta("delta", delta ? num(*delta) : "unset");
  t.meta("sigma", resolved_sigma());
  t.meta("tmin", tmin);
  t.meta("tmax", tmax ? num(*tmax) : "scenario default");
  t.meta("points", points);
  t.meta("nm_grid", nm_grid ? std::to_string(nm_grid) : "library default");
  t.meta("high_temperature", high_temperature ? "true" : "false");
  t.meta("param", param);
  t.meta("from", from);
  t.meta("to", to);
  t.meta("steps", steps);
  t.meta("modes", static_cast<double>(modes));
  t.meta("omega_max", omega_max ? num(*omega_max) : num(40.0 * lambda));
  t.meta("rel_tol", rel_tol);
  t.meta("abs_tol", abs_tol);
  t.meta("max_depth", max_depth);
  t.meta("units", "times as lambda*t; frequencies and rates divided by lambda");
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

Table run_gamma_curve(const RunConfig& c) {
  const Model m = c.model();
  const auto ts = time_grid(c, 20.0);
  std::vector<std::string> cols = {"lambda_t"};
  if (wants_quad(c.method)) cols.push_back("gamma_per_lambda");
  if (wants_closed(c.method)) cols.push_back("gamma_closed_per_lambda");
  if (c.high_temperature) cols.push_back("gamma_high_temperature_per_lambda");
  Table t(cols);
  c.describe(t);
  t.meta("method", method_name(c.method));
  double worst = 0.0;
  for (double x : ts) {
    std::vector<double> row = {c.lambda * x};
    double q = 0.0;
    if (wants_quad(c.method)) row.push_back((q = m.gamma(x)) / c.lambda);
    if (wants_closed(c.method)) {
      const double cl = m.closed_gamma(x);
      row.push_back(cl / c.lambda);
      if (wants_quad(c.method)) worst = std::max(worst, std::abs(cl - q) / c.lambda);
    }
    if (c.high_temperature) row.push_back(m.gamma_high(x) / c.lambda);
    t.add_row(std::move(row));
  }
  if (c.method == MethodChoice::Both) t.meta("max_abs_difference", worst);
  return t;
}

Table run_indicators(const RunConfig& c) {
  const Model m = c.model();
  const auto ts = time_grid(c, 20.0);
  std::vector<std::string> cols = {"lambda_t"};
  if (wants_quad(c.method))
    for (const char* n : {"log_dec", "log_fid", "gamma_per_lambda"}) cols.push_back(n);
  if (wants_closed(c.method))
    for (const char* n : {"log_dec_closed", "log_fid_closed", "gamma_closed_per_lambda"})
      cols.push_back(n);
  Table t(cols);
  c.describe(t);
  t.meta("method", method_name(c.method));
  t.meta("log_dec_role", "unobserved");
  t.meta("log_fid_role", "observed");
  double worst = 0.0;
  for (double x : ts) {
    std::vector<double> row = {c.lambda * x};
    if (wants_quad(c.method)) {
      row.push_back(m.log_dec(x));
      row.push_back(m.log_fid(x));
      row.push_back(m.gamma(x) / c.lambda);
    }
    if (wants_closed(c.method)) {
      row.push_back(m.closed_log_dec(x));
      row.push_back(m.closed_log_fid(x));
      row.push_back(m.closed_gamma(x) / c.lambda);
    }
    if (c.method == MethodChoice::Both)
      for (int k = 1; k <= 3; ++k) {
        const double a = row[k], b = row[k + 3];
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
      }
    t.add_row(std::move(row));
  }
  if (c.method == MethodChoice::Both) t.meta("max_relative_difference", worst);
  return t;
}

Table run_nmeasure(const RunConfig& c) {
  const Model m = c.model();
  const double tmax = c.tmax.value_or(50.0 / c.lambda);
  const NMResult r(m, tmax, c.nm_grid, c.high_temperature);
  Table t({"s", "temp_over_lambda", "lambda_tmax", "nm", "nm_doubled_horizon", "converged",
           "negative_intervals"});
  c.describe(t);
  t.meta("method", "quadrature");
  t.meta("rate", c.high_temperature ? "high-temperature" : "full");
  for (std::size_t i = 0; i < r.intervals(); ++i) {
    const auto [a, b] = r.interval(i);
    t.meta("interval_" + std::to_string(i), num(c.lambda * a) + " " + num(c.lambda * b));
  }
  for (std::size_t i = 0; i < r.diagnostics(); ++i) t.note(r.diagnostic(i));
  t.add_row({c.s, c.temp / c.lambda, c.lambda * tmax, r.value(), r.doubled(),
             r.converged() ? 1.0 : 0.0, static_cast<double>(r.intervals())});
  return t;
}

Table run_sweep(const RunConfig& c) {
  if (c.steps < 1) throw UsageError("steps: need at least 1");
  static const char* const known[] = {"s", "lambda", "temp", "alpha", "beta", "delta", "sigma"};
  if (std::find_if(std::begin(known), std::end(known),
                   [&](const char* k) { return c.param == k; }) == std::end(known))
    throw UsageError("param: cannot sweep '" + c.param + "'");
  const bool scaled = c.param != "s" && c.param != "lambda";
  std::vector<double> values(c.steps);
  for (int i = 0; i < c.steps; ++i)
    values[i] = c.steps == 1 ? c.from : c.from + (c.to - c.from) * i / (c.steps - 1);

  std::vector<std::vector<double>> rows(values.size());
  parallel_for(values.size(), c.threads, [&](std::size_t i) {
    RunConfig p = c;
    const double v = values[i];
    if (c.param == "s") p.s = v;
    else if (c.param == "lambda") p.lambda = v;
    else if (c.param == "temp") p.temp = v;
    else if (c.param == "alpha") p.alpha = v;
    else if (c.param == "beta") p.beta = v;
    else if (c.param == "delta") p.delta = v;
    else p.sigma = v;
    const Model m = p.model();
    const NMResult r(m, p.tmax.value_or(50.0 / p.lambda), p.nm_grid, p.high_temperature);
    rows[i] = {scaled ? v / p.lambda : v, r.value(), r.converged() ? 1.0 : 0.0,
               m.neg_asym_dec(), m.neg_asym_fid()};
  });

  Table t({scaled ? c.param + "_over_lambda" : c.param, "nm", "converged", "neg_asym_log_dec",
           "neg_asym_log_fid"});
  c.describe(t);
  t.meta("method", "quadrature");
  std::vector<double> asym;
  for (auto& r : rows) {
    asym.push_back(r[3]);
    t.add_row(std::move(r));
  }
  note_divergence(t, asym);
  return t;
}

Table run_oracle_check(const RunConfig& c) {
  const Model m = c.model();
  const auto ts = time_grid(c, 20.0);
  const double wmax = c.omega_max.value_or(40.0 * c.lambda);
  Table t({"lambda_t", "log_dec", "oracle_log_dec", "rel_dev_dec", "log_fid", "oracle_log_fid",
           "rel_dev_fid"});
  c.describe(t);
  t.meta("method", "oracle");
  double worst = 0.0;
  const auto rel = [](double a, double b) {
    return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  };
  for (double x : ts) {
    double od, of, unused;
    check(sbo_oracle_product_indicators(m.get(), SBO_UNOBSERVED, c.modes, wmax, x, &od, &unused),
          "oracle");
    check(sbo_oracle_product_indicators(m.get(), SBO_OBSERVED, c.modes, wmax, x, &unused, &of),
          "oracle");
    const double qd = m.log_dec(x), qf = m.log_fid(x);
    const double rd = rel(qd, od), rf = rel(qf, of);
    worst = std::max({worst, rd, rf});
    t.add_row({c.lambda * x, qd, od, rd, qf, of, rf});
  }
  t.meta("max_relative_deviation", worst);

  double fock_worst = 0.0;
  for (double nbar : {0.0, 0.5, 1.0}) {
    double fock, closed;
    check(sbo_oracle_mode_fidelity(nbar, 0.5, 0.0, 40, &fock, &closed), "fock fidelity");
    fock_worst = std::max(fock_worst, std::abs(fock - closed));
  }
  t.meta("fock_fidelity_max_error", fock_worst);

  const double w[] = {1.0, 1.7}, g[] = {0.5, 0.4}, uw[] = {0.6}, ug[] = {0.3};
  sbo_state_report rep;
  check(sbo_oracle_state(w, g, 2, uw, ug, 1, 0.5, 1.3, 0, &rep), "partially reduced state");
  t.meta("state_hermiticity_error", rep.hermiticity_error);
  t.meta("state_trace_error", rep.trace_error);
  t.meta("state_positive", rep.positive ? "true" : "false");
  t.meta("state_overlap_vs_product", std::abs(rep.conditional_overlap - rep.product_overlap));
  double r1, r2;
  check(sbo_oracle_master_residual(w, g, 1, uw, ug, 1, 0.5, 1.0, 1e-2, 0, &r1), "residual");
  check(sbo_oracle_master_residual(w, g, 1, uw, ug, 1, 0.5, 1.0, 5e-3, 0, &r2), "residual");
  t.meta("master_residual_ratio_dt_halved", r1 / r2);
  return t;
}

}  // namespace cli
