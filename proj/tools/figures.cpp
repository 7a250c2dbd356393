#include <cmath>
#include <string>
#include <vector>

#include "config.hpp"

namespace cli {

namespace {

const char* const kTags[] = {"nm-vs-s",          "nm-vs-beta",         "dec-vs-t",
                             "fid-vs-t",         "asymptotics-heatmap", "cut-timeseries",
                             "onecut-comparison", "twocut-comparison"};

std::vector<double> range(double a, double b, double step) {
  std::vector<double> v;
  for (int i = 0; a + i * step <= b + 1e-9 * step; ++i) v.push_back(a + i * step);
  return v;
}

// Recipe parameters are fixed; only lambda, the time grid, tolerances and
// threads come from the run configuration.
RunConfig base(const RunConfig& c, double s) {
  RunConfig p = c;
  p.s = s;
  p.temp = c.lambda;
  p.cut = "uncut";
  p.alpha = 0.0;
  p.delta.reset();
  return p;
}

std::vector<double> times(const RunConfig& c) {
  const double tmax = c.tmax.value_or(20.0 / c.lambda);
  std::vector<double> t(c.points);
  for (int i = 0; i < c.points; ++i) t[i] = c.tmin + (tmax - c.tmin) * i / (c.points - 1);
  return t;
}

struct NMRow {
  double nm, converged, dec, fid;
};

std::vector<NMRow> nm_rows(const std::vector<RunConfig>& cfgs, unsigned threads) {
  std::vector<NMRow> out(cfgs.size());
  parallel_for(cfgs.size(), threads, [&](std::size_t i) {
    const Model m = cfgs[i].model();
    const NMResult r(m, 50.0 / cfgs[i].lambda, cfgs[i].nm_grid, false);
    out[i] = {r.value(), r.converged() ? 1.0 : 0.0, m.neg_asym_dec(), m.neg_asym_fid()};
  });
  return out;
}

Table time_series(const RunConfig& c, bool fidelity) {
  const std::vector<double> ss = {2.0, 3.0, 4.0, 5.0};
  std::vector<std::string> cols = {"lambda_t"};
  for (double s : ss)
    cols.push_back(std::string(fidelity ? "log_fid_s" : "log_dec_s") + format_value(s));
  Table t(cols);
  c.describe(t);
  t.meta("recipe", fidelity ? "log B vs time for s in {2,3,4,5}, uncut, T = lambda"
                            : "log|Gamma| vs time for s in {2,3,4,5}, uncut, T = lambda");
  std::vector<Model> models;
  for (double s : ss) models.push_back(base(c, s).model());
  for (double x : times(c)) {
    std::vector<double> row = {c.lambda * x};
    for (const auto& m : models) row.push_back(fidelity ? m.log_fid(x) : m.log_dec(x));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace

bool is_figure_tag(const std::string& tag) {
  for (const char* k : kTags)
    if (tag == k) return true;
  return false;
}

const char* figure_tags() {
  return "nm-vs-s, nm-vs-beta, dec-vs-t, fid-vs-t, asymptotics-heatmap, cut-timeseries, "
         "onecut-comparison, twocut-comparison";
}

std::pair<Table, int> run_figure(const RunConfig& c) {
  if (!is_figure_tag(c.tag))
    throw UsageError("tag: unknown figure '" + c.tag + "' (expected one of " + figure_tags() + ")");
  if (c.points < 2) throw UsageError("points: need at least 2");
  const std::string& tag = c.tag;

  if (tag == "nm-vs-s") {
    Table t({"s", "lambda_over_temp", "nm", "converged"});
    c.describe(t);
    t.meta("recipe", "N vs s, uncut, lambda/T in {0.5, 1, 2}, t_max = 50/lambda");
    t.note("lambda/T values are representative choices");
    std::vector<RunConfig> cfgs;
    std::vector<std::pair<double, double>> keys;
    for (double ratio : {0.5, 1.0, 2.0})
      for (double s : range(1.0, 6.0, 0.5)) {
        RunConfig p = base(c, s);
        p.temp = c.lambda / ratio;
        cfgs.push_back(p);
        keys.emplace_back(s, ratio);
      }
    const auto rows = nm_rows(cfgs, c.threads);
    for (std::size_t i = 0; i < rows.size(); ++i)
      t.add_row({keys[i].first, keys[i].second, rows[i].nm, rows[i].converged});
    return {std::move(t), 1};
  }

  if (tag == "nm-vs-beta") {
    Table t({"beta_over_lambda", "delta_over_lambda", "nm", "converged"});
    c.describe(t);
    t.meta("recipe", "N vs beta, s = 4, window of width delta in {1, 2} ending at beta, T = lambda");
    std::vector<RunConfig> cfgs;
    std::vector<std::pair<double, double>> keys;
    for (double delta : {1.0, 2.0})
      for (double b : range(delta + 0.5, 8.0, 0.5)) {
        RunConfig p = base(c, 4.0);
        p.cut = "window";
        p.beta = b * c.lambda;
        p.delta = delta * c.lambda;
        cfgs.push_back(p);
        keys.emplace_back(b, delta);
      }
    const auto rows = nm_rows(cfgs, c.threads);
    for (std::size_t i = 0; i < rows.size(); ++i)
      t.add_row({keys[i].first, keys[i].second, rows[i].nm, rows[i].converged});
    return {std::move(t), 1};
  }

  if (tag == "dec-vs-t") return {time_series(c, false), -1};
  if (tag == "fid-vs-t") return {time_series(c, true), -1};

  if (tag == "asymptotics-heatmap") {
    Table t({"temp", "lambda", "neg_asym_log_dec", "neg_asym_log_fid"});
    c.describe(t);
    t.meta("recipe", "asymptotic -log|Gamma| and -log B over (T, lambda), s = 5, uncut");
    for (double T : range(0.25, 5.0, 0.25))
      for (double lam : range(0.25, 5.0, 0.25)) {
        RunConfig p = base(c, 5.0);
        p.lambda = lam;
        p.temp = T;
        const Model m = p.model();
        t.add_row({T, lam, m.neg_asym_dec(), m.neg_asym_fid()});
      }
    t.note("absolute grid: T and lambda in 0.25..5 step 0.25");
    return {std::move(t), kHeatmap};
  }

  if (tag == "cut-timeseries") {
    RunConfig p = base(c, 3.0);
    p.cut = "single";
    p.beta = 2.0 * c.lambda;
    const Model m = p.model();
    Table t({"lambda_t", "log_dec", "log_fid", "gamma_per_lambda"});
    c.describe(t);
    t.meta("recipe", "single cut at beta = 2 lambda, s = 3, T = lambda");
    for (double x : times(c))
      t.add_row({c.lambda * x, m.log_dec(x), m.log_fid(x), m.gamma(x) / c.lambda});
    return {std::move(t), -1};
  }

  // onecut-comparison and twocut-comparison
  const bool one = tag == "onecut-comparison";
  Table t({"beta_over_lambda", "nm", "converged", "neg_asym_log_dec", "neg_asym_log_fid"});
  c.describe(t);
  t.meta("recipe", one ? "single cut, s = 5, T = lambda, beta in [0.5, 8]"
                       : "window of width 2 lambda ending at beta, s = 4, T = lambda");
  std::vector<RunConfig> cfgs;
  const std::vector<double> betas = one ? range(0.5, 8.0, 0.25) : range(2.5, 10.0, 0.25);
  for (double b : betas) {
    RunConfig p = base(c, one ? 5.0 : 4.0);
    p.cut = one ? "single" : "window";
    p.beta = b * c.lambda;
    if (!one) p.delta = 2.0 * c.lambda;
    cfgs.push_back(p);
  }
  const auto rows = nm_rows(cfgs, c.threads);
  for (std::size_t i = 0; i < rows.size(); ++i)
    t.add_row({betas[i], rows[i].nm, rows[i].converged, rows[i].dec, rows[i].fid});
  return {std::move(t), -1};
}

}  // namespace cli
