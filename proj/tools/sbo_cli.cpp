#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <thread>

#include "config.hpp"

using namespace cli;

namespace {

void add_options(CLI::App& app, RunConfig& c) {
  const char* model = "Model";
  app.add_option("--s", c.s, "ohmicity")->group(model)->capture_default_str();
  app.add_option("--lambda", c.lambda, "cutoff frequency")->group(model)->capture_default_str();
  app.add_option("--temp", c.temp, "temperature")->group(model)->capture_default_str();
  app.add_option("--cut", c.cut, "partition kind")
      ->check(CLI::IsMember({"uncut", "single", "window", "soft"}))
      ->group(model)
      ->capture_default_str();
  app.add_option("--alpha", c.alpha, "lower cut frequency")->group(model)->capture_default_str();
  app.add_option("--beta", c.beta, "upper cut frequency")->group(model)->capture_default_str();
  app.add_option("--delta", c.delta, "window width; sets alpha = beta - delta")->group(model);
  app.add_option("--sigma", c.sigma, "soft cut width [0.05 lambda]")->group(model);

  const char* grid = "Time grid";
  app.add_option("--tmin", c.tmin, "first time")->group(grid)->capture_default_str();
  app.add_option("--tmax", c.tmax, "last time or measure horizon [20/lambda, 50/lambda for the measure]")
      ->group(grid);
  app.add_option("--points", c.points, "number of time samples")->group(grid)->capture_default_str();
  app.add_option("--nm-grid", c.nm_grid, "sign-change bracketing samples for the measure")
      ->group(grid);
  app.add_flag("--high-temperature", c.high_temperature,
               "use the high-temperature rate (measure, gamma-curve)")
      ->group(grid);

  const char* sweep = "Sweep";
  app.add_option("--param", c.param, "swept parameter (s, lambda, temp, alpha, beta, delta, sigma)")
      ->group(sweep)
      ->capture_default_str();
  app.add_option("--from", c.from, "first value")->group(sweep)->capture_default_str();
  app.add_option("--to", c.to, "last value")->group(sweep)->capture_default_str();
  app.add_option("--steps", c.steps, "number of values")->group(sweep)->capture_default_str();
  app.add_option("--threads", c.threads, "worker threads")->group(sweep)->capture_default_str();

  const char* oracle = "Oracle";
  app.add_option("--modes", c.modes, "discrete modes")->group(oracle)->capture_default_str();
  app.add_option("--omega-max", c.omega_max, "discretisation cutoff [40 lambda]")->group(oracle);

  const char* num = "Numerics";
  app.add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance")->group(num)->capture_default_str();
  app.add_option("--abs-tol", c.abs_tol, "quadrature absolute tolerance")->group(num)->capture_default_str();
  app.add_option("--max-depth", c.max_depth, "quadrature bisection depth")->group(num)->capture_default_str();

  const std::map<std::string, MethodChoice> methods = {
      {"quad", MethodChoice::Quad}, {"closed", MethodChoice::Closed}, {"both", MethodChoice::Both}};
  const char* out = "Output";
  app.add_option("--method", c.method, "quad, closed or both")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case))
      ->group(out);
  app.add_option("--out", c.out, "CSV path ('-' for stdout)")->group(out);
  app.add_flag("--plot", c.plot, "also write a gnuplot script next to the CSV")->group(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dephasing indicators of a qubit in an Ohmic-family boson bath"};
  app.set_version_flag("--version", std::string(sbo_version()));
  app.set_config("--config", "", "flat 'key = value' file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  c.threads = std::max(1u, std::thread::hardware_concurrency());
  add_options(app, c);

  app.add_subcommand("gamma-curve", "canonical rate on a time grid");
  app.add_subcommand("indicators", "log|Gamma|, log B and the rate on a time grid");
  app.add_subcommand("nmeasure", "non-Markovianity measure");
  app.add_subcommand("sweep", "measure and asymptotes over one parameter");
  auto* fig = app.add_subcommand("reproduce-fig", "figure data by tag");
  fig->add_option("tag", c.tag, figure_tags())->required();
  app.add_subcommand("oracle-check", "discrete-mode and Fock-space cross checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  c.scenario = app.get_subcommands().front()->get_name();
  try {
    if (c.plot && (c.out.empty() || c.out == "-") && c.scenario != "reproduce-fig")
      throw UsageError("plot: needs --out with a file path");
    Table t({"unused"});
    int group = -1;
    if (c.scenario == "gamma-curve") t = run_gamma_curve(c);
    else if (c.scenario == "indicators") t = run_indicators(c);
    else if (c.scenario == "nmeasure") t = run_nmeasure(c);
    else if (c.scenario == "sweep") t = run_sweep(c);
    else if (c.scenario == "oracle-check") t = run_oracle_check(c);
    else {
      if (c.out.empty()) c.out = c.tag + ".csv";
      std::tie(t, group) = run_figure(c);
    }
    t.save(c.out);
    if (c.plot) write_gnuplot(c.out, t, c.scenario + (c.tag.empty() ? "" : " " + c.tag), group);
    if (!c.out.empty() && c.out != "-") std::fprintf(stderr, "wrote %s\n", c.out.c_str());
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
