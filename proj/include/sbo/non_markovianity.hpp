#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbo/indicators.hpp"
#include "sbo/quad_engine.hpp"

namespace sbo {

struct NMOptions {
  /// Integration horizon; defaults to 50 / cutoff for an Environment.
  std::optional<double> t_max;
  /// Uniform samples on [0, t_max] used to bracket sign changes.
  std::size_t grid_points = 2000;
  /// Zero crossings are located to this width; defaults to 1e-8 / cutoff.
  std::optional<double> root_tol;
  /// Also evaluate the measure on [0, 2 t_max] and set `converged`.
  bool check_horizon = true;
  double convergence_rel = 1e-3;
  /// Accuracy of each gamma(t) evaluation.
  QuadSpec rate_spec{};
  /// Accuracy of the integral of -gamma over each negative lobe.
  QuadSpec lobe_spec = [] {
    QuadSpec q;
    q.rel_tol = 1e-9;
    q.abs_tol = 1e-13;
    return q;
  }();
};

/// N = - integral of gamma over {t in [0, t_max] : gamma(t) < 0}.
struct NMResult {
  double value = 0.0;
  std::vector<std::pair<double, double>> negative_intervals;
  double t_max = 0.0;
  /// Value of the measure on the doubled horizon (equals value when the
  /// check is disabled).
  double doubled_horizon_value = 0.0;
  bool converged = false;
  /// Near-zero extrema that were inspected without finding a crossing, and
  /// similar notes.
  std::vector<std::string> diagnostics;
  std::size_t rate_evaluations = 0;
};

using RateFunction = std::function<double(double)>;

/// Measure for an arbitrary rate function on [0, t_max]. Used directly by
/// the tests with synthetic rates; the Environment overload forwards here.
NMResult non_markovianity(const RateFunction& rate, double t_max,
                          const NMOptions& options);

/// Measure for the canonical rate of the unobserved part of env.
NMResult non_markovianity(const Environment& env, const NMOptions& options = {});

}  // namespace sbo
