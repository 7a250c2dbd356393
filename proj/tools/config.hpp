#pragma once

#include <functional>
#include <optional>
#include <string>

#include "handles.hpp"
#include "table.hpp"

namespace cli {

enum class MethodChoice { Quad, Closed, Both };

struct RunConfig {
  std::string scenario;
  std::string tag;

  double s = 4.0;
  double lambda = 1.0;
  double temp = 1.0;
  std::string cut = "uncut";
  double alpha = 0.0;
  double beta = 2.0;
  std::optional<double> delta;
  std::optional<double> sigma;

  double tmin = 0.0;
  std::optional<double> tmax;
  int points = 401;
  std::size_t nm_grid = 0;
  bool high_temperature = false;

  std::string param = "s";
  double from = 1.0;
  double to = 6.0;
  int steps = 21;

  std::size_t modes = 20000;
  std::optional<double> omega_max;

  double rel_tol;
  double abs_tol;
  int max_depth;

  MethodChoice method = MethodChoice::Quad;
  std::string out;
  bool plot = false;
  unsigned threads = 1;

  RunConfig() {
    sbo_quad_options q;
    sbo_quad_options_default(&q);
    rel_tol = q.rel_tol;
    abs_tol = q.abs_tol;
    max_depth = q.max_depth;
  }

  sbo_params params() const;
  sbo_quad_options quad() const;
  Model model() const { return Model(params(), quad()); }
  double resolved_sigma() const { return sigma.value_or(0.05 * lambda); }
  double resolved_alpha() const;

  // Echoes every field (defaults included) into the metadata block.
  void describe(Table& t) const;
};

const char* method_name(MethodChoice m);

// Calls f(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

Table run_gamma_curve(const RunConfig& c);
Table run_indicators(const RunConfig& c);
Table run_nmeasure(const RunConfig& c);
Table run_sweep(const RunConfig& c);
Table run_oracle_check(const RunConfig& c);

bool is_figure_tag(const std::string& tag);
const char* figure_tags();
// Returns the table and the column used to split curves in the plot (-1: none,
// kHeatmap: colour map of column 3 over columns 1 and 2).
std::pair<Table, int> run_figure(const RunConfig& c);

}  // namespace cli
