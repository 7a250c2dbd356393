#include "sbo/non_markovianity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sbo {

namespace {

struct Sample {
  double t;
  double g;
};

bool negative(const Sample& s) { return s.g < 0.0; }

// Extremum of rate on [a, b] by golden-section search; returns (t, value).
// `sign` = +1 minimises, -1 maximises.
Sample golden_extremum(const RateFunction& rate, double a, double b, double tol,
                       double sign) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = sign * rate(c);
  double fd = sign * rate(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = sign * rate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = sign * rate(d);
    }
  }
  return fc < fd ? Sample{c, sign * fc} : Sample{d, sign * fd};
}

double bisect_root(const RateFunction& rate, Sample lo, Sample hi, double tol) {
  // lo and hi have opposite signs.
  while (hi.t - lo.t > tol) {
    const double mid = 0.5 * (lo.t + hi.t);
    if (!(mid > lo.t && mid < hi.t)) break;
    const double g = rate(mid);
    if ((g < 0.0) == negative(lo))
      lo = {mid, g};
    else
      hi = {mid, g};
  }
  return 0.5 * (lo.t + hi.t);
}

std::vector<Sample> sample_grid(const RateFunction& rate, double horizon,
                                std::size_t n) {
  std::vector<Sample> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = horizon * static_cast<double>(i) / static_cast<double>(n);
    out.push_back({t, rate(t)});
  }
  // gamma(0) = 0 for every physical rate; give the origin the sign of its
  // neighbour so it does not count as a crossing.
  if (out.size() > 1 && out[0].g == 0.0 && out[1].g < 0.0) out[0].g = out[1].g;
  return out;
}

std::vector<std::size_t> sign_changes(const std::vector<Sample>& s) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (negative(s[i]) != negative(s[i + 1])) idx.push_back(i);
  return idx;
}

}  // namespace

NMResult non_markovianity(const RateFunction& rate_in, double t_max,
                          const NMOptions& options) {
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    throw std::invalid_argument("non_markovianity: t_max must be > 0");
  if (options.grid_points < 2)
    throw std::invalid_argument("non_markovianity: need at least 2 grid points");

  NMResult result;
  result.t_max = t_max;
  const RateFunction rate = [&](double t) {
    ++result.rate_evaluations;
    return rate_in(t);
  };
  const double root_tol = options.root_tol.value_or(1e-10 * t_max);
  const double horizon = options.check_horizon ? 2.0 * t_max : t_max;
  const std::size_t n =
      options.check_horizon ? 2 * options.grid_points : options.grid_points;

  std::vector<Sample> samples = sample_grid(rate, horizon, n);

  // One refinement pass when two crossings fall within a few samples of each
  // other: the grid is then too coarse for the oscillation scale.
  {
    const auto idx = sign_changes(samples);
    bool crowded = false;
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (idx[k] - idx[k - 1] < 4) crowded = true;
    if (crowded) {
      std::vector<Sample> refined;
      refined.reserve(2 * samples.size());
      for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        refined.push_back(samples[i]);
        const double mid = 0.5 * (samples[i].t + samples[i + 1].t);
        refined.push_back({mid, rate(mid)});
      }
      refined.push_back(samples.back());
      samples = std::move(refined);
      result.diagnostics.push_back("grid refined to half spacing");
    }
  }

  // Inspect near-zero extrema that do not change sign on the grid: a lobe
  // narrower than the spacing would hide there.
  {
    double scale = 0.0;
    for (const Sample& s : samples) scale = std::max(scale, std::abs(s.g));
    const double graze = 1e-3 * scale;
    std::vector<Sample> extra;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
      const Sample& l = samples[i - 1];
      const Sample& m = samples[i];
      const Sample& r = samples[i + 1];
      if (negative(l) != negative(m) || negative(m) != negative(r)) continue;
      const bool pos_min = !negative(m) && m.g <= l.g && m.g <= r.g && m.g < graze;
      const bool neg_max = negative(m) && m.g >= l.g && m.g >= r.g && -m.g < graze;
      if (!pos_min && !neg_max) continue;
      const Sample ext =
          golden_extremum(rate, l.t, r.t, root_tol, pos_min ? 1.0 : -1.0);
      if (negative(ext) != negative(m)) {
        extra.push_back(ext);
      } else if (scale > 0.0) {
        std::ostringstream msg;
        msg << "rate grazes zero without crossing near t=" << ext.t
            << " (gamma=" << ext.g << ")";
        result.diagnostics.push_back(msg.str());
      }
    }
    if (!extra.empty()) {
      samples.insert(samples.end(), extra.begin(), extra.end());
      std::sort(samples.begin(), samples.end(),
                [](const Sample& a, const Sample& b) { return a.t < b.t; });
      result.diagnostics.push_back("hidden crossings resolved by local search");
    }
  }

  // Negative intervals, bounded by refined roots or the horizon.
  std::vector<std::pair<double, double>> intervals;
  {
    std::optional<double> open = negative(samples.front())
                                     ? std::optional<double>(samples.front().t)
                                     : std::nullopt;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (negative(samples[i]) == negative(samples[i + 1])) continue;
      const double root = bisect_root(rate, samples[i], samples[i + 1], root_tol);
      if (negative(samples[i + 1])) {
        open = root;
      } else if (open) {
        intervals.emplace_back(*open, root);
        open.reset();
      }
    }
    if (open) intervals.emplace_back(*open, horizon);
  }

  auto lobe_integral = [&](double a, double b) {
    if (!(b > a)) return 0.0;
    try {
      return integrate([&](double t) { return -rate(t); }, a, b, options.lobe_spec)
          .value;
    } catch (const QuadratureError& e) {
      std::ostringstream msg;
      msg << "lobe [" << a << ", " << b << "] integrated to reduced accuracy ("
          << e.partial().error << ")";
      result.diagnostics.push_back(msg.str());
      return e.partial().value;
    }
  };

  for (const auto& [a, b] : intervals) {
    if (a < t_max) {
      const double end = std::min(b, t_max);
      const double inside = lobe_integral(a, end);
      result.value += inside;
      result.doubled_horizon_value += inside;
      result.negative_intervals.emplace_back(a, end);
      if (b > t_max) result.doubled_horizon_value += lobe_integral(t_max, b);
    } else {
      result.doubled_horizon_value += lobe_integral(a, b);
    }
  }

  if (!options.check_horizon) {
    result.doubled_horizon_value = result.value;
    result.converged = false;
  } else {
    const double delta = std::abs(result.doubled_horizon_value - result.value);
    result.converged = delta <= options.convergence_rel * result.value ||
                       (result.value == 0.0 && result.doubled_horizon_value == 0.0);
  }
  return result;
}

NMResult non_markovianity(const Environment& env, const NMOptions& options) {
  const double cutoff = env.density().cutoff();
  NMOptions resolved = options;
  const double t_max = options.t_max.value_or(50.0 / cutoff);
  if (!resolved.root_tol) resolved.root_tol = 1e-8 / cutoff;
  return non_markovianity(
      [&](double t) { return gamma_rate(env, t, Role::Unobserved, options.rate_spec); },
      t_max, resolved);
}

}  // namespace sbo
