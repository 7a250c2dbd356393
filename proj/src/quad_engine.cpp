#include "sbo/quad_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace sbo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = 3.14159265358979323846;

// Kronrod abscissae (positive half, centre last) and weights for the 21-point
// rule, with the embedded 10-point Gauss weights at the odd abscissae.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208272237690, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool at_roundoff;
};

// QUADPACK-style error estimate for one 21-point panel.
Panel gk21(const Integrand& f, double a, double b, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kron = fc * kWgk[10];
  double gauss = 0.0;
  double resabs = std::abs(kron);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const double sum = f1[j] + f2[j];
    kron += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * kron;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = kron * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((kron - gauss) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * kEps * resabs;
  bool at_roundoff = false;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps) &&
      err <= floor) {
    err = floor;
    at_roundoff = true;
  }
  if (!std::isfinite(value) || !std::isfinite(err))
    throw QuadratureError("quadrature: non-finite integrand value",
                          QuadResult{value, err, 21});
  return Panel{a, b, value, err, depth, at_roundoff};
}

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const {
    return l.error < r.error;
  }
};

// Split [a, b] at the breakpoints and, if requested, into pieces no wider than
// max_width.
std::vector<std::pair<double, double>> initial_panels(
    double a, double b, std::span<const double> breakpoints,
    double max_width) {
  std::vector<double> cuts{a};
  std::vector<double> bp(breakpoints.begin(), breakpoints.end());
  std::sort(bp.begin(), bp.end());
  for (const double p : bp)
    if (p > a && p < b && p > cuts.back()) cuts.push_back(p);
  cuts.push_back(b);

  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i];
    const double r = cuts[i + 1];
    std::size_t n = 1;
    if (max_width > 0.0 && std::isfinite(max_width))
      n = std::max<std::size_t>(1, static_cast<std::size_t>(
                                       std::ceil((r - l) / max_width)));
    for (std::size_t k = 0; k < n; ++k) {
      const double pl = l + (r - l) * static_cast<double>(k) / n;
      const double pr = k + 1 == n ? r : l + (r - l) * static_cast<double>(k + 1) / n;
      out.emplace_back(pl, pr);
    }
  }
  return out;
}

QuadResult adapt(const Integrand& f,
                 const std::vector<std::pair<double, double>>& seeds,
                 const QuadSpec& spec, double extra_error) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> open;
  std::vector<Panel> done;
  double total = 0.0;
  double total_err = extra_error;
  std::size_t evals = 0;

  for (const auto& [l, r] : seeds) {
    if (r <= l) continue;
    Panel p = gk21(f, l, r, 0);
    evals += 21;
    total += p.value;
    total_err += p.error;
    if (p.at_roundoff)
      done.push_back(p);
    else
      open.push(p);
  }

  auto tolerance = [&] {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };

  while (total_err > tolerance() && !open.empty()) {
    const Panel worst = open.top();
    const double mid = 0.5 * (worst.a + worst.b);
    const bool too_narrow =
        !(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 16.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.depth >= spec.max_depth || too_narrow ||
        open.size() + done.size() >= spec.max_intervals) {
      throw QuadratureError(
          "quadrature: tolerance not reached within max_depth (estimate " +
              std::to_string(total_err) + ")",
          QuadResult{total, total_err, evals});
    }
    open.pop();
    const Panel left = gk21(f, worst.a, mid, worst.depth + 1);
    const Panel right = gk21(f, mid, worst.b, worst.depth + 1);
    evals += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    for (const Panel& p : {left, right}) {
      if (p.at_roundoff)
        done.push_back(p);
      else
        open.push(p);
    }
  }

  // Fixed summation order so the result does not depend on heap history.
  while (!open.empty()) {
    done.push_back(open.top());
    open.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  QuadResult out;
  out.error = extra_error;
  for (const Panel& p : done) {
    out.value += p.value;
    out.error += p.error;
  }
  out.evaluations = evals;
  return out;
}

// Semi-infinite range without an analytic bound: march outward in panels of
// doubling width until three consecutive panels are negligible.
QuadResult march_to_infinity(const Integrand& f, double a, const QuadSpec& spec,
                             std::span<const double> breakpoints) {
  const double max_width =
      spec.osc_frequency && *spec.osc_frequency > 0.0 ? kPi / *spec.osc_frequency
                                                      : 0.0;
  double left = a;
  double width = std::max(1.0, std::abs(a));
  QuadResult acc;
  int quiet = 0;
  for (int iter = 0; iter < 200 && quiet < 3; ++iter) {
    const double right = left + width;
    const QuadResult piece =
        adapt(f, initial_panels(left, right, breakpoints, max_width), spec, 0.0);
    acc.value += piece.value;
    acc.error += piece.error;
    acc.evaluations += piece.evaluations;
    const bool negligible = std::abs(piece.value) + piece.error <
                            std::max(spec.abs_tol, spec.rel_tol * std::abs(acc.value));
    quiet = negligible ? quiet + 1 : 0;
    left = right;
    width *= 2.0;
  }
  if (quiet < 3)
    throw QuadratureError("quadrature: semi-infinite tail did not decay", acc);
  return acc;
}

}  // namespace

void QuadSpec::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadSpec: rel_tol must be > 0");
  if (!(abs_tol >= 0.0)) throw std::invalid_argument("QuadSpec: abs_tol must be >= 0");
  if (max_depth < 1) throw std::invalid_argument("QuadSpec: max_depth must be >= 1");
  if (osc_frequency && !(*osc_frequency >= 0.0))
    throw std::invalid_argument("QuadSpec: osc_frequency must be >= 0");
  if (lower_power && !(*lower_power > -1.0))
    throw std::invalid_argument("QuadSpec: lower_power must be > -1");
}

double TailEnvelope::tail_integral(double from) const {
  // prefactor * scale^(p+1) * Gamma(p+1, x), x = from / scale, bounded by
  // x^p e^-x (p <= 0) or x^p e^-x x / (x - p) (x > p > 0).
  const double x = from / scale;
  const double p = power;
  if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
  double factor = 1.0;
  if (p > 0.0) {
    if (x <= p + 1.0) return std::numeric_limits<double>::infinity();
    factor = x / (x - p);
  }
  return prefactor * std::pow(scale, p + 1.0) *
         std::exp(p * std::log(x) - x) * factor;
}

double TailEnvelope::truncation_point(double from, double budget) const {
  double x = std::max(from, scale * (std::max(power, 0.0) + 2.0));
  for (int i = 0; i < 4000 && tail_integral(x) > budget; ++i) x += 0.5 * scale;
  return x;
}

QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadSpec& spec, std::optional<TailEnvelope> tail,
                     std::span<const double> breakpoints) {
  spec.validate();
  if (!(a >= 0.0) || !std::isfinite(a))
    throw std::invalid_argument("integrate: lower limit must be finite and >= 0");
  if (std::isnan(b) || b < a)
    throw std::invalid_argument("integrate: upper limit must be >= lower limit");
  if (b == a) return {};

  double extra_error = 0.0;
  if (std::isinf(b)) {
    if (!tail) return march_to_infinity(f, a, spec, breakpoints);
    const double budget = 0.01 * std::max(spec.abs_tol, 1e-300);
    b = tail->truncation_point(a, budget);
    extra_error = tail->tail_integral(b);
  }
  const double max_width =
      spec.osc_frequency && *spec.osc_frequency > 0.0 ? kPi / *spec.osc_frequency
                                                      : 0.0;
  auto seeds = initial_panels(a, b, breakpoints, max_width);
  const bool smooth_start =
      !spec.lower_power ||
      (*spec.lower_power >= 0.0 && std::floor(*spec.lower_power) == *spec.lower_power);
  if (smooth_start) return adapt(f, seeds, spec, extra_error);

  // x = a + h u^m turns (x - a)^p dx into u^(m(p+1) - 1) du, exponent >= 3.
  const double p = *spec.lower_power;
  const double h = seeds.front().second - seeds.front().first;
  const int m = std::max(1, static_cast<int>(std::ceil(4.0 / (p + 1.0))));
  const Integrand mapped = [&](double u) {
    if (u == 0.0) return 0.0;
    const double um1 = std::pow(u, m - 1);
    return f(a + h * um1 * u) * h * m * um1;
  };
  QuadSpec inner = spec;
  inner.osc_frequency.reset();
  inner.lower_power.reset();
  const QuadResult head = adapt(mapped, {{0.0, 1.0}}, inner, 0.0);
  seeds.erase(seeds.begin());
  QuadResult rest = adapt(f, seeds, spec, extra_error);
  rest.value += head.value;
  rest.error += head.error;
  rest.evaluations += head.evaluations;
  return rest;
}

QuadResult integrate_oscillatory(const Integrand& envelope, Kernel kernel,
                                 double t, double a, double b,
                                 const QuadSpec& spec,
                                 std::optional<TailEnvelope> tail,
                                 std::span<const double> breakpoints) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("integrate_oscillatory: t must be finite and >= 0");
  if (t == 0.0) return {};
  QuadSpec osc = spec;
  osc.osc_frequency = t;
  if (tail) tail->prefactor *= 2.0;  // |kernel| <= 2
  if (kernel == Kernel::Sin) {
    return integrate([&](double w) { return envelope(w) * std::sin(w * t); }, a,
                     b, osc, tail, breakpoints);
  }
  return integrate(
      [&](double w) {
        const double h = std::sin(0.5 * w * t);
        return envelope(w) * 2.0 * h * h;
      },
      a, b, osc, tail, breakpoints);
}

}  // namespace sbo
