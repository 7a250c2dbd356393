#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

namespace sbo {

struct QuadSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Maximum number of bisections applied to any initial panel.
  int max_depth = 40;
  /// When set, initial panels are no wider than pi / osc_frequency.
  std::optional<double> osc_frequency;
  /// Integrand behaves like (x - a)^p at the lower limit (p > -1). Unless p
  /// is a nonnegative integer, the first panel is mapped by x = a + h u^m so
  /// that the transformed integrand is smooth at u = 0.
  std::optional<double> lower_power;
  std::size_t max_intervals = 1u << 20;

  /// Throws std::invalid_argument on rel_tol <= 0, abs_tol < 0, max_depth < 1,
  /// lower_power <= -1.
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

/// Raised when the requested tolerance cannot be met within max_depth.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const QuadResult& partial() const noexcept { return partial_; }

 private:
  QuadResult partial_;
};

/// Bound |f(w)| <= prefactor * w^power * exp(-w / scale), valid for all w at
/// or beyond the truncation point. Used to cut semi-infinite ranges with a
/// rigorous tail estimate.
struct TailEnvelope {
  double prefactor;
  double power;
  double scale;

  /// Upper bound on the integral of the envelope over [from, inf).
  double tail_integral(double from) const;
  /// Smallest point >= from (on a geometric search) whose tail is <= budget.
  double truncation_point(double from, double budget) const;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 10/21-point Gauss-Kronrod integration of f over [a, b].
/// b may be +inf: with a tail envelope the range is truncated where the bound
/// drops below a hundredth of abs_tol, otherwise panels of growing width are
/// added until three consecutive ones contribute less than abs_tol.
/// breakpoints (any order, out-of-range values ignored) seed the initial
/// panel split.
QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadSpec& spec = {},
                     std::optional<TailEnvelope> tail = std::nullopt,
                     std::span<const double> breakpoints = {});

enum class Kernel { OneMinusCos, Sin };

/// Integral of envelope(w) * k(w t) over [a, b], k = 1 - cos or sin. The range
/// is pre-split into half periods pi / t before adaptive refinement. The
/// 1 - cos kernel is evaluated as 2 sin^2(w t / 2).
QuadResult integrate_oscillatory(const Integrand& envelope, Kernel kernel,
                                 double t, double a, double b,
                                 const QuadSpec& spec = {},
                                 std::optional<TailEnvelope> tail = std::nullopt,
                                 std::span<const double> breakpoints = {});

}  // namespace sbo
