#include "sbo/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sbo {

namespace {

double logistic(double x) {
  // 1 / (1 + e^-x) without overflow for large |x|.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

SpectralDensity::SpectralDensity(double ohmicity, double cutoff)
    : s_(ohmicity), cutoff_(cutoff) {
  require(std::isfinite(ohmicity) && ohmicity > 0.0,
          "spectral density: ohmicity must be > 0");
  require(std::isfinite(cutoff) && cutoff > 0.0,
          "spectral density: cutoff must be > 0");
}

double SpectralDensity::operator()(double w) const {
  require(w >= 0.0, "spectral density: frequency must be >= 0");
  if (w == 0.0) return 0.0;
  return over_power(w, 0.0);
}

double SpectralDensity::over_power(double w, double power) const {
  // w^(s - power) cutoff^(1 - s) exp(-w / cutoff), evaluated in log space so
  // that large s and tiny w neither overflow nor underflow prematurely.
  const double x = w / cutoff_;
  if (x == 0.0) {
    if (s_ > power) return 0.0;
    if (s_ == power) return std::pow(cutoff_, 1.0 - power);
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(cutoff_, 1.0 - power) *
         std::exp((s_ - power) * std::log(x) - x);
}

EnvPartition EnvPartition::uncut() {
  return EnvPartition(PartitionKind::Uncut, 0.0,
                      std::numeric_limits<double>::infinity(), 0.0);
}

EnvPartition EnvPartition::single_cut(double beta) {
  require(std::isfinite(beta) && beta > 0.0, "single cut: beta must be > 0");
  return EnvPartition(PartitionKind::SingleCut, 0.0, beta, 0.0);
}

EnvPartition EnvPartition::window(double alpha, double beta) {
  require(std::isfinite(alpha) && alpha >= 0.0, "window: alpha must be >= 0");
  require(std::isfinite(beta) && beta > alpha, "window: beta must exceed alpha");
  return EnvPartition(PartitionKind::Window, alpha, beta, 0.0);
}

EnvPartition EnvPartition::window_from_width(double beta, double width) {
  require(std::isfinite(width) && width > 0.0, "window: width must be > 0");
  return window(beta - width, beta);
}

EnvPartition EnvPartition::soft_window(double alpha, double beta, double sigma) {
  require(std::isfinite(alpha) && alpha >= 0.0,
          "soft window: alpha must be >= 0");
  require(std::isfinite(beta) && beta > alpha,
          "soft window: beta must exceed alpha");
  require(std::isfinite(sigma) && sigma > 0.0,
          "soft window: sigma must be > 0");
  return EnvPartition(PartitionKind::SoftWindow, alpha, beta, sigma);
}

double EnvPartition::observed_weight(double w) const {
  switch (kind_) {
    case PartitionKind::Uncut:
      return 1.0;
    case PartitionKind::SingleCut:
      return w <= beta_ ? 1.0 : 0.0;
    case PartitionKind::Window:
      return (w >= alpha_ && w <= beta_) ? 1.0 : 0.0;
    case PartitionKind::SoftWindow: {
      const double upper = logistic((beta_ - w) / sigma_);
      if (alpha_ == 0.0) return upper;
      return upper * logistic((w - alpha_) / sigma_);
    }
  }
  return 0.0;
}

double EnvPartition::unobserved_weight(double w) const {
  if (kind_ == PartitionKind::Uncut) return 1.0;
  if (kind_ == PartitionKind::SoftWindow) {
    // 1 - product of flanks, computed without cancellation when the product
    // is close to 1: 1 - ab = (1 - a) + a (1 - b).
    const double one_minus_upper = logistic((w - beta_) / sigma_);
    if (alpha_ == 0.0) return one_minus_upper;
    const double upper = logistic((beta_ - w) / sigma_);
    const double one_minus_lower = logistic((alpha_ - w) / sigma_);
    return one_minus_upper + upper * one_minus_lower;
  }
  return 1.0 - observed_weight(w);
}

std::vector<double> EnvPartition::breakpoints() const {
  std::vector<double> out;
  switch (kind_) {
    case PartitionKind::Uncut:
      break;
    case PartitionKind::SingleCut:
      out.push_back(beta_);
      break;
    case PartitionKind::Window:
      if (alpha_ > 0.0) out.push_back(alpha_);
      out.push_back(beta_);
      break;
    case PartitionKind::SoftWindow:
      for (const double c : {alpha_, beta_}) {
        if (c == 0.0) continue;
        for (const double k : {-8.0, -2.0, 0.0, 2.0, 8.0}) {
          const double p = c + k * sigma_;
          if (p > 0.0) out.push_back(p);
        }
      }
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EnvPartition::Support EnvPartition::support(Role role) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case PartitionKind::SingleCut:
      return role == Role::Observed ? Support{0.0, beta_} : Support{beta_, inf};
    case PartitionKind::Window:
      return role == Role::Observed ? Support{alpha_, beta_}
                                    : Support{0.0, inf};
    case PartitionKind::Uncut:
    case PartitionKind::SoftWindow:
      break;
  }
  return Support{0.0, inf};
}

bool EnvPartition::touches_zero(Role role) const {
  switch (kind_) {
    case PartitionKind::Uncut:
      return true;
    case PartitionKind::SingleCut:
      return role == Role::Observed;
    case PartitionKind::Window:
      return role == Role::Observed ? alpha_ == 0.0 : alpha_ > 0.0;
    case PartitionKind::SoftWindow:
      // Logistic flanks are strictly positive everywhere.
      return weight(role, 0.0) > 0.0;
  }
  return true;
}

ModeSet::ModeSet(std::vector<Mode> modes) : modes_(std::move(modes)) {
  double prev = 0.0;
  for (const Mode& m : modes_) {
    if (!(m.omega > prev) || !std::isfinite(m.omega))
      throw std::invalid_argument(
          "mode set: frequencies must be positive and strictly increasing");
    if (!(m.g >= 0.0) || !std::isfinite(m.g))
      throw std::invalid_argument("mode set: couplings must be finite and >= 0");
    prev = m.omega;
  }
}

ModeSet ModeSet::scaled(double factor) const {
  if (!(factor >= 0.0))
    throw std::invalid_argument("mode set: scale factor must be >= 0");
  std::vector<Mode> out(modes_);
  const double r = std::sqrt(factor);
  for (Mode& m : out) m.g *= r;
  return ModeSet(std::move(out));
}

ModeSet discretize(const SpectralDensity& sd, const EnvPartition& partition,
                   Role role, std::size_t n_modes, double omega_max) {
  if (n_modes == 0)
    throw std::invalid_argument("discretize: need at least one mode");
  if (!(omega_max > 0.0) || !std::isfinite(omega_max))
    throw std::invalid_argument("discretize: omega_max must be > 0");
  const double dw = omega_max / static_cast<double>(n_modes);
  std::vector<Mode> modes;
  modes.reserve(n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    const double w = (static_cast<double>(k) + 0.5) * dw;
    const double g2 = sd(w) * partition.weight(role, w) * dw / 2.0;
    modes.push_back({w, std::sqrt(g2)});
  }
  return ModeSet(std::move(modes));
}

double default_omega_max(const SpectralDensity& sd) {
  // Solve J(w) = 1e-16 J(s cutoff) for w > s cutoff, i.e. in x = w / cutoff:
  // s log x - x = s log s - s + log(1e-16).
  const double s = sd.ohmicity();
  const double target = s * std::log(s) - s + std::log(1e-16);
  auto h = [s](double x) { return s * std::log(x) - x; };
  double lo = s;
  double hi = s + 40.0;
  while (h(hi) > target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > target ? lo : hi) = mid;
  }
  return hi * sd.cutoff();
}

}  // namespace sbo
