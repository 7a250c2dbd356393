#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sbo {

/// Ohmic-family spectral density J(w) = w^s cutoff^(1-s) exp(-w/cutoff).
/// Units: hbar = k_B = 1, every frequency in the same unit as the cutoff.
class SpectralDensity {
 public:
  /// Throws std::domain_error unless s > 0 and cutoff > 0.
  SpectralDensity(double ohmicity, double cutoff);

  double ohmicity() const noexcept { return s_; }
  double cutoff() const noexcept { return cutoff_; }

  /// J(w). Throws std::domain_error for w < 0.
  double operator()(double w) const;

  /// J(w) / w^power without forming w^s first; used for the J/w and J/w^2
  /// integrand factors near w = 0.
  double over_power(double w, double power) const;

 private:
  double s_;
  double cutoff_;
};

enum class PartitionKind { Uncut, SingleCut, Window, SoftWindow };
enum class Role { Observed, Unobserved };

/// Split of the bath frequencies into an observed and an unobserved part.
///
/// Uncut is not a complementary split: both roles see the full density, as if
/// each part were an independent copy of the whole environment.  The sharp
/// kinds use indicator functions; SoftWindow multiplies two logistic flanks of
/// width sigma centred on the cut frequencies (the lower flank is dropped when
/// alpha == 0, which gives the soft single cut).
class EnvPartition {
 public:
  static EnvPartition uncut();
  /// Observed part is [0, beta].
  static EnvPartition single_cut(double beta);
  /// Observed part is [alpha, beta].
  static EnvPartition window(double alpha, double beta);
  /// Observed part is [beta - width, beta].
  static EnvPartition window_from_width(double beta, double width);
  static EnvPartition soft_window(double alpha, double beta, double sigma);
  static EnvPartition soft_single_cut(double beta, double sigma) {
    return soft_window(0.0, beta, sigma);
  }

  PartitionKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double sigma() const noexcept { return sigma_; }

  double observed_weight(double w) const;
  double unobserved_weight(double w) const;
  double weight(Role role, double w) const {
    return role == Role::Observed ? observed_weight(w) : unobserved_weight(w);
  }

  /// Frequencies where the weight is not smooth (sharp kinds) or changes on
  /// a short scale (soft kind). Sorted, positive.
  std::vector<double> breakpoints() const;

  /// Closed interval outside of which weight(role, .) is identically zero.
  /// upper == +inf when unbounded.
  struct Support {
    double lower;
    double upper;
  };
  Support support(Role role) const;

  /// True when weight(role, .) does not vanish on any neighbourhood of 0.
  bool touches_zero(Role role) const;

 private:
  EnvPartition(PartitionKind kind, double alpha, double beta, double sigma)
      : kind_(kind), alpha_(alpha), beta_(beta), sigma_(sigma) {}

  PartitionKind kind_;
  double alpha_;
  double beta_;
  double sigma_;
};

/// A single bath oscillator: frequency and (real) coupling amplitude.
struct Mode {
  double omega;
  double g;
};

/// Discrete oscillators with strictly increasing positive frequencies.
class ModeSet {
 public:
  ModeSet() = default;
  /// Throws std::invalid_argument if the invariants are violated.
  explicit ModeSet(std::vector<Mode> modes);

  std::span<const Mode> modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return modes_.size(); }
  bool empty() const noexcept { return modes_.empty(); }
  const Mode& operator[](std::size_t i) const { return modes_[i]; }

  /// Copy of this set with every squared coupling multiplied by factor.
  ModeSet scaled(double factor) const;

 private:
  std::vector<Mode> modes_;
};

/// Midpoint discretisation of J * weight(role, .) on n_modes uniform bins of
/// (0, omega_max]: omega_k = (k + 1/2) dw, g_k^2 = J(omega_k) weight dw / 2, so
/// that 2 sum g_k^2 f(omega_k) approximates the weighted integral of J f.
ModeSet discretize(const SpectralDensity& sd, const EnvPartition& partition,
                   Role role, std::size_t n_modes, double omega_max);

/// Frequency beyond which the exponential envelope exp(-w/cutoff) falls below
/// 1e-16 relative to its value at the density maximum.
double default_omega_max(const SpectralDensity& sd);

}  // namespace sbo
