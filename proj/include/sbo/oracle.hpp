#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sbo/spectral_model.hpp"

namespace sbo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Qubit = Eigen::Matrix2cd;

// ---------------------------------------------------------------------------
// Per-mode closed forms
//
// Conditional displacement amplitude alpha_k(t) = (g/w)(1 - e^{iwt}). The
// qubit state with sigma_z = +1 (index 0) displaces mode k by +alpha_k, the
// other by -alpha_k. This is half the amplitude quoted in some derivations;
// with it the mode products reproduce the continuum indicators for
// J(w) = 2 sum g^2 delta(w - w_k).
// ---------------------------------------------------------------------------

Complex displacement_amplitude(const Mode& mode, double t);

/// Thermal occupation 1 / (e^{w/T} - 1); 0 at T = 0.
double mean_occupation(double omega, double temperature);

/// Tr[D(2 alpha) rho_th], magnitude exp(-2 |alpha|^2 coth(w/2T)). Real and
/// positive for thermal states; returned as complex for generality.
Complex mode_decoherence_factor(const Mode& mode, double temperature, double t);

/// Uhlmann fidelity of the two conditional states of one mode:
/// exp(-2 |alpha|^2 tanh(w/2T)).
double mode_fidelity(const Mode& mode, double temperature, double t);

struct ProductIndicators {
  double log_dec;
  double log_fid;
};

/// Sums the per-mode log magnitudes over a mode set.
ProductIndicators product_indicators(const ModeSet& modes, double temperature,
                                     double t);

/// -(1/2) d/dt log|Gamma| for a discrete set: sum 2 g^2 coth(w/2T) sin(wt) / w.
double product_gamma_rate(const ModeSet& modes, double temperature, double t);

// ---------------------------------------------------------------------------
// Truncated Fock space
// ---------------------------------------------------------------------------

/// Raised when a truncated state loses more weight than the tolerance.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest n >= 15 whose truncated thermal trace is >= 1 - 1e-10, plus
/// headroom max(10, ceil(4 |alpha|^2)) for the displacement.
int default_fock_cutoff(double omega, double temperature, double max_abs_alpha);

/// <m|D(alpha)|n> for 0 <= m, n <= cutoff (exact elements of the infinite
/// operator, not the exponential of a truncated generator).
CMatrix displacement_matrix(Complex alpha, int cutoff);

/// D(left) rho_th(nbar) D(right)^dagger restricted to Fock levels <= cutoff.
/// The thermal sum runs past the cutoff until its tail is below 1e-17.
CMatrix displaced_thermal_operator(Complex left, Complex right, double nbar,
                                   int cutoff);

/// Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) via two Hermitian eigendecompositions.
/// Throws std::domain_error if either input is not Hermitian PSD with unit
/// trace (tolerances 1e-9 for Hermiticity and eigenvalues, 1e-6 for trace).
double uhlmann_fidelity(const CMatrix& rho1, const CMatrix& rho2);

/// Joint state of the qubit and the observed modes after tracing out the
/// unobserved ones. Basis order: qubit (outer) x mode 0 x mode 1 x ...
class PartiallyReducedState {
 public:
  PartiallyReducedState(CMatrix matrix, std::vector<Mode> modes, std::vector<int> cutoffs,
                        double time, Complex gamma)
      : matrix_(std::move(matrix)),
        modes_(std::move(modes)),
        cutoffs_(std::move(cutoffs)),
        time_(time),
        gamma_(gamma) {}

  const CMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<Mode>& observed_modes() const noexcept { return modes_; }
  const std::vector<int>& cutoffs() const noexcept { return cutoffs_; }
  double time() const noexcept { return time_; }
  /// Product of unobserved-mode decoherence factors.
  Complex decoherence_factor() const noexcept { return gamma_; }
  /// Dimension of the observed-environment factor.
  Eigen::Index environment_dimension() const noexcept { return matrix_.rows() / 2; }
  /// Qubit block <n| rho |m> as an environment operator.
  CMatrix block(int n, int m) const;

 private:
  CMatrix matrix_;
  std::vector<Mode> modes_;
  std::vector<int> cutoffs_;
  double time_ = 0.0;
  Complex gamma_{1.0, 0.0};
};

/// Builds the partially reduced state exactly (no time stepping):
/// diagonal qubit blocks c^{nn} rho_f^{nn}(t), off-diagonal blocks
/// Gamma(t) c^{nm} rho_f^{nm}(t), rho_f^{nm} = (x)_k D(s_n a_k) rho_th D(s_m a_k)^dag.
/// fock_cutoff overrides the per-mode default. Throws TruncationError when a
/// conditional state loses more than 1e-10 of its trace, std::length_error
/// when the dimension exceeds 2 * 41^2.
PartiallyReducedState build_partially_reduced_state(
    const ModeSet& observed, const ModeSet& unobserved, const Qubit& qubit_init,
    double temperature, double t, std::optional<int> fock_cutoff = std::nullopt);

struct StateValidity {
  double hermiticity_error;  // max |rho - rho^dagger|
  double trace_error;        // |Tr rho - 1|
  bool positive;             // rho + tol I admits a Cholesky factorisation
};

StateValidity check_state(const CMatrix& rho, double tolerance = 1e-9);

/// Smallest eigenvalue (dense Hermitian solver; O(n^3)).
double min_eigenvalue(const CMatrix& rho);

struct SbsDiagnostics {
  /// Trace norm of the off-diagonal qubit block.
  double coherence_norm;
  /// Uhlmann fidelity of the two conditional observed-environment states,
  /// each normalised to unit trace.
  double conditional_overlap;
};

SbsDiagnostics sbs_diagnostics(const PartiallyReducedState& state);

/// Frobenius norm of the central difference (rho(t+dt) - rho(t-dt)) / 2dt
/// minus the canonical generator -i[H(t), rho] + gamma(t)(Z rho Z - rho),
/// where H(t) = sum_n |n><n| x s_n sum_k g_k (a_k^dag e^{iw_k t} + h.c.) acts
/// on the observed modes and gamma(t) is product_gamma_rate of the
/// unobserved ones.
double master_equation_residual(const ModeSet& observed, const ModeSet& unobserved,
                                const Qubit& qubit_init, double temperature,
                                double t, double dt,
                                std::optional<int> fock_cutoff = std::nullopt);

}  // namespace sbo
