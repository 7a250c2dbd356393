#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <span>
#include <string>

#include "sbo/oracle.hpp"

namespace sbo {

namespace {

constexpr double kTraceTolerance = 1e-10;
constexpr Eigen::Index kMaxDimension = 2 * 41 * 41;

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Number of thermal levels (from 0) after which the remaining weight
// q^(K+1) drops below `tail`.
int thermal_levels(double nbar, double tail) {
  if (nbar == 0.0) return 0;
  const double q = nbar / (1.0 + nbar);
  return std::max(0, static_cast<int>(std::ceil(std::log(tail) / std::log(q))) - 1);
}

double sign_of(int n) { return n == 0 ? 1.0 : -1.0; }

void check_qubit(const Qubit& c) {
  const double herm = (c - c.adjoint()).cwiseAbs().maxCoeff();
  const double trace_err = std::abs(c.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Qubit> eig(0.5 * (c + c.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (herm > 1e-9 || trace_err > 1e-9 || eig.eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("qubit state must be Hermitian PSD with unit trace");
}

void check_density(const CMatrix& rho, const char* who) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw std::domain_error(std::string(who) + ": matrix must be square and non-empty");
  const StateValidity v = check_state(rho, 1e-9);
  if (v.hermiticity_error > 1e-9)
    throw std::domain_error(std::string(who) + ": matrix is not Hermitian");
  if (v.trace_error > 1e-6)
    throw std::domain_error(std::string(who) + ": trace differs from 1");
  if (!v.positive)
    throw std::domain_error(std::string(who) + ": matrix is not positive semidefinite");
}

CMatrix hermitian_sqrt(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (rho + rho.adjoint()));
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
}

std::vector<int> resolve_cutoffs(const ModeSet& observed, double temperature,
                                 std::span<const double> times,
                                 std::optional<int> fock_cutoff) {
  std::vector<int> out;
  for (const Mode& m : observed.modes()) {
    if (fock_cutoff) {
      if (*fock_cutoff < 1) throw std::invalid_argument("fock cutoff must be >= 1");
      out.push_back(*fock_cutoff);
      continue;
    }
    double amp = 0.0;
    for (const double t : times) amp = std::max(amp, std::abs(displacement_amplitude(m, t)));
    out.push_back(default_fock_cutoff(m.omega, temperature, amp));
  }
  return out;
}

PartiallyReducedState build_with_cutoffs(const ModeSet& observed,
                                         const ModeSet& unobserved,
                                         const Qubit& qubit_init, double temperature,
                                         double t, const std::vector<int>& cutoffs);

}  // namespace

int default_fock_cutoff(double omega, double temperature, double max_abs_alpha) {
  const double nbar = mean_occupation(omega, temperature);
  const int thermal = std::max(15, thermal_levels(nbar, kTraceTolerance));
  const int headroom = std::max(
      10, static_cast<int>(std::ceil(4.0 * max_abs_alpha * max_abs_alpha)));
  return thermal + headroom;
}

CMatrix displacement_matrix(Complex alpha, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("displacement_matrix: cutoff must be >= 0");
  const int dim = cutoff + 1;
  CMatrix d = CMatrix::Zero(dim, dim);
  const double x = std::norm(alpha);
  if (x == 0.0) return CMatrix::Identity(dim, dim);
  const double log_r = 0.5 * std::log(x);
  const double theta = std::arg(alpha);
  std::vector<double> lag(dim);
  for (int k = 0; k < dim; ++k) {
    // L_n^(k)(x) for n = 0 .. cutoff - k
    const int top = cutoff - k;
    lag[0] = 1.0;
    if (top >= 1) lag[1] = 1.0 + k - x;
    for (int n = 1; n < top; ++n)
      lag[n + 1] = ((2.0 * n + 1.0 + k - x) * lag[n] - (n + k) * lag[n - 1]) / (n + 1.0);
    const Complex phase = std::polar(1.0, k * theta);
    const Complex phase_up = std::polar(1.0, -k * theta) * ((k % 2 == 0) ? 1.0 : -1.0);
    for (int n = 0; n <= top; ++n) {
      const double mag = std::exp(k * log_r + 0.5 * (std::lgamma(n + 1.0) -
                                                     std::lgamma(n + k + 1.0)) -
                                  0.5 * x) *
                         lag[n];
      d(n + k, n) = mag * phase;
      if (k > 0) d(n, n + k) = mag * phase_up;
    }
  }
  return d;
}

CMatrix displaced_thermal_operator(Complex left, Complex right, double nbar,
                                   int cutoff) {
  if (!(nbar >= 0.0)) throw std::domain_error("displaced_thermal_operator: nbar must be >= 0");
  const int levels = thermal_levels(nbar, 1e-17);
  const int inner = std::max(cutoff, levels);
  const CMatrix dl = displacement_matrix(left, inner);
  const CMatrix dr = left == right ? dl : displacement_matrix(right, inner);
  Eigen::VectorXd p(levels + 1);
  const double q = nbar / (1.0 + nbar);
  for (int k = 0; k <= levels; ++k) p(k) = (1.0 - q) * std::pow(q, k);
  const auto a = dl.topLeftCorner(cutoff + 1, levels + 1);
  const auto b = dr.topLeftCorner(cutoff + 1, levels + 1);
  return a * p.asDiagonal() * b.adjoint();
}

double uhlmann_fidelity(const CMatrix& rho1, const CMatrix& rho2) {
  check_density(rho1, "uhlmann_fidelity");
  check_density(rho2, "uhlmann_fidelity");
  if (rho1.rows() != rho2.rows())
    throw std::domain_error("uhlmann_fidelity: dimension mismatch");
  const CMatrix root = hermitian_sqrt(rho1);
  const CMatrix m = root * rho2 * root;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()),
                                             Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

CMatrix PartiallyReducedState::block(int n, int m) const {
  if (n < 0 || n > 1 || m < 0 || m > 1)
    throw std::out_of_range("PartiallyReducedState::block: qubit index must be 0 or 1");
  const Eigen::Index d = environment_dimension();
  return matrix_.block(n * d, m * d, d, d);
}

namespace {

PartiallyReducedState build_with_cutoffs(const ModeSet& observed,
                                         const ModeSet& unobserved,
                                         const Qubit& qubit_init, double temperature,
                                         double t, const std::vector<int>& cutoffs) {
  Eigen::Index env_dim = 1;
  for (const int c : cutoffs) {
    env_dim *= c + 1;
    if (2 * env_dim > kMaxDimension)
      throw std::length_error("partially reduced state exceeds dimension 2*41^2");
  }

  Complex gamma(1.0, 0.0);
  for (const Mode& m : unobserved.modes())
    gamma *= mode_decoherence_factor(m, temperature, t);

  std::array<std::array<CMatrix, 2>, 2> env;
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) env[n][m] = CMatrix::Identity(1, 1);
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const Mode& mode = observed[k];
    const Complex a = displacement_amplitude(mode, t);
    const double nbar = mean_occupation(mode.omega, temperature);
    for (int n = 0; n < 2; ++n) {
      for (int m = n; m < 2; ++m) {
        const CMatrix op =
            displaced_thermal_operator(sign_of(n) * a, sign_of(m) * a, nbar, cutoffs[k]);
        if (n == m) {
          const double deficit = 1.0 - op.trace().real();
          if (deficit > kTraceTolerance)
            throw TruncationError("fock cutoff " + std::to_string(cutoffs[k]) +
                                  " loses " + std::to_string(deficit) +
                                  " of the trace for mode " + std::to_string(k) +
                                  "; use a larger cutoff");
        }
        env[n][m] = kron(env[n][m], op);
      }
    }
  }
  env[1][0] = env[0][1].adjoint();

  CMatrix rho(2 * env_dim, 2 * env_dim);
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) {
      Complex c = qubit_init(n, m);
      if (n != m) c *= (n == 0 ? gamma : std::conj(gamma));
      rho.block(n * env_dim, m * env_dim, env_dim, env_dim) = c * env[n][m];
    }
  return PartiallyReducedState(std::move(rho),
                               {observed.modes().begin(), observed.modes().end()},
                               cutoffs, t, gamma);
}

// h X with h = sum_k g_k (a_k^dag e^{iw_k t} + a_k e^{-iw_k t}) acting on the
// row index of X.
CMatrix apply_coupling(const std::vector<Mode>& modes, const std::vector<int>& cutoffs,
                       double t, const CMatrix& x) {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  Eigen::Index stride = x.rows();
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const Eigen::Index dim = cutoffs[k] + 1;
    stride /= dim;
    const Complex up = modes[k].g * std::polar(1.0, modes[k].omega * t);
    const Complex down = std::conj(up);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const Eigen::Index level = (r / stride) % dim;
      if (level >= 1)
        out.row(r) += up * std::sqrt(static_cast<double>(level)) * x.row(r - stride);
      if (level + 1 < dim)
        out.row(r) +=
            down * std::sqrt(static_cast<double>(level + 1)) * x.row(r + stride);
    }
  }
  return out;
}

}  // namespace

PartiallyReducedState build_partially_reduced_state(
    const ModeSet& observed, const ModeSet& unobserved, const Qubit& qubit_init,
    double temperature, double t, std::optional<int> fock_cutoff) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw std::domain_error("build_partially_reduced_state: T must be >= 0");
  if (!std::isfinite(t)) throw std::domain_error("build_partially_reduced_state: t must be finite");
  check_qubit(qubit_init);
  const double times[] = {t};
  return build_with_cutoffs(observed, unobserved, qubit_init, temperature, t,
                            resolve_cutoffs(observed, temperature, times, fock_cutoff));
}

StateValidity check_state(const CMatrix& rho, double tolerance) {
  StateValidity v{};
  v.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  v.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  const CMatrix shifted =
      0.5 * (rho + rho.adjoint()) +
      tolerance * CMatrix::Identity(rho.rows(), rho.cols());
  Eigen::LLT<CMatrix> llt(shifted);
  v.positive = llt.info() == Eigen::Success;
  return v;
}

double min_eigenvalue(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

SbsDiagnostics sbs_diagnostics(const PartiallyReducedState& state) {
  SbsDiagnostics out{};
  const CMatrix off = state.block(0, 1);
  Eigen::BDCSVD<CMatrix> svd(off);
  out.coherence_norm = svd.singularValues().sum();
  const CMatrix r0 = state.block(0, 0);
  const CMatrix r1 = state.block(1, 1);
  const double p0 = r0.trace().real();
  const double p1 = r1.trace().real();
  if (!(p0 > 0.0) || !(p1 > 0.0))
    throw std::domain_error("sbs_diagnostics: a qubit population vanishes");
  out.conditional_overlap = uhlmann_fidelity(r0 / p0, r1 / p1);
  return out;
}

double master_equation_residual(const ModeSet& observed, const ModeSet& unobserved,
                                const Qubit& qubit_init, double temperature, double t,
                                double dt, std::optional<int> fock_cutoff) {
  if (!(dt > 0.0)) throw std::invalid_argument("master_equation_residual: dt must be > 0");
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw std::domain_error("master_equation_residual: T must be >= 0");
  check_qubit(qubit_init);
  const double times[] = {t - dt, t, t + dt};
  const std::vector<int> cutoffs =
      resolve_cutoffs(observed, temperature, times, fock_cutoff);
  const auto build = [&](double at) {
    return build_with_cutoffs(observed, unobserved, qubit_init, temperature, at, cutoffs);
  };
  const PartiallyReducedState now = build(t);
  const CMatrix derivative = (build(t + dt).matrix() - build(t - dt).matrix()) / (2.0 * dt);

  const double gamma = product_gamma_rate(unobserved, temperature, t);
  const Eigen::Index d = now.environment_dimension();
  const std::vector<Mode>& modes = now.observed_modes();
  CMatrix generator(2 * d, 2 * d);
  const Complex minus_i(0.0, -1.0);
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      const CMatrix x = now.block(n, m);
      const CMatrix hx = apply_coupling(modes, cutoffs, t, x);
      const CMatrix xh = apply_coupling(modes, cutoffs, t, x.adjoint()).adjoint();
      CMatrix g = minus_i * (sign_of(n) * hx - sign_of(m) * xh);
      if (n != m) g -= 2.0 * gamma * x;
      generator.block(n * d, m * d, d, d) = g;
    }
  }
  return (derivative - generator).norm();
}

}  // namespace sbo
