#pragma once

#include <complex>

namespace sbo {

using Complex = std::complex<double>;

/// Hurwitz zeta sum_{n>=0} (q + n)^-z for real z > 1 and Re q > 0.
///
/// The argument is shifted by an integer N until Re(q + N) >= 10 (further if
/// the remainder estimate demands it), the first N terms are summed directly
/// and the tail is replaced by its Euler-Maclaurin expansion through B_16.
/// Absolute error is below 1e-12 for |q| <= 1e6.
/// Throws std::domain_error outside the domain.
Complex hurwitz_zeta(double z, Complex q);

/// zeta(z, q1) - zeta(z, q2) for real z > 0, including z <= 1 where each term
/// alone diverges (analytic continuation) and z == 1 where the difference is
/// psi(q2) - psi(q1). Both arguments need Re q > 0.
Complex hurwitz_zeta_difference(double z, Complex q1, Complex q2);

/// Digamma psi(z) for Re z > 0.
Complex digamma(Complex z);

/// Polygamma psi^(m)(z) = (-1)^(m+1) m! zeta(m + 1, z) for m >= 1, Re z > 0.
Complex polygamma(int m, Complex z);

/// Which special-function route the thermal parts use. Polygamma needs an
/// integer s >= 2 (m = s - 2, with m = 0 meaning digamma); Zeta accepts any
/// real s > 1. Auto picks Polygamma for integer s.
enum class ClosedFormPath { Auto, Zeta, Polygamma };

/// Vacuum part of log|Gamma| for the uncut density (equal to log B_vac):
/// -2 Gamma(s-1) [1 - cos((s-1) atan(cutoff t)) / (1 + cutoff^2 t^2)^((s-1)/2)].
double log_dec_vacuum(double s, double cutoff, double t);

/// Thermal part of log|Gamma| for the uncut density:
/// -4 Gamma(s-1) (T/cutoff)^(s-1) Re[zeta(s-1, 1+T/cutoff) - zeta(s-1, 1+T/cutoff-iTt)].
/// Zero at T = 0.
double log_dec_thermal(double s, double temperature, double cutoff, double t,
                       ClosedFormPath path = ClosedFormPath::Auto);

/// Thermal part of log B for the uncut density, with a = T/cutoff, z = s-1:
/// -4 Gamma(s-1) (a/2)^(s-1) Re{[zeta(z, 1+a/2) - zeta(z, 1+a/2-iTt/2)]
///                             - [zeta(z, 1/2+a/2) - zeta(z, 1/2+a/2-iTt/2)]}.
double log_fid_thermal(double s, double temperature, double cutoff, double t,
                       ClosedFormPath path = ClosedFormPath::Auto);

/// log|Gamma| = vacuum + thermal.
double closed_log_decoherence(double s, double temperature, double cutoff,
                              double t, ClosedFormPath path = ClosedFormPath::Auto);
/// log B = vacuum + fidelity thermal part.
double closed_log_fidelity(double s, double temperature, double cutoff, double t,
                           ClosedFormPath path = ClosedFormPath::Auto);

/// Uncut canonical rate: cutoff Gamma(s) sin(s atan(cutoff t)) / (1 + cutoff^2 t^2)^(s/2)
/// + 2 cutoff^(1-s) Gamma(s) T^s Im zeta(s, 1 + T/cutoff - iTt). Needs s > 1.
double closed_gamma_rate(double s, double temperature, double cutoff, double t);

}  // namespace sbo
