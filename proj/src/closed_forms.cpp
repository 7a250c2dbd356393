#include "sbo/closed_forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sbo {

namespace {

// B_{2j} / (2j)! for j = 1..9; the last entry only feeds the remainder
// estimate.
constexpr std::array<double, 9> kBernoulliOverFactorial = {
    (1.0 / 6.0) / 2.0,
    (-1.0 / 30.0) / 24.0,
    (1.0 / 42.0) / 720.0,
    (-1.0 / 30.0) / 40320.0,
    (5.0 / 66.0) / 3628800.0,
    (-691.0 / 2730.0) / 479001600.0,
    (7.0 / 6.0) / 87178291200.0,
    (-3617.0 / 510.0) / 20922789888000.0,
    (43867.0 / 798.0) / 6402373705728000.0,
};
// B_{2j} / (2j) for the digamma asymptotic series.
constexpr std::array<double, 8> kBernoulliOverIndex = {
    (1.0 / 6.0) / 2.0,   (-1.0 / 30.0) / 4.0, (1.0 / 42.0) / 6.0,
    (-1.0 / 30.0) / 8.0, (5.0 / 66.0) / 10.0, (-691.0 / 2730.0) / 12.0,
    (7.0 / 6.0) / 14.0,  (-3617.0 / 510.0) / 16.0,
};
constexpr int kOrder = 8;
constexpr double kMinShiftedReal = 10.0;

Complex cpow(Complex base, double exponent) {
  return std::exp(exponent * std::log(base));
}

void check_q(Complex q, const char* who) {
  if (!(q.real() > 0.0) || !std::isfinite(q.real()) || !std::isfinite(q.imag()))
    throw std::domain_error(std::string(who) + ": argument needs Re q > 0");
}

// Shift that makes the Euler-Maclaurin remainder negligible: first omitted
// term below 1e-17 times the leading tail term.
int choose_shift(double z, Complex q) {
  int n = static_cast<int>(std::max(0.0, std::ceil(kMinShiftedReal - q.real())));
  for (int guard = 0; guard < 64; ++guard) {
    const Complex w = q + static_cast<double>(n);
    double poch = 1.0;  // |z (z+1) ... (z + 2 kOrder)|
    for (int k = 0; k <= 2 * kOrder; ++k) poch *= std::abs(z + k);
    const double omitted = std::abs(kBernoulliOverFactorial[kOrder]) * poch *
                           std::pow(std::abs(w), -(2.0 * kOrder + 1.0));
    if (omitted < 1e-17) break;
    n += 10;
  }
  return n;
}

// Euler-Maclaurin tail sum_{k>=0} (w + k)^-z without the (w^(1-z))/(z-1)
// term, which callers combine themselves.
Complex em_tail_without_leading(double z, Complex w) {
  Complex out = 0.5 * cpow(w, -z);
  Complex wpow = cpow(w, -z - 1.0);  // w^(-z-2j+1), j = 1
  const Complex w2inv = 1.0 / (w * w);
  double poch = z;  // z (z+1) ... (z + 2j - 2)
  for (int j = 1; j <= kOrder; ++j) {
    out += kBernoulliOverFactorial[j - 1] * poch * wpow;
    poch *= (z + 2.0 * j - 1.0) * (z + 2.0 * j);
    wpow *= w2inv;
  }
  return out;
}

// (e^d - 1) for complex d without cancellation at small |d|.
Complex cexpm1(Complex d) {
  const double x = d.real();
  const double y = d.imag();
  const double sh = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y)};
}

bool is_integer(double s) { return std::floor(s) == s; }

void check_s(double s, const char* who) {
  if (!(s > 1.0) || !std::isfinite(s))
    throw std::domain_error(std::string(who) + ": needs s > 1");
}

Complex conj_shift(Complex q, double shift) { return q - Complex(0.0, shift); }

// Gamma(s-1) [zeta(s-1, q1) - zeta(s-1, q2)] by the selected route.
Complex scaled_zeta_difference(double s, Complex q1, Complex q2,
                               ClosedFormPath path) {
  const bool integer = is_integer(s) && s >= 2.0;
  if (path == ClosedFormPath::Polygamma && !integer)
    throw std::domain_error("closed form: polygamma route needs integer s >= 2");
  if (path == ClosedFormPath::Zeta ||
      (path == ClosedFormPath::Auto && !integer)) {
    return std::tgamma(s - 1.0) * hurwitz_zeta_difference(s - 1.0, q1, q2);
  }
  // Gamma(s-1) zeta(s-1, x) = (-1)^(s-1) psi^(s-2)(x); at s = 2 the constant
  // that separates -psi from the divergent zeta(1, x) cancels.
  const int m = static_cast<int>(s) - 2;
  const double sign = (m % 2 == 0) ? -1.0 : 1.0;
  if (m == 0) return sign * (digamma(q1) - digamma(q2));
  return sign * (polygamma(m, q1) - polygamma(m, q2));
}

}  // namespace

Complex hurwitz_zeta(double z, Complex q) {
  if (!(z > 1.0) || !std::isfinite(z))
    throw std::domain_error("hurwitz_zeta: needs z > 1");
  check_q(q, "hurwitz_zeta");
  const int n = choose_shift(z, q);
  Complex direct = 0.0;
  for (int k = n - 1; k >= 0; --k) direct += cpow(q + static_cast<double>(k), -z);
  const Complex w = q + static_cast<double>(n);
  return direct + cpow(w, 1.0 - z) / (z - 1.0) + em_tail_without_leading(z, w);
}

Complex hurwitz_zeta_difference(double z, Complex q1, Complex q2) {
  if (!(z > 0.0) || !std::isfinite(z))
    throw std::domain_error("hurwitz_zeta_difference: needs z > 0");
  check_q(q1, "hurwitz_zeta_difference");
  check_q(q2, "hurwitz_zeta_difference");
  const int n = std::max(choose_shift(z, q1), choose_shift(z, q2));
  Complex direct = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    const double kk = static_cast<double>(k);
    direct += cpow(q1 + kk, -z) - cpow(q2 + kk, -z);
  }
  const Complex w1 = q1 + static_cast<double>(n);
  const Complex w2 = q2 + static_cast<double>(n);
  // [w1^e - w2^e] / (z - 1) with e = 1 - z, written as
  // -w2^e (exp(e (log w1 - log w2)) - 1) / e.
  const double e = 1.0 - z;
  const Complex dlog = std::log(w1) - std::log(w2);
  Complex leading;
  if (e == 0.0) {
    leading = -dlog;
  } else {
    leading = -cpow(w2, e) * cexpm1(e * dlog) / e;
  }
  return direct + leading + em_tail_without_leading(z, w1) -
         em_tail_without_leading(z, w2);
}

Complex digamma(Complex z) {
  check_q(z, "digamma");
  Complex shift_sum = 0.0;
  Complex w = z;
  while (w.real() < kMinShiftedReal) {
    shift_sum += 1.0 / w;
    w += 1.0;
  }
  const Complex w2inv = 1.0 / (w * w);
  Complex series = 0.0;
  Complex p = w2inv;
  for (const double c : kBernoulliOverIndex) {
    series += c * p;
    p *= w2inv;
  }
  return std::log(w) - 0.5 / w - series - shift_sum;
}

Complex polygamma(int m, Complex z) {
  if (m < 1) throw std::domain_error("polygamma: needs m >= 1");
  check_q(z, "polygamma");
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;  // (-1)^(m+1)
  return sign * std::tgamma(m + 1.0) * hurwitz_zeta(m + 1.0, z);
}

double log_dec_vacuum(double s, double cutoff, double t) {
  check_s(s, "log_dec_vacuum");
  if (!(cutoff > 0.0)) throw std::domain_error("log_dec_vacuum: cutoff must be > 0");
  if (!(t >= 0.0)) throw std::domain_error("log_dec_vacuum: t must be >= 0");
  const double x = cutoff * t;
  const double z = s - 1.0;
  // 1 - cos(z atan x) (1+x^2)^(-z/2) = -expm1-style combination; computed as
  // 1 - Re (1 - ix)^(-z) but with expm1 for small x to keep relative accuracy.
  const Complex d = -z * std::log(Complex(1.0, -x));
  const double bracket = -cexpm1(d).real();
  return -2.0 * std::tgamma(z) * bracket;
}

double log_dec_thermal(double s, double temperature, double cutoff, double t,
                       ClosedFormPath path) {
  check_s(s, "log_dec_thermal");
  if (!(temperature >= 0.0)) throw std::domain_error("log_dec_thermal: T must be >= 0");
  if (!(cutoff > 0.0)) throw std::domain_error("log_dec_thermal: cutoff must be > 0");
  if (!(t >= 0.0)) throw std::domain_error("log_dec_thermal: t must be >= 0");
  if (temperature == 0.0 || t == 0.0) return 0.0;
  const double a = temperature / cutoff;
  const Complex q(1.0 + a, 0.0);
  const Complex diff = scaled_zeta_difference(s, q, conj_shift(q, temperature * t), path);
  return -4.0 * std::pow(a, s - 1.0) * diff.real();
}

double log_fid_thermal(double s, double temperature, double cutoff, double t,
                       ClosedFormPath path) {
  check_s(s, "log_fid_thermal");
  if (!(temperature >= 0.0)) throw std::domain_error("log_fid_thermal: T must be >= 0");
  if (!(cutoff > 0.0)) throw std::domain_error("log_fid_thermal: cutoff must be > 0");
  if (!(t >= 0.0)) throw std::domain_error("log_fid_thermal: t must be >= 0");
  if (temperature == 0.0 || t == 0.0) return 0.0;
  const double half_a = 0.5 * temperature / cutoff;
  const double shift = 0.5 * temperature * t;
  const Complex even(1.0 + half_a, 0.0);
  const Complex odd(0.5 + half_a, 0.0);
  const Complex d_even = scaled_zeta_difference(s, even, conj_shift(even, shift), path);
  const Complex d_odd = scaled_zeta_difference(s, odd, conj_shift(odd, shift), path);
  return -4.0 * std::pow(half_a, s - 1.0) * (d_even - d_odd).real();
}

double closed_log_decoherence(double s, double temperature, double cutoff,
                              double t, ClosedFormPath path) {
  return log_dec_vacuum(s, cutoff, t) +
         log_dec_thermal(s, temperature, cutoff, t, path);
}

double closed_log_fidelity(double s, double temperature, double cutoff, double t,
                           ClosedFormPath path) {
  return log_dec_vacuum(s, cutoff, t) +
         log_fid_thermal(s, temperature, cutoff, t, path);
}

double closed_gamma_rate(double s, double temperature, double cutoff, double t) {
  check_s(s, "closed_gamma_rate");
  if (!(temperature >= 0.0)) throw std::domain_error("closed_gamma_rate: T must be >= 0");
  if (!(cutoff > 0.0)) throw std::domain_error("closed_gamma_rate: cutoff must be > 0");
  if (!(t >= 0.0)) throw std::domain_error("closed_gamma_rate: t must be >= 0");
  const double x = cutoff * t;
  const double vacuum = cutoff * std::tgamma(s) *
                        std::sin(s * std::atan(x)) * std::pow(1.0 + x * x, -0.5 * s);
  if (temperature == 0.0) return vacuum;
  const Complex q(1.0 + temperature / cutoff, -temperature * t);
  const double thermal = 2.0 * std::pow(cutoff, 1.0 - s) * std::tgamma(s) *
                         std::pow(temperature, s) * hurwitz_zeta(s, q).imag();
  return vacuum + thermal;
}

}  // namespace sbo
