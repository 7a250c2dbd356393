#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "sbo/sbo.h"

namespace cli {

// Bad input (exit 1) versus a failed computation (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check(sbo_status st, const char* what) {
  if (st == SBO_OK) return;
  std::string msg = std::string(what) + ": " + sbo_last_error();
  if (st == SBO_ERR_INVALID_ARGUMENT || st == SBO_ERR_OUT_OF_RANGE) throw UsageError(msg);
  throw NumericalError(msg);
}

class Model {
 public:
  Model(const sbo_params& p, const sbo_quad_options& q) {
    sbo_model* m = nullptr;
    check(sbo_model_create(&p, &m), "model");
    ptr_.reset(m);
    check(sbo_model_set_quad(m, &q), "quadrature options");
  }
  const sbo_model* get() const { return ptr_.get(); }

  double log_dec(double t, sbo_role r = SBO_UNOBSERVED) const {
    double v;
    check(sbo_log_decoherence(get(), t, r, &v), "log decoherence");
    return v;
  }
  double log_fid(double t, sbo_role r = SBO_OBSERVED) const {
    double v;
    check(sbo_log_fidelity(get(), t, r, &v), "log fidelity");
    return v;
  }
  double gamma(double t) const {
    double v;
    check(sbo_gamma_rate(get(), t, SBO_UNOBSERVED, &v), "gamma");
    return v;
  }
  double gamma_high(double t) const {
    double v;
    check(sbo_gamma_rate_high_temperature(get(), t, SBO_UNOBSERVED, &v), "high-temperature gamma");
    return v;
  }
  double closed_log_dec(double t) const {
    double v;
    check(sbo_closed_log_decoherence(get(), t, &v), "closed log decoherence");
    return v;
  }
  double closed_log_fid(double t) const {
    double v;
    check(sbo_closed_log_fidelity(get(), t, &v), "closed log fidelity");
    return v;
  }
  double closed_gamma(double t) const {
    double v;
    check(sbo_closed_gamma_rate(get(), t, &v), "closed gamma");
    return v;
  }
  // -log of the t -> inf plateau; +inf when divergent.
  double neg_asym_dec() const {
    double v;
    int div;
    check(sbo_asymptotic_log_decoherence(get(), SBO_UNOBSERVED, &v, &div), "asymptote");
    return -v;
  }
  double neg_asym_fid() const {
    double v;
    int div;
    check(sbo_asymptotic_log_fidelity(get(), SBO_OBSERVED, &v, &div), "asymptote");
    return -v;
  }

 private:
  struct Del {
    void operator()(sbo_model* m) const { sbo_model_destroy(m); }
  };
  std::unique_ptr<sbo_model, Del> ptr_;
};

class NMResult {
 public:
  NMResult(const Model& m, double t_max, size_t grid, bool high_temperature) {
    sbo_nm_result* r = nullptr;
    check(sbo_non_markovianity(m.get(), t_max, grid, high_temperature ? 1 : 0, &r),
          "non-markovianity");
    ptr_.reset(r);
  }
  double value() const { return sbo_nm_value(ptr_.get()); }
  double doubled() const { return sbo_nm_doubled_horizon_value(ptr_.get()); }
  bool converged() const { return sbo_nm_converged(ptr_.get()) != 0; }
  size_t intervals() const { return sbo_nm_interval_count(ptr_.get()); }
  std::pair<double, double> interval(size_t i) const {
    double a, b;
    check(sbo_nm_interval(ptr_.get(), i, &a, &b), "interval");
    return {a, b};
  }
  size_t diagnostics() const { return sbo_nm_diagnostic_count(ptr_.get()); }
  std::string diagnostic(size_t i) const { return sbo_nm_diagnostic(ptr_.get(), i); }

 private:
  struct Del {
    void operator()(sbo_nm_result* r) const { sbo_nm_result_destroy(r); }
  };
  std::unique_ptr<sbo_nm_result, Del> ptr_;
};

}  // namespace cli
