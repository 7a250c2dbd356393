#include "sbo/sbo.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "sbo/closed_forms.hpp"
#include "sbo/indicators.hpp"
#include "sbo/non_markovianity.hpp"
#include "sbo/oracle.hpp"

struct sbo_model {
  sbo::Environment env;
  sbo::QuadSpec spec;
};

struct sbo_nm_result {
  sbo::NMResult result;
};

namespace {

thread_local std::string last_error;

sbo_status fail(sbo_status code, const char* message) {
  last_error = message;
  return code;
}

template <class F>
sbo_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return SBO_OK;
  } catch (const sbo::QuadratureError& e) {
    return fail(SBO_ERR_NUMERICAL, e.what());
  } catch (const sbo::TruncationError& e) {
    return fail(SBO_ERR_NUMERICAL, e.what());
  } catch (const std::out_of_range& e) {
    return fail(SBO_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SBO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(SBO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::length_error& e) {
    return fail(SBO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SBO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SBO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SBO_ERR_INTERNAL, "unknown error");
  }
}

sbo::Role to_role(sbo_role r) {
  switch (r) {
    case SBO_OBSERVED:
      return sbo::Role::Observed;
    case SBO_UNOBSERVED:
      return sbo::Role::Unobserved;
  }
  throw std::invalid_argument("unknown role");
}

sbo::EnvPartition to_partition(const sbo_params& p) {
  switch (p.cut) {
    case SBO_CUT_UNCUT:
      return sbo::EnvPartition::uncut();
    case SBO_CUT_SINGLE:
      return sbo::EnvPartition::single_cut(p.beta);
    case SBO_CUT_WINDOW:
      return sbo::EnvPartition::window(p.alpha, p.beta);
    case SBO_CUT_SOFT:
      return sbo::EnvPartition::soft_window(p.alpha, p.beta, p.sigma);
  }
  throw std::invalid_argument("unknown partition kind");
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw std::invalid_argument(std::string(what) + " is null");
}

sbo::ModeSet make_modes(const double* omega, const double* g, std::size_t n) {
  std::vector<sbo::Mode> modes;
  if (n > 0) {
    need(omega, "mode frequencies");
    need(g, "mode couplings");
  }
  for (std::size_t i = 0; i < n; ++i) modes.push_back({omega[i], g[i]});
  return sbo::ModeSet(std::move(modes));
}

std::optional<int> to_cutoff(int c) { return c > 0 ? std::optional<int>(c) : std::nullopt; }

const sbo::Qubit& plus_state() {
  static const sbo::Qubit q = sbo::Qubit::Constant(sbo::Complex(0.5, 0.0));
  return q;
}

template <class F>
sbo_status closed(const sbo_model* m, double* out, F&& f) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    if (m->env.partition().kind() != sbo::PartitionKind::Uncut)
      throw std::domain_error("closed forms need the uncut partition");
    const auto& sd = m->env.density();
    *out = f(sd.ohmicity(), m->env.temperature(), sd.cutoff());
  });
}

}  // namespace

extern "C" {

const char* sbo_version(void) { return SBO_VERSION_STRING; }

const char* sbo_last_error(void) { return last_error.c_str(); }

void sbo_quad_options_default(sbo_quad_options* out) {
  if (out == nullptr) return;
  const sbo::QuadSpec d{};
  out->rel_tol = d.rel_tol;
  out->abs_tol = d.abs_tol;
  out->max_depth = d.max_depth;
}

sbo_status sbo_model_create(const sbo_params* params, sbo_model** out) {
  return guarded([&] {
    need(params, "params");
    need(out, "out");
    *out = nullptr;
    sbo::Environment env(sbo::SpectralDensity(params->s, params->cutoff),
                         to_partition(*params), params->temperature);
    *out = new sbo_model{env, sbo::QuadSpec{}};
  });
}

void sbo_model_destroy(sbo_model* model) { delete model; }

sbo_status sbo_model_set_quad(sbo_model* model, const sbo_quad_options* opts) {
  return guarded([&] {
    need(model, "model");
    need(opts, "options");
    sbo::QuadSpec spec{};
    spec.rel_tol = opts->rel_tol;
    spec.abs_tol = opts->abs_tol;
    spec.max_depth = opts->max_depth;
    spec.validate();
    model->spec = spec;
  });
}

sbo_status sbo_log_decoherence(const sbo_model* m, double t, sbo_role role, double* out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = sbo::log_decoherence(m->env, t, to_role(role), m->spec);
  });
}

sbo_status sbo_log_fidelity(const sbo_model* m, double t, sbo_role role, double* out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = sbo::log_fidelity(m->env, t, to_role(role), m->spec);
  });
}

sbo_status sbo_gamma_rate(const sbo_model* m, double t, sbo_role role, double* out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = sbo::gamma_rate(m->env, t, to_role(role), m->spec);
  });
}

sbo_status sbo_gamma_rate_high_temperature(const sbo_model* m, double t, sbo_role role,
                                           double* out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = sbo::gamma_rate_high_temperature(m->env, t, to_role(role), m->spec);
  });
}

sbo_status sbo_closed_log_decoherence(const sbo_model* m, double t, double* out) {
  return closed(m, out, [&](double s, double T, double c) {
    return sbo::closed_log_decoherence(s, T, c, t);
  });
}

sbo_status sbo_closed_log_fidelity(const sbo_model* m, double t, double* out) {
  return closed(m, out, [&](double s, double T, double c) {
    return sbo::closed_log_fidelity(s, T, c, t);
  });
}

sbo_status sbo_closed_gamma_rate(const sbo_model* m, double t, double* out) {
  return closed(m, out, [&](double s, double T, double c) {
    return sbo::closed_gamma_rate(s, T, c, t);
  });
}

sbo_status sbo_asymptotic_log_decoherence(const sbo_model* m, sbo_role role,
                                          double* out, int* divergent) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    const sbo::Asymptote a = sbo::asymptotic_log_decoherence(m->env, to_role(role), m->spec);
    *out = a.value;
    if (divergent) *divergent = a.divergent ? 1 : 0;
  });
}

sbo_status sbo_asymptotic_log_fidelity(const sbo_model* m, sbo_role role, double* out,
                                       int* divergent) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    const sbo::Asymptote a = sbo::asymptotic_log_fidelity(m->env, to_role(role), m->spec);
    *out = a.value;
    if (divergent) *divergent = a.divergent ? 1 : 0;
  });
}

sbo_status sbo_non_markovianity(const sbo_model* m, double t_max, size_t grid_points,
                                int high_temperature, sbo_nm_result** out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = nullptr;
    sbo::NMOptions opts;
    if (t_max > 0.0) opts.t_max = t_max;
    if (grid_points > 0) opts.grid_points = grid_points;
    opts.rate_spec = m->spec;
    auto holder = std::make_unique<sbo_nm_result>();
    if (high_temperature) {
      const double cutoff = m->env.density().cutoff();
      opts.root_tol = 1e-8 / cutoff;
      const sbo::Environment& env = m->env;
      const sbo::QuadSpec spec = m->spec;
      holder->result = sbo::non_markovianity(
          [&](double t) {
            return sbo::gamma_rate_high_temperature(env, t, sbo::Role::Unobserved, spec);
          },
          opts.t_max.value_or(50.0 / cutoff), opts);
    } else {
      holder->result = sbo::non_markovianity(m->env, opts);
    }
    *out = holder.release();
  });
}

void sbo_nm_result_destroy(sbo_nm_result* r) { delete r; }

double sbo_nm_value(const sbo_nm_result* r) {
  return r ? r->result.value : std::numeric_limits<double>::quiet_NaN();
}

double sbo_nm_doubled_horizon_value(const sbo_nm_result* r) {
  return r ? r->result.doubled_horizon_value : std::numeric_limits<double>::quiet_NaN();
}

int sbo_nm_converged(const sbo_nm_result* r) { return r && r->result.converged ? 1 : 0; }

size_t sbo_nm_interval_count(const sbo_nm_result* r) {
  return r ? r->result.negative_intervals.size() : 0;
}

sbo_status sbo_nm_interval(const sbo_nm_result* r, size_t i, double* start, double* end) {
  return guarded([&] {
    need(r, "result");
    need(start, "start");
    need(end, "end");
    const auto& iv = r->result.negative_intervals.at(i);
    *start = iv.first;
    *end = iv.second;
  });
}

size_t sbo_nm_diagnostic_count(const sbo_nm_result* r) {
  return r ? r->result.diagnostics.size() : 0;
}

const char* sbo_nm_diagnostic(const sbo_nm_result* r, size_t i) {
  if (r == nullptr || i >= r->result.diagnostics.size()) return nullptr;
  return r->result.diagnostics[i].c_str();
}

sbo_status sbo_oracle_product_indicators(const sbo_model* m, sbo_role role,
                                         size_t n_modes, double omega_max, double t,
                                         double* log_dec, double* log_fid) {
  return guarded([&] {
    need(m, "model");
    need(log_dec, "log_dec");
    need(log_fid, "log_fid");
    if (n_modes == 0) throw std::invalid_argument("n_modes must be > 0");
    const double wmax = omega_max > 0.0 ? omega_max : sbo::default_omega_max(m->env.density());
    const sbo::ModeSet modes =
        sbo::discretize(m->env.density(), m->env.partition(), to_role(role), n_modes, wmax);
    const sbo::ProductIndicators p =
        sbo::product_indicators(modes, m->env.temperature(), t);
    *log_dec = p.log_dec;
    *log_fid = p.log_fid;
  });
}

sbo_status sbo_oracle_mode_fidelity(double nbar, double alpha_re, double alpha_im,
                                    int cutoff, double* fock, double* closed_form) {
  return guarded([&] {
    need(fock, "fock");
    need(closed_form, "closed");
    if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
    const sbo::Complex a(alpha_re, alpha_im);
    const sbo::CMatrix r0 = sbo::displaced_thermal_operator(a, a, nbar, cutoff);
    const sbo::CMatrix r1 = sbo::displaced_thermal_operator(-a, -a, nbar, cutoff);
    const double p0 = r0.trace().real();
    const double p1 = r1.trace().real();
    if (1.0 - p0 > 1e-10 || 1.0 - p1 > 1e-10)
      throw sbo::TruncationError("fock cutoff too small for this displacement");
    *fock = sbo::uhlmann_fidelity(r0 / p0, r1 / p1);
    *closed_form = std::exp(-2.0 * std::norm(a) / (2.0 * nbar + 1.0));
  });
}

sbo_status sbo_oracle_state(const double* obs_omega, const double* obs_g, size_t n_obs,
                            const double* unobs_omega, const double* unobs_g,
                            size_t n_unobs, double temperature, double t,
                            int fock_cutoff, sbo_state_report* out) {
  return guarded([&] {
    need(out, "out");
    const sbo::ModeSet obs = make_modes(obs_omega, obs_g, n_obs);
    const sbo::ModeSet unobs = make_modes(unobs_omega, unobs_g, n_unobs);
    const sbo::PartiallyReducedState st = sbo::build_partially_reduced_state(
        obs, unobs, plus_state(), temperature, t, to_cutoff(fock_cutoff));
    const sbo::StateValidity v = sbo::check_state(st.matrix());
    const sbo::SbsDiagnostics d = sbo::sbs_diagnostics(st);
    out->hermiticity_error = v.hermiticity_error;
    out->trace_error = v.trace_error;
    out->positive = v.positive ? 1 : 0;
    out->coherence_norm = d.coherence_norm;
    out->conditional_overlap = d.conditional_overlap;
    out->product_overlap = std::exp(sbo::product_indicators(obs, temperature, t).log_fid);
    out->decoherence_factor = std::abs(st.decoherence_factor());
    out->dimension = static_cast<int>(st.matrix().rows());
  });
}

sbo_status sbo_oracle_master_residual(const double* obs_omega, const double* obs_g,
                                      size_t n_obs, const double* unobs_omega,
                                      const double* unobs_g, size_t n_unobs,
                                      double temperature, double t, double dt,
                                      int fock_cutoff, double* out) {
  return guarded([&] {
    need(out, "out");
    const sbo::ModeSet obs = make_modes(obs_omega, obs_g, n_obs);
    const sbo::ModeSet unobs = make_modes(unobs_omega, unobs_g, n_unobs);
    *out = sbo::master_equation_residual(obs, unobs, plus_state(), temperature, t, dt,
                                         to_cutoff(fock_cutoff));
  });
}

}  // extern "C"
