#include "vfb/vfb.h"

#include <memory>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "errors.hpp"
#include "gas.hpp"
#include "harness.hpp"

namespace {

thread_local std::string g_last_error = "no error";

vfb_status fail(vfb_status code, const char* msg) {
  g_last_error = msg;
  return code;
}

template <class F>
vfb_status wrap(F&& body) {
  try {
    return body();
  } catch (const vfb::DomainError& e) {
    return fail(VFB_ERR_DOMAIN, e.what());
  } catch (const vfb::ConfigError& e) {
    return fail(VFB_ERR_CONFIG, e.what());
  } catch (const vfb::NumericalError& e) {
    return fail(VFB_ERR_NUMERICAL, e.what());
  } catch (const vfb::StateError& e) {
    return fail(VFB_ERR_STATE, e.what());
  } catch (const vfb::HorizonError& e) {
    return fail(VFB_ERR_HORIZON, e.what());
  } catch (const vfb::IoError& e) {
    return fail(VFB_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(VFB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VFB_ERR_INTERNAL, "unknown failure");
  }
}

void put(double* dst, double v) {
  if (dst) *dst = v;
}

}  // namespace

struct vfb_gas {
  vfb::GasParameters p;
};

struct vfb_ansatz {
  vfb::AnsatzTable table;
};

extern "C" {

const char* vfb_last_error(void) { return g_last_error.c_str(); }

vfb_status vfb_gas_create(double gamma, double mass, vfb_gas** out) {
  if (!out) return fail(VFB_ERR_DOMAIN, "out pointer is NULL");
  return wrap([&] {
    *out = new vfb_gas{vfb::derive_constants(gamma, mass)};
    return VFB_OK;
  });
}

void vfb_gas_destroy(vfb_gas* gas) { delete gas; }

vfb_status vfb_gas_constants(const vfb_gas* gas, double* A, double* B,
                             double* half_width, double* alpha) {
  if (!gas) return fail(VFB_ERR_DOMAIN, "gas handle is NULL");
  put(A, gas->p.A);
  put(B, gas->p.B);
  put(half_width, gas->p.half_width);
  put(alpha, gas->p.alpha);
  return VFB_OK;
}

vfb_status vfb_gas_density(const vfb_gas* gas, double x, double t, double* out) {
  if (!gas || !out) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    *out = vfb::barenblatt_density(gas->p, x, t);
    return VFB_OK;
  });
}

vfb_status vfb_gas_velocity(const vfb_gas* gas, double x, double t, double* out) {
  if (!gas || !out) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    *out = vfb::barenblatt_velocity(gas->p, x, t);
    return VFB_OK;
  });
}

vfb_status vfb_gas_boundaries(const vfb_gas* gas, double t, double* x_minus,
                              double* x_plus) {
  if (!gas) return fail(VFB_ERR_DOMAIN, "gas handle is NULL");
  return wrap([&] {
    auto [lo, hi] = vfb::barenblatt_boundaries(gas->p, t);
    put(x_minus, lo);
    put(x_plus, hi);
    return VFB_OK;
  });
}

vfb_status vfb_gas_total_mass(const vfb_gas* gas, double t, double* out) {
  if (!gas || !out) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    *out = vfb::total_mass(gas->p, t);
    return VFB_OK;
  });
}

vfb_status vfb_ansatz_create(const vfb_gas* gas, double t_end, double rel_tol,
                             vfb_ansatz** out) {
  if (!gas || !out) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    *out = new vfb_ansatz{vfb::AnsatzTable(gas->p, t_end, rel_tol)};
    return VFB_OK;
  });
}

void vfb_ansatz_destroy(vfb_ansatz* table) { delete table; }

vfb_status vfb_ansatz_eval(const vfb_ansatz* table, double t, double* eta_x,
                           double* eta_xt, double* eta_xtt) {
  if (!table) return fail(VFB_ERR_DOMAIN, "ansatz handle is NULL");
  return wrap([&] {
    if (t < 0.0 || t > table->table.t_end()) {
      throw vfb::DomainError("time " + std::to_string(t) + " outside [0, " +
                             std::to_string(table->table.t_end()) + "]");
    }
    put(eta_x, table->table.eta_x(t));
    put(eta_xt, table->table.eta_xt(t));
    put(eta_xtt, table->table.eta_xtt(t));
    return VFB_OK;
  });
}

vfb_status vfb_ansatz_correction(const vfb_ansatz* table, double t, double* h,
                                 double* h_t) {
  if (!table) return fail(VFB_ERR_DOMAIN, "ansatz handle is NULL");
  return wrap([&] {
    auto [hv, htv] = table->table.correction_h(t);
    put(h, hv);
    put(h_t, htv);
    return VFB_OK;
  });
}

vfb_status vfb_ansatz_duhamel_residual(const vfb_ansatz* table, double* out) {
  if (!table || !out) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    *out = table->table.duhamel_residual();
    return VFB_OK;
  });
}

vfb_status vfb_ansatz_phase_portrait(const vfb_ansatz* table, double* t0,
                                     double* t1, double* t2,
                                     double* terminal_h) {
  if (!table) return fail(VFB_ERR_DOMAIN, "ansatz handle is NULL");
  return wrap([&] {
    vfb::PhaseSummary s = table->table.phase_portrait();
    put(t0, s.t0);
    put(t1, s.t1);
    put(t2, s.t2);
    put(terminal_h, s.terminal_h);
    return VFB_OK;
  });
}

vfb_status vfb_ansatz_observed_k(const vfb_ansatz* table, double* out) {
  if (!table || !out) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    *out = table->table.decay_envelope_check(0).K_observed;
    return VFB_OK;
  });
}

vfb_status vfb_run_scenario(const char* config_path,
                            const char* output_dir_override, int* exit_code) {
  if (!config_path || !exit_code) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    vfb::RunConfig cfg = vfb::load_config(config_path);
    if (output_dir_override) cfg.output_dir = output_dir_override;
    *exit_code = vfb::run_scenario_guarded(cfg);
    return VFB_OK;
  });
}

vfb_status vfb_run_ansatz(const char* config_path,
                          const char* output_dir_override, int* exit_code) {
  if (!config_path || !exit_code) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    vfb::RunConfig cfg = vfb::load_config(config_path);
    if (output_dir_override) cfg.output_dir = output_dir_override;
    *exit_code = vfb::ansatz_scenario(cfg);
    return VFB_OK;
  });
}

vfb_status vfb_verify_bundle(const char* bundle_dir, int* exit_code) {
  if (!bundle_dir || !exit_code) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    *exit_code = vfb::verify_bundle(bundle_dir);
    return VFB_OK;
  });
}

vfb_status vfb_fit_csv(const char* csv_path, const char* column, double t_lo,
                       double t_hi, double* exponent, double* intercept,
                       double* r_squared, int* n_points) {
  if (!csv_path || !column) return fail(VFB_ERR_DOMAIN, "NULL argument");
  return wrap([&] {
    vfb::RateFit fit = vfb::fit_csv(csv_path, column, t_lo, t_hi);
    put(exponent, fit.exponent);
    put(intercept, fit.intercept);
    put(r_squared, fit.r_squared);
    if (n_points) *n_points = fit.n_points;
    return VFB_OK;
  });
}

vfb_status vfb_sweep(const char* const* config_paths, size_t n_configs,
                     const char* summary_csv, int* exit_code) {
  if (!config_paths || !summary_csv || !exit_code) {
    return fail(VFB_ERR_DOMAIN, "NULL argument");
  }
  return wrap([&] {
    std::vector<std::string> paths(config_paths, config_paths + n_configs);
    *exit_code = vfb::sweep(paths, summary_csv);
    return VFB_OK;
  });
}

}  // extern "C"
