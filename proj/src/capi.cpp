#include "congamma/congamma.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>

#include "congamma/cache.hpp"
#include "congamma/config.hpp"
#include "congamma/counting.hpp"
#include "congamma/error.hpp"
#include "congamma/goldbach.hpp"
#include "congamma/propagator.hpp"
#include "congamma/run.hpp"
#include "congamma/sieve.hpp"
#include "congamma/specfun.hpp"

struct congamma_policy {
  congamma::PrecisionPolicy p;
};
struct congamma_series {
  congamma::SeriesResult r;
};
struct congamma_prime_table {
  congamma::PrimeTable t;
};
struct congamma_straddle {
  congamma::StraddleReport r;
};
struct congamma_potential {
  congamma::PiecewisePotential p;
};
struct congamma_config {
  congamma::ExperimentConfig c;
};

namespace {

struct LastError {
  std::string message;
  std::string parameter;
  long suggested = 0;
  long line = 0;
};

thread_local LastError last_error;

void clear_error() { last_error = LastError{}; }

int set_error(int code, const std::string& message, const std::string& parameter = {}) {
  last_error.message = message;
  last_error.parameter = parameter;
  return code;
}

// Maps the exception in flight to a status code.
int translate() {
  try {
    throw;
  } catch (const congamma::PrecisionExhausted& e) {
    last_error.suggested = e.suggested();
    return set_error(CONGAMMA_E_PRECISION, e.what(), e.parameter());
  } catch (const congamma::CorruptionError& e) {
    last_error.line = e.line();
    return set_error(CONGAMMA_E_CORRUPTION, e.what(), e.parameter());
  } catch (const congamma::DomainError& e) {
    return set_error(CONGAMMA_E_DOMAIN, e.what(), e.parameter());
  } catch (const congamma::RangeError& e) {
    return set_error(CONGAMMA_E_RANGE, e.what(), e.parameter());
  } catch (const congamma::ResourceError& e) {
    return set_error(CONGAMMA_E_RESOURCE, e.what(), e.parameter());
  } catch (const congamma::ValidationError& e) {
    return set_error(CONGAMMA_E_VALIDATION, e.what(), e.parameter());
  } catch (const congamma::SingularError& e) {
    return set_error(CONGAMMA_E_SINGULAR, e.what(), e.parameter());
  } catch (const congamma::Error& e) {
    return set_error(CONGAMMA_E_INTERNAL, e.what(), e.parameter());
  } catch (const std::bad_alloc&) {
    return set_error(CONGAMMA_E_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CONGAMMA_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(CONGAMMA_E_INTERNAL, "unknown error");
  }
}

template <typename F>
int guarded(F&& f) {
  clear_error();
  try {
    return f();
  } catch (...) {
    return translate();
  }
}

int null_arg(const char* what) { return set_error(CONGAMMA_E_ARGUMENT, std::string(what) + " is null", what); }

int write_string(const std::string& s, char* buf, size_t len, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || len < s.size() + 1) {
    return set_error(CONGAMMA_E_BUFFER, "buffer too small: need " + std::to_string(s.size() + 1) + " bytes", "buf");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return CONGAMMA_OK;
}

int write_big(const congamma::BigReal& v, char* buf, size_t len, size_t* needed) {
  return write_string(v.str(), buf, len, needed);
}

template <typename F>
int make_series(const congamma_policy* policy, congamma_series** out, F&& f) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    if (!out) return null_arg("out");
    auto h = std::make_unique<congamma_series>();
    h->r = f(policy->p);
    *out = h.release();
    return static_cast<int>(CONGAMMA_OK);
  });
}


}  // namespace

extern "C" {

const char* congamma_version(void) { return "0.1.0"; }
const char* congamma_last_error(void) { return last_error.message.c_str(); }
const char* congamma_last_error_parameter(void) { return last_error.parameter.c_str(); }
long congamma_last_error_suggested(void) { return last_error.suggested; }
long congamma_last_error_line(void) { return last_error.line; }

int congamma_policy_new(int digits, long max_terms, double tail_tol, congamma_policy** out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    auto h = std::make_unique<congamma_policy>();
    h->p.digits = digits;
    h->p.max_terms = max_terms;
    h->p.tail_tol = tail_tol;
    h->p.validate();
    *out = h.release();
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_policy_set_auto_raise(congamma_policy* policy, int enabled) {
  if (!policy) return null_arg("policy");
  policy->p.auto_raise = enabled != 0;
  return CONGAMMA_OK;
}

void congamma_policy_free(congamma_policy* policy) { delete policy; }

int congamma_lower_gamma(const congamma_policy* policy, long n, const char* z, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    if (!z) return null_arg("z");
    const auto zv = congamma::BigReal::parse(z, policy->p.digits + 10);
    return write_big(congamma::lower_gamma(n, zv, policy->p), buf, len, needed);
  });
}

int congamma_regularized_p(const congamma_policy* policy, long n, const char* z, char* buf, size_t len,
                           size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    if (!z) return null_arg("z");
    const auto zv = congamma::BigReal::parse(z, policy->p.digits + 10);
    return write_big(congamma::regularized_p(n, zv, policy->p), buf, len, needed);
  });
}

int congamma_mobius(uint64_t n, int* out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    *out = congamma::mobius(n);
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_zeta_int(const congamma_policy* policy, long k, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    return write_big(congamma::zeta_int(k, policy->p), buf, len, needed);
  });
}

int congamma_log_integral(const congamma_policy* policy, const char* x, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    if (!x) return null_arg("x");
    const auto xv = congamma::BigReal::parse(x, policy->p.digits + 10);
    return write_big(congamma::log_integral(xv, policy->p), buf, len, needed);
  });
}


int congamma_riemann_r(const congamma_policy* policy, double x, congamma_series** out) {
  return make_series(policy, out, [&](const auto& p) { return congamma::riemann_r(x, p); });
}

int congamma_integer_count(const congamma_policy* policy, double x, congamma_series** out) {
  return make_series(policy, out, [&](const auto& p) { return congamma::integer_count(x, p); });
}

int congamma_pi1_bar(const congamma_policy* policy, double x, congamma_series** out) {
  return make_series(policy, out, [&](const auto& p) { return congamma::pi1_bar(x, p); });
}

int congamma_mobius_inverted_pi(const congamma_policy* policy, double x, congamma_series** out) {
  return make_series(policy, out, [&](const auto& p) { return congamma::mobius_inverted_pi(x, p); });
}

int congamma_pi2i_bar(const congamma_policy* policy, double x, uint64_t i, congamma_series** out) {
  return make_series(policy, out, [&](const auto& p) { return congamma::pi2i_bar(x, i, p); });
}

int congamma_series_value(const congamma_series* s, char* buf, size_t len, size_t* needed) {
  if (!s) return null_arg("series");
  return guarded([&] { return write_big(s->r.value, buf, len, needed); });
}

int congamma_series_tail_bound(const congamma_series* s, char* buf, size_t len, size_t* needed) {
  if (!s) return null_arg("series");
  return guarded([&] { return write_big(s->r.tail_bound, buf, len, needed); });
}

long congamma_series_terms(const congamma_series* s) { return s ? s->r.terms_used : 0; }
int congamma_series_precision(const congamma_series* s) { return s ? s->r.precision_used : 0; }
int congamma_series_validity_warning(const congamma_series* s) { return s && s->r.validity_warning ? 1 : 0; }
double congamma_series_value_double(const congamma_series* s) {
  return s ? s->r.value.to_double() : std::numeric_limits<double>::quiet_NaN();
}
void congamma_series_free(congamma_series* s) { delete s; }

int congamma_twin_constant(const congamma_policy* policy, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    return write_big(congamma::twin_constant(policy->p), buf, len, needed);
  });
}

int congamma_double_constant(const congamma_policy* policy, uint64_t i, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    return write_big(congamma::double_constant(i, policy->p).constant, buf, len, needed);
  });
}

int congamma_prime_table_new(uint64_t limit, unsigned threads, congamma_prime_table** out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    congamma::SieveOptions so;
    so.threads = threads == 0 ? 1 : threads;
    *out = new congamma_prime_table{congamma::PrimeTable::build(limit, so)};
    return static_cast<int>(CONGAMMA_OK);
  });
}

void congamma_prime_table_free(congamma_prime_table* table) { delete table; }

int congamma_pi_exact(const congamma_prime_table* table, double x, uint64_t* out) {
  return guarded([&] {
    if (!table) return null_arg("table");
    if (!out) return null_arg("out");
    *out = congamma::pi_exact(x, table->t);
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_big_pi_exact(const congamma_prime_table* table, double x, int digits, char* buf, size_t len,
                          size_t* needed) {
  return guarded([&] {
    if (!table) return null_arg("table");
    return write_big(congamma::big_pi_exact(x, table->t, digits), buf, len, needed);
  });
}

int congamma_double_count_exact(const congamma_prime_table* table, uint64_t i, uint64_t x, uint64_t* out) {
  return guarded([&] {
    if (!table) return null_arg("table");
    if (!out) return null_arg("out");
    *out = congamma::double_count_exact(i, x, table->t);
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_straddle_count_exact(const congamma_prime_table* table, uint64_t x, uint64_t* out) {
  return guarded([&] {
    if (!table) return null_arg("table");
    if (!out) return null_arg("out");
    *out = congamma::straddle_count_exact(x, table->t).count;
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_c2i_square_sum(const congamma_policy* policy, uint64_t limit, unsigned threads, char* buf, size_t len,
                            size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    congamma::C2iSweepOptions o;
    o.threads = threads == 0 ? 1 : threads;
    return write_big(congamma::c2i_square_sum(limit, policy->p, o), buf, len, needed);
  });
}

int congamma_straddle_expectation(const congamma_policy* policy, uint64_t x, const char* mode, const char* cache_path,
                                  congamma_straddle** out) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    if (!mode) return null_arg("mode");
    if (!out) return null_arg("out");
    const auto m = congamma::parse_straddle_mode(mode);
    congamma::StraddleOptions opts;
    std::unique_ptr<congamma::C2iCache> cache;
    const std::string path = congamma::resolve_cache_path(cache_path ? cache_path : "");
    if (m == congamma::StraddleMode::factored && !path.empty()) {
      cache = std::make_unique<congamma::C2iCache>(path);
      opts.sweep.resume = cache->resume_for(x - 3, opts.sweep);
      opts.sweep.on_checkpoint = [&cache](const congamma::C2iCheckpoint& cp) { cache->append(cp); };
    }
    *out = new congamma_straddle{congamma::straddle_expectation(x, policy->p, m, opts)};
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_straddle_S(const congamma_straddle* r, char* buf, size_t len, size_t* needed) {
  if (!r) return null_arg("report");
  return guarded([&] { return write_big(r->r.S, buf, len, needed); });
}

int congamma_straddle_log10_failure(const congamma_straddle* r, char* buf, size_t len, size_t* needed) {
  if (!r) return null_arg("report");
  return guarded([&] { return write_big(r->r.log10_failure, buf, len, needed); });
}

int congamma_straddle_c2i_sum(const congamma_straddle* r, char* buf, size_t len, size_t* needed) {
  if (!r) return null_arg("report");
  return guarded([&] { return write_big(r->r.c2i_sum_used, buf, len, needed); });
}

void congamma_straddle_free(congamma_straddle* r) { delete r; }

int congamma_straddle_density(const congamma_policy* policy, uint64_t i, double x, char* buf, size_t len,
                              size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    return write_big(congamma::straddle_density(i, x, policy->p), buf, len, needed);
  });
}

int congamma_cramer_gap(const congamma_policy* policy, uint64_t p, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    if (!policy) return null_arg("policy");
    return write_big(congamma::cramer_gap(p, policy->p), buf, len, needed);
  });
}

int congamma_step_coeffs(double E, double V0, double out[4]) {
  return guarded([&] {
    if (!out) return null_arg("out");
    const auto c = congamma::step_coeffs(E, V0);
    out[0] = c.r.real();
    out[1] = c.r.imag();
    out[2] = c.t.real();
    out[3] = c.t.imag();
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_potential_new(const double* breakpoints, size_t n, const double* values, congamma_potential** out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    if (!values) return null_arg("values");
    if (n > 0 && !breakpoints) return null_arg("breakpoints");
    std::vector<double> b(breakpoints, breakpoints + n);
    std::vector<double> v(values, values + n + 1);
    *out = new congamma_potential{congamma::PiecewisePotential(std::move(b), std::move(v))};
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_potential_parse(const char* text, congamma_potential** out) {
  return guarded([&] {
    if (!text) return null_arg("text");
    if (!out) return null_arg("out");
    *out = new congamma_potential{congamma::PiecewisePotential::parse(text)};
    return static_cast<int>(CONGAMMA_OK);
  });
}

void congamma_potential_free(congamma_potential* p) { delete p; }

int congamma_transfer_matrix_green(const congamma_potential* p, double E, double x_a, double x_b, double out[2]) {
  return guarded([&] {
    if (!p) return null_arg("potential");
    if (!out) return null_arg("out");
    const auto g = congamma::transfer_matrix_green(p->p, E, x_a, x_b);
    out[0] = g.value.real();
    out[1] = g.value.imag();
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_path_decomposition_green(const congamma_potential* p, double E, double x_a, double x_b, int depth,
                                      double out[2], int* converged) {
  return guarded([&] {
    if (!p) return null_arg("potential");
    if (!out) return null_arg("out");
    const auto g = congamma::path_decomposition_green(p->p, E, x_a, x_b, depth);
    out[0] = g.value.real();
    out[1] = g.value.imag();
    if (converged) *converged = g.converged ? 1 : 0;
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_bounce_spectrum(double L, double v0, double emin, double emax, double tol, double* out, size_t cap,
                             size_t* count) {
  return guarded([&] {
    if (!count) return null_arg("count");
    std::optional<double> depth;
    if (v0 > 0.0 && std::isfinite(v0)) depth = v0;
    const auto e = congamma::bounce_spectrum(L, depth, emin, emax, tol);
    *count = e.size();
    if (e.size() > cap || (!out && !e.empty())) {
      return set_error(CONGAMMA_E_BUFFER, "output array too small: need " + std::to_string(e.size()), "out");
    }
    for (size_t k = 0; k < e.size(); ++k) out[k] = e[k];
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_config_new(congamma_config** out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    *out = new congamma_config{};
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_config_parse(const char* text, congamma_config** out) {
  return guarded([&] {
    if (!text) return null_arg("text");
    if (!out) return null_arg("out");
    *out = new congamma_config{congamma::ExperimentConfig::parse(text)};
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_config_load(const char* path, congamma_config** out) {
  return guarded([&] {
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    *out = new congamma_config{congamma::ExperimentConfig::load(path)};
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_config_set(congamma_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (!cfg) return null_arg("config");
    if (!key) return null_arg("key");
    if (!value) return null_arg("value");
    cfg->c.set(key, value);
    return static_cast<int>(CONGAMMA_OK);
  });
}

int congamma_config_get(const congamma_config* cfg, const char* key, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    if (!cfg) return null_arg("config");
    if (!key) return null_arg("key");
    return write_string(cfg->c.get(key), buf, len, needed);
  });
}

int congamma_config_serialize(const congamma_config* cfg, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    if (!cfg) return null_arg("config");
    return write_string(cfg->c.serialize(), buf, len, needed);
  });
}

void congamma_config_free(congamma_config* cfg) { delete cfg; }

int congamma_run(const congamma_config* cfg, congamma_sink out, congamma_sink err, void* user) {
  clear_error();
  if (!cfg) {
    null_arg("config");
    return 1;
  }
  auto emit = [user](congamma_sink sink) {
    return [sink, user](std::string_view s) {
      if (sink) sink(s.data(), s.size(), user);
    };
  };
  try {
    return congamma::run(cfg->c, emit(out), emit(err));
  } catch (...) {
    translate();
    return 1;
  }
}

}  // extern "C"
