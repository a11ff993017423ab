#include "congamma/run.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <thread>

#include "congamma/cache.hpp"
#include "congamma/counting.hpp"
#include "congamma/error.hpp"
#include "congamma/goldbach.hpp"
#include "congamma/propagator.hpp"
#include "congamma/sieve.hpp"
#include "congamma/specfun.hpp"

namespace congamma {

namespace {

using Row = std::vector<std::string>;
using Task = std::function<std::vector<Row>()>;

PrecisionPolicy policy_of(const ExperimentConfig& c) {
  PrecisionPolicy p;
  p.digits = c.digits;
  p.max_terms = c.max_terms;
  p.tail_tol = c.tail_tol;
  p.auto_raise = c.auto_raise;
  p.validate();
  return p;
}

std::uint64_t as_integer(double v, const char* param, double min) {
  if (v != std::floor(v) || v < min || v > 1.8e19) {
    throw ValidationError(std::string(param) + " must be an integer >= " + format_double(min), param);
  }
  return static_cast<std::uint64_t>(v);
}

std::string num(double v) { return format_double(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(const BigReal& v, int digits) { return v.str(digits); }

// Evaluates tasks on a pool; rows come back in task order and the first
// failing task (by index) decides the error.
std::vector<Row> run_tasks(const std::vector<Task>& tasks, unsigned threads) {
  std::vector<std::vector<Row>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        results[k] = tasks[k]();
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<Row> rows;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    for (auto& r : results[k]) rows.push_back(std::move(r));
  }
  return rows;
}

std::shared_ptr<PrimeTable> table_for(double limit, unsigned threads) {
  SieveOptions so;
  so.threads = threads;
  const std::uint64_t lim = static_cast<std::uint64_t>(std::max(2.0, std::floor(limit)));
  return std::make_shared<PrimeTable>(PrimeTable::build(lim, so));
}

double max_of(const std::vector<double>& v) {
  double m = v.front();
  for (double x : v) m = std::max(m, x);
  return m;
}

Report identity_report(const ExperimentConfig& c) {
  const auto p = policy_of(c);
  const auto grid = parse_grid(c.x, "x");
  Report rep{{"x", "N", "abs_err", "rel_err", "terms", "tail_bound", "digits"}, {}};
  std::vector<Task> tasks;
  for (double x : grid) {
    tasks.push_back([=]() -> std::vector<Row> {
      const SeriesResult r = integer_count(x, p);
      const BigReal X(x, r.precision_used);
      const BigReal err = abs(r.value - X);
      return {{num(x), num(r.value, p.digits), num(err, p.digits), num(err / X, p.digits), num(std::uint64_t(r.terms_used)),
               num(r.tail_bound, p.digits), std::to_string(r.precision_used)}};
    });
  }
  rep.rows = run_tasks(tasks, c.threads);
  return rep;
}

Report primes_report(const ExperimentConfig& c) {
  const auto p = policy_of(c);
  const auto grid = parse_grid(c.x, "x");
  Report rep;
  std::vector<Task> tasks;
  if (c.compare == "sieve") {
    rep.columns = {"x", "pi1_bar", "Pi_exact", "rel_err", "terms", "digits"};
    const auto table = table_for(max_of(grid), c.threads);
    for (double x : grid) {
      tasks.push_back([=]() -> std::vector<Row> {
        const SeriesResult r = pi1_bar(x, p);
        const BigReal exact = big_pi_exact(x, *table, r.precision_used);
        const BigReal rel = abs(r.value - exact) / exact;
        return {{num(x), num(r.value, p.digits), num(exact, p.digits), num(rel, p.digits),
                 num(std::uint64_t(r.terms_used)), std::to_string(r.precision_used)}};
      });
    }
  } else if (c.compare == "riemann") {
    rep.columns = {"x", "mobius_pi", "riemann_r", "rel_err", "terms", "digits"};
    for (double x : grid) {
      tasks.push_back([=]() -> std::vector<Row> {
        const SeriesResult m = mobius_inverted_pi(x, p);
        const SeriesResult r = riemann_r(x, p);
        const BigReal rel = abs(m.value - r.value) / r.value;
        return {{num(x), num(m.value, p.digits), num(r.value, p.digits), num(rel, p.digits),
                 num(std::uint64_t(m.terms_used)), std::to_string(m.precision_used)}};
      });
    }
  } else {
    rep.columns = {"x", "pi1_bar", "tail_bound", "terms", "digits"};
    for (double x : grid) {
      tasks.push_back([=]() -> std::vector<Row> {
        const SeriesResult r = pi1_bar(x, p);
        return {{num(x), num(r.value, p.digits), num(r.tail_bound, p.digits), num(std::uint64_t(r.terms_used)),
                 std::to_string(r.precision_used)}};
      });
    }
  }
  rep.rows = run_tasks(tasks, c.threads);
  return rep;
}

Report doubles_report(const ExperimentConfig& c) {
  const auto p = policy_of(c);
  const auto grid = parse_grid(c.x, "x");
  const std::uint64_t i = c.i;
  Report rep{{"x", "i", "pi2i_bar", "tail_bound", "terms", "digits", "validity_warning"}, {}};
  std::shared_ptr<PrimeTable> table;
  if (c.compare == "sieve") {
    rep.columns.push_back("exact");
    rep.columns.push_back("ratio");
    for (double x : grid) as_integer(x, "x", 2.0 * static_cast<double>(i) + 2.0);
    table = table_for(max_of(grid), c.threads);
  }
  std::vector<Task> tasks;
  for (double x : grid) {
    tasks.push_back([=]() -> std::vector<Row> {
      const SeriesResult r = pi2i_bar(x, i, p);
      Row row{num(x), num(i), num(r.value, p.digits), num(r.tail_bound, p.digits), num(std::uint64_t(r.terms_used)),
              std::to_string(r.precision_used), r.validity_warning ? "true" : "false"};
      if (table) {
        const std::uint64_t exact = double_count_exact(i, static_cast<std::uint64_t>(x), *table);
        row.push_back(num(exact));
        row.push_back(exact == 0 ? "nan"
                                 : num(r.value / BigReal(static_cast<long>(exact), p.digits), p.digits));
      }
      return {row};
    });
  }
  rep.rows = run_tasks(tasks, c.threads);
  return rep;
}

Report goldbach_report(const ExperimentConfig& c) {
  const auto p = policy_of(c);
  const auto grid = parse_grid(c.x, "x");
  const StraddleMode mode = parse_straddle_mode(c.mode);
  for (double x : grid) as_integer(x, "x", 4.0);
  Report rep{{"x", "mode", "S", "c2i_sum", "log10_failure", "prob_straddled", "i_max", "tail_bound", "digits"}, {}};
  std::shared_ptr<PrimeTable> table;
  if (c.compare == "sieve") {
    rep.columns.push_back("straddle_exact");
    rep.columns.push_back("ratio");
    table = table_for(2.0 * max_of(grid), c.threads);
  }
  std::shared_ptr<C2iCache> cache;
  const std::string cache_path = resolve_cache_path(c.cache_path);
  if (mode == StraddleMode::factored && !cache_path.empty()) cache = std::make_shared<C2iCache>(cache_path);

  std::vector<Task> tasks;
  for (double xd : grid) {
    tasks.push_back([=]() -> std::vector<Row> {
      const auto x = static_cast<std::uint64_t>(xd);
      StraddleOptions opts;
      opts.sweep.threads = c.threads;
      if (cache) {
        opts.sweep.resume = cache->resume_for(x - 3, opts.sweep);
        opts.sweep.on_checkpoint = [cache](const C2iCheckpoint& cp) { cache->append(cp); };
      }
      const StraddleReport r = straddle_expectation(x, p, mode, opts);
      const auto [prob, log10_fail] = failure_probability(r);
      Row row{num(x), to_string(r.mode), num(r.S, p.digits), num(r.c2i_sum_used, p.digits),
              num(r.log10_failure, p.digits), num(prob, p.digits), num(r.i_max), num(r.tail_bound, p.digits),
              std::to_string(r.precision_used)};
      if (table) {
        const StraddleCount sc = straddle_count_exact(x, *table);
        row.push_back(num(sc.count));
        row.push_back(sc.count == 0 ? "nan" : num(r.S / BigReal(static_cast<long>(sc.count), p.digits), p.digits));
      }
      return {row};
    });
  }
  // Cache writes stay ordered when the grid runs serially; the sweep itself
  // uses the configured threads.
  rep.rows = run_tasks(tasks, cache ? 1 : c.threads);
  return rep;
}

Report cramer_report(const ExperimentConfig& c) {
  const auto p = policy_of(c);
  const auto grid = parse_grid(c.x, "x");
  for (double x : grid) as_integer(x, "x", 3.0);
  Report rep{{"p", "cramer_gap", "log2p", "ratio"}, {}};
  std::vector<Task> tasks;
  for (double xd : grid) {
    tasks.push_back([=]() -> std::vector<Row> {
      const auto pp = static_cast<std::uint64_t>(xd);
      const BigReal gap = cramer_gap(pp, p);
      const BigReal l = log(BigReal(static_cast<long>(pp), p.digits));
      const BigReal l2 = l * l;
      return {{num(pp), num(gap, p.digits), num(l2, p.digits), num(gap / l2, p.digits)}};
    });
  }
  rep.rows = run_tasks(tasks, c.threads);
  return rep;
}

Report sieve_report(const ExperimentConfig& c) {
  const auto grid = parse_grid(c.x, "x");
  for (double x : grid) {
    if (!(x >= 0.0)) throw ValidationError("x must be >= 0", "x");
  }
  const auto table = table_for(max_of(grid), c.threads);
  Report rep{{"x", "pi_exact", "Pi_exact"}, {}};
  for (double x : grid) {
    rep.rows.push_back({num(x), num(pi_exact(x, *table)), num(big_pi_exact(x, *table, c.digits), c.digits)});
  }
  return rep;
}

Report prop_step_report(const ExperimentConfig& c) {
  const auto grid = parse_grid(c.energy, "energy");
  Report rep{{"E", "V0", "r_re", "r_im", "t_re", "t_im", "flux_deviation"}, {}};
  for (double E : grid) {
    const ScatterCoeffs s = step_coeffs(E, c.v0);
    const bool propagating = E > c.v0;
    const double flux = propagating ? std::abs(std::norm(s.r) + std::norm(s.t) - 1.0) : std::abs(std::norm(s.r) - 1.0);
    rep.rows.push_back({num(E), num(c.v0), num(s.r.real()), num(s.r.imag()), num(s.t.real()), num(s.t.imag()), num(flux)});
  }
  return rep;
}

Report prop_green_report(const ExperimentConfig& c) {
  const auto grid = parse_grid(c.energy, "energy");
  const PiecewisePotential pot =
      c.potential_path.empty() ? PiecewisePotential() : PiecewisePotential::load(c.potential_path);
  Report rep{{"E", "x_a", "x_b", "oracle_re", "oracle_im", "recursion_re", "recursion_im", "rel_err", "depth",
              "converged"},
             {}};
  std::vector<Task> tasks;
  for (double E : grid) {
    tasks.push_back([=]() -> std::vector<Row> {
      const GreenEval o = transfer_matrix_green(pot, E, c.x_a, c.x_b);
      const GreenEval r = path_decomposition_green(pot, E, c.x_a, c.x_b, c.depth);
      const double rel = std::abs(r.value - o.value) / std::abs(o.value);
      return {{num(E), num(c.x_a), num(c.x_b), num(o.value.real()), num(o.value.imag()), num(r.value.real()),
               num(r.value.imag()), num(rel), std::to_string(c.depth), r.converged ? "true" : "false"}};
    });
  }
  rep.rows = run_tasks(tasks, c.threads);
  return rep;
}

Report prop_spectrum_report(const ExperimentConfig& c) {
  std::optional<double> v0;
  if (c.well_depth != "inf") v0 = std::stod(c.well_depth);
  const auto energies = bounce_spectrum(c.width, v0, c.emin, c.emax, c.tol);
  Report rep{{"n", "E"}, {}};
  if (!v0) rep.columns.push_back("E_walls");
  for (std::size_t n = 0; n < energies.size(); ++n) {
    Row row{std::to_string(n + 1), num(energies[n])};
    if (!v0) {
      // Label by the actual quantum number when emin cuts off low states.
      const double m = std::round(std::sqrt(2.0 * energies[n]) * c.width / std::numbers::pi);
      row.push_back(num(m * m * std::numbers::pi * std::numbers::pi / (2.0 * c.width * c.width)));
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string Report::csv() const {
  std::string out;
  for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "," : "") + csv_escape(columns[k]);
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_escape(row[k]);
    out += "\n";
  }
  return out;
}

std::string Report::json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    for (std::size_t k = 0; k < columns.size(); ++k) obj[columns[k]] = row[k];
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

Report build_report(const ExperimentConfig& config) {
  config.validate();
  const std::string& cmd = config.command;
  if (cmd == "identity") return identity_report(config);
  if (cmd == "primes") return primes_report(config);
  if (cmd == "doubles") return doubles_report(config);
  if (cmd == "goldbach") return goldbach_report(config);
  if (cmd == "cramer") return cramer_report(config);
  if (cmd == "sieve") return sieve_report(config);
  if (cmd == "prop-step") return prop_step_report(config);
  if (cmd == "prop-green") return prop_green_report(config);
  if (cmd == "prop-spectrum") return prop_spectrum_report(config);
  throw ValidationError("unknown command '" + cmd + "'", "command");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const RangeError*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const PrecisionExhausted*>(&e)) return 3;
  return 1;
}

std::string describe_error(const std::exception& e) {
  std::string msg = std::string("error: ") + e.what();
  if (const auto* ce = dynamic_cast<const Error*>(&e)) {
    if (!ce->parameter().empty()) msg += " [parameter: " + ce->parameter() + "]";
  }
  if (const auto* pe = dynamic_cast<const PrecisionExhausted*>(&e)) {
    msg += " suggested: --" + (pe->parameter() == "max_terms" ? std::string("max-terms") : pe->parameter()) + " " +
           std::to_string(pe->suggested());
  }
  if (const auto* ce = dynamic_cast<const CorruptionError*>(&e)) {
    msg += " (line " + std::to_string(ce->line()) + ")";
  }
  return msg;
}

int run(const ExperimentConfig& config, const std::function<void(std::string_view)>& out,
        const std::function<void(std::string_view)>& err) {
  try {
    const Report rep = build_report(config);
    out(config.format == "json" ? rep.json() : rep.csv());
    return 0;
  } catch (const std::exception& e) {
    err(describe_error(e) + "\n");
    return exit_code_for(e);
  }
}

}  // namespace congamma
