// Command-line front end. Talks to the library only through congamma.h.
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "congamma/congamma.h"

namespace {

struct Flag {
  const char* name;  // command-line spelling
  const char* key;   // config key
  const char* help;
};

// Flags shared by every subcommand; each maps onto one config key.
const std::vector<Flag> kFlags = {
    {"--x", "x", "grid: a:b:log10[:per_decade], a:b:lin:step, or v1,v2,..."},
    {"--i", "i", "double index i (gap 2i)"},
    {"--digits", "digits", "decimal digits of working precision"},
    {"--max-terms", "max_terms", "series term cap"},
    {"--tail-tol", "tail_tol", "relative tail tolerance"},
    {"--auto-raise", "auto_raise", "raise precision for cancellation (true/false)"},
    {"--mode", "mode", "goldbach: direct | factored | paper_lower_bound"},
    {"--compare", "compare", "primes: none | sieve | riemann; doubles/goldbach: none | sieve"},
    {"--format", "format", "csv | json"},
    {"--threads", "threads", "worker threads"},
    {"--cache", "cache_path", "C2i checkpoint cache file"},
    {"--potential", "potential_path", "piecewise potential file"},
    {"--energy", "energy", "energy grid (same syntax as --x)"},
    {"--v0", "v0", "step height"},
    {"--x-a", "x_a", "propagator start point"},
    {"--x-b", "x_b", "propagator end point"},
    {"--depth", "depth", "recursion depth"},
    {"--width", "width", "well width L"},
    {"--well-depth", "well_depth", "well depth, or inf for hard walls"},
    {"--emin", "emin", "spectrum window lower end"},
    {"--emax", "emax", "spectrum window upper end"},
    {"--tol", "tol", "root tolerance"},
};

const std::vector<std::pair<const char*, const char*>> kCommands = {
    {"identity", "integer-count identity N(x) = x"},
    {"primes", "smooth prime-power count against sieve or R(x)"},
    {"doubles", "expected count of prime doubles (p, p+2i)"},
    {"goldbach", "expected straddling doubles S(x) and failure probability"},
    {"cramer", "mean prime gap estimate against log^2 p"},
    {"sieve", "exact prime and prime-power counts"},
    {"prop-step", "potential step reflection and transmission"},
    {"prop-green", "Green's function: transfer matrix vs path recursion"},
    {"prop-spectrum", "bound-state energies of a square well"},
};

void to_file(const char* text, size_t len, void* user) { std::fwrite(text, 1, len, static_cast<std::FILE*>(user)); }

void to_stderr(const char* text, size_t len, void*) { std::fwrite(text, 1, len, stderr); }

struct ConfigDeleter {
  void operator()(congamma_config* c) const { congamma_config_free(c); }
};
using ConfigPtr = std::unique_ptr<congamma_config, ConfigDeleter>;

int report_failure(int status) {
  std::fprintf(stderr, "error: %s", congamma_last_error());
  const std::string param = congamma_last_error_parameter();
  if (!param.empty()) std::fprintf(stderr, " [parameter: %s]", param.c_str());
  if (status == CONGAMMA_E_CORRUPTION && congamma_last_error_line() > 0) {
    std::fprintf(stderr, " (line %ld)", congamma_last_error_line());
  }
  std::fputc('\n', stderr);
  if (status == CONGAMMA_E_VALIDATION || status == CONGAMMA_E_DOMAIN || status == CONGAMMA_E_RANGE) return 2;
  if (status == CONGAMMA_E_PRECISION) return 3;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"congamma: constrained gamma-process counting experiments"};
  app.require_subcommand(0, 1);

  std::string config_path;
  bool dump_config = false;
  app.add_option("--config", config_path, "key=value config file; explicit flags override it");
  app.add_flag("--dump-config", dump_config, "print the effective config instead of running");

  // Top-level and per-subcommand values land in the same map.
  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::App*, std::vector<CLI::Option*>>> subs;
  for (const auto& [name, help] : kCommands) {
    auto* sub = app.add_subcommand(name, help);
    std::vector<CLI::Option*> opts;
    for (const auto& f : kFlags) opts.push_back(sub->add_option(f.name, values[f.key], f.help));
    sub->add_option("--config", config_path, "key=value config file; explicit flags override it");
    sub->add_flag("--dump-config", dump_config, "print the effective config instead of running");
    subs.emplace_back(sub, std::move(opts));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  congamma_config* raw = nullptr;
  int st = config_path.empty() ? congamma_config_new(&raw) : congamma_config_load(config_path.c_str(), &raw);
  if (st != CONGAMMA_OK) return report_failure(st);
  ConfigPtr cfg(raw);

  for (const auto& [sub, opts] : subs) {
    if (!sub->parsed()) continue;
    if ((st = congamma_config_set(cfg.get(), "command", sub->get_name().c_str())) != CONGAMMA_OK) {
      return report_failure(st);
    }
    for (std::size_t k = 0; k < opts.size(); ++k) {
      if (opts[k]->count() == 0) continue;
      st = congamma_config_set(cfg.get(), kFlags[k].key, values[kFlags[k].key].c_str());
      if (st != CONGAMMA_OK) return report_failure(st);
    }
  }
  if (config_path.empty() && app.get_subcommands().empty()) {
    std::fputs(app.help().c_str(), stderr);
    return 2;
  }

  if (dump_config) {
    size_t need = 0;
    congamma_config_serialize(cfg.get(), nullptr, 0, &need);
    std::string text(need, '\0');
    if ((st = congamma_config_serialize(cfg.get(), text.data(), text.size(), &need)) != CONGAMMA_OK) {
      return report_failure(st);
    }
    text.resize(need - 1);
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  return congamma_run(cfg.get(), to_file, to_stderr, stdout);
}
