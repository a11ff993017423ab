#include "congamma/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "congamma/bigreal.hpp"
#include "congamma/error.hpp"
#include "congamma/policy.hpp"

namespace congamma {

namespace {

constexpr std::size_t kMaxGridPoints = 1'000'000;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ValidationError(key + ": expected a finite number, got '" + t + "'", key);
  }
  return v;
}

long long to_integer(std::string_view text, const std::string& key) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    // Accept integral values written in scientific notation (1e6).
    const double d = to_double(t, key);
    if (d != std::floor(d) || std::fabs(d) > 9.0e18) throw ValidationError(key + ": expected an integer", key);
    return static_cast<long long>(d);
  }
  return v;
}

bool to_bool(std::string_view text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ValidationError(key + ": expected true or false", key);
}

void require_one_of(const std::string& value, std::initializer_list<const char*> allowed, const std::string& key) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  throw ValidationError(key + ": '" + value + "' is not one of " + list, key);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<double> parse_grid(std::string_view grid_in, const std::string& parameter) {
  const std::string grid = trim(grid_in);
  if (grid.empty()) throw ValidationError(parameter + ": empty grid", parameter);
  std::vector<double> out;
  if (grid.find(':') == std::string::npos) {
    std::stringstream ss(grid);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item, parameter));
    return out;
  }
  std::vector<std::string> parts;
  {
    std::stringstream ss(grid);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  }
  if (parts.size() < 3 || parts.size() > 4) {
    throw ValidationError(parameter + ": grid must be start:stop:log10[:per_decade] or start:stop:lin:step", parameter);
  }
  const double start = to_double(parts[0], parameter);
  const double stop = to_double(parts[1], parameter);
  if (stop < start) throw ValidationError(parameter + ": grid stop is below start", parameter);
  if (parts[2] == "log10") {
    if (!(start > 0.0)) throw ValidationError(parameter + ": log10 grid needs start > 0", parameter);
    const long long per = parts.size() == 4 ? to_integer(parts[3], parameter) : 1;
    if (per < 1) throw ValidationError(parameter + ": points per decade must be >= 1", parameter);
    const double l0 = std::log10(start);
    const double l1 = std::log10(stop);
    for (long long j = 0;; ++j) {
      const double l = l0 + static_cast<double>(j) / static_cast<double>(per);
      if (l > l1 + 1e-12) break;
      double v = std::pow(10.0, l);
      // Keep exact powers of ten and integers exact.
      const double r = std::round(v);
      if (std::fabs(v - r) <= 1e-9 * std::max(1.0, std::fabs(v))) v = r;
      out.push_back(v);
      if (out.size() > kMaxGridPoints) throw ValidationError(parameter + ": grid too large", parameter);
    }
    return out;
  }
  if (parts[2] == "lin") {
    if (parts.size() != 4) throw ValidationError(parameter + ": lin grid needs a step", parameter);
    const double step = to_double(parts[3], parameter);
    if (!(step > 0.0)) throw ValidationError(parameter + ": lin step must be positive", parameter);
    const double span = (stop - start) / step;
    if (span > static_cast<double>(kMaxGridPoints)) throw ValidationError(parameter + ": grid too large", parameter);
    const auto count = static_cast<long long>(std::floor(span + 1e-9));
    for (long long j = 0; j <= count; ++j) out.push_back(start + static_cast<double>(j) * step);
    return out;
  }
  throw ValidationError(parameter + ": unknown grid scale '" + parts[2] + "' (log10|lin)", parameter);
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "command", "x",         "i",          "digits",         "max_terms", "tail_tol", "auto_raise", "mode",
      "compare", "format",    "threads",    "cache_path",     "potential_path", "energy", "v0", "x_a",
      "x_b",     "depth",     "width",      "well_depth",     "emin",      "emax",     "tol"};
  return k;
}

const std::vector<std::string>& ExperimentConfig::commands() {
  static const std::vector<std::string> c = {"identity", "primes",   "doubles",    "goldbach",     "cramer",
                                             "sieve",    "prop-step", "prop-green", "prop-spectrum"};
  return c;
}

void ExperimentConfig::set(std::string_view key_in, std::string_view value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (value.find_first_of("#\n") != std::string::npos) {
    throw ValidationError(key + ": values may not contain '#' or newlines", key);
  }
  if (key == "command") {
    if (std::find(commands().begin(), commands().end(), value) == commands().end()) {
      throw ValidationError("command: unknown command '" + value + "'", "command");
    }
    command = value;
  } else if (key == "x") {
    x = value;
  } else if (key == "i") {
    const long long v = to_integer(value, key);
    if (v < 1) throw ValidationError("i must be >= 1", key);
    i = static_cast<std::uint64_t>(v);
  } else if (key == "digits") {
    const long long v = to_integer(value, key);
    if (v < BigReal::kMinDigits || v > PrecisionPolicy::kMaxWorkingDigits) {
      throw ValidationError("digits must be in [" + std::to_string(BigReal::kMinDigits) + ", " +
                                std::to_string(PrecisionPolicy::kMaxWorkingDigits) + "]",
                            key);
    }
    digits = static_cast<int>(v);
  } else if (key == "max_terms") {
    const long long v = to_integer(value, key);
    if (v < 1) throw ValidationError("max_terms must be >= 1", key);
    max_terms = static_cast<long>(v);
  } else if (key == "tail_tol") {
    const double v = to_double(value, key);
    if (!(v > 0.0)) throw ValidationError("tail_tol must be > 0", key);
    tail_tol = v;
  } else if (key == "auto_raise") {
    auto_raise = to_bool(value, key);
  } else if (key == "mode") {
    require_one_of(value, {"direct", "factored", "paper_lower_bound"}, key);
    mode = value;
  } else if (key == "compare") {
    require_one_of(value, {"none", "sieve", "riemann"}, key);
    compare = value;
  } else if (key == "format") {
    require_one_of(value, {"csv", "json"}, key);
    format = value;
  } else if (key == "threads") {
    const long long v = to_integer(value, key);
    if (v < 1 || v > 1024) throw ValidationError("threads must be in [1, 1024]", key);
    threads = static_cast<unsigned>(v);
  } else if (key == "cache_path") {
    cache_path = value;
  } else if (key == "potential_path") {
    potential_path = value;
  } else if (key == "energy") {
    energy = value;
  } else if (key == "v0") {
    v0 = to_double(value, key);
  } else if (key == "x_a") {
    x_a = to_double(value, key);
  } else if (key == "x_b") {
    x_b = to_double(value, key);
  } else if (key == "depth") {
    const long long v = to_integer(value, key);
    if (v < 0 || v > 100000) throw ValidationError("depth must be in [0, 100000]", key);
    depth = static_cast<int>(v);
  } else if (key == "width") {
    const double v = to_double(value, key);
    if (!(v > 0.0)) throw ValidationError("width must be > 0", key);
    width = v;
  } else if (key == "well_depth") {
    if (value != "inf") {
      const double v = to_double(value, key);
      if (!(v > 0.0)) throw ValidationError("well_depth must be > 0 or inf", key);
    }
    well_depth = value;
  } else if (key == "emin") {
    emin = to_double(value, key);
  } else if (key == "emax") {
    emax = to_double(value, key);
  } else if (key == "tol") {
    const double v = to_double(value, key);
    if (!(v > 0.0)) throw ValidationError("tol must be > 0", key);
    tol = v;
  } else {
    throw ValidationError("unknown config key '" + key + "'", key);
  }
}

std::string ExperimentConfig::get(std::string_view key) const {
  if (key == "command") return command;
  if (key == "x") return x;
  if (key == "i") return std::to_string(i);
  if (key == "digits") return std::to_string(digits);
  if (key == "max_terms") return std::to_string(max_terms);
  if (key == "tail_tol") return format_double(tail_tol);
  if (key == "auto_raise") return auto_raise ? "true" : "false";
  if (key == "mode") return mode;
  if (key == "compare") return compare;
  if (key == "format") return format;
  if (key == "threads") return std::to_string(threads);
  if (key == "cache_path") return cache_path;
  if (key == "potential_path") return potential_path;
  if (key == "energy") return energy;
  if (key == "v0") return format_double(v0);
  if (key == "x_a") return format_double(x_a);
  if (key == "x_b") return format_double(x_b);
  if (key == "depth") return std::to_string(depth);
  if (key == "width") return format_double(width);
  if (key == "well_depth") return well_depth;
  if (key == "emin") return format_double(emin);
  if (key == "emax") return format_double(emax);
  if (key == "tol") return format_double(tol);
  throw ValidationError("unknown config key '" + std::string(key) + "'", std::string(key));
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& k : keys()) out += k + "=" + get(k) + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig cfg;
  std::stringstream ss{std::string(text)};
  std::string line;
  long line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value", "config");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'", "config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::validate() const {
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    throw ValidationError("command: unknown command '" + command + "'", "command");
  }
  PrecisionPolicy p;
  p.digits = digits;
  p.max_terms = max_terms;
  p.tail_tol = tail_tol;
  p.validate();
  if (command == "prop-step" || command == "prop-green") {
    parse_grid(energy, "energy");
  } else if (command != "prop-spectrum") {
    parse_grid(x, "x");
  }
  if (command == "prop-spectrum" && !(emax > emin)) throw ValidationError("emax must exceed emin", "emax");
}

}  // namespace congamma
