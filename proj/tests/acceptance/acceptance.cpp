// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.
//
//   congamma_acceptance [--only N,M] [--xfail N,M] [--cache PATH]
//
// Exit status is 0 when every criterion passes, or when the only failures
// are those listed in --xfail (an unexpected pass under --xfail is also a
// failure, so the list cannot go stale silently).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "congamma/cache.hpp"
#include "congamma/counting.hpp"
#include "congamma/error.hpp"
#include "congamma/goldbach.hpp"
#include "congamma/propagator.hpp"
#include "congamma/sieve.hpp"
#include "congamma/specfun.hpp"

using namespace congamma;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * k / (n - 1)));
  return v;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(const BigReal& a, const BigReal& b) { return (abs(a - b) / abs(b)).to_double(); }

PrecisionPolicy policy(int digits) {
  PrecisionPolicy p;
  p.digits = digits;
  return p;
}

std::string g_cache_path;

Outcome identity() {
  const auto t0 = Clock::now();
  double worst = 0;
  for (double x : {0.5, 1.0, 2.0, 10.0, 100.0, 1e4, 1e6}) {
    const auto r = integer_count(x, policy(50));
    worst = std::max(worst, std::fabs((r.value / BigReal(x, 50)).to_double() - 1.0));
  }
  const double t = seconds_since(t0);
  return {worst < 1e-9 && t < 1.0, fmt("max |N(x)/x-1| = %.2e, %.3f s", worst, t)};
}

Outcome pi1_vs_sieve() {
  const auto t0 = Clock::now();
  SieveOptions so;
  so.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto table = primes_up_to(10'000'000, so);
  double worst = 0, worst_hi = 0;
  for (double x : log_spaced(1e3, 1e7, 40)) {
    const BigReal exact = big_pi_exact(x, table, 30);
    const double e = rel(pi1_bar(x, policy(30)).value, exact);
    worst = std::max(worst, e);
    if (x >= 1e5) worst_hi = std::max(worst_hi, e);
  }
  const double t = seconds_since(t0);
  return {worst <= 0.05 && worst_hi <= 0.01 && t < 120.0,
          fmt("max rel err %.4f overall, %.4f for x>=1e5, %.1f s", worst, worst_hi, t)};
}

Outcome mobius_vs_r() {
  double worst = 0, at = 0;
  for (double x : log_spaced(1e2, 1e8, 20)) {
    const double e = rel(mobius_inverted_pi(x, policy(30)).value, riemann_r(x, policy(30)).value);
    if (e > worst) worst = e, at = x;
  }
  const auto table = primes_up_to(1'000'000);
  const double pi6 = static_cast<double>(pi_exact(1e6, table));
  const double e6 = std::fabs(mobius_inverted_pi(1e6, policy(30)).value.to_double() - pi6) / pi6;
  return {worst <= 0.01 && e6 <= 0.01 && pi6 == 78498,
          fmt("max rel diff vs R %.4f (at x=%.4g), at 1e6 vs %.0f: %.5f", worst, at, pi6, e6)};
}

Outcome i_scaling() {
  const int digits = 40;
  const auto pol = policy(digits);
  const BigReal c2 = twin_constant(pol);
  double worst = 0;
  for (double x : {1e3, 1e6}) {
    const BigReal base = pi2i_bar(x, 1, pol).value;
    for (std::uint64_t i : {1, 2, 3, 15}) {
      const BigReal scaled = pi2i_bar(x, i, pol).value * c2 / double_constant(i, pol).constant;
      worst = std::max(worst, rel(scaled, base));
    }
  }
  const double tol = std::pow(10.0, 6 - digits);
  return {worst <= tol, fmt("max rel diff %.2e (tolerance %.0e)", worst, tol)};
}

Outcome divergence() {
  const auto t0 = Clock::now();
  BigReal prev;
  bool increasing = true;
  std::string values;
  for (int e = 3; e <= 12; ++e) {
    const BigReal v = pi2i_bar(std::pow(10.0, e), 1, policy(30)).value;
    if (e > 3 && !(v > prev)) increasing = false;
    prev = v;
  }
  const double t = seconds_since(t0);
  return {increasing && t < 60.0, fmt("strictly increasing: %s, pi2_bar(1e12) = %.6e, %.2f s", increasing ? "yes" : "no",
                                      prev.to_double(), t)};
}

StraddleReport factored(std::uint64_t x, bool with_cache) {
  StraddleOptions opts;
  opts.sweep.threads = std::max(1u, std::thread::hardware_concurrency());
  std::unique_ptr<C2iCache> cache;
  if (with_cache && !g_cache_path.empty()) {
    cache = std::make_unique<C2iCache>(g_cache_path);
    opts.sweep.resume = cache->resume_for(x - 3, opts.sweep);
    opts.sweep.on_checkpoint = [&](const C2iCheckpoint& cp) { cache->append(cp); };
  }
  return straddle_expectation(x, policy(30), StraddleMode::factored, opts);
}

Outcome goldbach_numbers() {
  std::filesystem::remove(g_cache_path);
  auto t0 = Clock::now();
  const auto cold = factored(1'000'000'000, true);
  const double t_cold = seconds_since(t0);
  t0 = Clock::now();
  const auto warm = factored(1'000'000'000, true);
  const double t_warm = seconds_since(t0);
  const double S = cold.S.to_double();
  const double lf = cold.log10_failure.to_double();
  const bool same = rel(warm.S, cold.S) < 1e-20;
  return {S > 29000 && lf <= -12500 && t_cold < 600 && t_warm < 5 && same,
          fmt("S(1e9) = %.6g, log10 P_fail = %.6g, cold %.1f s, warm %.2f s, warm==cold: %s", S, lf, t_cold, t_warm,
              same ? "yes" : "no")};
}

Outcome factorization() {
  double worst = 0;
  for (std::uint64_t x : {10, 50, 100, 500, 1000}) {
    const auto d = straddle_expectation(x, policy(30), StraddleMode::direct);
    const auto f = straddle_expectation(x, policy(30), StraddleMode::factored);
    worst = std::max(worst, rel(d.S, f.S));
  }
  return {worst <= 1e-8, fmt("max rel diff direct vs factored %.2e", worst)};
}

Outcome s_trend() {
  std::vector<double> r;
  for (double x : {1e5, 1e6, 1e7, 1e8, 1e9}) {
    const double S = factored(static_cast<std::uint64_t>(x), x == 1e9).S.to_double();
    r.push_back(S * std::pow(std::log(x), 4) / x);
  }
  auto sorted = r;
  std::sort(sorted.begin(), sorted.end());
  const double med = sorted[2];
  double spread = 0;
  for (double v : r) spread = std::max(spread, std::max(v / med, med / v));
  return {spread <= 4.0, fmt("S log^4x/x = %.4g .. %.4g, max factor from median %.3f", sorted.front(), sorted.back(),
                             spread)};
}

Outcome cramer() {
  std::ostringstream ss;
  bool ok = true;
  for (int e = 3; e <= 7; ++e) {
    const auto p = static_cast<std::uint64_t>(std::pow(10.0, e));
    const double ratio = cramer_gap(p, policy(30)).to_double() / std::pow(std::log(static_cast<double>(p)), 2);
    ok = ok && ratio >= 0.5 && ratio <= 1.5;
    ss << (e > 3 ? ", " : "") << fmt("%.3f", ratio);
  }
  return {ok, "ratios " + ss.str() + " (band [0.5, 1.5])"};
}

Outcome flux() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_flux = 0, worst_tm = 0;
  for (int n = 0; n < 100; ++n) {
    const double V0 = -5.0 + 10.0 * u(rng);
    const double E = std::max(0.0, V0) + 1e-3 + 10.0 * u(rng);
    const auto s = step_coeffs(E, V0);
    worst_flux = std::max(worst_flux, std::fabs(std::norm(s.r) + std::norm(s.t) - 1.0));
    const auto tm = transfer_matrix_scattering(PiecewisePotential({0.0}, {0.0, V0}), E);
    worst_tm = std::max({worst_tm, std::abs(tm.r - s.r), std::abs(tm.t - s.t)});
  }
  return {worst_flux <= 1e-12 && worst_tm <= 1e-12,
          fmt("max | |r|^2+|t|^2-1 | = %.2e, max step vs transfer-matrix %.2e", worst_flux, worst_tm)};
}

Outcome recursion() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0, worst_rate = 0;
  int non_geometric = 0;
  for (int n = 0; n < 50; ++n) {
    const int regions = 2 + static_cast<int>(rng() % 2);
    std::vector<double> b{0.0};
    if (regions == 3) b.push_back(0.3 + 1.5 * u(rng));
    std::vector<double> v;
    for (int r = 0; r < regions; ++r) v.push_back(-1.0 + 2.0 * u(rng));
    const double E = *std::max_element(v.begin(), v.end()) + 0.2 + 2.0 * u(rng);
    const PiecewisePotential pot(b, v);
    const double xa = -1.0 + 3.0 * u(rng), xb = -1.0 + 3.0 * u(rng);
    const cplx o = transfer_matrix_green(pot, E, xa, xb).value;
    auto err = [&](int d) { return std::abs(path_decomposition_green(pot, E, xa, xb, d).value - o) / std::abs(o); };
    worst = std::max(worst, err(40));
    // Geometric decay: least-squares slope of log(err) against depth, over
    // depths whose error sits above the rounding floor.
    std::vector<std::pair<double, double>> pts;
    for (int d = 0; d <= 40; d += 2) {
      const double e = err(d);
      if (e > 1e-13) pts.emplace_back(d, std::log(e));
    }
    if (pts.size() < 3) continue;  // converged to rounding within two levels
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) sx += x, sy += y, sxx += x * x, sxy += x * y;
    const double m = static_cast<double>(pts.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double rate = std::exp(slope);
    worst_rate = std::max(worst_rate, rate);
    if (!(rate < 1.0)) ++non_geometric;
  }
  return {worst < 1e-6 && non_geometric == 0,
          fmt("max rel err at depth 40 %.2e, slowest fitted decay per level %.3f, non-decaying cases %d", worst,
              worst_rate, non_geometric)};
}

Outcome spectrum() {
  const double L = 1.7;
  const auto e = bounce_spectrum(L, std::nullopt, 0.0, 10.5 * 10.5 * M_PI * M_PI / (2 * L * L), 1e-13);
  double worst_inf = e.size() >= 10 ? 0.0 : INFINITY;
  for (std::size_t n = 1; n <= std::min<std::size_t>(10, e.size()); ++n)
    worst_inf = std::max(worst_inf, std::fabs(e[n - 1] - n * n * M_PI * M_PI / (2 * L * L)));

  // Finite well: V = 0 inside a box of width L, V0 outside. Bound states solve
  // q tan(qL/2) = kappa (even) or -q cot(qL/2) = kappa (odd),
  // q = sqrt(2E), kappa = sqrt(2(V0-E)), 0 < E < V0.
  const double V0 = 12.0;
  const auto fw = bounce_spectrum(L, V0, 0.0, V0, 1e-13);
  auto f_even = [&](double E) {
    const double q = std::sqrt(2 * E), ka = std::sqrt(2 * (V0 - E));
    return q * std::sin(q * L / 2) - ka * std::cos(q * L / 2);
  };
  auto f_odd = [&](double E) {
    const double q = std::sqrt(2 * E), ka = std::sqrt(2 * (V0 - E));
    return q * std::cos(q * L / 2) + ka * std::sin(q * L / 2);
  };
  std::vector<double> oracle;
  const int N = 200000;
  for (int which = 0; which < 2; ++which) {
    auto f = [&](double E) { return which == 0 ? f_even(E) : f_odd(E); };
    double a = 1e-12, fa = f(a);
    for (int k = 1; k <= N; ++k) {
      const double bnd = V0 * k / N - (k == N ? 1e-12 : 0.0);
      const double fb = f(bnd);
      if (fa * fb < 0) {
        double lo = a, hi = bnd;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((f(lo) < 0) == (f(mid) < 0)) lo = mid; else hi = mid;
        }
        oracle.push_back(0.5 * (lo + hi));
      }
      a = bnd, fa = fb;
    }
  }
  std::sort(oracle.begin(), oracle.end());
  double worst_fin = fw.size() == oracle.size() ? 0.0 : INFINITY;
  for (std::size_t n = 0; n < std::min(fw.size(), oracle.size()); ++n)
    worst_fin = std::max(worst_fin, std::fabs(fw[n] - oracle[n]));
  return {worst_inf < 1e-8 && worst_fin < 1e-8,
          fmt("infinite well max |dE| %.2e over %zu levels; finite well %zu roots (oracle %zu), max |dE| %.2e", worst_inf,
              std::min<std::size_t>(10, e.size()), fw.size(), oracle.size(), worst_fin)};
}

Outcome precision_robustness() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::string> kinds{"integer_count", "pi1_bar", "mobius_inverted_pi", "pi2i_bar", "riemann_r"};
  int bad = 0;
  double worst_ratio = 0;
  for (int n = 0; n < 20; ++n) {
    // Inputs come from the ranges the other criteria exercise.
    const std::string& kind = kinds[n % kinds.size()];
    const std::vector<double> identity_xs{0.5, 1.0, 2.0, 10.0, 100.0, 1e4, 1e6};
    const std::vector<std::uint64_t> is{1, 2, 3, 15};
    double x = 0;
    if (kind == "integer_count") x = identity_xs[rng() % identity_xs.size()];
    else if (kind == "pi1_bar") x = std::pow(10.0, 3.0 + 4.0 * u(rng));
    else if (kind == "pi2i_bar") x = std::pow(10.0, 3.0 + 9.0 * u(rng));
    else x = std::pow(10.0, 2.0 + 6.0 * u(rng));
    const std::uint64_t i = is[rng() % is.size()];
    auto eval = [&](int digits) {
      const auto p = policy(digits);
      if (kind == "integer_count") return integer_count(x, p);
      if (kind == "pi1_bar") return pi1_bar(x, p);
      if (kind == "mobius_inverted_pi") return mobius_inverted_pi(x, p);
      if (kind == "pi2i_bar") return pi2i_bar(x, i, p);
      return riemann_r(x, p);
    };
    SeriesResult a, b;
    try {
      a = eval(25);
      b = eval(50);
    } catch (const std::exception& e) {
      ++bad;
      std::printf("  criterion 13: %s(%.6g) threw: %s\n", kind.c_str(), x, e.what());
      continue;
    }
    const BigReal diff = abs(a.value - b.value);
    const bool ok = diff <= a.tail_bound;
    if (!ok) {
      ++bad;
      std::printf("  criterion 13: %s(%.6g) changed by %s, tail_bound %s\n", kind.c_str(), x, diff.str(6).c_str(),
                  a.tail_bound.str(6).c_str());
    }
    if (!a.tail_bound.is_zero()) worst_ratio = std::max(worst_ratio, (diff / a.tail_bound).to_double());
  }
  return {bad == 0, fmt("%d of 20 inputs exceed their tail_bound; max change/tail_bound %.3g", bad, worst_ratio)};
}

std::set<int> parse_set(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');)
    if (!t.empty()) out.insert(std::stoi(t));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, xfail;
  g_cache_path = (std::filesystem::temp_directory_path() / "congamma_acceptance_c2i.cache").string();
  for (int a = 1; a + 1 < argc; a += 2) {
    const std::string flag = argv[a];
    if (flag == "--only") only = parse_set(argv[a + 1]);
    else if (flag == "--xfail") xfail = parse_set(argv[a + 1]);
    else if (flag == "--cache") g_cache_path = argv[a + 1];
    else {
      std::fprintf(stderr, "unknown option %s\n", flag.c_str());
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"integer_count identity", identity},
      {"pi1_bar vs exact Pi", pi1_vs_sieve},
      {"Mobius inversion vs R", mobius_vs_r},
      {"exact i-scaling", i_scaling},
      {"pi2_bar divergence proxy", divergence},
      {"Goldbach S(1e9) and failure probability", goldbach_numbers},
      {"direct vs factored S", factorization},
      {"S trend x/log^4 x", s_trend},
      {"Cramer band", cramer},
      {"propagator flux", flux},
      {"recursion vs transfer matrix", recursion},
      {"bounce spectrum", spectrum},
      {"precision robustness", precision_robustness},
  };

  int unexpected = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = seconds_since(t0);
    const bool expected_fail = xfail.count(id) > 0;
    std::printf("%s %2d %s: %s [%.2f s]%s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(), o.detail.c_str(),
                t, expected_fail ? (o.pass ? " (listed as expected failure)" : " (expected failure)") : "");
    std::fflush(stdout);
    if (o.pass == expected_fail) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
