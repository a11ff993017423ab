#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "congamma/error.hpp"
#include "congamma/propagator.hpp"

using namespace congamma;
using std::numbers::pi;

namespace {

constexpr cplx kI{0.0, 1.0};

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// Eigenfunction expansion of the box heat kernel.
double box_spectral(double L, double xa, double xb, double tau) {
  double s = 0.0;
  for (int n = 1; n <= 2000; ++n) {
    const double kn = n * pi / L;
    const double term = 2.0 / L * std::sin(kn * xa) * std::sin(kn * xb) * std::exp(-kn * kn * tau / 2.0);
    s += term;
    if (std::exp(-kn * kn * tau / 2.0) < 1e-300) break;
  }
  return s;
}

// Finite square well [0, L] of depth V0 (outside V0, inside 0): bound-state
// energies from the even/odd matching conditions, bracketed per branch.
std::vector<double> well_roots(double L, double V0) {
  std::vector<double> out;
  auto even = [&](double E) {
    const double k = std::sqrt(2 * E), q = std::sqrt(2 * (V0 - E));
    return k * std::sin(k * L / 2) - q * std::cos(k * L / 2);
  };
  auto odd = [&](double E) {
    const double k = std::sqrt(2 * E), q = std::sqrt(2 * (V0 - E));
    return k * std::cos(k * L / 2) + q * std::sin(k * L / 2);
  };
  const int N = 200000;
  for (auto f : {std::function<double(double)>(even), std::function<double(double)>(odd)}) {
    double a = 1e-12, fa = f(a);
    for (int s = 1; s <= N; ++s) {
      const double b = V0 * s / N * (1 - 1e-12);
      const double fb = f(b);
      if (fa * fb < 0) {
        boost::uintmax_t it = 200;
        auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), it);
        out.push_back((r.first + r.second) / 2);
      }
      a = b;
      fa = fb;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// |t|^2 of a rectangular barrier of height V and width a.
double barrier_transmission(double E, double V, double a) {
  if (E > V) {
    const double k2 = std::sqrt(2 * (E - V));
    const double s = std::sin(k2 * a);
    return 1.0 / (1.0 + V * V * s * s / (4 * E * (E - V)));
  }
  const double q = std::sqrt(2 * (V - E));
  const double s = std::sinh(q * a);
  return 1.0 / (1.0 + V * V * s * s / (4 * E * (V - E)));
}

PiecewisePotential random_potential(std::mt19937_64& rng, int regions_inside) {
  std::uniform_real_distribution<double> v(-1.0, 1.0), w(0.5, 2.0);
  std::vector<double> b{v(rng)};
  for (int r = 0; r < regions_inside; ++r) b.push_back(b.back() + w(rng));
  std::vector<double> vals;
  for (std::size_t r = 0; r <= b.size(); ++r) vals.push_back(v(rng));
  return PiecewisePotential(b, vals);
}

}  // namespace

TEST_CASE("free kernel") {
  const double T = 0.7;
  CHECK(std::abs(free_kernel(0, 0, T) - 1.0 / std::sqrt(cplx(0, 2 * pi * T))) < 1e-15);
  CHECK(std::abs(free_kernel(0, 1, 1) - std::exp(kI * 0.5) / std::sqrt(cplx(0, 2 * pi))) < 1e-15);
  CHECK_THROWS_AS(free_kernel(0, 1, 0), DomainError);
  // Chapman-Kolmogorov in imaginary time.
  for (double t1 : {0.2, 1.0}) {
    for (double x : {0.0, 0.8, -2.5}) {
      const double t2 = 0.45;
      auto f = [&](double y) {
        return (free_kernel(0, y, t1, TimeMode::imaginary) * free_kernel(y, x, t2, TimeMode::imaginary)).real();
      };
      const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -40.0, 40.0, 20, 1e-14);
      CHECK(q == doctest::Approx(free_kernel(0, x, t1 + t2, TimeMode::imaginary).real()).epsilon(1e-10));
    }
  }
}

TEST_CASE("Dirichlet kernels") {
  CHECK(std::abs(dirichlet_kernel(HalfLine{0.0}, 0.7, 0.0, 0.5, 0).value) <= 1e-12);
  CHECK(std::abs(dirichlet_kernel(HalfLine{1.5}, 3.0, 1.5, 0.5, 0).value) <= 1e-12);
  const double L = 2.0;
  for (double tau : {0.05, 0.3, 1.5}) {
    CHECK(std::abs(dirichlet_kernel(Box{L}, 0.0, 0.9, tau, 10).value) <= 1e-12);
    CHECK(std::abs(dirichlet_kernel(Box{L}, 0.9, L, tau, 10).value) <= 1e-12);
    for (int a = 1; a <= 5; ++a) {
      for (int c = 1; c <= 5; ++c) {
        const double xa = L * a / 6.0, xb = L * c / 6.0;
        const auto k = dirichlet_kernel(Box{L}, xa, xb, tau, 12);
        CHECK(k.converged);
        CHECK(k.value.real() == doctest::Approx(box_spectral(L, xa, xb, tau)).epsilon(1e-8));
      }
    }
  }
  CHECK(dirichlet_kernel(Box{1.0}, 1.0 / 3, 0.5, 0.1, 8).value.real() ==
        doctest::Approx(box_spectral(1.0, 1.0 / 3, 0.5, 0.1)).epsilon(1e-8));
  // Large box: only the direct path survives.
  const double Lb = 400.0;
  const auto big = dirichlet_kernel(Box{Lb}, Lb / 2, Lb / 2 + 1.0, 0.8, 2);
  CHECK(big.value.real() == doctest::Approx(free_kernel(0, 1.0, 0.8, TimeMode::imaginary).real()).epsilon(1e-12));
  CHECK_THROWS_AS(dirichlet_kernel(HalfLine{0.0}, -1.0, 1.0, 0.5, 0), DomainError);
}

TEST_CASE("step coefficients") {
  auto c = step_coeffs(3.0, 0.0);
  CHECK(std::abs(c.r) < 1e-15);
  CHECK(std::abs(c.t - 1.0) < 1e-15);
  c = step_coeffs(2.0, 1.5);
  CHECK(std::abs(c.r - 1.0 / 3) < 1e-15);
  CHECK(std::abs(c.t - 2 * std::sqrt(2.0) / 3) < 1e-15);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double V0 = 10 * u(rng) - 5;
    const double E = std::max(V0, 0.0) + 1e-3 + 10 * u(rng);
    const auto s = step_coeffs(E, V0);
    CHECK(std::fabs(std::norm(s.r) + std::norm(s.t) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(step_coeffs(1.0, 1.0), SingularError);
  CHECK_THROWS_AS(step_coeffs(-1.0, 0.0), DomainError);
}

TEST_CASE("PiecewisePotential") {
  const auto p = PiecewisePotential::parse("breakpoints: -1 0.5 2\nvalues: 0 1.25 -0.5 0\n");
  CHECK(p.interfaces() == 3);
  CHECK(p.region_of(-5) == 0);
  CHECK(p.region_of(-1) == 1);
  CHECK(p.region_of(1.0) == 2);
  CHECK(p.region_of(9) == 3);
  const auto q = PiecewisePotential::parse(p.str());
  CHECK(q.breakpoints() == p.breakpoints());
  CHECK(q.values() == p.values());
  CHECK(PiecewisePotential::parse("breakpoints:\nvalues: 3\n").interfaces() == 0);
  CHECK(PiecewisePotential::parse("breakpoints: 0, 1\nvalues: 0, 1, 0\n").interfaces() == 2);
  CHECK_THROWS_AS(PiecewisePotential({1.0, 1.0}, {0, 0, 0}), ValidationError);
  CHECK_THROWS_AS(PiecewisePotential({1.0}, {0}), ValidationError);
  CHECK_THROWS_AS(PiecewisePotential::parse("values: 0\n"), ValidationError);
  CHECK_THROWS_AS(PiecewisePotential::parse("breakpoints: x\nvalues: 0 0\n"), ValidationError);
}

TEST_CASE("transfer-matrix oracle") {
  const PiecewisePotential flat;
  CHECK(std::abs(transfer_matrix_green(flat, 2.0, 0, 0).value - cplx(0, -0.5)) < 1e-15);
  for (double x : {-1.0, 0.3, 4.0}) {
    const double k = 2.0;
    CHECK(std::abs(transfer_matrix_green(flat, 2.0, 0.5, x).value - std::exp(kI * k * std::fabs(x - 0.5)) / (kI * k)) <
          1e-14);
  }
  // Single step at the origin.
  for (double V0 : {-2.0, 0.4, 1.9}) {
    const PiecewisePotential step({0.0}, {0.0, V0});
    const auto s = transfer_matrix_scattering(step, 2.0);
    const auto c = step_coeffs(2.0, V0);
    CHECK(std::abs(s.r - c.r) <= 1e-12);
    CHECK(std::abs(s.t - c.t) <= 1e-12);
  }
  // Rectangular barrier.
  for (double E : {0.3, 0.9, 1.7, 5.0}) {
    const PiecewisePotential bar({0.0, 1.3}, {0.0, 1.0, 0.0});
    const auto s = transfer_matrix_scattering(bar, E);
    CHECK(std::norm(s.t) == doctest::Approx(barrier_transmission(E, 1.0, 1.3)).epsilon(1e-12));
    CHECK(std::norm(s.r) + std::norm(s.t) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("path decomposition, one interface") {
  const PiecewisePotential step({0.2}, {0.0, 0.8});
  for (double E : {0.5, 1.3, 4.0}) {
    for (auto [xa, xb] : {std::pair{-1.0, -0.3}, {-1.0, 1.5}, {0.9, -2.0}, {0.6, 3.0}}) {
      const auto o = transfer_matrix_green(step, E, xa, xb);
      for (int depth : {1, 2, 10}) {
        const auto r = path_decomposition_green(step, E, xa, xb, depth);
        CHECK(rel_err(r.value, o.value) <= 1e-10);
      }
    }
  }
  // Depth 0 keeps only the restricted term: the half-line Dirichlet Green's function.
  const double k = std::sqrt(2.0 * 1.3), b = 0.2, xa = -1.0, xb = -0.3;
  const cplx gd = (std::exp(kI * k * std::fabs(xa - xb)) - std::exp(kI * k * (2 * b - xa - xb))) / (kI * k);
  CHECK(std::abs(path_decomposition_green(step, 1.3, xa, xb, 0).value - gd) < 1e-14);
  CHECK(std::abs(path_decomposition_green(step, 1.3, xa, 1.0, 0).value) == 0.0);
}

TEST_CASE("path decomposition converges geometrically at the bounce rate") {
  // Well between two steps; the bounce factor is r1 r2 e^{2 i k2 W}.
  const double W = 1.1, E = 1.0;
  const PiecewisePotential pot({0.0, W}, {0.6, -0.5, 0.3});
  const cplx k0 = wavenumber(E, 0.6), k1 = wavenumber(E, -0.5), k2 = wavenumber(E, 0.3);
  const double rho = std::abs((k1 - k0) / (k1 + k0) * (k1 - k2) / (k1 + k2) * std::exp(2.0 * kI * k1 * W));
  for (auto [xa, xb] : {std::pair{-1.0, 2.0}, {0.4, 0.7}, {-0.5, -1.5}}) {
    const auto o = transfer_matrix_green(pot, E, xa, xb).value;
    std::vector<double> err;
    for (int d = 2; d <= 16; d += 2) err.push_back(rel_err(path_decomposition_green(pot, E, xa, xb, d).value, o));
    for (std::size_t m = 1; m < err.size(); ++m) {
      if (err[m] < 1e-13) break;
      CHECK(err[m] < err[m - 1]);
    }
    // Observed per-level contraction against the predicted bounce factor.
    const double observed = std::pow(err[4] / err[0], 1.0 / 8.0);
    CAPTURE(xa);
    CHECK(observed == doctest::Approx(std::sqrt(rho)).epsilon(0.15));
    CHECK(rel_err(path_decomposition_green(pot, E, xa, xb, 40).value, o) < 1e-9);
  }
}

TEST_CASE("path decomposition matches the oracle on random potentials") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    const auto pot = random_potential(rng, 1 + n % 2);
    double vmax = 0;
    for (double v : pot.values()) vmax = std::max(vmax, v);
    const double E = vmax + 0.3 + 2.0 * u(rng);
    const double lo = pot.breakpoints().front() - 1.5, hi = pot.breakpoints().back() + 1.5;
    const double xa = lo + (hi - lo) * u(rng), xb = lo + (hi - lo) * u(rng);
    const auto o = transfer_matrix_green(pot, E, xa, xb);
    const auto r = path_decomposition_green(pot, E, xa, xb, 40);
    CAPTURE(n);
    CHECK(rel_err(r.value, o.value) < 1e-6);
    // Reciprocity for both methods.
    CHECK(std::abs(transfer_matrix_green(pot, E, xb, xa).value - o.value) <= 1e-10 * std::abs(o.value));
    CHECK(std::abs(path_decomposition_green(pot, E, xb, xa, 40).value - r.value) <= 1e-10 * std::abs(r.value));
  }
}

TEST_CASE("bounce spectrum") {
  for (double L : {1.0, 2.5}) {
    const double emax = 10.5 * 10.5 * pi * pi / (2 * L * L);
    const auto e = bounce_spectrum(L, std::nullopt, 0.0, emax);
    REQUIRE(e.size() == 10);
    for (int n = 1; n <= 10; ++n) CHECK(std::fabs(e[n - 1] - n * n * pi * pi / (2 * L * L)) < 1e-8);
  }
  const auto a = bounce_spectrum(1.0, std::nullopt, 0.0, 200.0);
  const auto b = bounce_spectrum(2.0, std::nullopt, 0.0, 50.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(b[n] == doctest::Approx(a[n] / 4).epsilon(1e-10));

  for (auto [L, V0] : {std::pair{2.0, 10.0}, {1.0, 3.0}, {3.0, 0.4}, {0.5, 50.0}}) {
    const auto got = bounce_spectrum(L, V0, 0.0, V0);
    const auto want = well_roots(L, V0);
    REQUIRE(got.size() == want.size());
    for (std::size_t n = 0; n < got.size(); ++n) CHECK(std::fabs(got[n] - want[n]) < 1e-8);
  }
  CHECK(bounce_spectrum(1.0, std::nullopt, 0.0, 1.0).empty());
}
