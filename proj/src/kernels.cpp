#include <cmath>
#include <numbers>

#include "congamma/error.hpp"
#include "congamma/propagator.hpp"

namespace congamma {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite", name);
}

}  // namespace

cplx free_kernel(double x_a, double x_b, double T, TimeMode mode) {
  require_finite(x_a, "x_a");
  require_finite(x_b, "x_b");
  require_finite(T, "T");
  if (T == 0.0) throw DomainError("free kernel is singular at T = 0", "T");
  const double dx = x_b - x_a;
  if (mode == TimeMode::imaginary) {
    if (T < 0.0) throw DomainError("imaginary-time kernel requires tau > 0", "T");
    return cplx(std::exp(-dx * dx / (2.0 * T)) / std::sqrt(2.0 * std::numbers::pi * T), 0.0);
  }
  const cplx norm = 1.0 / std::sqrt(cplx(0.0, 2.0 * std::numbers::pi * T));
  return norm * std::exp(kI * (dx * dx / (2.0 * T)));
}

KernelEval dirichlet_kernel(const Geometry& geometry, double x_a, double x_b, double T, int n_images,
                            TimeMode mode, double tol) {
  require_finite(x_a, "x_a");
  require_finite(x_b, "x_b");
  if (n_images < 0) throw DomainError("n_images must be >= 0", "n_images");
  KernelEval out;
  if (const auto* h = std::get_if<HalfLine>(&geometry)) {
    if ((x_a - h->b) * (x_b - h->b) < 0.0) throw DomainError("points lie on opposite sides of the wall", "x_b");
    const cplx image = free_kernel(2.0 * h->b - x_a, x_b, T, mode);
    out.value = free_kernel(x_a, x_b, T, mode) - image;
    out.last_image = std::abs(image);
    return out;
  }
  const double L = std::get<Box>(geometry).L;
  if (!(L > 0.0)) throw DomainError("box length must be positive", "L");
  if (x_a < 0.0 || x_a > L) throw DomainError("x_a outside the box", "x_a");
  if (x_b < 0.0 || x_b > L) throw DomainError("x_b outside the box", "x_b");
  auto pair = [&](int n) {
    return free_kernel(0.0, x_b - x_a - 2.0 * n * L, T, mode) - free_kernel(0.0, x_b + x_a - 2.0 * n * L, T, mode);
  };
  // Outermost images first so the small terms are not lost.
  cplx sum = 0.0;
  for (int n = n_images; n >= 1; --n) sum += pair(n) + pair(-n);
  sum += pair(0);
  out.value = sum;
  out.last_image = n_images == 0 ? std::abs(pair(0)) : std::abs(pair(n_images)) + std::abs(pair(-n_images));
  out.converged = out.last_image <= tol * std::max(1.0, std::abs(sum));
  return out;
}

cplx wavenumber(double E, double V) {
  require_finite(E, "E");
  require_finite(V, "V");
  return std::sqrt(cplx(2.0 * (E - V), 0.0));
}

ScatterCoeffs step_coeffs(double E, double V0) {
  require_finite(E, "E");
  require_finite(V0, "V0");
  if (!(E > 0.0)) throw DomainError("step coefficients require E > 0", "E");
  if (E == V0) throw SingularError("E = V0 gives k = 0 on the right of the step", "E");
  ScatterCoeffs c;
  c.k_left = wavenumber(E, 0.0);
  c.k_right = wavenumber(E, V0);
  const cplx sum = c.k_left + c.k_right;
  c.r = (c.k_left - c.k_right) / sum;
  c.t = 2.0 * std::sqrt(c.k_left * c.k_right) / sum;
  return c;
}

}  // namespace congamma
