#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace congamma {

using cplx = std::complex<double>;

// Units: hbar = m = 1.

enum class TimeMode {
  /// (2 pi i T)^{-1/2} exp(i dx^2 / (2T))
  real,
  /// T is the imaginary time tau > 0: (2 pi tau)^{-1/2} exp(-dx^2 / (2 tau))
  imaginary,
};

cplx free_kernel(double x_a, double x_b, double T, TimeMode mode = TimeMode::real);

/// Half-line with a Dirichlet wall at b; both points on the same side.
struct HalfLine {
  double b = 0.0;
};

/// Interval (0, L) with Dirichlet walls.
struct Box {
  double L = 1.0;
};

using Geometry = std::variant<HalfLine, Box>;

struct KernelEval {
  cplx value;
  /// False when the last image pair is still above tolerance.
  bool converged = true;
  /// Magnitude of the outermost image pair included.
  double last_image = 0.0;
};

/// Method-of-images kernel. For the box, images |n| <= n_images are summed.
KernelEval dirichlet_kernel(const Geometry& geometry, double x_a, double x_b, double T, int n_images,
                            TimeMode mode = TimeMode::imaginary, double tol = 1e-15);

struct ScatterCoeffs {
  cplx r;
  /// Flux-normalised transmission amplitude.
  cplx t;
  cplx k_left;
  cplx k_right;
};

/// Wavenumber sqrt(2(E - V)) on the principal branch (Im k >= 0).
cplx wavenumber(double E, double V);

/// Single step from 0 (left) to V0 (right) at the origin.
ScatterCoeffs step_coeffs(double E, double V0);

/// Piecewise-constant potential: values[j] on (b_j, b_{j+1}) with b_0 = -inf,
/// b_{n+1} = +inf. A point exactly on b_j belongs to region j.
class PiecewisePotential {
 public:
  PiecewisePotential() : values_{0.0} {}
  PiecewisePotential(std::vector<double> breakpoints, std::vector<double> values);

  /// Two-line text form: `breakpoints: b1 ... bn` and `values: v0 ... vn`.
  static PiecewisePotential parse(std::string_view text);
  static PiecewisePotential load(const std::string& path);
  std::string str() const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t interfaces() const { return breakpoints_.size(); }
  std::size_t region_of(double x) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

struct GreenEval {
  enum class Method { oracle, recursion };

  cplx value;
  double energy = 0.0;
  double x_a = 0.0;
  double x_b = 0.0;
  Method method = Method::oracle;
  int depth = 0;
  /// Recursion only: remaining trapped amplitude fell below tolerance.
  bool converged = true;
  /// Recursion only: bound on the amplitude still bouncing after `depth`.
  double residual = 0.0;
};

/// Exact fixed-energy Green's function G = 2 psi_L(x<) psi_R(x>) / W.
/// Throws SingularError at a zero wavenumber or a vanishing Wronskian.
GreenEval transfer_matrix_green(const PiecewisePotential& potential, double E, double x_a, double x_b);

/// r and t for a wave incident from the left. r is referenced to the first
/// breakpoint; t is flux normalised and referenced to the first (incident)
/// and last (transmitted) breakpoints.
ScatterCoeffs transfer_matrix_scattering(const PiecewisePotential& potential, double E);

/// Region-restricted propagator plus boundary terms:
///   G(x_a, x_b) = delta_ij G^D_i(x_a, x_b) + sum_{s in boundary of i} K_s(x_a) G~(s, x_b)
/// where G~ is built from interface reflections and transmissions, keeping
/// `depth` scattering levels (0 keeps only the restricted term).
GreenEval path_decomposition_green(const PiecewisePotential& potential, double E, double x_a, double x_b, int depth,
                                   double tol = 1e-14);

/// Square well of width L (V = 0 inside, v0 outside; nullopt = infinite
/// walls). Returns energies in (emin, emax) where 1 - r1 r2 e^{2ikL} = 0,
/// refined by bisection to `tol`.
std::vector<double> bounce_spectrum(double L, std::optional<double> v0, double emin, double emax, double tol = 1e-12);

}  // namespace congamma
