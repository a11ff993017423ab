#include <cmath>
#include <numbers>

#include "congamma/error.hpp"
#include "congamma/propagator.hpp"

namespace congamma {

std::vector<double> bounce_spectrum(double L, std::optional<double> v0, double emin, double emax, double tol) {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("well width must be positive", "width");
  if (!std::isfinite(emin) || !std::isfinite(emax)) throw DomainError("energy range must be finite", "emin");
  if (!(emax > emin)) throw DomainError("emax must exceed emin", "emax");
  if (!(tol > 0.0)) throw DomainError("tol must be positive", "tol");
  if (v0 && !(*v0 > 0.0)) throw DomainError("well depth must be positive", "well_depth");

  // Bounce phase: arg(r1 r2 e^{2ikL}) unwrapped. Each wall reflects with
  // r = (k - i kappa)/(k + i kappa) = e^{-2i atan(kappa/k)}, or -1 for an
  // infinite wall (a constant phase that only relabels the roots).
  auto phase = [&](double E) {
    const double k = std::sqrt(2.0 * E);
    if (!v0) return 2.0 * k * L;
    const double kappa = std::sqrt(2.0 * (*v0 - E));
    return 2.0 * k * L - 4.0 * std::atan2(kappa, k);
  };

  double lo = std::max(emin, 0.0);
  double hi = emax;
  if (v0) hi = std::min(hi, *v0);
  std::vector<double> out;
  if (!(hi > lo)) return out;
  // Keep strictly inside where the phase is defined.
  const double eps = 1e-300;
  const double a = std::max(lo, eps);
  const double p_lo = phase(a);
  const double p_hi = phase(hi);
  // Infinite walls: r1 r2 = 1, so the condition is 2kL = 2 pi m with m >= 1.
  // Finite walls: the phase starts at -2 pi and the roots sit at 2 pi m, m >= 0.
  const double two_pi = 2.0 * std::numbers::pi;
  long m_first = static_cast<long>(std::floor(p_lo / two_pi)) + 1;
  if (!v0) m_first = std::max(m_first, 1L);
  else m_first = std::max(m_first, 0L);
  for (long m = m_first; two_pi * m <= p_hi; ++m) {
    const double target = two_pi * m;
    double l = a;
    double h = hi;
    if (phase(h) < target) break;
    for (int it = 0; it < 400 && h - l > tol * 0.25; ++it) {
      const double mid = 0.5 * (l + h);
      if (phase(mid) < target) {
        l = mid;
      } else {
        h = mid;
      }
    }
    const double root = 0.5 * (l + h);
    if (root > emin && root < emax) out.push_back(root);
  }
  return out;
}

}  // namespace congamma
