#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "congamma/error.hpp"
#include "congamma/propagator.hpp"

namespace congamma {

namespace {

constexpr cplx kI{0.0, 1.0};

// psi = A e^{ik(x-c)} + B e^{-ik(x-c)} in one region.
struct Wave {
  cplx A;
  cplx B;
};

struct Regions {
  std::vector<cplx> k;
  std::vector<double> ref;  // c_j: b_j for j >= 1, b_1 (or 0) for region 0
  std::vector<double> b;
};

Regions regions_for(const PiecewisePotential& pot, double E) {
  if (!std::isfinite(E)) throw DomainError("E must be finite", "E");
  Regions r;
  r.b = pot.breakpoints();
  for (double v : pot.values()) {
    const cplx k = wavenumber(E, v);
    if (k == cplx(0.0, 0.0)) throw SingularError("zero wavenumber (E equals a region potential)", "E");
    r.k.push_back(k);
  }
  const std::size_t n = r.b.size();
  r.ref.resize(n + 1);
  r.ref[0] = n == 0 ? 0.0 : r.b[0];
  for (std::size_t j = 1; j <= n; ++j) r.ref[j] = r.b[j - 1];
  return r;
}

cplx value_at(const Regions& g, const Wave& w, std::size_t j, double x) {
  const cplx e = std::exp(kI * g.k[j] * (x - g.ref[j]));
  return w.A * e + w.B / e;
}

cplx deriv_at(const Regions& g, const Wave& w, std::size_t j, double x) {
  const cplx e = std::exp(kI * g.k[j] * (x - g.ref[j]));
  return kI * g.k[j] * (w.A * e - w.B / e);
}

// psi_L: e^{-ik0(x-c0)} in region 0, matched rightwards.
std::vector<Wave> left_solution(const Regions& g) {
  const std::size_t n = g.b.size();
  std::vector<Wave> w(n + 1);
  w[0] = {0.0, 1.0};
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.b[j];
    const cplx u = value_at(g, w[j], j, x);
    const cplx v = deriv_at(g, w[j], j, x);
    const cplx kk = kI * g.k[j + 1];
    w[j + 1] = {0.5 * (u + v / kk), 0.5 * (u - v / kk)};  // reference point is b_j itself
  }
  return w;
}

// psi_R: e^{ik_n(x-c_n)} in region n, matched leftwards.
std::vector<Wave> right_solution(const Regions& g) {
  const std::size_t n = g.b.size();
  std::vector<Wave> w(n + 1);
  w[n] = {1.0, 0.0};
  for (std::size_t j = n; j >= 1; --j) {
    const double x = g.b[j - 1];
    const cplx u = value_at(g, w[j], j, x);
    const cplx v = deriv_at(g, w[j], j, x);
    const cplx kk = kI * g.k[j - 1];
    const cplx e = std::exp(kI * g.k[j - 1] * (x - g.ref[j - 1]));
    w[j - 1] = {0.5 * (u + v / kk) / e, 0.5 * (u - v / kk) * e};
  }
  return w;
}

double parse_number(const std::string& tok, const char* field) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ValidationError(std::string("bad number '") + tok + "' in " + field, field);
  }
  if (pos != tok.size() || !std::isfinite(v)) {
    throw ValidationError(std::string("bad number '") + tok + "' in " + field, field);
  }
  return v;
}

std::vector<double> parse_line(const std::string& line, const std::string& key) {
  const auto colon = line.find(':');
  if (colon == std::string::npos) throw ValidationError("expected '" + key + ":' line", "potential");
  std::string head = line.substr(0, colon);
  head.erase(std::remove_if(head.begin(), head.end(), ::isspace), head.end());
  if (head != key) throw ValidationError("expected '" + key + ":' but found '" + head + ":'", "potential");
  std::string body = line.substr(colon + 1);
  std::replace(body.begin(), body.end(), ',', ' ');  // commas and blanks both separate
  std::istringstream in(body);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number(tok, "potential"));
  return out;
}

}  // namespace

PiecewisePotential::PiecewisePotential(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw ValidationError("a potential with n breakpoints needs n+1 values", "potential");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("potential values must be finite", "potential");
  }
  for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
    if (!std::isfinite(breakpoints_[j])) throw ValidationError("breakpoints must be finite", "potential");
    if (j > 0 && !(breakpoints_[j] > breakpoints_[j - 1])) {
      throw ValidationError("breakpoints must be strictly increasing", "potential");
    }
  }
}

PiecewisePotential PiecewisePotential::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  if (lines.size() != 2) throw ValidationError("potential needs exactly two lines", "potential");
  return PiecewisePotential(parse_line(lines[0], "breakpoints"), parse_line(lines[1], "values"));
}

PiecewisePotential PiecewisePotential::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open potential file '" + path + "'", "potential");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string PiecewisePotential::str() const {
  std::ostringstream out;
  out.precision(17);
  out << "breakpoints:";
  for (double b : breakpoints_) out << ' ' << b;
  out << "\nvalues:";
  for (double v : values_) out << ' ' << v;
  out << '\n';
  return out.str();
}

std::size_t PiecewisePotential::region_of(double x) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                                  breakpoints_.begin());
}

GreenEval transfer_matrix_green(const PiecewisePotential& potential, double E, double x_a, double x_b) {
  if (!std::isfinite(x_a) || !std::isfinite(x_b)) throw DomainError("positions must be finite", "x_a");
  const Regions g = regions_for(potential, E);
  const auto wl = left_solution(g);
  const auto wr = right_solution(g);
  const double lo = std::min(x_a, x_b);
  const double hi = std::max(x_a, x_b);
  const std::size_t jl = potential.region_of(lo);
  const std::size_t jh = potential.region_of(hi);

  const cplx pl = value_at(g, wl[jl], jl, lo);
  const cplx dpl = deriv_at(g, wl[jl], jl, lo);
  const cplx pr_lo = value_at(g, wr[jl], jl, lo);
  const cplx dpr_lo = deriv_at(g, wr[jl], jl, lo);
  const cplx W = pl * dpr_lo - dpl * pr_lo;
  const double scale = std::abs(pl * dpr_lo) + std::abs(dpl * pr_lo);
  if (!(std::abs(W) > 1e-13 * scale)) throw SingularError("vanishing Wronskian (bound state or resonance)", "E");
  const cplx pr = value_at(g, wr[jh], jh, hi);

  GreenEval out;
  out.value = 2.0 * pl * pr / W;
  out.energy = E;
  out.x_a = x_a;
  out.x_b = x_b;
  out.method = GreenEval::Method::oracle;
  return out;
}

ScatterCoeffs transfer_matrix_scattering(const PiecewisePotential& potential, double E) {
  if (!(E > 0.0)) throw DomainError("scattering requires E > 0", "E");
  const Regions g = regions_for(potential, E);
  const auto wr = right_solution(g);
  const std::size_t n = g.b.size();
  ScatterCoeffs c;
  c.k_left = g.k[0];
  c.k_right = g.k[n];
  const cplx A0 = wr[0].A;
  if (std::abs(A0) == 0.0) throw SingularError("incident amplitude vanishes", "E");
  c.r = wr[0].B / A0;
  c.t = std::sqrt(c.k_right / c.k_left) / A0;
  return c;
}

GreenEval path_decomposition_green(const PiecewisePotential& potential, double E, double x_a, double x_b, int depth,
                                   double tol) {
  if (depth < 0) throw DomainError("depth must be >= 0", "depth");
  if (!std::isfinite(x_a) || !std::isfinite(x_b)) throw DomainError("positions must be finite", "x_a");
  const Regions g = regions_for(potential, E);
  const auto& b = g.b;
  const std::size_t n = b.size();
  const std::size_t i = potential.region_of(x_a);
  const std::size_t j = potential.region_of(x_b);

  GreenEval out;
  out.energy = E;
  out.x_a = x_a;
  out.x_b = x_b;
  out.method = GreenEval::Method::recursion;
  out.depth = depth;

  const cplx k = g.k[i];
  // Restricted (Dirichlet) propagator of region i.
  cplx restricted = 0.0;
  if (i == j) {
    const double dx = std::abs(x_a - x_b);
    if (n == 0) {
      restricted = std::exp(kI * k * dx) / (kI * k);
    } else if (i == 0) {
      restricted = (std::exp(kI * k * dx) - std::exp(kI * k * (2.0 * b[0] - x_a - x_b))) / (kI * k);
    } else if (i == n) {
      restricted = (std::exp(kI * k * dx) - std::exp(kI * k * (x_a + x_b - 2.0 * b[n - 1]))) / (kI * k);
    } else {
      const double alpha = b[i - 1];
      const double beta = b[i];
      const cplx s = std::sin(k * (beta - alpha));
      if (std::abs(s) < 1e-14) throw SingularError("energy is a Dirichlet eigenvalue of the region", "E");
      const double lo = std::min(x_a, x_b);
      const double hi = std::max(x_a, x_b);
      restricted = -2.0 * std::sin(k * (lo - alpha)) * std::sin(k * (beta - hi)) / (k * s);
    }
  }
  out.value = restricted;
  if (depth == 0 || n == 0) return out;

  // Boundary points of region i and the point-to-boundary kernels (unit value
  // at their own exit point, zero at the other).
  std::vector<std::pair<std::size_t, cplx>> exits;  // (interface index m, K(x_a))
  if (i == 0) {
    exits.emplace_back(1, std::exp(kI * k * (b[0] - x_a)));
  } else if (i == n) {
    exits.emplace_back(n, std::exp(kI * k * (x_a - b[n - 1])));
  } else {
    const double alpha = b[i - 1];
    const double beta = b[i];
    const cplx s = std::sin(k * (beta - alpha));
    if (std::abs(s) < 1e-14) throw SingularError("energy is a Dirichlet eigenvalue of the region", "E");
    exits.emplace_back(i, std::sin(k * (beta - x_a)) / s);
    exits.emplace_back(i + 1, std::sin(k * (x_a - alpha)) / s);
  }

  auto phase = [&](std::size_t r) { return std::exp(kI * g.k[r] * (b[r] - b[r - 1])); };

  double residual_total = 0.0;
  for (const auto& [m, kernel] : exits) {
    // Waves launched by a unit source sitting on interface m (between regions
    // m-1 and m). right[r]: moving right in region r, referenced at b_r.
    // left[r]: moving left in region r, referenced at b_{r+1}.
    std::vector<cplx> right(n + 1, 0.0), left(n + 1, 0.0);
    const cplx g0 = 2.0 / (kI * (g.k[m - 1] + g.k[m]));
    right[m] = g0;
    left[m - 1] = g0;
    cplx boundary_value = 0.0;
    for (int level = 0; level < depth; ++level) {
      if (j >= 1) boundary_value += right[j] * std::exp(kI * g.k[j] * (x_b - b[j - 1]));
      if (j < n) boundary_value += left[j] * std::exp(kI * g.k[j] * (b[j] - x_b));
      std::vector<cplx> nr(n + 1, 0.0), nl(n + 1, 0.0);
      for (std::size_t r = 1; r < n; ++r) {
        const cplx e = phase(r);
        const cplx kr = g.k[r];
        if (right[r] != 0.0) {
          // Hits interface r+1 from the left.
          const cplx a = right[r] * e;
          const cplx kn = g.k[r + 1];
          nl[r] += a * (kr - kn) / (kr + kn);
          nr[r + 1] += a * 2.0 * kr / (kr + kn);
        }
        if (left[r] != 0.0) {
          // Hits interface r from the right.
          const cplx a = left[r] * e;
          const cplx kn = g.k[r - 1];
          nr[r] += a * (kr - kn) / (kr + kn);
          nl[r - 1] += a * 2.0 * kr / (kr + kn);
        }
      }
      right.swap(nr);
      left.swap(nl);
    }
    double trapped = 0.0;
    for (std::size_t r = 1; r < n; ++r) trapped += std::abs(right[r]) + std::abs(left[r]);
    // Waves already escaping to the outer regions are not yet counted either.
    trapped += std::abs(right[n]) + std::abs(left[0]);
    residual_total += std::abs(kernel) * trapped;
    out.value += kernel * boundary_value;
  }
  out.residual = residual_total;
  out.converged = residual_total <= tol * std::max(1e-300, std::abs(out.value));
  return out;
}

}  // namespace congamma
