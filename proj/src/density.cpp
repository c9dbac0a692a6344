#include "renflow/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renflow/errors.hpp"
#include "renflow/linalg.hpp"

namespace renflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// trapezoid weight: 1/2 at the two boundary nodes
double trap_w(std::size_t j, std::size_t n) { return (j == 0 || j + 1 == n) ? 0.5 : 1.0; }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

GridSpec GridSpec::centered(double half_width, std::size_t n) {
  double h = 2.0 * half_width / static_cast<double>(n);
  return {-half_width, -half_width + h * static_cast<double>(n - 1), n};
}

double GridDensity::trapezoid() const {
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t j = 1; j + 1 < values.size(); ++j) s += values[j];
  return s * spacing();
}

void GridDensity::normalize() {
  double mass = trapezoid();
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw DegeneratePotentialError("normalize: density has zero or non-finite mass");
  for (auto& v : values) v /= mass;
}

void GridDensity::validate() const {
  if (values.size() < 4 || !is_power_of_two(values.size()))
    throw ConfigError("GridDensity: n_points must be a power of two >= 4");
  if (!(x_max > x_min)) throw ConfigError("GridDensity: x_max must exceed x_min");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("GridDensity: non-finite value");
    if (v < 0.0) throw ConfigError("GridDensity: negative value");
  }
  if (std::abs(trapezoid() - 1.0) > 1e-10)
    throw ConfigError("GridDensity: trapezoid mass differs from 1");
}

double GridDensity::moment(int r) const {
  const std::size_t n = size();
  const double h = spacing();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double x = node(j);
    s += trap_w(j, n) * std::pow(x, r) * values[j];
  }
  return s * h;
}

double GridDensity::variance() const {
  double m1 = moment(1);
  return moment(2) - m1 * m1;
}

double GridDensity::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double GridDensity::boundary_fraction(std::size_t edge_nodes) const {
  double peak = max_value();
  if (peak <= 0.0) return 0.0;
  double b = 0.0;
  std::size_t n = size();
  edge_nodes = std::min(edge_nodes, n / 4);
  for (std::size_t j = 0; j < edge_nodes; ++j)
    b = std::max({b, values[j], values[n - 1 - j]});
  return b / peak;
}

void CharacteristicTable::validate() const {
  const std::size_t n = size();
  if (n < 4 || !is_power_of_two(n)) throw ConfigError("CharacteristicTable: bad length");
  if (std::abs(at_zero() - cplx(1.0, 0.0)) > 1e-10)
    throw ConfigError("CharacteristicTable: u^(0) differs from 1");
  for (std::size_t t = 0; t < n; ++t) {
    if (std::abs(values[t]) > 1.0 + 1e-10)
      throw ConfigError("CharacteristicTable: |u^| exceeds 1");
  }
  // hermitian symmetry: index t pairs with n - t (k <-> -k); t = 0 has no partner
  for (std::size_t t = 1; t < n; ++t) {
    if (std::abs(values[t] - std::conj(values[n - t])) > 1e-9)
      throw ConfigError("CharacteristicTable: hermitian symmetry violated");
  }
}

GridDensity density_from_potential(const std::function<double(double)>& f,
                                   double cell_volume, const GridSpec& grid) {
  if (!(cell_volume > 0.0)) throw ConfigError("density_from_potential: cell_volume must be positive");
  if (!is_power_of_two(grid.n) || grid.n < 4)
    throw ConfigError("density_from_potential: n must be a power of two >= 4");

  const std::size_t n = grid.n;
  std::vector<double> fx(n);
  double fmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    fx[j] = f(grid.node(j));
    if (!std::isfinite(fx[j]))
      throw InvalidPotentialError("density_from_potential: potential is not finite on the grid");
    fmin = std::min(fmin, fx[j]);
  }
  GridDensity u;
  u.x_min = grid.x_min;
  u.x_max = grid.x_max;
  u.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) u.values[j] = std::exp(-cell_volume * (fx[j] - fmin));
  double mass = u.trapezoid();
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw DegeneratePotentialError("density_from_potential: exp(-V) integrates to zero");
  for (auto& v : u.values) v /= mass;
  return u;
}

CharacteristicTable char_fn(const GridDensity& u) {
  const std::size_t n = u.size();
  const double h = u.spacing();
  std::vector<cplx> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = trap_w(j, n) * u.values[j];
  fft(g);

  CharacteristicTable t;
  t.x_min = u.x_min;
  t.spacing = h;
  t.frequencies.resize(n);
  t.values.resize(n);
  const double dxi = kTwoPi / (static_cast<double>(n) * h);
  const long half = static_cast<long>(n) / 2;
  for (long k = -half; k < half; ++k) {
    double xi = dxi * static_cast<double>(k);
    std::size_t natural = static_cast<std::size_t>((k + static_cast<long>(n)) % static_cast<long>(n));
    std::size_t store = static_cast<std::size_t>(k + half);
    cplx phase(std::cos(xi * u.x_min), -std::sin(xi * u.x_min));
    t.frequencies[store] = xi;
    t.values[store] = h * phase * g[natural];
  }
  return t;
}

cplx char_fn_at(const GridDensity& u, double xi) {
  const std::size_t n = u.size();
  const double h = u.spacing();
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double x = u.node(j);
    double w = trap_w(j, n) * u.values[j];
    re += w * std::cos(xi * x);
    im -= w * std::sin(xi * x);
  }
  return cplx(re * h, im * h);
}

GridDensity inverse_char_fn(const CharacteristicTable& table) {
  const std::size_t n = table.size();
  const double h = table.spacing;
  std::vector<cplx> b(n);
  const long half = static_cast<long>(n) / 2;
  for (long k = -half; k < half; ++k) {
    std::size_t store = static_cast<std::size_t>(k + half);
    std::size_t natural = static_cast<std::size_t>((k + static_cast<long>(n)) % static_cast<long>(n));
    double xi = table.frequencies[store];
    cplx phase(std::cos(xi * table.x_min), std::sin(xi * table.x_min));
    b[natural] = table.values[store] * phase;
  }
  ifft(b);
  GridDensity u;
  u.x_min = table.x_min;
  u.x_max = table.x_min + h * static_cast<double>(n - 1);
  u.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) u.values[j] = b[j].real() / (h * trap_w(j, n));
  return u;
}

namespace {

std::vector<double> raw_moments(const GridDensity& u, int n_max) {
  std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 0.0);
  m[0] = 1.0;
  for (int r = 1; r <= n_max; ++r) m[static_cast<std::size_t>(r)] = u.moment(r);
  return m;
}

// kappa_n = M_n - sum_{j=1}^{n-1} C(n-1, j-1) kappa_j M_{n-j}
std::vector<double> classical_from_moments(const std::vector<double>& m) {
  const int n_max = static_cast<int>(m.size()) - 1;
  std::vector<double> kappa(m.size(), 0.0);
  for (int n = 1; n <= n_max; ++n) {
    double s = m[static_cast<std::size_t>(n)];
    for (int j = 1; j < n; ++j)
      s -= binomial(n - 1, j - 1) * kappa[static_cast<std::size_t>(j)] *
           m[static_cast<std::size_t>(n - j)];
    kappa[static_cast<std::size_t>(n)] = s;
  }
  return kappa;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// even n: c_n = (-1)^{n/2} kappa_n / n!
// odd n:  stored coefficient of i*xi^n, (-1)^{(n+1)/2} kappa_n / n!
double paper_coeff_from_classical(int n, double kappa_n) {
  int half = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  double sign = (half % 2 == 0) ? 1.0 : -1.0;
  return sign * kappa_n / factorial(n);
}

double classical_from_paper_coeff(int n, double c_n) {
  int half = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  double sign = (half % 2 == 0) ? 1.0 : -1.0;
  return sign * c_n * factorial(n);
}

constexpr int kMaxCumulantOrder = 8;

}  // namespace

CumulantVector cumulants(const GridDensity& u, int n_max) {
  if (n_max < 1) throw ConfigError("cumulants: n_max must be >= 1");
  if (n_max > kMaxCumulantOrder)
    throw OrderTooHighError("cumulants: orders above 8 are numerically unstable");
  auto kappa = classical_from_moments(raw_moments(u, n_max));
  CumulantVector c;
  c.n_max = n_max;
  c.coefficients.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    c.coefficient(n) = paper_coeff_from_classical(n, kappa[static_cast<std::size_t>(n)]);
  return c;
}

CumulantVector cumulants_spectral(const GridDensity& u, int n_max) {
  if (n_max < 1) throw ConfigError("cumulants_spectral: n_max must be >= 1");
  if (n_max > kMaxCumulantOrder)
    throw OrderTooHighError("cumulants_spectral: orders above 8 are numerically unstable");

  double sigma = std::sqrt(std::max(u.variance(), 1e-12));
  double xi_w = 0.9 / sigma;
  const int n_pts = 48;
  const int deg_even = std::min(n_max + 4, 12);  // guard terms past n_max
  const int deg_odd = std::min(n_max + 3, 11);

  std::vector<double> re_phi(n_pts), im_phi(n_pts), xs(n_pts);
  for (int i = 0; i < n_pts; ++i) {
    double xi = xi_w * static_cast<double>(i + 1) / n_pts;
    cplx v = char_fn_at(u, xi);
    cplx phi = std::log(v);
    xs[i] = xi / xi_w;  // scaled to (0, 1]
    re_phi[i] = phi.real();
    im_phi[i] = phi.imag();
  }

  // fit Re(log u^) on even powers, Im on odd powers of the scaled frequency
  auto fit = [&](const std::vector<double>& y, int parity, int deg) {
    std::vector<int> pows;
    for (int p = (parity == 0 ? 2 : 1); p <= deg; p += 2) pows.push_back(p);
    Matrix X(n_pts, pows.size());
    for (int i = 0; i < n_pts; ++i)
      for (std::size_t c = 0; c < pows.size(); ++c)
        X(static_cast<std::size_t>(i), c) = std::pow(xs[static_cast<std::size_t>(i)], pows[c]);
    auto coef = least_squares(X, y);
    std::vector<double> out(static_cast<std::size_t>(deg) + 1, 0.0);
    for (std::size_t c = 0; c < pows.size(); ++c)
      out[static_cast<std::size_t>(pows[c])] = coef[c] / std::pow(xi_w, pows[c]);
    return out;
  };

  auto even = fit(re_phi, 0, deg_even);
  auto odd = fit(im_phi, 1, deg_odd);

  CumulantVector c;
  c.n_max = n_max;
  c.coefficients.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    c.coefficient(n) = (n % 2 == 0) ? even[static_cast<std::size_t>(n)]
                                    : odd[static_cast<std::size_t>(n)];
  return c;
}

std::vector<double> classical_from_paper(const CumulantVector& c) {
  std::vector<double> kappa(static_cast<std::size_t>(c.n_max) + 1, 0.0);
  for (int n = 1; n <= c.n_max; ++n)
    kappa[static_cast<std::size_t>(n)] = classical_from_paper_coeff(n, c.coefficient(n));
  return kappa;
}

CumulantVector paper_from_classical(const std::vector<double>& kappa) {
  CumulantVector c;
  c.n_max = static_cast<int>(kappa.size()) - 1;
  c.coefficients.resize(static_cast<std::size_t>(c.n_max));
  for (int n = 1; n <= c.n_max; ++n)
    c.coefficient(n) = paper_coeff_from_classical(n, kappa[static_cast<std::size_t>(n)]);
  return c;
}

double moment_quartic(int n) {
  if (n < 0) throw ConfigError("moment_quartic: n must be >= 0");
  return 0.5 * std::tgamma(0.5 * n + 0.25);
}

}  // namespace renflow
