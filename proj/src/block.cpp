#include "renflow/block.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "renflow/errors.hpp"
#include "renflow/linalg.hpp"

namespace renflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double trap_w(std::size_t j, std::size_t n) { return (j == 0 || j + 1 == n) ? 0.5 : 1.0; }

cplx ipow(cplx z, int m) {
  cplx r(1.0, 0.0);
  while (m > 0) {
    if (m & 1) r *= z;
    z *= z;
    m >>= 1;
  }
  return r;
}

int ilog2(int m) {
  int p = 0;
  while ((1 << p) < m) ++p;
  return p;
}

// Boundary behavior decides the pipeline. Interior-supported and
// compact-on-window densities admit exact zero-padding; residual boundary
// mass (power-law tails reaching the window edge) does not, and those keep
// the no-padding sample pipeline with the period contracted by exactly m.
bool has_heavy_boundary(const GridDensity& u) {
  double bf = u.boundary_fraction();
  return bf > 1e-10 && bf < 1e-3;
}

double pow2_round(double x) { return std::exp2(static_cast<double>(std::llround(std::log2(x)))); }

// Target window: about +-20 block-mean standard deviations.
constexpr double kWidthPerSigma = 40.0;

struct StepGrid {
  double gamma;    // P_in / P_out, a power of two
  double x_min_out;
  double h_out;
};

// Output x_min snapped to the h_out lattice anchored at `anchor`, centered on
// the density mean; snapping keeps the spectral step an integer circular
// shift.
double snap_x_min(double target, double anchor, double h_out) {
  return anchor + static_cast<double>(std::llround((target - anchor) / h_out)) * h_out;
}

}  // namespace

BlockScheme BlockScheme::from_dimension(int d, int k) {
  if (d < 0 || d > 4) throw ConfigError("BlockScheme: d must be in [0, 4]");
  return {d, 1 << (d + 1), k};
}

BlockScheme BlockScheme::from_factor(int m, int k) {
  if (m < 2 || m > 32 || (m & (m - 1)) != 0)
    throw ConfigError("BlockScheme: m must be a power of two in [2, 32]");
  return {ilog2(m) - 1, m, k};
}

void BlockScheme::validate() const {
  if (m != (1 << (d + 1))) throw ConfigError("BlockScheme: m != 2^{d+1}");
  if (d < 0) throw ConfigError("BlockScheme: d must be non-negative");
}

namespace {

// Core spectral step shared by coarsen and the stable constructor: invert a
// table of u^ values given on frequencies 2 pi j/(n h) onto the grid
// (x_min, h, n). Values are clamped against FP noise only; anything below
// -neg_tol * peak throws err_msg.
GridDensity invert_table(const std::vector<cplx>& table_shifted, double x_min, double h,
                         double neg_tol, const char* err_msg) {
  const std::size_t n = table_shifted.size();
  std::vector<cplx> b(n);
  const long half = static_cast<long>(n) / 2;
  for (long j = -half; j < half; ++j) {
    double zeta = kTwoPi * static_cast<double>(j) / (static_cast<double>(n) * h);
    std::size_t natural = static_cast<std::size_t>((j + static_cast<long>(n)) % static_cast<long>(n));
    cplx phase(std::cos(zeta * x_min), std::sin(zeta * x_min));
    b[natural] = table_shifted[static_cast<std::size_t>(j + half)] * phase;
  }
  ifft(b);
  GridDensity u;
  u.x_min = x_min;
  u.x_max = x_min + h * static_cast<double>(n - 1);
  u.values.resize(n);
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    u.values[j] = b[j].real() / (h * trap_w(j, n));
    peak = std::max(peak, u.values[j]);
  }
  double floor = -neg_tol * std::max(peak, 1.0);
  for (auto& v : u.values) {
    if (v < floor) throw NotInfinitelyDivisibleError(err_msg);
    if (v < 0.0) v = 0.0;
  }
  u.normalize();
  return u;
}

StepGrid plan_coarsen_grid(const GridDensity& u, int m, const StepOptions& opts,
                           bool heavy, int attempt) {
  const std::size_t n = u.size();
  const double h_f = u.spacing();
  const double period_f = h_f * static_cast<double>(n);

  double gamma;
  if (opts.out_grid) {
    const GridSpec& g = *opts.out_grid;
    if (g.n != n) throw ConfigError("coarsen: out_grid must keep the point count");
    double h_c = g.spacing();
    gamma = period_f / (h_c * static_cast<double>(n));
    double g2 = pow2_round(gamma);
    if (std::abs(gamma / g2 - 1.0) > 1e-9)
      throw ConfigError("coarsen: out_grid period must be a power-of-two rescale");
    gamma = g2;
    if (gamma > m + 0.5 || gamma < static_cast<double>(m) / 64.0)
      throw ConfigError("coarsen: out_grid rescale outside the reachable range");
    return {gamma, g.x_min, period_f / gamma / static_cast<double>(n)};
  }

  if (heavy) {
    gamma = static_cast<double>(m);
  } else {
    double sigma_c = std::sqrt(std::max(u.variance(), 0.0) / m);
    double target = std::max(kWidthPerSigma * sigma_c, 1e-9);
    gamma = pow2_round(period_f / target);
    gamma = std::clamp(gamma, 0.125, std::min(static_cast<double>(m), 4.0));
  }
  for (int a = 0; a < attempt; ++a) gamma *= 0.5;  // widen on retry
  if (gamma < static_cast<double>(m) / 64.0)
    throw GridOverflowError("coarsen: support exceeds the auto-rescale budget");

  double h_c = h_f / gamma;
  double target_x_min = u.mean() - 0.5 * static_cast<double>(n) * h_c;
  return {gamma, target_x_min, h_c};  // x_min snapped later against the pad anchor
}

}  // namespace

GridDensity coarsen(const GridDensity& u_fine, const BlockScheme& scheme,
                    const StepOptions& opts) {
  scheme.validate();
  const int m = scheme.m;
  const std::size_t n = u_fine.size();
  const double h_f = u_fine.spacing();
  const bool heavy = !opts.out_grid && has_heavy_boundary(u_fine);

  for (int attempt = 0;; ++attempt) {
    StepGrid plan = plan_coarsen_grid(u_fine, m, opts, heavy, attempt);
    const int s = static_cast<int>(std::lround(static_cast<double>(m) / plan.gamma));
    const std::size_t n_p = n * static_cast<std::size_t>(s);
    const std::size_t off = (n_p - n) / 2;
    const double x_min_p = u_fine.x_min - static_cast<double>(off) * h_f;

    std::vector<cplx> g(n_p, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j)
      g[off + j] = trap_w(j, n) * u_fine.values[j];
    fft(g);

    const double h_c = plan.h_out;
    const double x_min_c = opts.out_grid
                               ? plan.x_min_out
                               : snap_x_min(plan.x_min_out, x_min_p, h_c);
    if (opts.out_grid) {
      double l = (x_min_c - x_min_p) / h_c;
      if (std::abs(l - std::round(l)) > 1e-6)
        throw ConfigError("coarsen: out_grid nodes not on the reachable lattice");
    }

    const long half = static_cast<long>(n) / 2;
    std::vector<cplx> table(n);
    for (long j = -half; j < half; ++j) {
      double xi = kTwoPi * static_cast<double>(j) / (static_cast<double>(n_p) * h_f);
      std::size_t natural =
          static_cast<std::size_t>((j + static_cast<long>(n_p)) % static_cast<long>(n_p));
      cplx phase(std::cos(xi * x_min_p), -std::sin(xi * x_min_p));
      cplx uf = h_f * phase * g[natural];
      table[static_cast<std::size_t>(j + half)] = ipow(uf, m);
    }
    if (s > 1) table[0] = 0.0;  // unpaired bin; its partner lies outside the band

    GridDensity out = invert_table(table, x_min_c, h_c, 1e-10,
                                   "coarsen: inverse transform left the density cone");

    if (opts.out_grid) {
      if (out.boundary_fraction() > 1e-3)
        throw GridOverflowError("coarsen: density wraps around the requested grid");
      return out;
    }
    if (heavy) return out;  // contracted-period pipeline, boundary mass expected
    if (out.boundary_fraction() <= 1e-9) return out;
    if (attempt >= 3)
      throw GridOverflowError("coarsen: support exceeds the auto-rescale budget");
  }
}

GridDensity refine(const GridDensity& u_coarse, const BlockScheme& scheme,
                   const StepOptions& opts) {
  scheme.validate();
  const int m = scheme.m;
  const std::size_t n = u_coarse.size();
  const double h_c = u_coarse.spacing();
  const double period_c = h_c * static_cast<double>(n);
  const bool heavy = has_heavy_boundary(u_coarse);

  double gamma_r;
  if (opts.out_grid) {
    const GridSpec& g = *opts.out_grid;
    if (g.n != n) throw ConfigError("refine: out_grid must keep the point count");
    gamma_r = pow2_round(g.spacing() * static_cast<double>(n) / period_c);
    if (std::abs(g.spacing() * static_cast<double>(n) / period_c / gamma_r - 1.0) > 1e-9)
      throw ConfigError("refine: out_grid period must be a power-of-two rescale");
  } else if (heavy) {
    gamma_r = static_cast<double>(m);
  } else {
    double sigma_r = std::sqrt(std::max(u_coarse.variance(), 0.0) * m);
    double target = std::max(kWidthPerSigma * sigma_r, 1e-9);
    gamma_r = pow2_round(target / period_c);
  }
  gamma_r = std::clamp(gamma_r, 1.0, static_cast<double>(m));
  const int s_r = static_cast<int>(std::lround(static_cast<double>(m) / gamma_r));

  CharacteristicTable tc = char_fn(u_coarse);
  const long half = static_cast<long>(n) / 2;

  // m-th root along the branch continued from xi = 0
  std::vector<cplx> root(n, cplx(0.0, 0.0));
  double theta = 0.0, prev_arg = 0.0;
  const double inv_m = 1.0 / static_cast<double>(m);
  for (long j = 0; j < half; ++j) {
    long idx = j * s_r;
    if (idx >= half) break;
    cplx v = tc.values[static_cast<std::size_t>(idx + half)];
    double mag = std::abs(v);
    if (mag < 1e-13) {
      for (long j2 = j + 1; j2 * s_r < half; ++j2) {
        if (std::abs(tc.values[static_cast<std::size_t>(j2 * s_r + half)]) > 1e-6)
          throw BranchError("refine: characteristic function vanishes inside the band");
      }
      break;  // spectrum ended; remaining entries stay zero
    }
    double arg = std::arg(v);
    if (j == 0) {
      theta = arg;  // = 0 up to roundoff, u^(0) = 1
    } else {
      double delta = arg - prev_arg;
      while (delta > kPi) delta -= kTwoPi;
      while (delta <= -kPi) delta += kTwoPi;
      theta += delta;
    }
    prev_arg = arg;
    double rmag = std::pow(mag, inv_m);
    cplx rv(rmag * std::cos(theta * inv_m), rmag * std::sin(theta * inv_m));
    root[static_cast<std::size_t>(j + half)] = rv;
    if (j > 0) root[static_cast<std::size_t>(half - j)] = std::conj(rv);
  }
  // unpaired most-negative bin: magnitude-only root keeps the table hermitian
  if (s_r == 1) root[0] = std::pow(std::abs(tc.values[0]), inv_m);

  const double h_r = gamma_r * h_c;
  double x_min_r;
  if (opts.out_grid) {
    x_min_r = opts.out_grid->x_min;
  } else {
    double target = u_coarse.mean() - 0.5 * static_cast<double>(n) * h_r;
    x_min_r = snap_x_min(target, u_coarse.x_min, h_r);
  }

  GridDensity out = invert_table(root, x_min_r, h_r, 1e-8,
                                 "refine: fractional convolution root is not a density");
  return out;
}

GridDensity stable_density(const StableParams& p, const std::optional<GridSpec>& grid) {
  if (p.beta > 2.0)
    throw ConfigError("stable_density: u^ is not positive definite for beta > 2");
  if (p.beta < 1.0) throw ConfigError("stable_density: beta must lie in [1, 2]");
  if (!(p.alpha > 0.0)) throw ConfigError("stable_density: alpha must be positive");

  GridSpec g;
  if (grid) {
    g = *grid;
  } else if (p.beta > 1.999999) {
    double sigma = std::sqrt(2.0 * p.alpha);
    g = GridSpec::centered(std::max(12.0, 16.0 * sigma), 4096);
  } else {
    // window from the power tail c_beta * alpha * |x|^{-1-beta}; point count
    // from where exp(-alpha xi^beta) reaches 1e-45, so that an m-th root of
    // the band edge stays harmless
    double c_beta = std::tgamma(1.0 + p.beta) * std::sin(0.5 * kPi * p.beta) / kPi;
    double scale = std::pow(p.alpha, 1.0 / p.beta);
    double r = std::pow(2.0 * c_beta * p.alpha / 2.5e-7, 1.0 / (1.0 + p.beta));
    double w = std::max({r, 12.0 * scale, 6.0});
    double xi_star = std::pow(105.0 / p.alpha, 1.0 / p.beta);
    double n_req = 2.0 * w * xi_star / kPi;
    std::size_t n = 4096;
    while (static_cast<double>(n) < n_req && n < 131072) n <<= 1;
    g = GridSpec::centered(w, n);
  }

  const std::size_t n = g.n;
  const double h = g.spacing();
  const long half = static_cast<long>(n) / 2;
  std::vector<cplx> table(n);
  for (long j = -half; j < half; ++j) {
    double xi = kTwoPi * static_cast<double>(j) / (static_cast<double>(n) * h);
    table[static_cast<std::size_t>(j + half)] =
        std::exp(-p.alpha * std::pow(std::abs(xi), p.beta));
  }
  return invert_table(table, g.x_min, h, 1e-9,
                      "stable_density: inverse transform left the density cone");
}

double stable_flow_alpha(double alpha_fine, double beta, int m) {
  if (beta < 1.0 || beta > 2.0) throw ConfigError("stable_flow_alpha: beta must lie in [1, 2]");
  if (m < 2) throw ConfigError("stable_flow_alpha: m must be >= 2");
  if (!(alpha_fine > 0.0)) throw ConfigError("stable_flow_alpha: alpha must be positive");
  return std::pow(static_cast<double>(m), 1.0 - beta) * alpha_fine;
}

CumulantVector cumulant_flow_step(const CumulantVector& c, int m, FlowDirection dir) {
  if (m < 2) throw ConfigError("cumulant_flow_step: m must be >= 2");
  CumulantVector out = c;
  for (int order = 1; order <= c.n_max; ++order) {
    double f = std::pow(static_cast<double>(m), order - 1);
    out.coefficient(order) =
        dir == FlowDirection::refine ? c.coefficient(order) * f : c.coefficient(order) / f;
  }
  return out;
}

StableFit fit_stable(const GridDensity& u) {
  CharacteristicTable t = char_fn(u);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double xi = t.frequencies[i];
    if (xi < 0.0999999 || xi > 2.0000001) continue;
    double mag = std::abs(t.values[i]);
    if (mag <= 1e-12 || mag >= 1.0 - 1e-14) continue;
    double neg_log = -std::log(mag);
    if (neg_log <= 1e-12) continue;
    xs.push_back(std::log(xi));
    ys.push_back(std::log(neg_log));
  }
  if (xs.size() < 4)
    throw NumericalError("fit_stable: too few usable frequencies in [0.1, 2.0]");

  Matrix design(xs.size(), 2);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = xs[i];
  }
  auto coef = least_squares(design, ys);
  StableFit fit;
  fit.params.alpha = std::exp(coef[0]);
  fit.params.beta = coef[1];
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (coef[0] + coef[1] * xs[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(xs.size()));
  return fit;
}

FlowReport run_flow(const GridDensity& u0, const BlockScheme& scheme, int steps,
                    FlowDirection dir, const FlowOptions& opts) {
  if (steps < 1) throw ConfigError("run_flow: steps must be >= 1");
  scheme.validate();

  FlowReport report;
  report.m = scheme.m;
  report.direction = dir;

  GridDensity u = u0;
  int k = scheme.k;
  CumulantVector prev_c = cumulants(u, opts.n_max);

  FlowRecord seed;
  seed.k = k;
  seed.cumulants = prev_c;
  if (opts.fit_stable_family) seed.stable = fit_stable(u);
  if (opts.keep_densities) seed.density = u;
  report.records.push_back(std::move(seed));

  for (int step = 0; step < steps; ++step) {
    u = dir == FlowDirection::coarsen ? coarsen(u, scheme) : refine(u, scheme);
    k += dir == FlowDirection::coarsen ? -1 : +1;

    FlowRecord rec;
    rec.k = k;
    rec.cumulants = cumulants(u, opts.n_max);
    CumulantVector law = cumulant_flow_step(prev_c, scheme.m, dir);
    rec.flow_residual.resize(static_cast<std::size_t>(opts.n_max));
    for (int order = 1; order <= opts.n_max; ++order) {
      double denom = std::max(std::abs(law.coefficient(order)), 1e-300);
      rec.flow_residual[static_cast<std::size_t>(order - 1)] =
          std::abs(rec.cumulants.coefficient(order) - law.coefficient(order)) / denom;
    }
    if (opts.fit_stable_family) rec.stable = fit_stable(u);
    if (opts.keep_densities) rec.density = u;
    prev_c = rec.cumulants;
    report.records.push_back(std::move(rec));
  }
  return report;
}

GridDensity self_convolution(const GridDensity& u, int m) {
  GridDensity mean = coarsen(u, BlockScheme::from_factor(m));
  GridDensity sum;
  sum.x_min = mean.x_min * m;
  sum.x_max = mean.x_max * m;
  sum.values.resize(mean.size());
  for (std::size_t j = 0; j < mean.size(); ++j) sum.values[j] = mean.values[j] / m;
  return sum;
}

}  // namespace renflow
