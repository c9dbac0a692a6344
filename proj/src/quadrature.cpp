#include "renflow/quadrature.hpp"

#include <cmath>

#include "renflow/errors.hpp"

namespace renflow {

namespace {

// Hermite H_n(x) (physicists') and derivative via the three-term recurrence.
void hermite_eval(int n, double x, double& h, double& dh) {
  double hm = 0.0, hc = 1.0;  // H_{-1}, H_0
  for (int k = 0; k < n; ++k) {
    double hn = 2.0 * x * hc - 2.0 * k * hm;
    hm = hc;
    hc = hn;
  }
  h = hc;
  dh = 2.0 * n * hm;
}

}  // namespace

GaussHermite::GaussHermite(int n) {
  if (n < 1) throw ConfigError("GaussHermite: order must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  const double pi = 3.14159265358979323846;
  // log of sqrt(pi) * 2^{n-1} * n! for the weight formula, kept in logs to
  // survive large n
  double log_wnum = 0.5 * std::log(pi) + (n - 1) * std::log(2.0);
  for (int k = 2; k <= n; ++k) log_wnum += std::log(static_cast<double>(k));

  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Initial guesses (Stroud-Secrest style), refined by Newton.
    double x;
    if (i == 0)
      x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      x = nodes[n - 1] - 1.14 * std::pow(static_cast<double>(n), 0.426) / nodes[n - 1];
    else if (i == 2)
      x = 1.86 * nodes[n - 1] - 0.86 * nodes[n - 2];
    else if (i == 3)
      x = 1.91 * nodes[n - i + 1 - 1] - 0.91 * nodes[n - i + 2 - 1];
    else
      x = 2.0 * nodes[n - i + 1 - 1] - nodes[n - i + 2 - 1];

    double h, dh;
    for (int it = 0; it < 100; ++it) {
      hermite_eval(n, x, h, dh);
      double dx = h / dh;
      x -= dx;
      if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    hermite_eval(n, x, h, dh);
    // w = sqrt(pi) 2^{n-1} n! / (n H_{n-1}(x))^2 ... use H'_n = 2n H_{n-1}
    double log_w = log_wnum - 2.0 * std::log(std::abs(dh) / 2.0) + std::log(2.0);
    double w = std::exp(log_w);
    nodes[n - 1 - i] = x;
    nodes[i] = -x;
    weights[n - 1 - i] = w;
    weights[i] = w;
  }
  if (n % 2 == 1) {
    nodes[n / 2] = 0.0;
    double h, dh;
    hermite_eval(n, 0.0, h, dh);
    weights[n / 2] = std::exp(log_wnum - 2.0 * std::log(std::abs(dh) / 2.0) + std::log(2.0));
  }
}

double GaussHermite::gaussian_expectation(const std::function<double(double)>& f,
                                          double mean, double var) const {
  const double inv_sqrt_pi = 0.564189583547756286948;
  double s = std::sqrt(2.0 * var);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    acc += weights[i] * f(mean + s * nodes[i]);
  return acc * inv_sqrt_pi;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b,
             double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(f, a, fa, b, fb, m, fm);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double trapezoid(const std::vector<double>& values, double h) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * h;
}

}  // namespace renflow
