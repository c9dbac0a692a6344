#pragma once

#include <functional>
#include <vector>

namespace renflow {

// Gauss-Hermite rule: sum_i w_i f(x_i) ~ integral e^{-x^2} f(x) dx.
// Nodes by Newton iteration on the Hermite recurrence; exact for
// polynomials of degree <= 2n-1.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
  explicit GaussHermite(int n);

  // E[f(X)] for X ~ N(mean, var)
  double gaussian_expectation(const std::function<double(double)>& f,
                              double mean, double var) const;
};

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

// Trapezoid rule over uniformly spaced samples with spacing h.
double trapezoid(const std::vector<double>& values, double h);

}  // namespace renflow
