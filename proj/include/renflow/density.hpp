#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "renflow/fft.hpp"

namespace renflow {

// Uniform grid of n nodes x_j = x_min + j*h, h = (x_max - x_min)/(n-1),
// n a power of two. Spectral operations treat the window as one period
// of length n*h.
struct GridSpec {
  double x_min = -12.0;
  double x_max = 12.0;
  std::size_t n = 4096;

  double spacing() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double node(std::size_t j) const { return x_min + static_cast<double>(j) * spacing(); }
  // symmetric window [-half_width, half_width - h] with a node at 0
  static GridSpec centered(double half_width, std::size_t n);
};

// Single-site probability density sampled on a uniform grid. Values are
// non-negative and the trapezoid integral over [x_min, x_max] is 1.
struct GridDensity {
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double spacing() const { return (x_max - x_min) / static_cast<double>(size() - 1); }
  double node(std::size_t j) const { return x_min + static_cast<double>(j) * spacing(); }
  GridSpec grid() const { return {x_min, x_max, size()}; }

  double trapezoid() const;
  void normalize();            // divide by the trapezoid mass
  void validate() const;       // throws ConfigError on invariant violation

  double moment(int r) const;  // raw moment by trapezoid quadrature
  double mean() const { return moment(1); }
  double variance() const;
  double max_value() const;
  // largest density value within the outer `edge_nodes` nodes of either end,
  // relative to the peak; the coarsening step uses this to decide whether the
  // window can be zero-padded
  double boundary_fraction(std::size_t edge_nodes = 8) const;
};

// Samples of the characteristic function u^(xi) = integral e^{-i xi x} u(x) dx
// on the grid's natural frequencies xi_k = 2 pi k/(n h), k = -n/2 .. n/2-1,
// stored ascending. Carries the originating grid so the transform inverts
// exactly.
struct CharacteristicTable {
  std::vector<double> frequencies;
  std::vector<cplx> values;
  double x_min = 0.0;
  double spacing = 0.0;

  std::size_t size() const { return values.size(); }
  cplx at_zero() const { return values[size() / 2]; }
  void validate() const;
};

// Taylor coefficients of log u^(xi) in powers of xi (no factorials, no
// i-powers): log u^(xi) = sum_n c_n xi^n. Even orders are real. Odd orders
// vanish for symmetric densities; for asymmetric ones the stored number is
// the coefficient of i*xi^n. coefficient(n) is 1-based.
struct CumulantVector {
  int n_max = 0;
  std::vector<double> coefficients;

  double coefficient(int n) const { return coefficients.at(static_cast<std::size_t>(n - 1)); }
  double& coefficient(int n) { return coefficients.at(static_cast<std::size_t>(n - 1)); }
};

// Normalized density proportional to exp(-cell_volume * f(x)) on the grid.
GridDensity density_from_potential(const std::function<double(double)>& f,
                                   double cell_volume, const GridSpec& grid);

CharacteristicTable char_fn(const GridDensity& u);
// direct evaluation at an arbitrary frequency (O(n) trapezoid sum)
cplx char_fn_at(const GridDensity& u, double xi);
// exact inverse of char_fn back onto the originating grid
GridDensity inverse_char_fn(const CharacteristicTable& table);

// Quadrature-moment route: raw moments -> classical cumulants -> paper
// convention. Orders above 8 are rejected.
CumulantVector cumulants(const GridDensity& u, int n_max);
// Spectral cross-check: polynomial fit of log u^ near xi = 0.
CumulantVector cumulants_spectral(const GridDensity& u, int n_max);

// classical kappa_n = n! * i^n * c_n; real-valued bookkeeping of the same
std::vector<double> classical_from_paper(const CumulantVector& c);
CumulantVector paper_from_classical(const std::vector<double>& kappa);

// integral x^{2n} e^{-x^4} dx = (1/2) Gamma(n/2 + 1/4), the positive value
double moment_quartic(int n);

}  // namespace renflow
