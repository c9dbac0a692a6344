#pragma once

#include <cstddef>
#include <vector>

namespace renflow {

// Small dense row-major matrix. Everything here is desk-scale (n <= a few
// hundred); plain O(n^3) algorithms throughout.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n);
};

Matrix matmul(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);
double max_abs(const Matrix& x);
Matrix subtract(const Matrix& x, const Matrix& y);

// Gaussian elimination with partial pivoting.
std::vector<double> solve(Matrix a, std::vector<double> b);
Matrix inverse(const Matrix& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(Matrix a);
// Full decomposition: returns eigenvalues; V's columns are the eigenvectors.
std::vector<double> symmetric_eigen(Matrix a, Matrix& v);

// Least squares min ||X c - y|| via normal equations (well-conditioned,
// low-degree fits only).
std::vector<double> least_squares(const Matrix& x, const std::vector<double>& y);

// |det| of an integer matrix, exact (Bareiss fraction-free elimination).
long long integer_det_abs(std::vector<std::vector<long long>> m);

}  // namespace renflow
