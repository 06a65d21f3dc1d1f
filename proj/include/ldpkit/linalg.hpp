#pragma once

#include <cmath>
#include <vector>

namespace ldpkit {

using Vec = std::vector<double>;

// Dense row-major matrix. Sized for desk-scale work: state dimensions of a
// few, master-equation chains up to ~10^3.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

double dot(const Vec& a, const Vec& b);
double norm_inf(const Vec& v);
bool all_finite(const Vec& v);

Vec matvec(const Matrix& m, const Vec& x);
Vec matvec_transpose(const Matrix& m, const Vec& x);
// x^T m x
double quadratic_form(const Matrix& m, const Vec& x);

double max_asymmetry(const Matrix& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Vec symmetric_eigenvalues(Matrix a);

// Lower-triangular factor L with L L^T = a for a symmetric PSD matrix.
// Semidefinite directions get a zero column. Returns false if a pivot is
// negative beyond tolerance.
bool cholesky_psd(const Matrix& a, Matrix& lower, double tol = 1e-10);

// Strictly positive-definite Cholesky; false on any non-positive pivot.
bool cholesky_pd(const Matrix& a, Matrix& lower);

// Solve lower * y = b, then lower^T * x = y.
Vec cholesky_solve(const Matrix& lower, const Vec& b);

// Gaussian elimination with partial pivoting. Throws numerical_error when the
// system is singular.
Vec solve_linear(Matrix a, Vec b);

}  // namespace ldpkit
