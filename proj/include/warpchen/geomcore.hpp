#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "warpchen/errors.hpp"

namespace warpchen {

// Small dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix diagonal(std::span<const double> d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::vector<double> col(int j) const;
  void set_col(int j, std::span<const double> v);

  Matrix transpose() const;
  double max_abs() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Columns of `vectors` are orthonormal with respect to `metric`.
struct Frame {
  Matrix vectors;
  Matrix metric;

  int size() const { return vectors.cols(); }
  // max |V^T G V - I|
  double orthonormality_defect() const;
};

// Modified Gram-Schmidt with one reorthogonalization pass under an SPD metric.
// The k-th output lies in the span of the first k inputs.
Frame gram_schmidt(const Matrix& vectors, const Matrix& metric);

// Same procedure with an arbitrary inner product; used where the ambient
// bilinear form is indefinite but positive on the vectors involved.
using InnerProduct = std::function<double(std::span<const double>, std::span<const double>)>;
Matrix orthonormalize(const Matrix& vectors, const InnerProduct& inner);

struct SymEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column i belongs to values[i]
};

// Cyclic Jacobi rotations.
SymEigen sym_eigen(const Matrix& m);

// Inverse of a symmetric positive definite matrix via Cholesky; throws
// DegenerateMetric when a pivot is not positive.
Matrix inverse_spd(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace warpchen
