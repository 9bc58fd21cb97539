#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace tik {

using Complex = std::complex<double>;

/// Small dense complex matrix, row-major. Used for representation
/// matrices, contraction forms, metrics and group elements; dimensions
/// in this library never exceed 4.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols);
  CMatrix(int rows, int cols, std::initializer_list<Complex> entries);

  static CMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Complex& at(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }

  const std::vector<Complex>& data() const { return a_; }
  std::vector<Complex>& data() { return a_; }

  CMatrix operator*(const CMatrix& rhs) const;
  CMatrix operator+(const CMatrix& rhs) const;
  CMatrix operator-() const;
  CMatrix scaled(Complex s) const;

  CMatrix transpose() const;
  CMatrix conjugate() const;
  CMatrix adjoint() const;  // conjugate transpose

  /// Determinant; defined for 1x1 and 2x2 matrices only.
  Complex det2() const;
  /// Inverse via adjugate; defined for 1x1 and 2x2 matrices only.
  CMatrix inverse2() const;

  bool operator==(const CMatrix& rhs) const = default;

  std::string to_string() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> a_;
};

/// max_ij |a_ij - b_ij|; matrices must have the same shape.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

}  // namespace tik
