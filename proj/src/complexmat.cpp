#include "complexmat.hpp"

#include <cmath>
#include <sstream>

#include "error.hpp"

namespace tik {

CMatrix::CMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

CMatrix::CMatrix(int rows, int cols, std::initializer_list<Complex> entries)
    : CMatrix(rows, cols) {
  if (entries.size() != a_.size())
    fail(ErrorCategory::BadArgument, "matrix initializer size mismatch");
  std::size_t k = 0;
  for (const Complex& e : entries) a_[k++] = e;
}

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_)
    fail(ErrorCategory::BadArgument, "matrix product shape mismatch");
  CMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Complex v = at(i, k);
      if (v == Complex{}) continue;
      for (int j = 0; j < rhs.cols_; ++j) out.at(i, j) += v * rhs.at(k, j);
    }
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    fail(ErrorCategory::BadArgument, "matrix sum shape mismatch");
  CMatrix out = *this;
  for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] += rhs.a_[k];
  return out;
}

CMatrix CMatrix::operator-() const { return scaled(-1.0); }

CMatrix CMatrix::scaled(Complex s) const {
  CMatrix out = *this;
  for (Complex& v : out.a_) v *= s;
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

CMatrix CMatrix::conjugate() const {
  CMatrix out = *this;
  for (Complex& v : out.a_) v = std::conj(v);
  return out;
}

CMatrix CMatrix::adjoint() const { return transpose().conjugate(); }

Complex CMatrix::det2() const {
  if (!square()) fail(ErrorCategory::BadArgument, "determinant of non-square matrix");
  if (rows_ == 1) return at(0, 0);
  if (rows_ == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
  fail(ErrorCategory::BadArgument, "det2 supports 1x1 and 2x2 matrices only");
}

CMatrix CMatrix::inverse2() const {
  const Complex d = det2();
  if (std::abs(d) == 0.0) fail(ErrorCategory::BadArgument, "singular matrix");
  if (rows_ == 1) {
    CMatrix out(1, 1);
    out.at(0, 0) = 1.0 / d;
    return out;
  }
  CMatrix out(2, 2);
  out.at(0, 0) = at(1, 1) / d;
  out.at(0, 1) = -at(0, 1) / d;
  out.at(1, 0) = -at(1, 0) / d;
  out.at(1, 1) = at(0, 0) / d;
  return out;
}

std::string CMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < cols_; ++j) {
      const Complex& v = at(i, j);
      os << (j ? " " : "") << v.real();
      if (v.imag() != 0.0) os << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
    }
  }
  os << "]";
  return os.str();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCategory::BadArgument, "max_abs_diff shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

}  // namespace tik
