#pragma once

/// @file numerics.hpp
/// @brief Small dense complex linear algebra: real/complex lifting operators,
/// column-major vectorization, and an unpivoted Gram-Schmidt QR.
///
/// Inner products follow <a, b> = a^T b^*, i.e. conjugation on the second
/// argument. Column order is never changed by any routine here.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace stbc {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

/// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init);

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_col(std::size_t j, std::span<const T> values) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMat = Matrix<cplx>;
using RMat = Matrix<double>;

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  a += b;
  return a;
}
template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
  a -= b;
  return a;
}
template <typename T>
Matrix<T> operator*(Matrix<T> a, T s) {
  a *= s;
  return a;
}
template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b);
template <typename T>
std::vector<T> operator*(const Matrix<T>& a, std::span<const T> x);

CMat adjoint(const CMat& a);
CMat conj(const CMat& a);
RMat transpose(const RMat& a);
CMat to_complex(const RMat& a);
double frobenius_norm2(const CMat& a);
/// Largest entrywise |a - b|; matrices must agree in shape.
double max_abs_diff(const CMat& a, const CMat& b);
double max_abs_diff(const RMat& a, const RMat& b);
bool all_finite(const CMat& a);
/// Block diagonal with `copies` copies of `h`.
CMat block_diag(const CMat& h, std::size_t copies);

// Real lifting operators.
std::array<double, 2> tilde(cplx x);
RVec tilde_vec(std::span<const cplx> x);
RMat check(cplx x);
RMat bar_check(cplx x);
RMat check_mat(const CMat& a);

/// Column-major stacking.
CVec vec(const CMat& x);
/// Inverse of vec for a rows x cols matrix.
CMat unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols);

/// <a, b> = sum_i a_i conj(b_i).
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> a);

struct QRFactors {
  CMat q;  ///< orthonormal columns e_i, same order as the input columns
  CMat r;  ///< upper triangular; r(i,j) = <f_j, e_i>, r(i,i) = ||d_i||
  double col_norm_floor = 1e-12;
};

/// Classical Gram-Schmidt with one re-orthogonalization pass (CGS2). Entries
/// of R are stored as computed; structural-zero classification is done by
/// the caller with a relative threshold. Throws RankDeficient(column) when
/// an orthogonalized column falls below `norm_floor`.
QRFactors gram_schmidt_qr(const CMat& f, double norm_floor = 1e-12);

/// Eigenvalues of a Hermitian matrix, ascending.
RVec hermitian_eigenvalues(const CMat& e);

/// Rank by Gaussian elimination with partial pivoting; a pivot counts as
/// nonzero when |pivot| > rel_tol * max|a_ij|.
int elimination_rank(const CMat& a, double rel_tol);

/// Determinant by LU with partial pivoting.
cplx determinant(const CMat& a);

}  // namespace stbc
