#include "stbc/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "stbc/error.hpp"

namespace stbc {

template <typename T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : init) {
    if (row.size() != cols_)
      throw Error(ErrorKind::DimensionMismatch, "ragged matrix initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

template <typename T>
Matrix<T>& Matrix<T>::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorKind::DimensionMismatch, "matrix sum shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

template <typename T>
Matrix<T>& Matrix<T>::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorKind::DimensionMismatch, "matrix difference shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::DimensionMismatch,
                "matrix product " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <typename T>
std::vector<T> operator*(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size())
    throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  std::vector<T> y(a.rows(), T{});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

template class Matrix<cplx>;
template class Matrix<double>;
template CMat operator*(const CMat&, const CMat&);
template RMat operator*(const RMat&, const RMat&);
template CVec operator*(const CMat&, std::span<const cplx>);
template RVec operator*(const RMat&, std::span<const double>);

CMat adjoint(const CMat& a) {
  CMat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

CMat conj(const CMat& a) {
  CMat c = a;
  for (auto& v : c.data()) v = std::conj(v);
  return c;
}

RMat transpose(const RMat& a) {
  RMat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

CMat to_complex(const RMat& a) {
  CMat c(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.data().size(); ++k) c.data()[k] = a.data()[k];
  return c;
}

double frobenius_norm2(const CMat& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(v);
  return s;
}

double max_abs_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "max_abs_diff shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

double max_abs_diff(const RMat& a, const RMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "max_abs_diff shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

bool all_finite(const CMat& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

CMat block_diag(const CMat& h, std::size_t copies) {
  CMat d(h.rows() * copies, h.cols() * copies);
  for (std::size_t b = 0; b < copies; ++b)
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j)
        d(b * h.rows() + i, b * h.cols() + j) = h(i, j);
  return d;
}

std::array<double, 2> tilde(cplx x) { return {x.real(), x.imag()}; }

RVec tilde_vec(std::span<const cplx> x) {
  RVec out;
  out.reserve(2 * x.size());
  for (const auto& v : x) {
    out.push_back(v.real());
    out.push_back(v.imag());
  }
  return out;
}

RMat check(cplx x) { return RMat{{x.real(), -x.imag()}, {x.imag(), x.real()}}; }

RMat bar_check(cplx x) {
  return RMat{{-x.real(), -x.imag()}, {-x.imag(), x.real()}};
}

RMat check_mat(const CMat& a) {
  RMat r(2 * a.rows(), 2 * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx v = a(i, j);
      r(2 * i, 2 * j) = v.real();
      r(2 * i, 2 * j + 1) = -v.imag();
      r(2 * i + 1, 2 * j) = v.imag();
      r(2 * i + 1, 2 * j + 1) = v.real();
    }
  return r;
}

CVec vec(const CMat& x) {
  CVec v;
  v.reserve(x.rows() * x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j)
    for (std::size_t i = 0; i < x.rows(); ++i) v.push_back(x(i, j));
  return v;
}

CMat unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols)
    throw Error(ErrorKind::DimensionMismatch, "unvec length");
  CMat x(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) x(i, j) = v[j * rows + i];
  return x;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "inner product length");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

double norm(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

QRFactors gram_schmidt_qr(const CMat& f, double norm_floor) {
  const std::size_t n = f.rows();
  const std::size_t k = f.cols();
  QRFactors out{CMat(n, k), CMat(k, k), norm_floor};
  std::vector<CVec> e;
  e.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    CVec d = f.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const cplx c = inner(d, e[i]);
        for (std::size_t t = 0; t < n; ++t) d[t] -= c * e[i][t];
        out.r(i, j) += c;
      }
    }
    const double dn = norm(d);
    if (!(dn >= norm_floor))
      throw Error(ErrorKind::RankDeficient,
                  "Gram-Schmidt: column " + std::to_string(j) +
                      " is linearly dependent on its predecessors");
    out.r(j, j) = dn;
    for (auto& v : d) v /= dn;
    out.q.set_col(j, d);
    e.push_back(std::move(d));
  }
  return out;
}

RVec hermitian_eigenvalues(const CMat& e) {
  if (e.rows() != e.cols())
    throw Error(ErrorKind::DimensionMismatch, "eigenvalues of non-square matrix");
  const auto n = static_cast<Eigen::Index>(e.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = e(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return RVec(ev.data(), ev.data() + ev.size());
}

int elimination_rank(const CMat& a, double rel_tol) {
  CMat m = a;
  double scale = 0.0;
  for (const auto& v : m.data()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  const double tol = rel_tol * scale;
  const std::size_t rows = m.rows(), cols = m.cols();
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t piv = row;
    double best = std::abs(m(row, c));
    for (std::size_t i = row + 1; i < rows; ++i)
      if (std::abs(m(i, c)) > best) {
        best = std::abs(m(i, c));
        piv = i;
      }
    if (best <= tol) continue;
    if (piv != row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(row, j));
    for (std::size_t i = row + 1; i < rows; ++i) {
      const cplx factor = m(i, c) / m(row, c);
      for (std::size_t j = c; j < cols; ++j) m(i, j) -= factor * m(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

cplx determinant(const CMat& a) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  CMat m = a;
  const std::size_t n = m.rows();
  cplx det{1.0, 0.0};
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(m(i, c)) > std::abs(m(piv, c))) piv = i;
    if (m(piv, c) == cplx{}) return cplx{};
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      const cplx factor = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
    }
  }
  return det;
}

}  // namespace stbc
