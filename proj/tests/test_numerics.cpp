#include <cmath>

#include "doctest.h"
#include "stbc/error.hpp"
#include "stbc/numerics.hpp"
#include "test_util.hpp"

using namespace stbc;

TEST_SUITE("numerics") {
  TEST_CASE("check of j and the matrix-vector lifting identity") {
    const RMat cj = check(cplx{0, 1});
    CHECK(cj == RMat{{0, -1}, {1, 0}});

    const CMat a{{cplx{1, 1}}};
    const CVec x{cplx{2, 0}};
    const RVec lhs = check_mat(a) * std::span<const double>(tilde_vec(x));
    CHECK(lhs == RVec{2, 2});
    CHECK(tilde_vec(a * std::span<const cplx>(x)) == RVec{2, 2});
  }

  TEST_CASE("lifting identities on random data") {
    Rng64 rng(11);
    const CMat a = random_cmat(rng, 3, 4);
    const CMat b = random_cmat(rng, 4, 2);
    const CVec x = random_cvec(rng, 4);
    const RVec lhs = tilde_vec(a * std::span<const cplx>(x));
    const RVec rhs = check_mat(a) * std::span<const double>(tilde_vec(x));
    for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-13));
    CHECK(max_abs_diff(check_mat(a * b), check_mat(a) * check_mat(b)) < 1e-12);
  }

  TEST_CASE("bar_check maps y to tilde(-x y*)") {
    // The sign is fixed by the definition [[-Re, -Im], [-Im, Re]].
    const RVec v = bar_check(cplx{1, 1}) * std::span<const double>(tilde_vec(CVec{cplx{1, 0}}));
    CHECK(v == RVec{-1, -1});
    Rng64 rng(5);
    for (int k = 0; k < 20; ++k) {
      const cplx x = rng.c(), y = rng.c();
      const RVec lhs = bar_check(x) * std::span<const double>(tilde_vec(CVec{y}));
      const cplx want = -x * std::conj(y);
      CHECK(lhs[0] == doctest::Approx(want.real()).epsilon(1e-14));
      CHECK(lhs[1] == doctest::Approx(want.imag()).epsilon(1e-14));
    }
  }

  TEST_CASE("vec is column-major and unvec inverts it") {
    const CMat x{{1, 2}, {3, 4}};
    CHECK(vec(x) == CVec{1, 3, 2, 4});
    CHECK(unvec(vec(x), 2, 2) == x);
    CHECK(vec(CMat(3, 1)).size() == 3);
  }

  TEST_CASE("inner product conjugates the second argument") {
    const CVec a{cplx{0, 1}}, b{cplx{0, 1}};
    CHECK(inner(a, b) == cplx{1, 0});
    CHECK(norm(CVec{3, cplx{0, 4}}) == doctest::Approx(5.0));
  }

  TEST_CASE("Gram-Schmidt QR reconstructs F with orthonormal Q and upper R") {
    Rng64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const CMat f = random_cmat(rng, 8, 4);
      const QRFactors qr = gram_schmidt_qr(f);
      CHECK(max_abs_diff(qr.q * qr.r, f) < 1e-12);
      CHECK(max_abs_diff(adjoint(qr.q) * qr.q, CMat::identity(4)) < 1e-13);
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(qr.r(i, i).imag() == 0.0);
        CHECK(qr.r(i, i).real() > 0.0);
        for (std::size_t j = 0; j < i; ++j) CHECK(qr.r(i, j) == cplx{});
      }
    }
  }

  TEST_CASE("QR entries are inner products with the basis") {
    Rng64 rng(4);
    const CMat f = random_cmat(rng, 6, 3);
    const QRFactors qr = gram_schmidt_qr(f);
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i <= j; ++i)
        CHECK(std::abs(qr.r(i, j) - inner(f.col(j), qr.q.col(i))) < 1e-13);
  }

  TEST_CASE("QR of an identity is the identity") {
    const QRFactors qr = gram_schmidt_qr(CMat::identity(3));
    CHECK(max_abs_diff(qr.q, CMat::identity(3)) == 0.0);
    CHECK(max_abs_diff(qr.r, CMat::identity(3)) == 0.0);
  }

  TEST_CASE("rank-deficient columns raise RankDeficient") {
    CMat f{{1, 2}, {2, 4}, {cplx{0, 1}, cplx{0, 2}}};
    CHECK_THROWS_AS_KIND(gram_schmidt_qr(f), ErrorKind::RankDeficient);
  }

  TEST_CASE("Hermitian eigenvalues, elimination rank and determinant") {
    const CMat e{{2, cplx{0, 1}}, {cplx{0, -1}, 2}};
    const RVec ev = hermitian_eigenvalues(e);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(3.0));
    CHECK(determinant(e).real() == doctest::Approx(3.0));

    const CMat low{{1, 2, 3}, {2, 4, 6}, {0, 1, 1}};
    CHECK(elimination_rank(low, 1e-12) == 2);
    CHECK(std::abs(determinant(low)) < 1e-12);
    CHECK(elimination_rank(CMat(2, 2), 1e-12) == 0);
  }

  TEST_CASE("block_diag places copies on the diagonal") {
    const CMat h{{1, 2}};
    const CMat b = block_diag(h, 2);
    CHECK(b.rows() == 2);
    CHECK(b.cols() == 4);
    CHECK(b(1, 2) == cplx{1});
    CHECK(b(0, 2) == cplx{});
  }
}
