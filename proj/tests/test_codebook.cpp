#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stbc/codebook.hpp"
#include "stbc/error.hpp"
#include "test_util.hpp"

using namespace stbc;

namespace {

const cplx J{0, 1};
const double R2 = 1.0 / std::numbers::sqrt2;

CVec random_symbols(Rng64& rng, int kappa) { return random_cvec(rng, static_cast<std::size_t>(kappa)); }

CMat alamouti_block(cplx s1, cplx s2, cplx a, cplx b) {
  return CMat{{a * s1, -b * std::conj(s2)}, {a * s2, b * std::conj(s1)}};
}

// Closed-form Golden codeword.
CMat golden_direct(std::span<const cplx> s) {
  const double r5 = std::sqrt(5.0);
  const double th = (1 + r5) / 2, thb = (1 - r5) / 2;
  const cplx al = 1.0 + J - J * th, alb = 1.0 + J - J * thb;
  return CMat{{al * (s[0] + s[1] * th), al * (s[2] + s[3] * th)},
              {J * alb * (s[2] + s[3] * thb), alb * (s[0] + s[1] * thb)}} *
         cplx{1 / r5};
}

CMat family1_direct(std::span<const cplx> s, cplx p1, cplx p2) {
  const cplx z1 = p1 * s[2] - std::conj(p2) * s[3];
  const cplx z2 = p2 * s[2] + std::conj(p1) * s[3];
  CMat x = alamouti_block(s[0], s[1], R2, R2);
  CMat y = alamouti_block(z1, z2, R2, R2);
  y(1, 0) = -y(1, 0);
  y(1, 1) = -y(1, 1);
  x += y;
  return x;
}

bool proportional_to_identity(const RMat& g, double tol) {
  const RMat gtg = transpose(g) * g;
  const double d = gtg(0, 0);
  for (std::size_t i = 0; i < gtg.rows(); ++i)
    for (std::size_t j = 0; j < gtg.cols(); ++j)
      if (std::abs(gtg(i, j) - (i == j ? d : 0.0)) > tol * d) return false;
  return true;
}

}  // namespace

TEST_SUITE("codebook") {
  TEST_CASE("QAM average energies and point order") {
    CHECK(Constellation::qam(4).e_s == doctest::Approx(2.0));
    CHECK(Constellation::qam(16).e_s == doctest::Approx(10.0));
    CHECK(Constellation::qam(64).e_s == doctest::Approx(42.0));
    const auto q = Constellation::qam(16);
    CHECK(q.points.size() == 16);
    CHECK(q.points.front() == cplx{-3, -3});
    CHECK(q.points[1] == cplx{-3, -1});
    CHECK(q.points.back() == cplx{3, 3});
    CHECK_THROWS_AS_KIND(Constellation::qam(8), ErrorKind::OutOfRange);
  }

  TEST_CASE("encode agrees with the real generator for every catalog code") {
    Rng64 rng(21);
    for (const auto& name : catalog_names()) {
      CAPTURE(name);
      const LinearCode code = make_code(name);
      for (int t = 0; t < 5; ++t) {
        const CVec s = random_symbols(rng, code.kappa());
        const RVec lhs = tilde_vec(vec(encode(code, s)));
        const RVec rhs = code.real_gen() * std::span<const double>(tilde_vec(s));
        for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12);
      }
    }
  }

  TEST_CASE("column-conjugated generator reproduces vec(X')") {
    Rng64 rng(22);
    for (const auto& name : catalog_names()) {
      CAPTURE(name);
      const LinearCode code = make_code(name);
      REQUIRE(code.conj_domain_gen().has_value());
      const CVec s = random_symbols(rng, code.kappa());
      CMat x = encode(code, s);
      for (std::size_t c = 0; c < x.cols(); ++c)
        if ((*code.conj_cols())[c])
          for (std::size_t r = 0; r < x.rows(); ++r) x(r, c) = std::conj(x(r, c));
      const CVec got = *code.conj_domain_gen() * std::span<const cplx>(s);
      const CVec want = vec(x);
      for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
    }
  }

  TEST_CASE("complex generator exists only for complex-linear codes") {
    CHECK(make_golden().complex_gen().has_value());
    CHECK_FALSE(make_code("alamouti").complex_gen().has_value());
    const auto pattern = *make_code("alamouti").conj_cols();
    CHECK(pattern == std::vector<bool>{false, true});
  }

  TEST_CASE("Golden, Alamouti and Family I match their closed forms") {
    Rng64 rng(23);
    const auto f1 = catalog_family1_params();
    for (int t = 0; t < 10; ++t) {
      const CVec s = random_symbols(rng, 4);
      CHECK(max_abs_diff(encode(make_golden(), s), golden_direct(s)) < 1e-12);
      CHECK(max_abs_diff(encode(make_code("family1"), s), family1_direct(s, f1.phi1, f1.phi2)) <
            1e-12);
      const CVec s2{s[0], s[1]};
      CHECK(max_abs_diff(encode(make_alamouti(R2, R2 * J), s2), alamouti_block(s[0], s[1], R2, R2 * J)) <
            1e-12);
    }
  }

  TEST_CASE("Alamouti normalization is enforced unless waived") {
    CHECK_THROWS_AS_KIND(make_alamouti(1.0, 1.0), ErrorKind::NormalizationViolated);
    CHECK_THROWS_AS_KIND(make_alamouti(R2, 0.5), ErrorKind::NormalizationViolated);
    CHECK_NOTHROW(make_alamouti(1.0, 1.0, true));
    CHECK_NOTHROW(make_family2(R2, R2, R2, R2));
    CHECK_THROWS_AS_KIND(make_family2(R2, R2, 1.0, R2), ErrorKind::NormalizationViolated);
  }

  TEST_CASE("Family I requires a unitary twist") {
    CHECK_THROWS_AS_KIND(make_family1(1.0, 0.5), ErrorKind::UnitarityViolated);
    CHECK_NOTHROW(make_family1(std::polar(std::cos(0.3), 1.0), std::polar(std::sin(0.3), 2.0)));
  }

  TEST_CASE("cubic shaping: G^T G is a multiple of I for Family I and the 4x2 code") {
    CHECK(proportional_to_identity(make_code("family1").real_gen(), 1e-12));
    CHECK(proportional_to_identity(make_code("new4x2-4qam").real_gen(), 1e-12));
    CHECK(proportional_to_identity(make_code("new4x2-16qam").real_gen(), 1e-12));
    CHECK(proportional_to_identity(make_golden().real_gen(), 1e-12));
    const LinearCode lit = make_family1(catalog_family1_params().phi1, catalog_family1_params().phi2,
                                        AlamoutiScaling::literal);
    CHECK(lit.name() == "family1-literal");
    // Normalized Family I has unit-norm generator columns: G^T G = I.
    const RMat gtg = transpose(make_code("family1").real_gen()) * make_code("family1").real_gen();
    CHECK(max_abs_diff(gtg, RMat::identity(8)) < 1e-12);
  }

  TEST_CASE("Family II with distinct pair phases is not cubic shaped") {
    CHECK_FALSE(proportional_to_identity(make_code("family2").real_gen(), 1e-6));
    CHECK_FALSE(proportional_to_identity(make_family2(R2, R2, std::polar(R2, 0.7), std::polar(R2, 2.1)).real_gen(), 1e-6));
  }

  TEST_CASE("energy normalization gives unit mean squared generator columns") {
    for (const auto& name : catalog_names()) {
      const RMat g = make_code(name).energy_normalized().real_gen();
      double total = 0;
      for (double v : g.data()) total += v * v;
      CHECK(total / static_cast<double>(g.cols()) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("U = D P for N = 7 matches the printed 4-QAM matrix") {
    const CMat printed{
        {{0.31, 0.39}, {0.31, 0.39}, {0.31, 0.39}, {0.31, 0.39}},
        {{-0.11, 0.49}, {-0.49, -0.11}, {0.11, -0.49}, {0.49, 0.11}},
        {{-0.11, -0.49}, {0.11, 0.49}, {-0.11, -0.49}, {0.11, 0.49}},
        {{0.31, -0.39}, {-0.39, -0.31}, {-0.31, 0.39}, {0.39, 0.31}},
    };
    const CMat u = build_u_dft(7, {1, 2, 5, 6});
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(std::abs(u(i, j).real() - printed(i, j).real()) <= 0.005 + 1e-12);
        CHECK(std::abs(u(i, j).imag() - printed(i, j).imag()) <= 0.005 + 1e-12);
      }
    CHECK(unitarity_defect(u) < 1e-14);
  }

  TEST_CASE("build_u_dft rejects out-of-range parameters and n = N aliases n = 0") {
    CHECK_THROWS_AS_KIND(build_u_dft(0, {0, 0, 0, 0}), ErrorKind::OutOfRange);
    CHECK_THROWS_AS_KIND(build_u_dft(7, {0, 8, 0, 0}), ErrorKind::OutOfRange);
    CHECK(max_abs_diff(build_u_dft(7, {7, 1, 2, 3}), build_u_dft(7, {0, 1, 2, 3})) < 1e-15);
  }

  TEST_CASE("new 4x2 code rejects non-unitary U") {
    CMat u = build_u_dft(7, {1, 2, 5, 6});
    u(0, 0) *= 1.1;
    CHECK_THROWS_AS_KIND(make_new_4x2(u), ErrorKind::UnitarityViolated);
    CHECK_THROWS_AS_KIND(make_new_4x2(CMat::identity(3)), ErrorKind::DimensionMismatch);
  }

  TEST_CASE("quasi-orthogonal block: X^H X has exactly one nonzero off-diagonal pair per column") {
    Rng64 rng(25);
    const CMat x = encode(make_quasi_orthogonal(), random_symbols(rng, 4));
    const CMat g = adjoint(x) * x;
    for (std::size_t i = 0; i < 4; ++i) {
      int nonzero = 0;
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j && std::abs(g(i, j)) > 1e-12) ++nonzero;
      CHECK(nonzero == 1);
    }
  }

  TEST_CASE("new 4x2 code: leading two columns of the base block are stacked Alamouti blocks") {
    // X12 restricted to s1, s2 and the first two columns.
    Rng64 rng(26);
    CVec s(8);
    s[0] = rng.c();
    s[1] = rng.c();
    const CMat x = encode(make_code("new4x2-4qam"), s);
    CHECK(std::abs(x(0, 0) - s[0]) < 1e-14);
    CHECK(std::abs(x(1, 0) - s[1]) < 1e-14);
    CHECK(std::abs(x(0, 1) + std::conj(s[1])) < 1e-14);
    CHECK(std::abs(x(1, 1) - std::conj(s[0])) < 1e-14);
  }

  TEST_CASE("unknown code names") {
    CHECK_THROWS_AS_KIND(make_code("perfect"), ErrorKind::UnknownCode);
    for (const auto& n : catalog_names()) CHECK(make_code(n).name() == n);
  }

  TEST_CASE("rates") {
    CHECK(make_code("alamouti").rate() == 1.0);
    CHECK(make_code("golden").rate() == 2.0);
    CHECK(make_code("new4x2-4qam").rate() == 2.0);
  }
}
