#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "stbc/codebook.hpp"
#include "stbc/detector.hpp"
#include "stbc/error.hpp"
#include "test_util.hpp"

using namespace stbc;

namespace {

// Test-side brute force: argmin over every codeword via encode(), ties to
// the lexicographically smallest index vector.
std::vector<int> brute_force(const CMat& y, const CMat& h, const LinearCode& code,
                             const Constellation& cons) {
  const auto kappa = static_cast<std::size_t>(code.kappa());
  std::vector<int> idx(kappa, 0), best;
  double best_m = std::numeric_limits<double>::infinity();
  while (true) {
    CVec s;
    for (int i : idx) s.push_back(cons.points[static_cast<std::size_t>(i)]);
    const CMat r = y - h * encode(code, s);
    const double m = frobenius_norm2(r);
    if (m < best_m) {
      best_m = m;
      best = idx;
    }
    std::size_t l = kappa;
    bool wrapped = true;
    while (l > 0) {
      --l;
      if (++idx[l] < cons.m) {
        wrapped = false;
        break;
      }
      idx[l] = 0;
    }
    if (wrapped) break;
  }
  return best;
}

struct Sample {
  CMat h, y;
  std::vector<int> sent;
};

Sample sample(Rng64& rng, const LinearCode& code, const Constellation& cons, int n_r, double sigma) {
  Sample s;
  s.h = random_cmat(rng, static_cast<std::size_t>(n_r), static_cast<std::size_t>(code.n_t()));
  CVec sym;
  for (int l = 0; l < code.kappa(); ++l) {
    s.sent.push_back(rng.below(cons.m));
    sym.push_back(cons.points[static_cast<std::size_t>(s.sent.back())]);
  }
  s.y = s.h * encode(code, sym);
  for (auto& v : s.y.data()) v += sigma * rng.c();
  return s;
}

// A code with random dispersion matrices: no column conjugation pattern.
LinearCode random_code(Rng64& rng) {
  std::vector<CMat> a, b;
  for (int l = 0; l < 2; ++l) {
    a.push_back(random_cmat(rng, 2, 2));
    b.push_back(random_cmat(rng, 2, 2));
  }
  return LinearCode("random", 2, 2, a, b);
}

}  // namespace

TEST_SUITE("detector") {
  TEST_CASE("noiseless received vector equals F s on both paths") {
    Rng64 rng(31);
    std::vector<LinearCode> codes;
    for (const auto& n : catalog_names()) codes.push_back(make_code(n));
    codes.push_back(random_code(rng));
    for (const auto& code : codes) {
      CAPTURE(code.name());
      const CMat h = random_cmat(rng, 2, static_cast<std::size_t>(code.n_t()));
      const CVec s = random_cvec(rng, static_cast<std::size_t>(code.kappa()));
      const CMat y = h * encode(code, s);
      const EquivChannel eq = equivalent_channel(h, code);
      const CVec r = received_vector(y, eq);
      if (eq.complex_domain) {
        const CVec fs = eq.f * std::span<const cplx>(s);
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(r[i] - fs[i]) < 1e-11);
      } else {
        const RVec fs = eq.f_real * std::span<const double>(tilde_vec(s));
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(r[i] - fs[i]) < 1e-11);
      }
    }
    CHECK_FALSE(equivalent_channel(random_cmat(rng, 2, 2), random_code(rng)).complex_domain);
  }

  TEST_CASE("k' classification") {
    Rng64 rng(32);
    for (int t = 0; t < 20; ++t) {
      CHECK(equivalent_channel(random_cmat(rng, 2, 2), make_code("family1")).k_prime == 2);
      CHECK(equivalent_channel(random_cmat(rng, 2, 2), make_code("family2")).k_prime == 2);
      CHECK(equivalent_channel(random_cmat(rng, 2, 2), make_code("golden")).k_prime == 0);
      CHECK(equivalent_channel(random_cmat(rng, 2, 2), make_code("alamouti")).k_prime == 2);
      CHECK(equivalent_channel(random_cmat(rng, 2, 4), make_code("new4x2-4qam")).k_prime == 2);
    }
  }

  TEST_CASE("R zero pattern of the two-Alamouti families") {
    Rng64 rng(33);
    for (const char* name : {"family1", "family2"}) {
      CAPTURE(name);
      const EquivChannel eq = equivalent_channel(random_cmat(rng, 2, 2), make_code(name));
      const auto& r = eq.qr.r;
      const double scale = std::abs(r(0, 0));
      CHECK(std::abs(r(0, 1)) < 1e-12 * scale);
      CHECK(std::abs(r(2, 3)) < 1e-12 * scale);
      for (std::size_t i : {0u, 1u})
        for (std::size_t j : {2u, 3u}) CHECK(std::abs(r(i, j)) > 1e-6 * scale);
    }
  }

  TEST_CASE("Alamouti: F^(*) has orthogonal columns of equal norm") {
    Rng64 rng(34);
    const CMat h = random_cmat(rng, 2, 2);
    const CMat f = conjugated_equivalent(h, make_code("alamouti"));
    const CMat g = adjoint(f) * f;
    CHECK(std::abs(g(0, 1)) < 1e-12);
    CHECK(g(0, 0).real() == doctest::Approx(g(1, 1).real()).epsilon(1e-12));
    CHECK(g(0, 0).real() == doctest::Approx(0.5 * frobenius_norm2(h)).epsilon(1e-12));
    CHECK_THROWS_AS_KIND(conjugated_equivalent(h, make_golden()), ErrorKind::WrongStructure);
  }

  TEST_CASE("exhaustive decoding equals the brute-force oracle") {
    Rng64 rng(35);
    const auto cons = Constellation::qam(4);
    for (const char* name : {"alamouti", "golden", "family1"}) {
      const LinearCode code = make_code(name);
      for (int t = 0; t < 30; ++t) {
        const Sample s = sample(rng, code, cons, 2, 1.0);
        const DecodeResult r = ml_exhaustive(s.y, s.h, code, cons);
        CHECK(r.s_hat == brute_force(s.y, s.h, code, cons));
        CHECK(r.metric == doctest::Approx(ml_metric(s.y, s.h, code, cons, r.s_hat)).epsilon(1e-12));
        CHECK(r.metric_evals == static_cast<std::uint64_t>(std::pow(4, code.kappa())));
      }
    }
  }

  TEST_CASE("all decoders agree with exhaustive on fast-decodable codes") {
    Rng64 rng(36);
    for (int m : {4, 16}) {
      const auto cons = Constellation::qam(m);
      for (const char* name : {"family1", "family2", "alamouti"}) {
        CAPTURE(name);
        const LinearCode code = make_code(name);
        for (int t = 0; t < (m == 4 ? 60 : 10); ++t) {
          const Sample s = sample(rng, code, cons, 2, m == 4 ? 1.0 : 0.5);
          const DecodeResult ex = ml_exhaustive(s.y, s.h, code, cons);
          const DecodeResult fd = fast_decode(s.y, s.h, code, cons);
          const DecodeResult sd = sphere_decode(s.y, s.h, code, cons);
          CHECK(fd.s_hat == ex.s_hat);
          CHECK(sd.s_hat == ex.s_hat);
          CHECK(fd.metric == ex.metric);
          const std::uint64_t mm = static_cast<std::uint64_t>(m);
          const std::uint64_t bound = code.kappa() == 4 ? 2 * mm * mm * mm : 2 * mm;
          CHECK(fd.metric_evals == bound);
        }
      }
    }
  }

  TEST_CASE("sphere decoding works on the real path and with a noise-scaled radius") {
    Rng64 rng(37);
    const auto cons = Constellation::qam(4);
    const LinearCode code = random_code(rng);
    for (int t = 0; t < 30; ++t) {
      const Sample s = sample(rng, code, cons, 2, 0.7);
      const auto ex = ml_exhaustive(s.y, s.h, code, cons);
      CHECK(sphere_decode(s.y, s.h, code, cons).s_hat == ex.s_hat);
      RadiusPolicy p;
      p.kind = RadiusPolicy::Kind::noise_scaled;
      p.n0 = 0.49;
      p.factor = 0.1;  // forces radius growth on most trials
      CHECK(sphere_decode(s.y, s.h, code, cons, p).s_hat == ex.s_hat);
    }
  }

  TEST_CASE("golden code is not fast-decodable; Family I keeps k' = 2 under the best order") {
    Rng64 rng(38);
    const auto cons = Constellation::qam(4);
    const Sample s = sample(rng, make_golden(), cons, 2, 0.5);
    CHECK_THROWS_AS_KIND(fast_decode(s.y, s.h, make_golden(), cons), ErrorKind::NotFastDecodable);
    const SymbolOrder fam = best_symbol_order(s.h, make_code("family1"));
    CHECK(fam.k_prime == 2);
  }

  TEST_CASE("a permuted symbol order decodes to the same codeword") {
    Rng64 rng(39);
    const auto cons = Constellation::qam(4);
    const LinearCode code = make_code("family1");
    const Sample s = sample(rng, code, cons, 2, 0.8);
    SymbolOrder order{{1, 0, 3, 2}, 0};
    order.k_prime = equivalent_channel(s.h, code).k_prime;
    CHECK(fast_decode(s.y, s.h, code, cons, &order).s_hat == ml_exhaustive(s.y, s.h, code, cons).s_hat);
  }

  TEST_CASE("noiseless decoding recovers the sent symbols") {
    Rng64 rng(40);
    const auto cons = Constellation::qam(16);
    const LinearCode code = make_code("new4x2-16qam");
    for (int t = 0; t < 5; ++t) {
      const Sample s = sample(rng, code, cons, 2, 0.0);
      CHECK(sphere_decode(s.y, s.h, code, cons).s_hat == s.sent);
      CHECK(fast_decode(s.y, s.h, code, cons).s_hat == s.sent);
    }
  }

  TEST_CASE("exhaustive ties resolve to the smallest index vector") {
    const auto cons = Constellation::qam(4);
    const CMat h(2, 2);
    const CMat y{{1, 0}, {0, 1}};
    const auto r = ml_exhaustive(y, h, make_code("alamouti"), cons);
    CHECK(r.s_hat == std::vector<int>{0, 0});
  }

  TEST_CASE("budgets and shapes") {
    Rng64 rng(41);
    const auto cons = Constellation::qam(16);
    const LinearCode code = make_code("new4x2-16qam");
    const Sample s = sample(rng, code, cons, 2, 0.1);
    CHECK_THROWS_AS_KIND(ml_exhaustive(s.y, s.h, code, cons), ErrorKind::BudgetExceeded);
    CHECK_THROWS_AS_KIND(equivalent_channel(random_cmat(rng, 2, 3), code), ErrorKind::DimensionMismatch);
  }
}
