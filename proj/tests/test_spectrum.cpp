#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "stbc/codebook.hpp"
#include "stbc/error.hpp"
#include "stbc/spectrum.hpp"
#include "test_util.hpp"

using namespace stbc;

namespace {

std::uint64_t total(const std::vector<SpectrumEntry>& rows) {
  std::uint64_t n = 0;
  for (const auto& e : rows) n += e.count;
  return n;
}

EnumerationOptions with_threads(int t) {
  EnumerationOptions o;
  o.threads = t;
  return o;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("difference set sizes and symmetry") {
    CHECK(difference_set(Constellation::qam(4)).size() == 9);
    CHECK(difference_set(Constellation::qam(16)).size() == 49);
    CHECK(difference_set(Constellation::qam(64)).size() == 225);
    const auto d = difference_set(Constellation::qam(16));
    CHECK(d[d.size() / 2] == cplx{});
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == -d[d.size() - 1 - i]);
  }

  TEST_CASE("delta binning merges rounding noise only") {
    CHECK(delta_bin(2.28571428571425) == delta_bin(2.28571428571373));
    CHECK(delta_bin(3.2) == 3.2);
    CHECK(delta_bin(2.2857) != delta_bin(2.2858));
    CHECK(delta_bin(0.0) == 0.0);
  }

  TEST_CASE("zero difference is rejected") {
    CHECK_THROWS_AS_KIND(codeword_distance(make_golden(), CVec(4)), ErrorKind::ZeroDifference);
  }

  TEST_CASE("Alamouti spectrum matches the closed form E = (|d1|^2 + |d2|^2)/2 I") {
    const auto cons = Constellation::qam(4);
    const auto d = difference_set(cons);
    std::map<double, std::uint64_t> want;
    for (const auto& d1 : d)
      for (const auto& d2 : d) {
        const double p = (std::norm(d1) + std::norm(d2)) / 2;
        if (p > 0) ++want[delta_bin(p * p)];
      }
    const auto got = distance_spectrum(make_code("alamouti"), cons, true);
    REQUIRE(got.size() == want.size());
    for (const auto& e : got) {
      CHECK(e.r == 2);
      CHECK(want[e.delta] == e.count);
    }
    CHECK(min_determinant(make_code("alamouti"), cons) == doctest::Approx(4.0).epsilon(1e-12));
  }

  TEST_CASE("parallel kernels equal the serial eigenvalue reference") {
    const auto cons = Constellation::qam(4);
    for (const char* name : {"golden", "family1", "family2", "qo4", "alamouti"}) {
      CAPTURE(name);
      const LinearCode code = make_code(name);
      CHECK(distance_spectrum(code, cons, true) == reference::distance_spectrum(code, cons));
      CHECK(min_determinant(code, cons) ==
            doctest::Approx(reference::min_determinant(code, cons)).epsilon(1e-9));
      const auto fast = rank2_multiplicity(code, cons);
      const auto ref = reference::rank2_multiplicity(code, cons);
      CHECK(fast.total == ref.total);
      CHECK(fast.histogram == ref.histogram);
    }
  }

  TEST_CASE("thread count does not change results") {
    const auto cons = Constellation::qam(16);
    const LinearCode code = make_code("family2");
    const auto a = distance_spectrum(code, cons, true, with_threads(1));
    const auto b = distance_spectrum(code, cons, true, with_threads(3));
    CHECK(a == b);
    CHECK(min_determinant(code, cons, with_threads(1)) == min_determinant(code, cons, with_threads(4)));
  }

  TEST_CASE("counts cover every nonzero difference vector") {
    const auto cons = Constellation::qam(4);
    for (const char* name : {"golden", "qo4"}) {
      CHECK(total(distance_spectrum(make_code(name), cons, true)) == 9u * 9 * 9 * 9 - 1);
      CHECK(total(distance_spectrum(make_code(name), cons, false)) <= 9u * 9 * 9 * 9 - 1);
    }
  }

  TEST_CASE("collapsed full-rank row keeps the minimum and its multiplicity") {
    const auto rows = distance_spectrum(make_golden(), Constellation::qam(4), false);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].r == 2);
    CHECK(rows[0].delta == doctest::Approx(3.2));
    CHECK(rows[0].count == 672);
  }

  TEST_CASE("Golden minimum determinant is 3.2 at 4- and 16-QAM") {
    CHECK(min_determinant(make_golden(), Constellation::qam(4)) == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(min_determinant(make_golden(), Constellation::qam(16)) == doctest::Approx(3.2).epsilon(1e-12));
  }

  TEST_CASE("literal Alamouti scaling multiplies Family I determinants by 4") {
    const auto p = catalog_family1_params();
    const auto cons = Constellation::qam(4);
    const double lit = min_determinant(make_family1(p.phi1, p.phi2, AlamoutiScaling::literal), cons);
    const double nor = min_determinant(make_family1(p.phi1, p.phi2), cons);
    CHECK(lit == doctest::Approx(4 * nor).epsilon(1e-12));
    CHECK(nor == doctest::Approx(16.0 / 7).epsilon(1e-9));
  }

  TEST_CASE("rank decisions are stable across tolerances 1e-6 .. 1e-12") {
    const auto cons = Constellation::qam(4);
    for (double tol : {1e-6, 1e-8, 1e-9, 1e-10, 1e-12}) {
      EnumerationOptions o;
      o.rank_tol = tol;
      CHECK(rank2_multiplicity(make_quasi_orthogonal(), cons, o).total == 160);
      CHECK(min_determinant(make_golden(), cons, o) == doctest::Approx(3.2).epsilon(1e-12));
      CHECK(reference::rank2_multiplicity(make_quasi_orthogonal(), cons, o).total == 160);
    }
  }

  TEST_CASE("restricted enumeration is a lower bound that closes at full weight") {
    const auto cons = Constellation::qam(4);
    const LinearCode qo = make_quasi_orthogonal();
    const auto full = rank2_multiplicity(qo, cons);
    std::uint64_t prev = 0;
    for (int w = 1; w <= 4; ++w) {
      const auto r = rank2_multiplicity_restricted(qo, cons, w);
      CHECK(r.total >= prev);
      CHECK(r.total <= full.total);
      prev = r.total;
    }
    CHECK(rank2_multiplicity_restricted(qo, cons, 4).histogram == full.histogram);
  }

  TEST_CASE("union bound terms are sorted and drop empty rows") {
    const std::vector<SpectrumEntry> rows{{4, 2.0, 3}, {2, 5.0, 0}, {2, 1.0, 7}, {4, 1.0, 1}};
    const auto t = union_bound_terms(rows);
    REQUIRE(t.size() == 3);
    CHECK(t[0] == SpectrumEntry{2, 1.0, 7});
    CHECK(t[1] == SpectrumEntry{4, 1.0, 1});
    CHECK(t[2] == SpectrumEntry{4, 2.0, 3});
  }

  TEST_CASE("spectrum records round-trip through JSON lines") {
    const auto rows = distance_spectrum(make_code("family1"), Constellation::qam(4), true);
    std::stringstream ss;
    write_spectrum_records(ss, {"spectrum", 7, "abc"}, "family1", 4, rows);
    std::string first;
    std::getline(ss, first);
    CHECK(first.find("\"type\":\"header\"") != std::string::npos);
    CHECK(first.find("\"seed\":7") != std::string::npos);
    ss.seekg(0);
    CHECK(read_spectrum_records(ss) == rows);
  }

  TEST_CASE("consistency mode finds a witness and no sample below it") {
    const auto rep = min_determinant_consistency(make_golden(), Constellation::qam(16), 200000, 5);
    CHECK(rep.witness_found);
    CHECK(rep.witness_det == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(rep.rank_deficient == 0);
    CHECK(rep.sample_min_det >= 3.2 * (1 - 1e-9));
    CHECK(codeword_distance(make_golden(), rep.witness).det == doctest::Approx(3.2).epsilon(1e-9));
    const auto again = min_determinant_consistency(make_golden(), Constellation::qam(16), 200000, 5,
                                                   with_threads(2));
    CHECK(again.sample_min_det == rep.sample_min_det);
  }

  TEST_CASE("budget guard") {
    EnumerationOptions o;
    o.budget = 1000;
    CHECK_THROWS_AS_KIND(min_determinant(make_golden(), Constellation::qam(16), o), ErrorKind::BudgetExceeded);
    CHECK_THROWS_AS_KIND(rank2_multiplicity(make_code("new4x2-16qam"), Constellation::qam(16)),
                         ErrorKind::BudgetExceeded);
  }

  TEST_CASE("rank-2 events of the 4x2 code at 4-QAM") {
    const auto r = rank2_multiplicity(make_code("new4x2-4qam"), Constellation::qam(4));
    CHECK(r.total == 160);
    CHECK(min_determinant(make_code("new4x2-4qam"), Constellation::qam(4)) == 0.0);
  }
}
