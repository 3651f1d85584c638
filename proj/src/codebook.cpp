#include "stbc/codebook.hpp"

#include <cmath>
#include <numbers>

#include "stbc/error.hpp"

namespace stbc {

namespace {

constexpr double kStructTol = 1e-13;

bool columns_equal(const CMat& a, const CMat& b, std::size_t col, double sign) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (std::abs(a(i, col) - sign * b(i, col)) > kStructTol) return false;
  return true;
}

}  // namespace

Constellation Constellation::qam(int m) {
  const int side = static_cast<int>(std::lround(std::sqrt(m)));
  if (m < 4 || side * side != m)
    throw Error(ErrorKind::OutOfRange,
                "QAM size must be a perfect square >= 4, got " + std::to_string(m));
  Constellation c;
  c.m = m;
  c.side = side;
  double energy = 0.0;
  for (int ire = 0; ire < side; ++ire)
    for (int iim = 0; iim < side; ++iim) {
      const cplx p(2 * ire - (side - 1), 2 * iim - (side - 1));
      c.points.push_back(p);
      energy += std::norm(p);
    }
  c.e_s = energy / m;
  return c;
}

std::vector<double> Constellation::pam() const {
  std::vector<double> levels;
  for (int i = 0; i < side; ++i) levels.push_back(2.0 * i - (side - 1));
  return levels;
}

LinearCode::LinearCode(std::string name, int n_t, int t, std::vector<CMat> disp_a,
                       std::vector<CMat> disp_b)
    : name_(std::move(name)),
      n_t_(n_t),
      t_(t),
      disp_a_(std::move(disp_a)),
      disp_b_(std::move(disp_b)) {
  const std::size_t kappa = disp_a_.size();
  if (kappa == 0 || disp_b_.size() != kappa)
    throw Error(ErrorKind::DimensionMismatch, "dispersion matrix count");
  for (std::size_t l = 0; l < kappa; ++l) {
    for (const CMat* m : {&disp_a_[l], &disp_b_[l]})
      if (m->rows() != static_cast<std::size_t>(n_t) ||
          m->cols() != static_cast<std::size_t>(t))
        throw Error(ErrorKind::DimensionMismatch, "dispersion matrix shape");
  }

  const std::size_t nt = static_cast<std::size_t>(n_t) * t;
  real_gen_ = RMat(2 * nt, 2 * kappa);
  for (std::size_t l = 0; l < kappa; ++l) {
    const CVec va = vec(disp_a_[l]);
    const CVec vb = vec(disp_b_[l]);
    for (std::size_t i = 0; i < nt; ++i) {
      const cplx jb = cplx{0, 1} * vb[i];
      real_gen_(2 * i, 2 * l) = va[i].real();
      real_gen_(2 * i + 1, 2 * l) = va[i].imag();
      real_gen_(2 * i, 2 * l + 1) = jb.real();
      real_gen_(2 * i + 1, 2 * l + 1) = jb.imag();
    }
  }

  std::vector<bool> pattern(static_cast<std::size_t>(t));
  bool conj_ok = true;
  bool complex_linear = true;
  for (std::size_t c = 0; c < static_cast<std::size_t>(t); ++c) {
    bool lin = true, anti = true;
    for (std::size_t l = 0; l < kappa; ++l) {
      lin = lin && columns_equal(disp_a_[l], disp_b_[l], c, 1.0);
      anti = anti && columns_equal(disp_a_[l], disp_b_[l], c, -1.0);
    }
    complex_linear = complex_linear && lin;
    if (!lin && !anti) conj_ok = false;
    pattern[c] = !lin && anti;
  }
  if (complex_linear) {
    CMat g(nt, kappa);
    for (std::size_t l = 0; l < kappa; ++l) g.set_col(l, vec(disp_a_[l]));
    complex_gen_ = g;
  }
  if (conj_ok) {
    CMat g(nt, kappa);
    for (std::size_t l = 0; l < kappa; ++l) {
      CMat a = disp_a_[l];
      for (std::size_t c = 0; c < static_cast<std::size_t>(t); ++c)
        if (pattern[c])
          for (std::size_t r = 0; r < static_cast<std::size_t>(n_t); ++r)
            a(r, c) = std::conj(a(r, c));
      g.set_col(l, vec(a));
    }
    conj_cols_ = pattern;
    conj_domain_gen_ = g;
  }
}

LinearCode LinearCode::scaled(double factor, std::string name) const {
  std::vector<CMat> a = disp_a_, b = disp_b_;
  for (auto& m : a) m *= cplx{factor};
  for (auto& m : b) m *= cplx{factor};
  return LinearCode(name.empty() ? name_ : std::move(name), n_t_, t_, std::move(a),
                    std::move(b));
}

LinearCode LinearCode::energy_normalized() const {
  double total = 0.0;
  for (std::size_t l = 0; l < disp_a_.size(); ++l)
    total += frobenius_norm2(disp_a_[l]) + frobenius_norm2(disp_b_[l]);
  const double mean = total / (2.0 * static_cast<double>(disp_a_.size()));
  return scaled(1.0 / std::sqrt(mean));
}

CMat encode(const LinearCode& code, std::span<const cplx> s) {
  if (s.size() != static_cast<std::size_t>(code.kappa()))
    throw Error(ErrorKind::DimensionMismatch,
                "encode: expected " + std::to_string(code.kappa()) + " symbols, got " +
                    std::to_string(s.size()));
  CMat x(static_cast<std::size_t>(code.n_t()), static_cast<std::size_t>(code.t()));
  for (std::size_t l = 0; l < s.size(); ++l) {
    const double a = s[l].real(), b = s[l].imag();
    const auto& am = code.disp_a()[l].data();
    const auto& bm = code.disp_b()[l].data();
    auto xd = x.data();
    for (std::size_t k = 0; k < xd.size(); ++k)
      xd[k] += a * am[k] + cplx{0, b} * bm[k];
  }
  return x;
}

DispersionBuilder::DispersionBuilder(int n_t, int t, int kappa)
    : n_t_(n_t),
      t_(t),
      kappa_(kappa),
      a_(static_cast<std::size_t>(kappa), CMat(n_t, t)),
      b_(static_cast<std::size_t>(kappa), CMat(n_t, t)) {}

CVec DispersionBuilder::symbol(int l) const {
  CVec w(static_cast<std::size_t>(kappa_));
  w.at(static_cast<std::size_t>(l)) = 1.0;
  return w;
}

void DispersionBuilder::add(int row, int col, std::span<const cplx> form, cplx coeff,
                            bool conjugated) {
  if (form.size() != static_cast<std::size_t>(kappa_))
    throw Error(ErrorKind::DimensionMismatch, "linear form length");
  const auto r = static_cast<std::size_t>(row), c = static_cast<std::size_t>(col);
  for (std::size_t l = 0; l < form.size(); ++l) {
    if (form[l] == cplx{}) continue;
    // (w s)^* = w^* a - j w^* b, so B picks up the sign flip.
    if (conjugated) {
      a_[l](r, c) += coeff * std::conj(form[l]);
      b_[l](r, c) -= coeff * std::conj(form[l]);
    } else {
      a_[l](r, c) += coeff * form[l];
      b_[l](r, c) += coeff * form[l];
    }
  }
}

void DispersionBuilder::left_multiply(const CMat& m) {
  for (auto& a : a_) a = m * a;
  for (auto& b : b_) b = m * b;
}

LinearCode DispersionBuilder::build(std::string name) const {
  return LinearCode(std::move(name), n_t_, t_, a_, b_);
}

namespace {

// Alamouti block [[alpha z1, -beta z2*], [alpha z2, beta z1*]] over linear
// forms z1, z2.
void add_alamouti(DispersionBuilder& b, std::span<const cplx> z1,
                  std::span<const cplx> z2, cplx alpha, cplx beta) {
  b.add(0, 0, z1, alpha, false);
  b.add(1, 0, z2, alpha, false);
  b.add(0, 1, z2, -beta, true);
  b.add(1, 1, z1, beta, true);
}

// Quasi-orthogonal 4x4 block over linear forms z1..z4 (rows as displayed).
void add_quasi_orthogonal(DispersionBuilder& b, const std::array<CVec, 4>& z) {
  struct Cell {
    int row, col, sym;
    double sign;
    bool conj;
  };
  static constexpr Cell cells[] = {
      {0, 0, 0, 1, false}, {0, 1, 1, -1, true}, {0, 2, 2, -1, true}, {0, 3, 3, 1, false},
      {1, 0, 1, 1, false}, {1, 1, 0, 1, true},  {1, 2, 3, -1, true}, {1, 3, 2, -1, false},
      {2, 0, 2, 1, false}, {2, 1, 3, -1, true}, {2, 2, 0, 1, true},  {2, 3, 1, -1, false},
      {3, 0, 3, 1, false}, {3, 1, 2, 1, true},  {3, 2, 1, 1, true},  {3, 3, 0, 1, false},
  };
  for (const auto& c : cells)
    b.add(c.row, c.col, z[static_cast<std::size_t>(c.sym)], c.sign, c.conj);
}

void require_alamouti_normalization(cplx alpha, cplx beta, const char* what) {
  const double a2 = std::norm(alpha), b2 = std::norm(beta);
  if (std::abs(a2 - b2) > 1e-12 || std::abs(a2 + b2 - 1.0) > 1e-12)
    throw Error(ErrorKind::NormalizationViolated,
                std::string(what) + ": Alamouti coefficients need |alpha|^2 = |beta|^2 = 1/2");
}

}  // namespace

LinearCode make_alamouti(cplx alpha, cplx beta, bool waive_normalization) {
  if (!waive_normalization) require_alamouti_normalization(alpha, beta, "make_alamouti");
  DispersionBuilder b(2, 2, 2);
  add_alamouti(b, b.symbol(0), b.symbol(1), alpha, beta);
  return b.build("alamouti");
}

LinearCode make_family1(cplx phi1, cplx phi2, AlamoutiScaling scaling) {
  if (std::abs(std::norm(phi1) + std::norm(phi2) - 1.0) > 1e-12)
    throw Error(ErrorKind::UnitarityViolated, "make_family1: |phi1|^2 + |phi2|^2 != 1");
  const double c = scaling == AlamoutiScaling::normalized ? std::numbers::sqrt2 / 2 : 1.0;
  DispersionBuilder b(2, 2, 4);
  add_alamouti(b, b.symbol(0), b.symbol(1), c, c);
  DispersionBuilder twisted(2, 2, 4);
  const CVec z1{0, 0, phi1, -std::conj(phi2)};
  const CVec z2{0, 0, phi2, std::conj(phi1)};
  add_alamouti(twisted, z1, z2, c, c);
  twisted.left_multiply(CMat{{1, 0}, {0, -1}});
  LinearCode x12 = b.build("");
  LinearCode x34 = twisted.build("");
  std::vector<CMat> a, bb;
  for (int l = 0; l < 4; ++l) {
    a.push_back(x12.disp_a()[l] + x34.disp_a()[l]);
    bb.push_back(x12.disp_b()[l] + x34.disp_b()[l]);
  }
  return LinearCode(scaling == AlamoutiScaling::normalized ? "family1" : "family1-literal",
                    2, 2, std::move(a), std::move(bb));
}

LinearCode make_family2(cplx a12, cplx b12, cplx a34, cplx b34) {
  require_alamouti_normalization(a12, b12, "make_family2 (X12)");
  require_alamouti_normalization(a34, b34, "make_family2 (X34)");
  DispersionBuilder b(2, 2, 4);
  add_alamouti(b, b.symbol(0), b.symbol(1), a12, b12);
  add_alamouti(b, b.symbol(2), b.symbol(3), a34, b34);
  return b.build("family2");
}

LinearCode make_golden() {
  const double sqrt5 = std::sqrt(5.0);
  const double theta = (1.0 + sqrt5) / 2.0;
  const double theta_bar = (1.0 - sqrt5) / 2.0;
  const cplx j{0, 1};
  const cplx alpha = 1.0 + j - j * theta;
  const cplx alpha_bar = 1.0 + j - j * theta_bar;
  const double n = 1.0 / sqrt5;
  DispersionBuilder b(2, 2, 4);
  b.add(0, 0, CVec{1, theta, 0, 0}, n * alpha, false);
  b.add(0, 1, CVec{0, 0, 1, theta}, n * alpha, false);
  b.add(1, 0, CVec{0, 0, 1, theta_bar}, n * j * alpha_bar, false);
  b.add(1, 1, CVec{1, theta_bar, 0, 0}, n * alpha_bar, false);
  return b.build("golden");
}

LinearCode make_quasi_orthogonal() {
  DispersionBuilder b(4, 4, 4);
  add_quasi_orthogonal(b, {b.symbol(0), b.symbol(1), b.symbol(2), b.symbol(3)});
  return b.build("qo4");
}

CMat build_u_dft(int n_cap, std::array<int, 4> n_exp) {
  if (n_cap < 1) throw Error(ErrorKind::OutOfRange, "build_u_dft: N must be >= 1");
  for (int v : n_exp)
    if (v < 0 || v > n_cap)
      throw Error(ErrorKind::OutOfRange, "build_u_dft: exponent outside {0..N}");
  CMat u(4, 4);
  for (std::size_t l = 0; l < 4; ++l) {
    const cplx d = std::polar(1.0, 2.0 * std::numbers::pi * n_exp[l] / n_cap);
    for (std::size_t n = 0; n < 4; ++n) {
      // exp(j 2 pi l n / 4) = j^(l n), exact.
      static constexpr cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      u(l, n) = 0.5 * d * powers[(l * n) % 4];
    }
  }
  return u;
}

double unitarity_defect(const CMat& u) {
  return max_abs_diff(adjoint(u) * u, CMat::identity(u.cols()));
}

LinearCode make_new_4x2(const CMat& u, std::string name) {
  if (u.rows() != 4 || u.cols() != 4)
    throw Error(ErrorKind::DimensionMismatch, "make_new_4x2: U must be 4x4");
  if (unitarity_defect(u) > 1e-9)
    throw Error(ErrorKind::UnitarityViolated, "make_new_4x2: U is not unitary");
  DispersionBuilder base(4, 4, 8);
  add_quasi_orthogonal(base, {base.symbol(0), base.symbol(1), base.symbol(2), base.symbol(3)});
  DispersionBuilder twisted(4, 4, 8);
  std::array<CVec, 4> z;
  for (std::size_t k = 0; k < 4; ++k) {
    z[k] = CVec(8);
    for (std::size_t l = 0; l < 4; ++l) z[k][4 + l] = u(k, l);
  }
  add_quasi_orthogonal(twisted, z);
  CMat t = CMat::identity(4);
  t(2, 2) = -1;
  t(3, 3) = -1;
  twisted.left_multiply(t);
  const LinearCode x12 = base.build("");
  const LinearCode x34 = twisted.build("");
  std::vector<CMat> a, b;
  for (int l = 0; l < 8; ++l) {
    a.push_back(x12.disp_a()[l] + x34.disp_a()[l]);
    b.push_back(x12.disp_b()[l] + x34.disp_b()[l]);
  }
  return LinearCode(std::move(name), 4, 4, std::move(a), std::move(b));
}

Family1Params catalog_family1_params() {
  // search_family1(16) optimum; delta_min(4-QAM) = 16/7.
  const double theta = 0.56394264136062888;
  const double pa = 4.2487413713838826;
  const double pb = 0.78539816339744639;
  return {std::polar(std::cos(theta), pa), std::polar(std::sin(theta), pb)};
}

Family2Params catalog_family2_params() {
  // search_family2(8) optimum; delta_min(4-QAM) = 2.
  const double r = 1.0 / std::numbers::sqrt2;
  return {r, r, std::polar(r, 0.42403103949073889), std::polar(r, 1.9948273662856368)};
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{
      "alamouti", "family1", "family2", "golden", "qo4", "new4x2-4qam", "new4x2-16qam"};
  return names;
}

LinearCode make_code(std::string_view name) {
  if (name == "alamouti") {
    const double r = std::numbers::sqrt2 / 2;
    return make_alamouti(r, r);
  }
  if (name == "family1") {
    const auto p = catalog_family1_params();
    return make_family1(p.phi1, p.phi2);
  }
  if (name == "family2") {
    const auto p = catalog_family2_params();
    return make_family2(p.a12, p.b12, p.a34, p.b34);
  }
  if (name == "golden") return make_golden();
  if (name == "qo4") return make_quasi_orthogonal();
  if (name == "new4x2-4qam") return make_new_4x2(build_u_dft(7, {1, 2, 5, 6}), "new4x2-4qam");
  if (name == "new4x2-16qam")
    return make_new_4x2(build_u_dft(17, {3, 4, 5, 13}), "new4x2-16qam");
  throw Error(ErrorKind::UnknownCode, "unknown code '" + std::string(name) + "'");
}

}  // namespace stbc
