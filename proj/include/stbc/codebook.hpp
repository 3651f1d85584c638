#pragma once

/// @file codebook.hpp
/// @brief Linear space-time block codes as dispersion matrices.
///
/// A codeword is X = sum_l (a_l A_l + j b_l B_l) with s_l = a_l + j b_l.
/// Every constructor here produces such a LinearCode; the real generator
/// and, when it exists, a complex generator are derived from {A_l, B_l}.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stbc/numerics.hpp"

namespace stbc {

/// Square M-QAM with odd-integer coordinates {+-1, +-3, ...}.
/// Point index = ire * side + iim, coordinates ascending, so index order is
/// lexicographic in (Re, Im).
struct Constellation {
  int m = 0;
  int side = 0;
  std::vector<cplx> points;
  double e_s = 0.0;

  static Constellation qam(int m);

  /// One-dimensional PAM levels {-(side-1), ..., side-1}.
  std::vector<double> pam() const;
};

class LinearCode {
 public:
  LinearCode(std::string name, int n_t, int t, std::vector<CMat> disp_a,
             std::vector<CMat> disp_b);

  const std::string& name() const noexcept { return name_; }
  int n_t() const noexcept { return n_t_; }
  int t() const noexcept { return t_; }
  int kappa() const noexcept { return static_cast<int>(disp_a_.size()); }
  /// Symbols per channel use.
  double rate() const noexcept { return static_cast<double>(kappa()) / t_; }

  const std::vector<CMat>& disp_a() const noexcept { return disp_a_; }
  const std::vector<CMat>& disp_b() const noexcept { return disp_b_; }

  /// 2 n_t T x 2 kappa real generator; column 2l is tilde(vec(A_l)), column
  /// 2l+1 is tilde(vec(j B_l)).
  const RMat& real_gen() const noexcept { return real_gen_; }

  /// Complex generator G with real_gen == check(G); present only for
  /// complex-linear codes.
  const std::optional<CMat>& complex_gen() const noexcept { return complex_gen_; }

  /// Per-column conjugation pattern: column t of X is linear in s, or
  /// linear in s^* (then conj_cols()[t] is true). Present when every column
  /// is one or the other (Alamouti and quasi-orthogonal designs, or any
  /// complex-linear code with an all-false pattern).
  const std::optional<std::vector<bool>>& conj_cols() const noexcept {
    return conj_cols_;
  }

  /// n_t T x kappa generator in the column-conjugated domain: with column t
  /// of X conjugated when conj_cols()[t], vec(X') = G' s.
  const std::optional<CMat>& conj_domain_gen() const noexcept {
    return conj_domain_gen_;
  }

  /// Copy with all dispersion matrices multiplied by `factor`.
  LinearCode scaled(double factor, std::string name = {}) const;

  /// Copy scaled so the real generator columns have unit mean squared norm
  /// (G^T G = I for codes with cubic shaping). Decisions are unaffected.
  LinearCode energy_normalized() const;

 private:
  std::string name_;
  int n_t_;
  int t_;
  std::vector<CMat> disp_a_;
  std::vector<CMat> disp_b_;
  RMat real_gen_;
  std::optional<CMat> complex_gen_;
  std::optional<std::vector<bool>> conj_cols_;
  std::optional<CMat> conj_domain_gen_;
};

/// X = sum_l (Re(s_l) A_l + j Im(s_l) B_l). Throws DimensionMismatch.
CMat encode(const LinearCode& code, std::span<const cplx> s);

/// Builds dispersion matrices entry by entry. An entry receives
/// coeff * z or coeff * z^* where z = sum_l w_l s_l is a linear form over
/// the code's symbols.
class DispersionBuilder {
 public:
  DispersionBuilder(int n_t, int t, int kappa);

  /// Linear form selecting symbol l.
  CVec symbol(int l) const;

  void add(int row, int col, std::span<const cplx> form, cplx coeff, bool conjugated);

  /// Left-multiplies every dispersion matrix by `m` (n_t x n_t).
  void left_multiply(const CMat& m);

  LinearCode build(std::string name) const;

 private:
  int n_t_, t_, kappa_;
  std::vector<CMat> a_, b_;
};

/// How the Alamouti blocks of the 2x2 families are scaled.
enum class AlamoutiScaling {
  normalized,  ///< alpha = beta = 1/sqrt(2): unit-norm generator columns
  literal,     ///< alpha = beta = 1 as written for the first family
};

/// [[alpha s1, -beta s2*], [alpha s2, beta s1*]]. Throws
/// NormalizationViolated unless |alpha|^2 = |beta|^2 = 1/2 (to 1e-12) or
/// `waive_normalization` is set.
LinearCode make_alamouti(cplx alpha, cplx beta, bool waive_normalization = false);

/// X = Alamouti(s1, s2) + T Alamouti(z1, z2), z = U (s3, s4),
/// U = [[phi1, -phi2*], [phi2, phi1*]], T = diag(1, -1).
/// Throws UnitarityViolated unless |phi1|^2 + |phi2|^2 = 1 (1e-12).
LinearCode make_family1(cplx phi1, cplx phi2,
                        AlamoutiScaling scaling = AlamoutiScaling::normalized);

/// X = Alamouti(a12, b12)(s1, s2) + Alamouti(a34, b34)(s3, s4). Each pair
/// must satisfy the Alamouti normalization, else NormalizationViolated.
LinearCode make_family2(cplx a12, cplx b12, cplx a34, cplx b34);

/// Golden code with 1/sqrt(5) normalization.
LinearCode make_golden();

/// 4x4 rate-one quasi-orthogonal design over s1..s4.
LinearCode make_quasi_orthogonal();

/// U = D P / 2 with D = diag(exp(j 2 pi n_l / N)) and P the 4-point DFT
/// matrix exp(j 2 pi l n / 4), zero-based l, n. Throws OutOfRange.
CMat build_u_dft(int n_cap, std::array<int, 4> n_exp);

/// X = QO(s1..s4) + T QO(z1..z4), z = U (s5..s8), T = diag(1, 1, -1, -1).
/// Throws UnitarityViolated unless U is unitary to 1e-9.
LinearCode make_new_4x2(const CMat& u, std::string name = "new4x2");

/// Reference point parameters baked into the catalog.
struct Family1Params {
  cplx phi1, phi2;
};
struct Family2Params {
  cplx a12, b12, a34, b34;
};
Family1Params catalog_family1_params();
Family2Params catalog_family2_params();

/// Names accepted by make_code.
const std::vector<std::string>& catalog_names();

/// "alamouti", "family1", "family2", "golden", "qo4", "new4x2-4qam",
/// "new4x2-16qam". Throws UnknownCode.
LinearCode make_code(std::string_view name);

/// Max-abs deviation of U^dagger U from the identity.
double unitarity_defect(const CMat& u);

}  // namespace stbc
