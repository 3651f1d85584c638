#pragma once

/// @file detector.hpp
/// @brief Maximum-likelihood detectors for linear STBCs.
///
/// Three decoders return the same argmin of ||Y - H X||^2:
///  - ml_exhaustive: direct enumeration of all M^kappa codewords;
///  - sphere_decode: depth-first Schnorr-Euchner search on the QR-triangularized
///    equivalent channel;
///  - fast_decode: enumerates the last kappa - k' symbols and slices the first
///    k' symbols one at a time, valid when R has zeros above the diagonal in
///    its leading k' x k' block.
/// Ties are broken toward the lexicographically smallest symbol-index vector.
///
/// Complexity accounting: metric_evals counts ML metric values in the sense of
/// the decoding-complexity definition (one per leaf for exhaustive and sphere
/// search, k' M per tail vector for fast decoding); nodes_visited counts
/// partial-metric evaluations inside the tree.

#include <cstdint>
#include <vector>

#include "stbc/codebook.hpp"
#include "stbc/numerics.hpp"

namespace stbc {

/// Relative threshold below which an R entry is a structural zero.
inline constexpr double kStructuralZeroTol = 1e-9;
inline constexpr std::uint64_t kDefaultExhaustiveBudget = 1'000'000;

/// Channel-dependent matrix mapping the symbol vector to the received vector.
///
/// On the complex path (codes with a column conjugation pattern, including
/// plain complex-linear codes) the received vector is vec(Y') where column t
/// of Y is conjugated when conj_cols[t]; then vec(Y') = F s + noise. On the
/// real path the received vector is tilde(vec(Y)) and f holds the real
/// matrix over tilde(s) with zero imaginary parts.
struct EquivChannel {
  bool complex_domain = true;
  std::vector<bool> conj_cols;
  CMat f;
  RMat f_real;  ///< check(f) on the complex path, the real matrix otherwise
  QRFactors qr;
  int k_prime = 0;
};

EquivChannel equivalent_channel(const CMat& h, const LinearCode& code,
                                double rel_tol = kStructuralZeroTol);

/// Received vector in the domain of `eq` (see EquivChannel).
CVec received_vector(const CMat& y, const EquivChannel& eq);

/// The 4x2 matrix F^(*) of a 2x2 Alamouti-structured code (last two rows
/// conjugated). Throws WrongStructure for any other code.
CMat conjugated_equivalent(const CMat& h, const LinearCode& code);

struct DecodeResult {
  std::vector<int> s_hat;  ///< constellation indices, one per symbol
  double metric = 0.0;     ///< ||Y - H X(s_hat)||^2
  std::uint64_t metric_evals = 0;
  std::uint64_t nodes_visited = 0;
};

/// ||Y - H X(s)||^2 computed directly from the dispersion matrices.
double ml_metric(const CMat& y, const CMat& h, const LinearCode& code,
                 const Constellation& cons, std::span<const int> s_idx);

/// Throws BudgetExceeded when M^kappa > budget.
DecodeResult ml_exhaustive(const CMat& y, const CMat& h, const LinearCode& code,
                           const Constellation& cons,
                           std::uint64_t budget = kDefaultExhaustiveBudget);

/// Largest k' such that <f_j, e_i> is a structural zero for all
/// 2 <= j <= k', i < j (one-based); 0 when <f_2, e_1> is not.
int detect_fast_structure(const QRFactors& qr, double rel_tol = kStructuralZeroTol);

/// Symbol order (a permutation of 0..kappa-1, position -> symbol) and the k'
/// it achieves.
struct SymbolOrder {
  std::vector<int> perm;
  int k_prime = 0;
};

/// Searches symbol orders maximizing k': all orders for kappa <= 4, greedy
/// pairwise swaps from the identity for larger kappa.
SymbolOrder best_symbol_order(const CMat& h, const LinearCode& code,
                              double rel_tol = kStructuralZeroTol);

/// Throws NotFastDecodable when k' = 0 for the (optionally permuted) order.
DecodeResult fast_decode(const CMat& y, const CMat& h, const LinearCode& code,
                         const Constellation& cons, const SymbolOrder* order = nullptr);

struct RadiusPolicy {
  enum class Kind { infinite, noise_scaled };
  Kind kind = Kind::infinite;
  double n0 = 0.0;     ///< noise variance, for noise_scaled
  double factor = 2.0; ///< initial radius^2 = factor * rows * n0, doubled on failure
};

/// Exact ML by Schnorr-Euchner depth-first search. Throws RankDeficient.
DecodeResult sphere_decode(const CMat& y, const CMat& h, const LinearCode& code,
                           const Constellation& cons, RadiusPolicy policy = {});

}  // namespace stbc
