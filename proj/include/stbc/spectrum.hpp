#pragma once

/// @file spectrum.hpp
/// @brief Distance spectrum of linear STBCs by exhaustive enumeration of
/// symbol difference vectors.
///
/// By linearity X - X' = X(ds) with ds drawn from the constellation's
/// difference set, so every quantity here is a function of ds alone. Counts
/// are per distinct nonzero difference vector.
///
/// The enumeration kernels run under OpenMP. Each has a serial reference in
/// namespace `reference` that goes through codeword_distance (Hermitian
/// eigenvalues); the two are kept for cross-checking and benchmarking.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stbc/codebook.hpp"

namespace stbc {

inline constexpr double kRankTol = 1e-9;
inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

struct EnumerationOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  double rank_tol = kRankTol;  ///< eigenvalue > rank_tol * lambda_max is nonzero
  int threads = 0;             ///< 0: OpenMP default
};

/// All pairwise differences of constellation points, including 0, sorted by
/// (Re, Im). Size (2 sqrt(M) - 1)^2.
std::vector<cplx> difference_set(const Constellation& cons);

struct DistanceInfo {
  int rank = 0;
  double delta = 0.0;  ///< product of the nonzero eigenvalues of E
  double det = 0.0;    ///< det(E)
};

/// E = X(ds) X(ds)^dagger. Throws ZeroDifference for ds = 0.
DistanceInfo codeword_distance(const LinearCode& code, std::span<const cplx> ds,
                               double rank_tol = kRankTol);

struct SpectrumEntry {
  int r = 0;
  double delta = 0.0;
  std::uint64_t count = 0;

  friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// delta rounded to 9 significant digits; equal algebraic values collide.
double delta_bin(double delta);

/// Minimum of det(E) over nonzero differences; 0 if any is rank deficient.
/// Throws BudgetExceeded when |diff set|^kappa > budget.
double min_determinant(const LinearCode& code, const Constellation& cons,
                       const EnumerationOptions& opts = {});

struct Rank2Result {
  std::uint64_t total = 0;
  std::vector<SpectrumEntry> histogram;  ///< r = 2 rows, ascending delta
};

/// Difference vectors whose E has rank exactly 2, binned by delta.
Rank2Result rank2_multiplicity(const LinearCode& code, const Constellation& cons,
                               const EnumerationOptions& opts = {});

/// Same, over difference vectors with at most `max_weight` nonzero symbols.
Rank2Result rank2_multiplicity_restricted(const LinearCode& code, const Constellation& cons,
                                          int max_weight, const EnumerationOptions& opts = {});

/// Full (rank, delta) histogram. Rank-deficient rows are always binned;
/// full-rank rows are binned when `full_rank_detail`, otherwise collapsed
/// to the single minimum-delta row with its multiplicity.
std::vector<SpectrumEntry> distance_spectrum(const LinearCode& code, const Constellation& cons,
                                             bool full_rank_detail,
                                             const EnumerationOptions& opts = {});

/// The (r, delta, A(r, delta)) rows of the union bound, sorted by (r, delta),
/// zero counts dropped.
std::vector<SpectrumEntry> union_bound_terms(std::span<const SpectrumEntry> spectrum);

/// Large-constellation check when full enumeration is out of budget: a
/// witness difference from the 4-QAM sub-lattice achieving the 4-QAM
/// minimum, and a seeded random sample of nonzero differences.
struct ConsistencyReport {
  bool witness_found = false;
  double witness_det = 0.0;
  std::vector<cplx> witness;
  std::uint64_t samples = 0;
  std::uint64_t rank_deficient = 0;
  double sample_min_det = 0.0;
};

ConsistencyReport min_determinant_consistency(const LinearCode& code, const Constellation& cons,
                                              std::uint64_t samples, std::uint64_t seed,
                                              const EnumerationOptions& opts = {});

struct RecordHeader {
  std::string kind;
  std::uint64_t seed = 0;
  std::string config_digest;
};

/// One JSON object per line: a header, then one line per entry with code
/// name, constellation size, r, delta, count.
void write_spectrum_records(std::ostream& os, const RecordHeader& header,
                            const std::string& code_name, int m,
                            std::span<const SpectrumEntry> entries);
std::vector<SpectrumEntry> read_spectrum_records(std::istream& is);

namespace reference {

// Serial, one codeword_distance call per difference vector.
double min_determinant(const LinearCode& code, const Constellation& cons,
                       const EnumerationOptions& opts = {});
Rank2Result rank2_multiplicity(const LinearCode& code, const Constellation& cons,
                               const EnumerationOptions& opts = {});
std::vector<SpectrumEntry> distance_spectrum(const LinearCode& code, const Constellation& cons,
                                             const EnumerationOptions& opts = {});

}  // namespace reference

/// Tool version and a hash of the library sources at build time.
const char* tool_version();
const char* source_digest();

}  // namespace stbc
