#pragma once

/// @file search.hpp
/// @brief Design-space searches: the rotation U = D P of the 4x2 code, and
/// coefficient optimizers for the two 2x2 families.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stbc/codebook.hpp"
#include "stbc/spectrum.hpp"

namespace stbc {

struct SearchRecord {
  int n_cap = 0;
  std::array<int, 4> n_exp{};
  /// Tuple whose U matrix this one duplicates (itself when unique).
  std::array<int, 4> representative{};
  std::uint64_t screen_objective = 0;  ///< rank-2 count over the restricted set
  bool exact = false;                  ///< objective comes from full enumeration
  std::uint64_t objective = 0;         ///< sum of A(2, delta), valid when exact
  std::string digest;                  ///< hash of the rank-2 histogram, when exact
  double wall_time = 0.0;              ///< seconds spent on the full evaluation
};

struct SearchUOptions {
  /// Candidates promoted to full enumeration, best screen first.
  std::size_t screen_budget = 16;
  /// Per-candidate enumeration budget; BudgetExceeded beyond it.
  std::uint64_t full_budget = kDefaultEnumerationBudget;
  /// Maximum number of nonzero symbol differences in the screening set.
  int screen_weight = 3;
  int constellation = 4;
  int threads = 0;
};

/// Two-stage search over n in {0..N}^4. Every tuple gets a record; tuples
/// with identical U share the evaluation of their representative. Returns
/// exact records ascending by (objective, tuple), then screened-only
/// records ascending by (screen objective, tuple). Throws OutOfRange for
/// N outside [1, 32].
std::vector<SearchRecord> search_u(int n_cap, const SearchUOptions& opts = {});

/// FNV-1a over the histogram rows, 16 hex digits.
std::string histogram_digest(const std::vector<SpectrumEntry>& rows);

/// One JSON object per line: a header with seed, budgets, tool version and
/// source digest, then one line per record. Wall times are left out so the
/// file is reproducible.
void write_search_records(std::ostream& os, const std::vector<SearchRecord>& records,
                          const SearchUOptions& opts, std::uint64_t seed);

struct Family1Result {
  double theta = 0.0, phase_a = 0.0, phase_b = 0.0;
  cplx phi1, phi2;  ///< cos(theta) e^{j phase_a}, sin(theta) e^{j phase_b}
  double delta_min = 0.0;
};

/// min_determinant of Family I at 4-QAM as a function of its angles.
double family1_objective(double theta, double phase_a, double phase_b);

/// Grid of grid_density^3 points over theta in [0, pi/2), phases in
/// [0, 2 pi), then Nelder-Mead polish from the best grid points.
Family1Result search_family1(int grid_density, int threads = 0);

struct Family2Result {
  double phase_34a = 0.0, phase_34b = 0.0;
  cplx a12, b12, a34, b34;
  double delta_min = 0.0;
};

/// min_determinant of Family II at 4-QAM with a12 = b12 = 1/sqrt(2),
/// a34 = e^{j pa}/sqrt(2), b34 = e^{j pb}/sqrt(2).
double family2_objective(double phase_a, double phase_b);

/// Grid of grid_density^2 phase pairs, then Nelder-Mead polish.
Family2Result search_family2(int grid_density, int threads = 0);

}  // namespace stbc
