#pragma once

/// @file harness.hpp
/// @brief Monte Carlo CER sweeps, decoder equivalence audits, and the
/// table report.
///
/// Every trial draws its channel, noise and data from substreams keyed by
/// (seed, stream, trial index), so results do not depend on the number of
/// threads and runs with different decoders see identical realizations.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stbc/codebook.hpp"
#include "stbc/detector.hpp"

namespace stbc {

enum class DecoderKind { exhaustive, sphere, fast };

const char* to_string(DecoderKind k);
/// Throws ConfigInvalid for unknown names.
DecoderKind parse_decoder(const std::string& name);

struct SimConfig {
  std::string code = "family1";
  int mod = 4;
  std::vector<double> snr_db{6, 8, 10, 12, 14, 16, 18};
  int n_r = 2;
  std::uint64_t min_errors = 100;
  std::uint64_t max_trials = 1'000'000;
  std::uint64_t seed = 1;
  DecoderKind decoder = DecoderKind::sphere;
  int threads = 0;
};

/// Sets one key from its text value. Keys: code, mod, snr (comma list),
/// n_r, min_errors, max_trials, seed, decoder, threads. Throws ConfigInvalid.
void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment. Throws ConfigInvalid.
SimConfig parse_config(std::istream& is, SimConfig base = {});

/// Throws ConfigInvalid: empty or non-increasing SNR grid, zero budgets,
/// unsupported constellation.
void validate(const SimConfig& cfg);

/// Canonical text of every setting that affects results (threads excluded).
std::string canonical_config(const SimConfig& cfg);
/// FNV-1a of canonical_config, 16 hex digits.
std::string config_digest(const SimConfig& cfg);

/// The code scaled for transmission: E||X||_F^2 = T E_s.
LinearCode transmission_code(const LinearCode& code);

struct CerPoint {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double cer = 0.0;
  double mean_metric_evals = 0.0;
  double wall_time = 0.0;
};

/// Simulates each SNR point until min_errors codeword errors or max_trials.
/// Throws ConfigInvalid, NotFastDecodable, BudgetExceeded.
std::vector<CerPoint> run_cer(const SimConfig& cfg);

/// Comment header (tool, version, seed, config digest, settings) then CSV
/// with columns snr_db,trials,errors,cer,mean_metric_evals.
void write_cer_csv(std::ostream& os, const SimConfig& cfg, const std::vector<CerPoint>& pts);

struct AuditReport {
  std::string code;
  int mod = 0;
  std::uint64_t trials = 0;
  int k_prime = 0;
  bool fast_supported = false;
  std::uint64_t fast_disagreements = 0;
  std::uint64_t sphere_disagreements = 0;
  std::uint64_t max_fast_evals = 0;
  std::uint64_t max_sphere_evals = 0;
  std::uint64_t exhaustive_evals = 0;
  /// k' M^(kappa - k' + 1) for the detected k'.
  std::uint64_t fast_bound = 0;
};

/// Runs ml_exhaustive, sphere_decode and (when k' >= 1) fast_decode on the
/// same (H, Y) per trial. Throws BudgetExceeded when exhaustive is infeasible.
AuditReport audit_equivalence(const LinearCode& code, const Constellation& cons,
                              std::uint64_t trials, std::uint64_t seed, double snr_db = 10.0,
                              int n_r = 2, int threads = 0);

void write_audit_json(std::ostream& os, const AuditReport& r, std::uint64_t seed);

/// A reproduced table quantity: "mindet" (delta_min) or "rank2" (sum of
/// A(2, delta)) for one code and constellation size.
struct ResultRecord {
  std::string kind;
  std::string code;
  int mod = 0;
  double value = 0.0;
  std::string mode = "exhaustive";  ///< or "consistency"
};

void write_result_record(std::ostream& os, const ResultRecord& r);

/// Reads result lines and folds spectrum lines (r = 2 rows summed per code
/// and constellation) into rank2 results. Other lines are ignored.
std::vector<ResultRecord> read_result_records(std::istream& is);

/// Rows of both tables with reproduced and reference values. Throws
/// MissingResults naming the first absent quantity.
std::string report_tables(const std::vector<ResultRecord>& results);

}  // namespace stbc
