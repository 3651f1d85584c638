// Command-line front end: spectrum, mindet, search-u, search-family, cer,
// audit, tables.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stbc/error.hpp"
#include "stbc/harness.hpp"
#include "stbc/search.hpp"
#include "stbc/spectrum.hpp"

namespace {

using namespace stbc;

// Settings shared by every subcommand; a config file is read first and the
// flags given on the command line override it.
struct Common {
  std::string config_path;
  std::string code, mod, snr, seed, threads, decoder, min_errors, max_trials, n_r;
  std::string out;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "flat key=value config file");
    app->add_option("--code", code, "code name");
    app->add_option("--mod", mod, "QAM size (4, 16, 64)");
    app->add_option("--snr", snr, "comma-separated SNR grid in dB");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--threads", threads, "OpenMP threads (0: default)");
    app->add_option("--decoder", decoder, "exhaustive | sphere | fast");
    app->add_option("--min-errors", min_errors, "codeword errors per SNR point");
    app->add_option("--max-trials", max_trials, "trial cap per SNR point");
    app->add_option("--n-r", n_r, "receive antennas");
    app->add_option("--out", out, "output path (stdout when omitted)");
  }

  SimConfig resolve() const {
    SimConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open config " + config_path);
      cfg = parse_config(in, cfg);
    }
    const std::pair<const char*, const std::string*> overrides[] = {
        {"code", &code},       {"mod", &mod},
        {"snr", &snr},         {"seed", &seed},
        {"threads", &threads}, {"decoder", &decoder},
        {"min_errors", &min_errors}, {"max_trials", &max_trials},
        {"n_r", &n_r},
    };
    for (const auto& [key, value] : overrides)
      if (!value->empty()) apply_setting(cfg, key, *value);
    return cfg;
  }
};

// Output goes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::ConfigInvalid, "cannot open output " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_header(std::ostream& os, const std::string& kind, const SimConfig& cfg) {
  nlohmann::ordered_json h;
  h["type"] = "header";
  h["kind"] = kind;
  h["tool"] = "stbc";
  h["version"] = tool_version();
  h["source_digest"] = source_digest();
  h["seed"] = cfg.seed;
  h["config_digest"] = config_digest(cfg);
  os << h.dump() << '\n';
}

EnumerationOptions enum_opts(const SimConfig& cfg) {
  EnumerationOptions o;
  o.threads = cfg.threads;
  return o;
}

void cmd_spectrum(const Common& c, bool detail) {
  const SimConfig cfg = c.resolve();
  const LinearCode code = make_code(cfg.code);
  const Constellation cons = Constellation::qam(cfg.mod);
  const auto rows = distance_spectrum(code, cons, detail, enum_opts(cfg));
  Sink sink(c.out);
  write_spectrum_records(sink.os(), {"spectrum", cfg.seed, config_digest(cfg)}, cfg.code, cfg.mod,
                         union_bound_terms(rows));
}

void cmd_mindet(const Common& c, std::uint64_t samples) {
  const SimConfig cfg = c.resolve();
  const LinearCode code = make_code(cfg.code);
  const Constellation cons = Constellation::qam(cfg.mod);
  const EnumerationOptions opts = enum_opts(cfg);
  Sink sink(c.out);
  write_header(sink.os(), "mindet", cfg);
  try {
    write_result_record(sink.os(), {"mindet", cfg.code, cfg.mod, min_determinant(code, cons, opts)});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    const ConsistencyReport rep = min_determinant_consistency(code, cons, samples, cfg.seed, opts);
    nlohmann::ordered_json j;
    j["type"] = "consistency";
    j["code"] = cfg.code;
    j["mod"] = cfg.mod;
    j["witness_found"] = rep.witness_found;
    j["witness_det"] = rep.witness_det;
    j["samples"] = rep.samples;
    j["rank_deficient"] = rep.rank_deficient;
    j["sample_min_det"] = rep.sample_min_det;
    sink.os() << j.dump() << '\n';
    // The reported value is the witness determinant, valid as delta_min when
    // no sample falls below it.
    const bool consistent = rep.witness_found && rep.rank_deficient == 0 &&
                            rep.sample_min_det >= rep.witness_det * (1 - 1e-9);
    write_result_record(sink.os(), {"mindet", cfg.code, cfg.mod,
                                    consistent ? rep.witness_det : rep.sample_min_det,
                                    "consistency"});
  }
}

void cmd_search_u(const Common& c, int n_cap, const SearchUOptions& base) {
  const SimConfig cfg = c.resolve();
  SearchUOptions opts = base;
  opts.constellation = cfg.mod;
  opts.threads = cfg.threads;
  const auto records = search_u(n_cap, opts);
  Sink sink(c.out);
  write_search_records(sink.os(), records, opts, cfg.seed);
  for (const auto& r : records)
    if (r.exact && r.representative == r.n_exp)
      std::fprintf(stderr, "search-u: N=%d n=(%d,%d,%d,%d) objective=%llu wall=%.2fs\n", r.n_cap,
                   r.n_exp[0], r.n_exp[1], r.n_exp[2], r.n_exp[3],
                   static_cast<unsigned long long>(r.objective), r.wall_time);
}

void cmd_search_family(const Common& c, int family, int grid) {
  const SimConfig cfg = c.resolve();
  Sink sink(c.out);
  write_header(sink.os(), "search-family", cfg);
  nlohmann::ordered_json j;
  j["type"] = "search-family";
  j["family"] = family;
  j["grid"] = grid;
  auto cpx = [](cplx v) { return nlohmann::json::array({v.real(), v.imag()}); };
  if (family == 1) {
    const auto r = search_family1(grid, cfg.threads);
    j["theta"] = r.theta;
    j["phase_a"] = r.phase_a;
    j["phase_b"] = r.phase_b;
    j["phi1"] = cpx(r.phi1);
    j["phi2"] = cpx(r.phi2);
    j["delta_min_4qam"] = r.delta_min;
    j["delta_min_16qam"] =
        min_determinant(make_family1(r.phi1, r.phi2), Constellation::qam(16), enum_opts(cfg));
  } else if (family == 2) {
    const auto r = search_family2(grid, cfg.threads);
    j["phase_34a"] = r.phase_34a;
    j["phase_34b"] = r.phase_34b;
    j["a12"] = cpx(r.a12);
    j["b12"] = cpx(r.b12);
    j["a34"] = cpx(r.a34);
    j["b34"] = cpx(r.b34);
    j["delta_min_4qam"] = r.delta_min;
    j["delta_min_16qam"] = min_determinant(make_family2(r.a12, r.b12, r.a34, r.b34),
                                           Constellation::qam(16), enum_opts(cfg));
  } else {
    throw Error(ErrorKind::ConfigInvalid, "--family must be 1 or 2");
  }
  sink.os() << j.dump() << '\n';
}

void cmd_cer(const Common& c) {
  const SimConfig cfg = c.resolve();
  const auto pts = run_cer(cfg);
  Sink sink(c.out);
  write_cer_csv(sink.os(), cfg, pts);
  for (const auto& p : pts)
    std::fprintf(stderr, "cer: snr=%g trials=%llu errors=%llu wall=%.2fs\n", p.snr_db,
                 static_cast<unsigned long long>(p.trials),
                 static_cast<unsigned long long>(p.errors), p.wall_time);
}

void cmd_audit(const Common& c, std::uint64_t trials) {
  const SimConfig cfg = c.resolve();
  const double snr = cfg.snr_db.front();
  const auto rep = audit_equivalence(make_code(cfg.code), Constellation::qam(cfg.mod), trials,
                                     cfg.seed, snr, cfg.n_r, cfg.threads);
  Sink sink(c.out);
  write_audit_json(sink.os(), rep, cfg.seed);
}

void cmd_tables(const Common& c, const std::vector<std::string>& inputs) {
  std::vector<ResultRecord> all;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MissingResults, "cannot open results " + path);
    auto recs = read_result_records(in);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  const std::string text = report_tables(all);
  Sink sink(c.out);
  sink.os() << text;
}

void emit_error(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time block code analysis toolkit"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  Common common;
  bool detail = false;
  std::uint64_t samples = 10'000'000;
  int n_cap = 7, family = 1, grid = 16;
  SearchUOptions su;
  std::uint64_t trials = 1000;
  std::vector<std::string> inputs;

  auto* spectrum = app.add_subcommand("spectrum", "distance spectrum A(r, delta)");
  common.add_to(spectrum);
  spectrum->add_flag("--full-rank-detail", detail, "bin every full-rank delta");

  auto* mindet = app.add_subcommand("mindet", "minimum determinant");
  common.add_to(mindet);
  mindet->add_option("--samples", samples, "consistency-mode sample count");

  auto* search = app.add_subcommand("search-u", "search over U = D P for the 4x2 code");
  common.add_to(search);
  search->add_option("--n-cap", n_cap, "N");
  search->add_option("--screen-budget", su.screen_budget, "candidates given full enumeration");
  search->add_option("--full-budget", su.full_budget, "per-candidate enumeration budget");
  search->add_option("--screen-weight", su.screen_weight, "max nonzero symbols in the screen");

  auto* sfam = app.add_subcommand("search-family", "coefficient search for the 2x2 families");
  common.add_to(sfam);
  sfam->add_option("--family", family, "1 or 2");
  sfam->add_option("--grid", grid, "grid density per parameter");

  auto* cer = app.add_subcommand("cer", "Monte Carlo codeword error rate");
  common.add_to(cer);

  auto* audit = app.add_subcommand("audit", "decoder equivalence audit");
  common.add_to(audit);
  audit->add_option("--trials", trials, "trials");

  auto* tables = app.add_subcommand("tables", "render reproduced tables from result files");
  common.add_to(tables);
  tables->add_option("--in", inputs, "result files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("UsageError", e.what());
    return 2;
  }

  try {
    if (*spectrum) cmd_spectrum(common, detail);
    else if (*mindet) cmd_mindet(common, samples);
    else if (*search) cmd_search_u(common, n_cap, su);
    else if (*sfam) cmd_search_family(common, family, grid);
    else if (*cer) cmd_cer(common);
    else if (*audit) cmd_audit(common, trials);
    else if (*tables) cmd_tables(common, inputs);
  } catch (const Error& e) {
    emit_error(std::string(to_string(e.kind())), e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("InternalError", e.what());
    return 1;
  }
  return 0;
}
