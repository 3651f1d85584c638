#include "stbc/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "stbc/channel.hpp"
#include "stbc/error.hpp"
#include "stbc/spectrum.hpp"

namespace stbc {

const char* to_string(DecoderKind k) {
  switch (k) {
    case DecoderKind::exhaustive: return "exhaustive";
    case DecoderKind::sphere: return "sphere";
    case DecoderKind::fast: return "fast";
  }
  return "?";
}

DecoderKind parse_decoder(const std::string& name) {
  if (name == "exhaustive") return DecoderKind::exhaustive;
  if (name == "sphere") return DecoderKind::sphere;
  if (name == "fast") return DecoderKind::fast;
  throw Error(ErrorKind::ConfigInvalid, "unknown decoder '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    const auto x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigInvalid, key + ": expected a non-negative integer, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const auto x = parse_u64(key, v);
  if (x > 1'000'000) throw Error(ErrorKind::ConfigInvalid, key + ": value too large");
  return static_cast<int>(x);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument("bad");
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigInvalid, key + ": expected a number, got '" + v + "'");
  }
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

DecodeResult run_decoder(DecoderKind k, const CMat& y, const CMat& h, const LinearCode& code,
                         const Constellation& cons) {
  switch (k) {
    case DecoderKind::exhaustive: return ml_exhaustive(y, h, code, cons);
    case DecoderKind::sphere: return sphere_decode(y, h, code, cons);
    case DecoderKind::fast: return fast_decode(y, h, code, cons);
  }
  throw Error(ErrorKind::ConfigInvalid, "decoder");
}

struct Trial {
  CMat h, y;
  std::vector<int> sent;
};

Trial make_trial(const LinearCode& code, const Constellation& cons, int n_r, double n0,
                 std::uint64_t seed, std::uint64_t index) {
  Trial t;
  Rng crng(seed, static_cast<std::uint64_t>(Stream::channel), index);
  Rng drng(seed, static_cast<std::uint64_t>(Stream::data), index);
  Rng nrng(seed, static_cast<std::uint64_t>(Stream::noise), index);
  t.h = sample_channel(n_r, code.n_t(), crng);
  std::vector<cplx> s;
  for (int l = 0; l < code.kappa(); ++l) {
    const int i = static_cast<int>(drng.below(static_cast<std::uint32_t>(cons.m)));
    t.sent.push_back(i);
    s.push_back(cons.points[static_cast<std::size_t>(i)]);
  }
  t.y = transmit(encode(code, s), ChannelRealization{t.h, n0}, nrng);
  return t;
}

void set_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

constexpr std::uint64_t kBatch = 1024;

}  // namespace

void apply_setting(SimConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "code") {
    cfg.code = v;
  } else if (key == "mod") {
    cfg.mod = parse_int(key, v);
  } else if (key == "snr") {
    cfg.snr_db.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.snr_db.push_back(parse_double(key, trim(item)));
  } else if (key == "n_r") {
    cfg.n_r = parse_int(key, v);
  } else if (key == "min_errors") {
    cfg.min_errors = parse_u64(key, v);
  } else if (key == "max_trials") {
    cfg.max_trials = parse_u64(key, v);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, v);
  } else if (key == "decoder") {
    cfg.decoder = parse_decoder(v);
  } else if (key == "threads") {
    cfg.threads = parse_int(key, v);
  } else {
    throw Error(ErrorKind::ConfigInvalid, "unknown config key '" + key + "'");
  }
}

SimConfig parse_config(std::istream& is, SimConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigInvalid,
                  "line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

void validate(const SimConfig& cfg) {
  if (cfg.snr_db.empty()) throw Error(ErrorKind::ConfigInvalid, "empty SNR grid");
  for (std::size_t i = 1; i < cfg.snr_db.size(); ++i)
    if (!(cfg.snr_db[i] > cfg.snr_db[i - 1]))
      throw Error(ErrorKind::ConfigInvalid, "SNR grid must be strictly increasing");
  if (cfg.max_trials == 0) throw Error(ErrorKind::ConfigInvalid, "max_trials must be positive");
  if (cfg.min_errors == 0) throw Error(ErrorKind::ConfigInvalid, "min_errors must be positive");
  if (cfg.n_r < 1) throw Error(ErrorKind::ConfigInvalid, "n_r must be positive");
  if (cfg.mod != 4 && cfg.mod != 16 && cfg.mod != 64)
    throw Error(ErrorKind::ConfigInvalid, "mod must be 4, 16 or 64");
}

std::string canonical_config(const SimConfig& cfg) {
  std::ostringstream os;
  os << "code=" << cfg.code << '\n' << "mod=" << cfg.mod << '\n' << "snr=";
  for (std::size_t i = 0; i < cfg.snr_db.size(); ++i)
    os << (i ? "," : "") << fmt("%.17g", cfg.snr_db[i]);
  os << '\n'
     << "n_r=" << cfg.n_r << '\n'
     << "min_errors=" << cfg.min_errors << '\n'
     << "max_trials=" << cfg.max_trials << '\n'
     << "seed=" << cfg.seed << '\n'
     << "decoder=" << to_string(cfg.decoder) << '\n';
  return os.str();
}

std::string config_digest(const SimConfig& cfg) { return hex64(fnv1a(canonical_config(cfg))); }

LinearCode transmission_code(const LinearCode& code) {
  const LinearCode unit = code.energy_normalized();
  return unit.scaled(std::sqrt(static_cast<double>(code.t()) / code.kappa()));
}

std::vector<CerPoint> run_cer(const SimConfig& cfg) {
  validate(cfg);
  const LinearCode code = transmission_code(make_code(cfg.code));
  const Constellation cons = Constellation::qam(cfg.mod);
  if (cfg.decoder == DecoderKind::fast) {
    // Structural check on a fixed channel before any trial runs.
    Rng probe(cfg.seed, static_cast<std::uint64_t>(Stream::channel), 0);
    if (equivalent_channel(sample_channel(cfg.n_r, code.n_t(), probe), code).k_prime < 1)
      throw Error(ErrorKind::NotFastDecodable, cfg.code + " has k' = 0");
  }
  if (cfg.decoder == DecoderKind::exhaustive &&
      std::pow(static_cast<double>(cons.m), code.kappa()) >
          static_cast<double>(kDefaultExhaustiveBudget))
    throw Error(ErrorKind::BudgetExceeded, "exhaustive decoding of " + cfg.code + " exceeds budget");
  set_threads(cfg.threads);

  std::vector<CerPoint> out;
  std::vector<unsigned char> err(kBatch);
  std::vector<std::uint64_t> evals(kBatch);
  for (double snr : cfg.snr_db) {
    const auto t0 = std::chrono::steady_clock::now();
    const double n0 = snr_to_n0(snr, code.n_t(), cons.e_s);
    CerPoint p;
    p.snr_db = snr;
    std::uint64_t eval_sum = 0;
    bool stop = false;
    while (!stop && p.trials < cfg.max_trials) {
      const std::uint64_t base = p.trials;
      const std::uint64_t n = std::min(kBatch, cfg.max_trials - base);
#pragma omp parallel for schedule(dynamic, 16)
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const Trial t = make_trial(code, cons, cfg.n_r, n0, cfg.seed, base + ui);
        const DecodeResult r = run_decoder(cfg.decoder, t.y, t.h, code, cons);
        err[ui] = r.s_hat != t.sent;
        evals[ui] = r.metric_evals;
      }
      // Ordered scan: stop at the exact trial where the error target is hit.
      for (std::uint64_t i = 0; i < n; ++i) {
        ++p.trials;
        p.errors += err[i];
        eval_sum += evals[i];
        if (p.errors >= cfg.min_errors) {
          stop = true;
          break;
        }
      }
    }
    p.cer = static_cast<double>(p.errors) / static_cast<double>(p.trials);
    p.mean_metric_evals = static_cast<double>(eval_sum) / static_cast<double>(p.trials);
    p.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(p);
  }
  return out;
}

void write_cer_csv(std::ostream& os, const SimConfig& cfg, const std::vector<CerPoint>& pts) {
  os << "# tool=stbc version=" << tool_version() << " source_digest=" << source_digest() << '\n'
     << "# seed=" << cfg.seed << " config_digest=" << config_digest(cfg) << '\n'
     << "# code=" << cfg.code << " mod=" << cfg.mod << " decoder=" << to_string(cfg.decoder)
     << " n_r=" << cfg.n_r << " min_errors=" << cfg.min_errors
     << " max_trials=" << cfg.max_trials << '\n'
     << "snr_db,trials,errors,cer,mean_metric_evals\n";
  for (const auto& p : pts)
    os << fmt("%.6g", p.snr_db) << ',' << p.trials << ',' << p.errors << ','
       << fmt("%.9e", p.cer) << ',' << fmt("%.6f", p.mean_metric_evals) << '\n';
}

AuditReport audit_equivalence(const LinearCode& code_in, const Constellation& cons,
                              std::uint64_t trials, std::uint64_t seed, double snr_db, int n_r,
                              int threads) {
  const LinearCode code = transmission_code(code_in);
  if (std::pow(static_cast<double>(cons.m), code.kappa()) >
      static_cast<double>(kDefaultExhaustiveBudget))
    throw Error(ErrorKind::BudgetExceeded, "audit: exhaustive decoding exceeds budget");
  AuditReport rep;
  rep.code = code.name();
  rep.mod = cons.m;
  rep.trials = trials;
  {
    Rng probe(seed, static_cast<std::uint64_t>(Stream::channel), 0);
    rep.k_prime = equivalent_channel(sample_channel(n_r, code.n_t(), probe), code).k_prime;
  }
  rep.fast_supported = rep.k_prime >= 1;
  if (rep.fast_supported) {
    std::uint64_t b = static_cast<std::uint64_t>(rep.k_prime);
    for (int i = 0; i < code.kappa() - rep.k_prime + 1; ++i) b *= static_cast<std::uint64_t>(cons.m);
    rep.fast_bound = b;
  }
  const double n0 = snr_to_n0(snr_db, code.n_t(), cons.e_s);
  struct Outcome {
    bool fast_ok = true, sphere_ok = true;
    std::uint64_t fast_evals = 0, sphere_evals = 0, ex_evals = 0;
  };
  std::vector<Outcome> outcomes(trials);
  set_threads(threads);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(trials); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Trial t = make_trial(code, cons, n_r, n0, seed, ui);
    const DecodeResult ex = ml_exhaustive(t.y, t.h, code, cons);
    const DecodeResult sd = sphere_decode(t.y, t.h, code, cons);
    Outcome& o = outcomes[ui];
    o.ex_evals = ex.metric_evals;
    o.sphere_ok = sd.s_hat == ex.s_hat;
    o.sphere_evals = sd.metric_evals;
    if (rep.fast_supported) {
      const DecodeResult fd = fast_decode(t.y, t.h, code, cons);
      o.fast_ok = fd.s_hat == ex.s_hat;
      o.fast_evals = fd.metric_evals;
    }
  }
  for (const auto& o : outcomes) {
    rep.fast_disagreements += !o.fast_ok;
    rep.sphere_disagreements += !o.sphere_ok;
    rep.max_fast_evals = std::max(rep.max_fast_evals, o.fast_evals);
    rep.max_sphere_evals = std::max(rep.max_sphere_evals, o.sphere_evals);
    rep.exhaustive_evals = std::max(rep.exhaustive_evals, o.ex_evals);
  }
  return rep;
}

void write_audit_json(std::ostream& os, const AuditReport& r, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["type"] = "audit";
  j["tool"] = "stbc";
  j["version"] = tool_version();
  j["seed"] = seed;
  j["code"] = r.code;
  j["mod"] = r.mod;
  j["trials"] = r.trials;
  j["k_prime"] = r.k_prime;
  j["fast_supported"] = r.fast_supported;
  j["fast_disagreements"] = r.fast_disagreements;
  j["sphere_disagreements"] = r.sphere_disagreements;
  j["max_fast_metric_evals"] = r.max_fast_evals;
  j["fast_bound"] = r.fast_bound;
  j["max_sphere_metric_evals"] = r.max_sphere_evals;
  j["exhaustive_metric_evals"] = r.exhaustive_evals;
  os << j.dump() << '\n';
}

void write_result_record(std::ostream& os, const ResultRecord& r) {
  nlohmann::ordered_json j;
  j["type"] = "result";
  j["kind"] = r.kind;
  j["code"] = r.code;
  j["mod"] = r.mod;
  j["value"] = r.value;
  j["mode"] = r.mode;
  os << j.dump() << '\n';
}

std::vector<ResultRecord> read_result_records(std::istream& is) {
  std::vector<ResultRecord> out;
  std::map<std::pair<std::string, int>, double> rank2;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorKind::MissingResults, "unreadable result line: " + line.substr(0, 80));
    }
    const std::string type = j.value("type", "");
    if (type == "result") {
      out.push_back({j.at("kind").get<std::string>(), j.at("code").get<std::string>(),
                     j.at("mod").get<int>(), j.at("value").get<double>(),
                     j.value("mode", "exhaustive")});
    } else if (type == "spectrum" && j.at("r").get<int>() == 2) {
      rank2[{j.at("code").get<std::string>(), j.at("mod").get<int>()}] +=
          static_cast<double>(j.at("count").get<std::uint64_t>());
    }
  }
  for (const auto& [key, total] : rank2) out.push_back({"rank2", key.first, key.second, total});
  return out;
}

std::string report_tables(const std::vector<ResultRecord>& results) {
  auto find = [&](const std::string& kind, const std::string& code, int mod) -> const ResultRecord& {
    // Later records win, so a rerun appended to a file replaces the old value.
    for (auto it = results.rbegin(); it != results.rend(); ++it)
      if (it->kind == kind && it->code == code && it->mod == mod) return *it;
    throw Error(ErrorKind::MissingResults,
                "missing " + kind + " result for " + code + " at " + std::to_string(mod) + "-QAM");
  };
  struct Row {
    const char* label;
    const char* code;
    double ref[3];
  };
  static const Row table1[] = {
      {"1st Family", "family1", {2.2857, 2.2857, 2.2857}},
      {"2nd Family", "family2", {1.9973, 1.9796, 1.8784}},
      {"Golden Code", "golden", {3.2, 3.2, 3.2}},
  };
  static const int mods[3] = {4, 16, 64};
  std::ostringstream os;
  os << "Minimum determinant delta_min (reproduced / reference)\n";
  os << "code          4-QAM                 16-QAM                64-QAM\n";
  for (const auto& row : table1) {
    char label[16];
    std::snprintf(label, sizeof label, "%-13s", row.label);
    os << label;
    for (int k = 0; k < 3; ++k) {
      const auto& r = find("mindet", row.code, mods[k]);
      bool ok = false;
      if (std::string(row.code) == "golden") ok = std::abs(r.value - 3.2) <= 1e-9 * 3.2;
      else if (std::string(row.code) == "family1") ok = r.value >= row.ref[k] - 1e-3;
      else ok = r.value >= row.ref[k] - 1e-2;
      char cell[64];
      std::snprintf(cell, sizeof cell, " %.4f/%.4f %s%s", r.value, row.ref[k], ok ? "ok" : "FAIL",
                    r.mode == "consistency" ? "*" : " ");
      os << cell;
    }
    os << '\n';
  }
  os << "(* consistency mode: witness plus random sampling)\n\n";
  const auto& md = find("mindet", "new4x2-4qam", 4);
  const auto& r2 = find("rank2", "new4x2-4qam", 4);
  os << "Rank-2 4x2 code at 4-QAM (reproduced / reference)\n";
  char line[160];
  std::snprintf(line, sizeof line, "New STBC     delta_min %.4f/0 %s   sum A(2,delta) %.0f/160 %s\n",
                md.value, md.value == 0.0 ? "ok" : "FAIL", r2.value,
                r2.value == 160.0 ? "ok" : "FAIL");
  os << line;
  return os.str();
}

}  // namespace stbc
