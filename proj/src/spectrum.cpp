#include "stbc/spectrum.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "json.hpp"
#include "stbc/channel.hpp"
#include "stbc/error.hpp"

namespace stbc {

const char* tool_version() { return STBC_VERSION; }
const char* source_digest() { return STBC_SOURCE_DIGEST; }

std::vector<cplx> difference_set(const Constellation& cons) {
  const auto pam = cons.pam();
  std::set<double> d1;
  for (double a : pam)
    for (double b : pam) d1.insert(a - b);
  std::vector<cplx> out;
  for (double re : d1)
    for (double im : d1) out.emplace_back(re, im);
  return out;
}

double delta_bin(double delta) {
  if (delta == 0.0 || !std::isfinite(delta)) return delta;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", delta);
  return std::strtod(buf, nullptr);
}

namespace {

// Elementary symmetric polynomial e_r of the eigenvalues of a Hermitian
// n x n matrix = sum of its principal r x r minors.
double principal_minor_sum(const CMat& e, int r) {
  const int n = static_cast<int>(e.rows());
  double sum = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != r) continue;
    std::vector<std::size_t> sel;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sel.push_back(static_cast<std::size_t>(i));
    CMat sub(sel.size(), sel.size());
    for (std::size_t a = 0; a < sel.size(); ++a)
      for (std::size_t b = 0; b < sel.size(); ++b) sub(a, b) = e(sel[a], sel[b]);
    sum += determinant(sub).real();
  }
  return sum;
}

// Rank and product distance of X given as n_t x T row-major cells. The rank
// uses a pivot threshold of sqrt(rank_tol) * max|x| (singular values, not
// eigenvalues of E); delta is e_r(E) for the detected rank r.
struct Analysis {
  int rank = 0;
  double delta = 0.0;
};

constexpr std::size_t kMaxCells = 16;

Analysis analyze(const cplx* x, int n_t, int t, double pivot_rel, bool want_delta) {
  std::array<cplx, kMaxCells> m;
  const int cells = n_t * t;
  double scale = 0.0;
  for (int k = 0; k < cells; ++k) {
    m[static_cast<std::size_t>(k)] = x[k];
    scale = std::max(scale, std::abs(x[k].real()) + std::abs(x[k].imag()));
  }
  Analysis out;
  if (scale == 0.0) return out;
  const double tol = pivot_rel * scale;
  double det_mod2 = 1.0;
  int row = 0;
  for (int c = 0; c < t && row < n_t; ++c) {
    int piv = row;
    double best = std::norm(m[static_cast<std::size_t>(row * t + c)]);
    for (int i = row + 1; i < n_t; ++i) {
      const double v = std::norm(m[static_cast<std::size_t>(i * t + c)]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= tol * tol) continue;
    if (piv != row)
      for (int j = 0; j < t; ++j)
        std::swap(m[static_cast<std::size_t>(piv * t + j)], m[static_cast<std::size_t>(row * t + j)]);
    const cplx p = m[static_cast<std::size_t>(row * t + c)];
    det_mod2 *= best;
    for (int i = row + 1; i < n_t; ++i) {
      const cplx f = m[static_cast<std::size_t>(i * t + c)] / p;
      if (f == cplx{}) continue;
      for (int j = c; j < t; ++j)
        m[static_cast<std::size_t>(i * t + j)] -= f * m[static_cast<std::size_t>(row * t + j)];
    }
    ++row;
  }
  out.rank = row;
  if (!want_delta) return out;
  if (out.rank == n_t && n_t == t) {
    out.delta = det_mod2;  // det(X X^dagger) = |det X|^2
    return out;
  }
  CMat e(static_cast<std::size_t>(n_t), static_cast<std::size_t>(n_t));
  for (int i = 0; i < n_t; ++i)
    for (int j = 0; j < n_t; ++j) {
      cplx s{};
      for (int k = 0; k < t; ++k) s += x[i * t + k] * std::conj(x[j * t + k]);
      e(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = s;
    }
  if (out.rank == 2) {
    double s = 0.0;
    for (int i = 0; i < n_t; ++i)
      for (int j = i + 1; j < n_t; ++j)
        s += e(static_cast<std::size_t>(i), static_cast<std::size_t>(i)).real() *
                 e(static_cast<std::size_t>(j), static_cast<std::size_t>(j)).real() -
             std::norm(e(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    out.delta = s;
  } else {
    out.delta = principal_minor_sum(e, out.rank);
  }
  return out;
}

// Necessary condition for rank <= 2: the leading 3x3 minor is zero. Loose
// relative threshold, so it only discards matrices that are clearly rank >= 3.
bool leading_minor_vanishes(const cplx* x, int t, double pivot_rel) {
  double scale2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale2 = std::max(scale2, std::norm(x[i * t + j]));
  if (scale2 == 0.0) return true;
  auto at = [&](int i, int j) { return x[i * t + j]; };
  const cplx m = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
                 at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
                 at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  const double bound = 6.0 * pivot_rel;
  return std::norm(m) <= bound * bound * scale2 * scale2 * scale2;
}

// Difference vectors split into a leading and trailing half; X = A[i] + B[k].
struct SplitTables {
  int n_t = 0, t = 0;
  std::size_t cells = 0;
  std::size_t count_a = 0, count_b = 0;
  std::vector<cplx> a, b;
};

std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) v *= base;
  return v;
}

void check_budget(std::size_t diff_size, int kappa, std::uint64_t budget) {
  double total = std::pow(static_cast<double>(diff_size), kappa);
  if (total > static_cast<double>(budget))
    throw Error(ErrorKind::BudgetExceeded,
                "enumeration of " + std::to_string(diff_size) + "^" + std::to_string(kappa) +
                    " difference vectors exceeds budget " + std::to_string(budget));
}

// Per-slot, per-difference contribution X_l(d) = Re(d) A_l + j Im(d) B_l.
std::vector<std::vector<CMat>> slot_contributions(const LinearCode& code,
                                                  const std::vector<cplx>& diffs) {
  std::vector<std::vector<CMat>> c(static_cast<std::size_t>(code.kappa()));
  for (std::size_t l = 0; l < c.size(); ++l)
    for (const cplx& d : diffs) {
      CMat x = code.disp_a()[l] * cplx{d.real()};
      x += code.disp_b()[l] * cplx{0, d.imag()};
      c[l].push_back(std::move(x));
    }
  return c;
}

void fill_half(std::vector<cplx>& out, const std::vector<std::vector<CMat>>& contrib,
               std::size_t first, std::size_t last, std::size_t diff_size, std::size_t cells) {
  const int slots = static_cast<int>(last - first);
  const std::uint64_t count = ipow(diff_size, slots);
  out.assign(count * cells, cplx{});
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t rem = i;
    for (int s = slots - 1; s >= 0; --s) {
      const std::size_t d = rem % diff_size;
      rem /= diff_size;
      const auto& m = contrib[first + static_cast<std::size_t>(s)][d].data();
      for (std::size_t k = 0; k < cells; ++k) out[i * cells + k] += m[k];
    }
  }
}

SplitTables make_split(const LinearCode& code, const std::vector<cplx>& diffs) {
  SplitTables st;
  st.n_t = code.n_t();
  st.t = code.t();
  st.cells = static_cast<std::size_t>(st.n_t * st.t);
  if (st.cells > kMaxCells)
    throw Error(ErrorKind::DimensionMismatch, "spectrum kernels support n_t * T <= 16");
  const auto contrib = slot_contributions(code, diffs);
  const std::size_t kappa = static_cast<std::size_t>(code.kappa());
  const std::size_t half = kappa / 2;
  const std::size_t d = diffs.size();
  fill_half(st.a, contrib, 0, half, d, st.cells);
  fill_half(st.b, contrib, half, kappa, d, st.cells);
  st.count_a = st.a.size() / st.cells;
  st.count_b = st.b.size() / st.cells;
  return st;
}

// Visits one representative of each {d, -d} pair of nonzero difference
// vectors whose leading half has index i, passing weight 2: X(-d) = -X(d)
// exactly, with the same rank and delta. The pair index map is
// i -> count - 1 - i because the difference set is sorted and symmetric.
// `fn` returns false to abandon the row.
template <typename Fn>
void visit_row(const SplitTables& st, std::size_t i, std::array<cplx, kMaxCells>& x, Fn&& fn) {
  const std::size_t neg_i = st.count_a - 1 - i;
  if (i > neg_i) return;
  const cplx* a = &st.a[i * st.cells];
  for (std::size_t k = 0; k < st.count_b; ++k) {
    if (i == neg_i && k >= st.count_b - 1 - k) continue;
    const cplx* b = &st.b[k * st.cells];
    for (std::size_t c = 0; c < st.cells; ++c) x[c] = a[c] + b[c];
    if (!fn(x.data(), std::uint64_t{2})) return;
  }
}

double pivot_tolerance(double rank_tol) { return std::sqrt(rank_tol); }

void set_threads(const EnumerationOptions& opts) {
  if (opts.threads > 0) omp_set_num_threads(opts.threads);
}

using HistKey = std::pair<int, double>;
using Histogram = std::map<HistKey, std::uint64_t>;

template <typename Visit>
void for_each_restricted(std::size_t kappa, std::size_t diff_size, std::size_t zero,
                         int max_weight, Visit&& visit) {
  std::vector<std::size_t> idx(kappa, zero);
  std::vector<std::size_t> nonzero;
  for (std::size_t d = 0; d < diff_size; ++d)
    if (d != zero) nonzero.push_back(d);
  for (unsigned mask = 1; mask < (1u << kappa); ++mask) {
    const int w = std::popcount(mask);
    if (w > max_weight) continue;
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < kappa; ++i)
      if (mask & (1u << i)) pos.push_back(i);
    std::vector<std::size_t> digit(pos.size(), 0);
    while (true) {
      for (std::size_t p = 0; p < pos.size(); ++p) idx[pos[p]] = nonzero[digit[p]];
      visit(idx);
      std::size_t p = pos.size();
      bool wrapped = true;
      while (p > 0) {
        --p;
        if (++digit[p] < nonzero.size()) {
          wrapped = false;
          break;
        }
        digit[p] = 0;
      }
      if (wrapped) break;
    }
    for (std::size_t p : pos) idx[p] = zero;
  }
}

Rank2Result to_rank2(const Histogram& h) {
  Rank2Result r;
  for (const auto& [key, count] : h) {
    r.histogram.push_back({key.first, key.second, count});
    r.total += count;
  }
  return r;
}

}  // namespace

DistanceInfo codeword_distance(const LinearCode& code, std::span<const cplx> ds,
                               double rank_tol) {
  if (std::all_of(ds.begin(), ds.end(), [](const cplx& v) { return v == cplx{}; }))
    throw Error(ErrorKind::ZeroDifference, "codeword_distance: zero difference vector");
  const CMat x = encode(code, ds);
  const CMat e = x * adjoint(x);
  const RVec ev = hermitian_eigenvalues(e);
  const double lmax = ev.back();
  DistanceInfo info;
  info.delta = 1.0;
  info.det = 1.0;
  for (double l : ev) {
    info.det *= l;
    if (l > rank_tol * lmax) {
      ++info.rank;
      info.delta *= l;
    }
  }
  if (info.rank < static_cast<int>(ev.size())) info.det = 0.0;
  return info;
}

double min_determinant(const LinearCode& code, const Constellation& cons,
                       const EnumerationOptions& opts) {
  const auto diffs = difference_set(cons);
  check_budget(diffs.size(), code.kappa(), opts.budget);
  const SplitTables st = make_split(code, diffs);
  const double piv = pivot_tolerance(opts.rank_tol);
  const int n_t = st.n_t;
  double global_min = std::numeric_limits<double>::infinity();
  // Once a rank-deficient difference is seen the answer is 0 regardless of
  // which thread found it, so the remaining rows can be skipped.
  std::atomic<bool> found_zero{false};
  set_threads(opts);
#pragma omp parallel
  {
    double local = std::numeric_limits<double>::infinity();
    std::array<cplx, kMaxCells> x;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(st.count_a); ++i) {
      if (found_zero.load(std::memory_order_relaxed)) continue;
      visit_row(st, static_cast<std::size_t>(i), x, [&](const cplx* xd, std::uint64_t) {
        const Analysis an = analyze(xd, n_t, st.t, piv, true);
        if (an.rank < n_t) {
          local = 0.0;
          found_zero.store(true, std::memory_order_relaxed);
          return false;
        }
        local = std::min(local, an.delta);
        return true;
      });
    }
#pragma omp critical
    global_min = std::min(global_min, local);
  }
  return global_min;
}

Rank2Result rank2_multiplicity(const LinearCode& code, const Constellation& cons,
                               const EnumerationOptions& opts) {
  const auto diffs = difference_set(cons);
  check_budget(diffs.size(), code.kappa(), opts.budget);
  const SplitTables st = make_split(code, diffs);
  const double piv = pivot_tolerance(opts.rank_tol);
  const bool minor_filter = st.n_t >= 3 && st.t >= 3;
  Histogram merged;
  set_threads(opts);
#pragma omp parallel
  {
    Histogram local;
    std::array<cplx, kMaxCells> x;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(st.count_a); ++i) {
      visit_row(st, static_cast<std::size_t>(i), x, [&](const cplx* xd, std::uint64_t w) {
        if (minor_filter && !leading_minor_vanishes(xd, st.t, piv)) return true;
        if (analyze(xd, st.n_t, st.t, piv, false).rank != 2) return true;
        local[{2, delta_bin(analyze(xd, st.n_t, st.t, piv, true).delta)}] += w;
        return true;
      });
    }
#pragma omp critical
    for (const auto& [key, count] : local) merged[key] += count;
  }
  return to_rank2(merged);
}

Rank2Result rank2_multiplicity_restricted(const LinearCode& code, const Constellation& cons,
                                          int max_weight, const EnumerationOptions& opts) {
  const auto diffs = difference_set(cons);
  const auto contrib = slot_contributions(code, diffs);
  const std::size_t cells = static_cast<std::size_t>(code.n_t() * code.t());
  if (cells > kMaxCells)
    throw Error(ErrorKind::DimensionMismatch, "spectrum kernels support n_t * T <= 16");
  const double piv = pivot_tolerance(opts.rank_tol);
  const bool minor_filter = code.n_t() >= 3 && code.t() >= 3;
  Histogram h;
  std::array<cplx, kMaxCells> x;
  for_each_restricted(static_cast<std::size_t>(code.kappa()), diffs.size(), diffs.size() / 2,
                      max_weight, [&](const std::vector<std::size_t>& idx) {
                        x.fill(cplx{});
                        for (std::size_t l = 0; l < idx.size(); ++l) {
                          const auto& m = contrib[l][idx[l]].data();
                          for (std::size_t c = 0; c < cells; ++c) x[c] += m[c];
                        }
                        if (minor_filter && !leading_minor_vanishes(x.data(), code.t(), piv))
                          return;
                        const Analysis an = analyze(x.data(), code.n_t(), code.t(), piv, true);
                        if (an.rank == 2) ++h[{2, delta_bin(an.delta)}];
                      });
  return to_rank2(h);
}

std::vector<SpectrumEntry> distance_spectrum(const LinearCode& code, const Constellation& cons,
                                             bool full_rank_detail,
                                             const EnumerationOptions& opts) {
  const auto diffs = difference_set(cons);
  check_budget(diffs.size(), code.kappa(), opts.budget);
  const SplitTables st = make_split(code, diffs);
  const double piv = pivot_tolerance(opts.rank_tol);
  const int n_t = st.n_t;
  Histogram merged;
  double full_min = std::numeric_limits<double>::infinity();
  std::uint64_t full_min_count = 0;
  set_threads(opts);
#pragma omp parallel
  {
    Histogram local;
    double lmin = std::numeric_limits<double>::infinity();
    std::uint64_t lcount = 0;
    std::array<cplx, kMaxCells> x;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(st.count_a); ++i) {
      visit_row(st, static_cast<std::size_t>(i), x, [&](const cplx* xd, std::uint64_t w) {
        const Analysis an = analyze(xd, n_t, st.t, piv, true);
        const double bin = delta_bin(an.delta);
        if (an.rank < n_t || full_rank_detail) {
          local[{an.rank, bin}] += w;
        } else if (bin < lmin) {
          lmin = bin;
          lcount = w;
        } else if (bin == lmin) {
          lcount += w;
        }
        return true;
      });
    }
#pragma omp critical
    {
      for (const auto& [key, count] : local) merged[key] += count;
      if (lmin < full_min) {
        full_min = lmin;
        full_min_count = lcount;
      } else if (lmin == full_min) {
        full_min_count += lcount;
      }
    }
  }
  if (full_min_count > 0) merged[{n_t, full_min}] += full_min_count;
  std::vector<SpectrumEntry> out;
  for (const auto& [key, count] : merged) out.push_back({key.first, key.second, count});
  return out;
}

std::vector<SpectrumEntry> union_bound_terms(std::span<const SpectrumEntry> spectrum) {
  std::vector<SpectrumEntry> out;
  for (const auto& e : spectrum)
    if (e.count > 0) out.push_back(e);
  std::sort(out.begin(), out.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    return std::pair(a.r, a.delta) < std::pair(b.r, b.delta);
  });
  return out;
}

ConsistencyReport min_determinant_consistency(const LinearCode& code, const Constellation& cons,
                                              std::uint64_t samples, std::uint64_t seed,
                                              const EnumerationOptions& opts) {
  ConsistencyReport rep;
  const auto diffs = difference_set(cons);
  const std::size_t kappa = static_cast<std::size_t>(code.kappa());
  const double piv = pivot_tolerance(opts.rank_tol);
  const int n_t = code.n_t();

  // Witness: argmin over the 4-QAM difference lattice {0, +-2}^2, which is a
  // subset of every larger QAM difference set.
  const auto small = difference_set(Constellation::qam(4));
  std::vector<std::size_t> idx(kappa, 0);
  std::vector<cplx> ds(kappa);
  rep.witness_det = std::numeric_limits<double>::infinity();
  while (true) {
    bool nonzero = false;
    for (std::size_t l = 0; l < kappa; ++l) {
      ds[l] = small[idx[l]];
      nonzero = nonzero || ds[l] != cplx{};
    }
    if (nonzero) {
      const CMat x = encode(code, ds);
      const Analysis an = analyze(x.data().data(), n_t, code.t(), piv, true);
      const double det = an.rank == n_t ? an.delta : 0.0;
      if (det < rep.witness_det) {
        rep.witness_det = det;
        rep.witness = ds;
      }
    }
    std::size_t l = kappa;
    bool wrapped = true;
    while (l > 0) {
      --l;
      if (++idx[l] < small.size()) {
        wrapped = false;
        break;
      }
      idx[l] = 0;
    }
    if (wrapped) break;
  }
  rep.witness_found = std::isfinite(rep.witness_det);

  const auto contrib = slot_contributions(code, diffs);
  const std::size_t cells = static_cast<std::size_t>(n_t * code.t());
  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  double global_min = std::numeric_limits<double>::infinity();
  std::uint64_t deficient = 0;
  set_threads(opts);
#pragma omp parallel
  {
    double lmin = std::numeric_limits<double>::infinity();
    std::uint64_t ldef = 0;
    std::array<cplx, kMaxCells> x;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      Rng rng(seed, 4, static_cast<std::uint64_t>(c));
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
      const std::uint64_t end = std::min(samples, begin + kChunk);
      for (std::uint64_t s = begin; s < end; ++s) {
        bool nonzero = false;
        x.fill(cplx{});
        for (std::size_t l = 0; l < kappa; ++l) {
          const std::size_t d = rng.below(static_cast<std::uint32_t>(diffs.size()));
          nonzero = nonzero || d != diffs.size() / 2;
          const auto& m = contrib[l][d].data();
          for (std::size_t k = 0; k < cells; ++k) x[k] += m[k];
        }
        if (!nonzero) continue;
        const Analysis an = analyze(x.data(), n_t, code.t(), piv, true);
        if (an.rank < n_t) {
          ++ldef;
          lmin = 0.0;
        } else {
          lmin = std::min(lmin, an.delta);
        }
      }
    }
#pragma omp critical
    {
      global_min = std::min(global_min, lmin);
      deficient += ldef;
    }
  }
  rep.samples = samples;
  rep.rank_deficient = deficient;
  rep.sample_min_det = global_min;
  return rep;
}

void write_spectrum_records(std::ostream& os, const RecordHeader& header,
                            const std::string& code_name, int m,
                            std::span<const SpectrumEntry> entries) {
  nlohmann::ordered_json h;
  h["type"] = "header";
  h["kind"] = header.kind;
  h["tool"] = "stbc";
  h["version"] = tool_version();
  h["source_digest"] = source_digest();
  h["seed"] = header.seed;
  h["config_digest"] = header.config_digest;
  os << h.dump() << '\n';
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["type"] = "spectrum";
    j["code"] = code_name;
    j["mod"] = m;
    j["r"] = e.r;
    j["delta"] = e.delta;
    j["count"] = e.count;
    os << j.dump() << '\n';
  }
}

std::vector<SpectrumEntry> read_spectrum_records(std::istream& is) {
  std::vector<SpectrumEntry> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.value("type", "") != "spectrum") continue;
    out.push_back({j.at("r").get<int>(), j.at("delta").get<double>(),
                   j.at("count").get<std::uint64_t>()});
  }
  return out;
}

namespace reference {

namespace {

template <typename Visit>
void for_each_difference(const LinearCode& code, const std::vector<cplx>& diffs,
                         std::uint64_t budget, Visit&& visit) {
  check_budget(diffs.size(), code.kappa(), budget);
  const std::size_t kappa = static_cast<std::size_t>(code.kappa());
  std::vector<std::size_t> idx(kappa, 0);
  std::vector<cplx> ds(kappa);
  while (true) {
    bool nonzero = false;
    for (std::size_t l = 0; l < kappa; ++l) {
      ds[l] = diffs[idx[l]];
      nonzero = nonzero || ds[l] != cplx{};
    }
    if (nonzero) visit(ds);
    std::size_t l = kappa;
    bool wrapped = true;
    while (l > 0) {
      --l;
      if (++idx[l] < diffs.size()) {
        wrapped = false;
        break;
      }
      idx[l] = 0;
    }
    if (wrapped) break;
  }
}

}  // namespace

double min_determinant(const LinearCode& code, const Constellation& cons,
                       const EnumerationOptions& opts) {
  double best = std::numeric_limits<double>::infinity();
  for_each_difference(code, difference_set(cons), opts.budget, [&](const std::vector<cplx>& ds) {
    best = std::min(best, codeword_distance(code, ds, opts.rank_tol).det);
  });
  return best;
}

Rank2Result rank2_multiplicity(const LinearCode& code, const Constellation& cons,
                               const EnumerationOptions& opts) {
  Histogram h;
  for_each_difference(code, difference_set(cons), opts.budget, [&](const std::vector<cplx>& ds) {
    const auto info = codeword_distance(code, ds, opts.rank_tol);
    if (info.rank == 2) ++h[{2, delta_bin(info.delta)}];
  });
  return to_rank2(h);
}

std::vector<SpectrumEntry> distance_spectrum(const LinearCode& code, const Constellation& cons,
                                             const EnumerationOptions& opts) {
  Histogram h;
  for_each_difference(code, difference_set(cons), opts.budget, [&](const std::vector<cplx>& ds) {
    const auto info = codeword_distance(code, ds, opts.rank_tol);
    ++h[{info.rank, delta_bin(info.delta)}];
  });
  std::vector<SpectrumEntry> out;
  for (const auto& [key, count] : h) out.push_back({key.first, key.second, count});
  return out;
}

}  // namespace reference

}  // namespace stbc
