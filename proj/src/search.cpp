#include "stbc/search.hpp"

#include <gsl/gsl_multimin.h>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>

#include "json.hpp"
#include "stbc/error.hpp"

namespace stbc {

namespace {

using Tuple = std::array<int, 4>;

Tuple canonical(Tuple n, int n_cap) {
  for (int& v : n) v %= n_cap;
  return n;
}

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step, int max_iter) {
  struct Ctx {
    const std::function<double(const std::vector<double>&)>* f;
    std::size_t n;
  } ctx{&f, x0.size()};
  gsl_multimin_function fn;
  fn.n = x0.size();
  fn.params = &ctx;
  fn.f = [](const gsl_vector* v, void* p) {
    auto* c = static_cast<Ctx*>(p);
    std::vector<double> x(c->n);
    for (std::size_t i = 0; i < c->n; ++i) x[i] = gsl_vector_get(v, i);
    return (*c->f)(x);
  };
  gsl_vector* x = gsl_vector_alloc(fn.n);
  gsl_vector* ss = gsl_vector_alloc(fn.n);
  for (std::size_t i = 0; i < fn.n; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, fn.n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
  }
  std::vector<double> best(fn.n);
  for (std::size_t i = 0; i < fn.n; ++i) best[i] = gsl_vector_get(s->x, i);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  return best;
}

// Compass search over the axis and pairwise-diagonal directions, halving the
// step when no direction improves. Follows ridges that cross the axes at an
// angle, where the simplex tends to collapse.
std::vector<double> compass_search(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> x, double step, double min_step) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < n; ++i)
    for (double si : {1.0, -1.0}) {
      std::vector<double> d(n, 0.0);
      d[i] = si;
      dirs.push_back(d);
      for (std::size_t j = i + 1; j < n; ++j)
        for (double sj : {1.0, -1.0}) {
          auto e = d;
          e[j] = sj;
          dirs.push_back(e);
        }
    }
  double fx = f(x);
  while (step > min_step) {
    bool moved = false;
    for (const auto& d : dirs) {
      auto y = x;
      for (std::size_t i = 0; i < n; ++i) y[i] += step * d[i];
      const double fy = f(y);
      if (fy < fx) {
        x = std::move(y);
        fx = fy;
        moved = true;
        break;
      }
    }
    if (!moved) step /= 2;
  }
  return x;
}

// Grid points sorted by objective (descending), ties by grid index.
struct GridPoint {
  double value;
  std::size_t index;
};

std::vector<GridPoint> best_grid_points(std::size_t count, std::size_t keep, int threads,
                                        const std::function<double(std::size_t)>& f) {
  std::vector<double> values(count);
  if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
    values[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  std::vector<GridPoint> pts;
  for (std::size_t i = 0; i < count; ++i) pts.push_back({values[i], i});
  std::sort(pts.begin(), pts.end(), [](const GridPoint& a, const GridPoint& b) {
    return a.value != b.value ? a.value > b.value : a.index < b.index;
  });
  pts.resize(std::min(keep, pts.size()));
  return pts;
}

// Nested parallel regions are off, so inside the parallel grid loop each
// objective evaluation runs on its calling thread.
EnumerationOptions serial_enum() { return EnumerationOptions{}; }

double min_det_serial(const LinearCode& code) {
  return min_determinant(code, Constellation::qam(4), serial_enum());
}

constexpr std::size_t kPolishStarts = 8;
// The Family II optimum sits in a narrow ridge; polish more starts.
constexpr std::size_t kFamily2PolishStarts = 24;

}  // namespace

std::string histogram_digest(const std::vector<SpectrumEntry>& rows) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  char buf[96];
  for (const auto& e : rows) {
    std::snprintf(buf, sizeof buf, "%d:%.8e:%llu;", e.r, e.delta,
                  static_cast<unsigned long long>(e.count));
    mix(buf);
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<SearchRecord> search_u(int n_cap, const SearchUOptions& opts) {
  if (n_cap < 1 || n_cap > 32) throw Error(ErrorKind::OutOfRange, "search_u: N must be in [1, 32]");
  const Constellation cons = Constellation::qam(opts.constellation);
  EnumerationOptions full_opts;
  full_opts.budget = opts.full_budget;
  full_opts.threads = opts.threads;
  // Fail fast before the screen if a full evaluation cannot run.
  {
    const double diff = static_cast<double>(difference_set(cons).size());
    if (std::pow(diff, 8) > static_cast<double>(opts.full_budget))
      throw Error(ErrorKind::BudgetExceeded,
                  "search_u: full enumeration exceeds budget " + std::to_string(opts.full_budget));
  }

  std::vector<SearchRecord> records;
  std::map<Tuple, std::size_t> unique_index;
  std::vector<Tuple> uniques;
  for (int a = 0; a <= n_cap; ++a)
    for (int b = 0; b <= n_cap; ++b)
      for (int c = 0; c <= n_cap; ++c)
        for (int d = 0; d <= n_cap; ++d) {
          SearchRecord r;
          r.n_cap = n_cap;
          r.n_exp = {a, b, c, d};
          const Tuple key = canonical(r.n_exp, n_cap);
          if (!unique_index.count(key)) {
            unique_index[key] = uniques.size();
            uniques.push_back(r.n_exp);
          }
          r.representative = uniques[unique_index[key]];
          records.push_back(r);
        }

  // Stage 1: restricted-weight screen, one candidate per thread.
  std::vector<std::uint64_t> screen(uniques.size());
  if (opts.threads > 0) omp_set_num_threads(opts.threads);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(uniques.size()); ++i) {
    const auto code = make_new_4x2(build_u_dft(n_cap, uniques[static_cast<std::size_t>(i)]));
    screen[static_cast<std::size_t>(i)] =
        rank2_multiplicity_restricted(code, cons, opts.screen_weight, serial_enum()).total;
  }

  // Stage 2: full enumeration of the best screen_budget candidates.
  std::vector<std::size_t> order(uniques.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return screen[x] != screen[y] ? screen[x] < screen[y] : uniques[x] < uniques[y];
  });
  struct Full {
    bool done = false;
    std::uint64_t objective = 0;
    std::string digest;
    double wall = 0.0;
  };
  std::vector<Full> full(uniques.size());
  for (std::size_t k = 0; k < std::min(opts.screen_budget, order.size()); ++k) {
    const std::size_t i = order[k];
    const auto t0 = std::chrono::steady_clock::now();
    const auto code = make_new_4x2(build_u_dft(n_cap, uniques[i]));
    const Rank2Result r = rank2_multiplicity(code, cons, full_opts);
    full[i] = {true, r.total, histogram_digest(r.histogram),
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
  }

  for (auto& r : records) {
    const std::size_t i = unique_index[canonical(r.n_exp, n_cap)];
    r.screen_objective = screen[i];
    r.exact = full[i].done;
    r.objective = full[i].objective;
    r.digest = full[i].digest;
    r.wall_time = r.representative == r.n_exp ? full[i].wall : 0.0;
  }
  std::stable_sort(records.begin(), records.end(), [](const SearchRecord& x, const SearchRecord& y) {
    if (x.exact != y.exact) return x.exact;
    if (x.exact && x.objective != y.objective) return x.objective < y.objective;
    if (x.screen_objective != y.screen_objective) return x.screen_objective < y.screen_objective;
    return x.n_exp < y.n_exp;
  });
  return records;
}

void write_search_records(std::ostream& os, const std::vector<SearchRecord>& records,
                          const SearchUOptions& opts, std::uint64_t seed) {
  nlohmann::ordered_json h;
  h["type"] = "header";
  h["kind"] = "search-u";
  h["tool"] = "stbc";
  h["version"] = tool_version();
  h["source_digest"] = source_digest();
  h["seed"] = seed;
  h["screen_budget"] = opts.screen_budget;
  h["full_budget"] = opts.full_budget;
  h["screen_weight"] = opts.screen_weight;
  h["mod"] = opts.constellation;
  os << h.dump() << '\n';
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["type"] = "search-u";
    j["n_cap"] = r.n_cap;
    j["n_exp"] = r.n_exp;
    j["representative"] = r.representative;
    j["screen_objective"] = r.screen_objective;
    j["exact"] = r.exact;
    if (r.exact) {
      j["objective"] = r.objective;
      j["digest"] = r.digest;
    }
    os << j.dump() << '\n';
  }
}

double family1_objective(double theta, double phase_a, double phase_b) {
  const cplx phi1 = std::polar(std::cos(theta), phase_a);
  const cplx phi2 = std::polar(std::sin(theta), phase_b);
  // cos and sin keep |phi1|^2 + |phi2|^2 = 1 to rounding.
  return min_det_serial(make_family1(phi1, phi2));
}

Family1Result search_family1(int grid_density, int threads) {
  if (grid_density < 1) throw Error(ErrorKind::OutOfRange, "search_family1: grid_density < 1");
  const std::size_t g = static_cast<std::size_t>(grid_density);
  const double two_pi = 2.0 * std::numbers::pi;
  auto angles = [&](std::size_t i) {
    const std::size_t it = i / (g * g), ia = (i / g) % g, ib = i % g;
    return std::array<double, 3>{std::numbers::pi / 2 * static_cast<double>(it) / static_cast<double>(g),
                                 two_pi * static_cast<double>(ia) / static_cast<double>(g),
                                 two_pi * static_cast<double>(ib) / static_cast<double>(g)};
  };
  const auto starts = best_grid_points(g * g * g, kPolishStarts, threads, [&](std::size_t i) {
    const auto p = angles(i);
    return family1_objective(p[0], p[1], p[2]);
  });
  Family1Result best;
  best.delta_min = -1.0;
  const double step = std::numbers::pi / 2 / static_cast<double>(g);
  for (const auto& s : starts) {
    const auto p = angles(s.index);
    const auto x = nelder_mead(
        [](const std::vector<double>& v) { return -family1_objective(v[0], v[1], v[2]); },
        {p[0], p[1], p[2]}, step, 4000);
    const double v = family1_objective(x[0], x[1], x[2]);
    if (v > best.delta_min) {
      best.theta = x[0];
      best.phase_a = x[1];
      best.phase_b = x[2];
      best.delta_min = v;
    }
  }
  best.phi1 = std::polar(std::cos(best.theta), best.phase_a);
  best.phi2 = std::polar(std::sin(best.theta), best.phase_b);
  return best;
}

double family2_objective(double phase_a, double phase_b) {
  const double r = 1.0 / std::numbers::sqrt2;
  return min_det_serial(make_family2(r, r, std::polar(r, phase_a), std::polar(r, phase_b)));
}

Family2Result search_family2(int grid_density, int threads) {
  if (grid_density < 1) throw Error(ErrorKind::OutOfRange, "search_family2: grid_density < 1");
  const std::size_t g = static_cast<std::size_t>(grid_density);
  const double two_pi = 2.0 * std::numbers::pi;
  // Half-step offset keeps grid points off multiples of pi/4, where the
  // objective is flat zero for small densities.
  auto phases = [&](std::size_t i) {
    return std::array<double, 2>{two_pi * (static_cast<double>(i / g) + 0.5) / static_cast<double>(g),
                                 two_pi * (static_cast<double>(i % g) + 0.5) / static_cast<double>(g)};
  };
  const auto starts = best_grid_points(g * g, kFamily2PolishStarts, threads, [&](std::size_t i) {
    const auto p = phases(i);
    return family2_objective(p[0], p[1]);
  });
  Family2Result best;
  best.delta_min = -1.0;
  const double step = two_pi / static_cast<double>(g) / 2;
  for (const auto& s : starts) {
    const auto p = phases(s.index);
    const auto neg = [](const std::vector<double>& v) { return -family2_objective(v[0], v[1]); };
    const auto x = compass_search(neg, nelder_mead(neg, {p[0], p[1]}, step, 4000), step, 1e-12);
    const double v = family2_objective(x[0], x[1]);
    if (v > best.delta_min) {
      best.phase_34a = x[0];
      best.phase_34b = x[1];
      best.delta_min = v;
    }
  }
  const double r = 1.0 / std::numbers::sqrt2;
  best.a12 = r;
  best.b12 = r;
  best.a34 = std::polar(r, best.phase_34a);
  best.b34 = std::polar(r, best.phase_34b);
  return best;
}

}  // namespace stbc
