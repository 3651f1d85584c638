#include "stbc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "stbc/error.hpp"

namespace stbc {

namespace {

CMat complex_equivalent(const CMat& h, const CMat& g, const std::vector<bool>& conj_cols,
                        std::size_t n_t) {
  const std::size_t n_r = h.rows();
  const std::size_t t = conj_cols.size();
  const CMat hc = conj(h);
  CMat f(n_r * t, g.cols());
  for (std::size_t c = 0; c < t; ++c) {
    const CMat& hb = conj_cols[c] ? hc : h;
    for (std::size_t i = 0; i < n_r; ++i)
      for (std::size_t l = 0; l < g.cols(); ++l) {
        cplx acc{};
        for (std::size_t k = 0; k < n_t; ++k) acc += hb(i, k) * g(c * n_t + k, l);
        f(c * n_r + i, l) = acc;
      }
  }
  return f;
}

RMat real_equivalent(const CMat& h, const RMat& gen, std::size_t n_t, std::size_t t) {
  const RMat hc = check_mat(h);
  const std::size_t n_r = h.rows();
  RMat f(2 * n_r * t, gen.cols());
  for (std::size_t c = 0; c < t; ++c)
    for (std::size_t i = 0; i < 2 * n_r; ++i)
      for (std::size_t l = 0; l < gen.cols(); ++l) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 2 * n_t; ++k) acc += hc(i, k) * gen(2 * c * n_t + k, l);
        f(2 * c * n_r + i, l) = acc;
      }
  return f;
}

CMat permute_columns(const CMat& f, std::span<const int> perm) {
  CMat p(f.rows(), f.cols());
  for (std::size_t l = 0; l < perm.size(); ++l)
    p.set_col(l, f.col(static_cast<std::size_t>(perm[l])));
  return p;
}

// Triangularized problem ||z - R x||^2 + residual over per-level alphabets.
// Level l carries variable perm[l]: a symbol on the complex path, a real
// coordinate (2 * symbol + {0: Re, 1: Im}) on the real path.
struct Problem {
  QRFactors qr;
  CVec z;
  double residual = 0.0;
  std::vector<cplx> alphabet;
  bool complex_domain = true;
  int side = 0;
  int kappa = 0;
  std::vector<int> perm;
  int k_prime = 0;

  std::size_t levels() const { return perm.size(); }

  std::vector<int> to_symbols(std::span<const int> level_idx) const {
    std::vector<int> s(static_cast<std::size_t>(kappa), 0);
    if (complex_domain) {
      for (std::size_t l = 0; l < level_idx.size(); ++l)
        s[static_cast<std::size_t>(perm[l])] = level_idx[l];
    } else {
      std::vector<int> coord(2 * static_cast<std::size_t>(kappa));
      for (std::size_t l = 0; l < level_idx.size(); ++l)
        coord[static_cast<std::size_t>(perm[l])] = level_idx[l];
      for (std::size_t k = 0; k < s.size(); ++k) s[k] = coord[2 * k] * side + coord[2 * k + 1];
    }
    return s;
  }
};

Problem make_problem(const CMat& y, const CMat& h, const LinearCode& code,
                     const Constellation& cons, const std::vector<int>* perm) {
  const EquivChannel eq = equivalent_channel(h, code);
  Problem p;
  p.complex_domain = eq.complex_domain;
  p.side = cons.side;
  p.kappa = code.kappa();
  if (perm) {
    p.perm = *perm;
  } else {
    p.perm.resize(eq.f.cols());
    std::iota(p.perm.begin(), p.perm.end(), 0);
  }
  if (p.perm.size() != eq.f.cols())
    throw Error(ErrorKind::DimensionMismatch, "symbol order length");
  if (perm) {
    p.qr = gram_schmidt_qr(permute_columns(eq.f, p.perm));
    p.k_prime = detect_fast_structure(p.qr);
  } else {
    p.qr = eq.qr;
    p.k_prime = eq.k_prime;
  }
  const CVec yv = received_vector(y, eq);
  p.z = adjoint(p.qr.q) * std::span<const cplx>(yv);
  const CVec proj = p.qr.q * std::span<const cplx>(p.z);
  for (std::size_t i = 0; i < yv.size(); ++i) p.residual += std::norm(yv[i] - proj[i]);
  if (p.complex_domain) {
    p.alphabet = cons.points;
  } else {
    for (double v : cons.pam()) p.alphabet.emplace_back(v, 0.0);
  }
  return p;
}

struct Best {
  double metric = std::numeric_limits<double>::infinity();
  std::vector<int> symbols;

  bool offer(double metric_value, std::vector<int> candidate) {
    if (metric_value < metric ||
        (metric_value == metric && !symbols.empty() && candidate < symbols)) {
      metric = metric_value;
      symbols = std::move(candidate);
      return true;
    }
    return false;
  }
};

std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

}  // namespace

EquivChannel equivalent_channel(const CMat& h, const LinearCode& code, double rel_tol) {
  if (h.cols() != static_cast<std::size_t>(code.n_t()))
    throw Error(ErrorKind::DimensionMismatch, "equivalent_channel: H columns != n_t");
  EquivChannel eq;
  const auto n_t = static_cast<std::size_t>(code.n_t());
  const auto t = static_cast<std::size_t>(code.t());
  if (code.conj_domain_gen()) {
    eq.complex_domain = true;
    eq.conj_cols = *code.conj_cols();
    eq.f = complex_equivalent(h, *code.conj_domain_gen(), eq.conj_cols, n_t);
    eq.f_real = check_mat(eq.f);
  } else {
    eq.complex_domain = false;
    eq.f_real = real_equivalent(h, code.real_gen(), n_t, t);
    eq.f = to_complex(eq.f_real);
  }
  eq.qr = gram_schmidt_qr(eq.f);
  eq.k_prime = detect_fast_structure(eq.qr, rel_tol);
  return eq;
}

CVec received_vector(const CMat& y, const EquivChannel& eq) {
  if (!eq.complex_domain) return [&] {
    const RVec r = tilde_vec(vec(y));
    return CVec(r.begin(), r.end());
  }();
  if (y.cols() != eq.conj_cols.size())
    throw Error(ErrorKind::DimensionMismatch, "received_vector: Y columns != T");
  CVec v;
  v.reserve(y.rows() * y.cols());
  for (std::size_t c = 0; c < y.cols(); ++c)
    for (std::size_t i = 0; i < y.rows(); ++i)
      v.push_back(eq.conj_cols[c] ? std::conj(y(i, c)) : y(i, c));
  return v;
}

CMat conjugated_equivalent(const CMat& h, const LinearCode& code) {
  const bool shaped = code.n_t() == 2 && code.t() == 2 && code.kappa() == 2 &&
                      code.conj_cols() &&
                      *code.conj_cols() == std::vector<bool>{false, true};
  if (!shaped || h.rows() != 2 || h.cols() != 2)
    throw Error(ErrorKind::WrongStructure,
                "conjugated_equivalent needs a 2x2 Alamouti-structured code and 2x2 H");
  CMat f = complex_equivalent(h, *code.conj_domain_gen(), *code.conj_cols(), 2);
  if (std::abs(inner(f.col(1), f.col(0))) >
      kStructuralZeroTol * norm(f.col(0)) * norm(f.col(1)))
    throw Error(ErrorKind::WrongStructure, "code columns are not matched-filter orthogonal");
  return f;
}

double ml_metric(const CMat& y, const CMat& h, const LinearCode& code,
                 const Constellation& cons, std::span<const int> s_idx) {
  CVec s;
  s.reserve(s_idx.size());
  for (int i : s_idx) s.push_back(cons.points.at(static_cast<std::size_t>(i)));
  return frobenius_norm2(y - h * encode(code, s));
}

DecodeResult ml_exhaustive(const CMat& y, const CMat& h, const LinearCode& code,
                           const Constellation& cons, std::uint64_t budget) {
  const int kappa = code.kappa();
  const auto m = static_cast<std::size_t>(cons.m);
  const std::uint64_t total = checked_power(m, kappa, budget);
  if (total > budget)
    throw Error(ErrorKind::BudgetExceeded,
                "ml_exhaustive: M^kappa exceeds budget " + std::to_string(budget));
  if (h.cols() != static_cast<std::size_t>(code.n_t()) || y.rows() != h.rows() ||
      y.cols() != static_cast<std::size_t>(code.t()))
    throw Error(ErrorKind::DimensionMismatch, "ml_exhaustive: Y/H/code shapes");

  // contrib[l][p] = H (Re(x_p) A_l + j Im(x_p) B_l), flattened.
  const std::size_t cells = y.rows() * y.cols();
  std::vector<std::vector<CVec>> contrib(static_cast<std::size_t>(kappa));
  for (std::size_t l = 0; l < contrib.size(); ++l) {
    const CMat ha = h * code.disp_a()[l];
    const CMat hb = h * code.disp_b()[l];
    for (const cplx& p : cons.points) {
      CVec c(cells);
      for (std::size_t k = 0; k < cells; ++k)
        c[k] = p.real() * ha.data()[k] + cplx{0, p.imag()} * hb.data()[k];
      contrib[l].push_back(std::move(c));
    }
  }

  // Depth-first odometer: residual[l] = Y - sum_{i<l} contrib; lexicographic
  // order plus strict improvement keeps the smallest index vector on ties.
  std::vector<CVec> residual(static_cast<std::size_t>(kappa) + 1, CVec(cells));
  std::copy(y.data().begin(), y.data().end(), residual[0].begin());
  std::vector<int> idx(static_cast<std::size_t>(kappa), 0);
  Best best;
  DecodeResult out;
  auto descend = [&](std::size_t from) {
    for (std::size_t l = from; l < idx.size(); ++l) {
      const CVec& c = contrib[l][static_cast<std::size_t>(idx[l])];
      for (std::size_t k = 0; k < cells; ++k) residual[l + 1][k] = residual[l][k] - c[k];
    }
  };
  descend(0);
  while (true) {
    double metric = 0.0;
    for (const cplx& v : residual.back()) metric += std::norm(v);
    ++out.metric_evals;
    if (metric < best.metric) {
      best.metric = metric;
      best.symbols = idx;
    }
    int l = kappa - 1;
    while (l >= 0 && ++idx[static_cast<std::size_t>(l)] == cons.m) {
      idx[static_cast<std::size_t>(l)] = 0;
      --l;
    }
    if (l < 0) break;
    descend(static_cast<std::size_t>(l));
  }
  out.s_hat = best.symbols;
  out.metric = ml_metric(y, h, code, cons, out.s_hat);
  return out;
}

int detect_fast_structure(const QRFactors& qr, double rel_tol) {
  const std::size_t k = qr.r.cols();
  auto col_norm = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i <= j; ++i) s += std::norm(qr.r(i, j));
    return std::sqrt(s);
  };
  std::size_t k_prime = 1;
  for (std::size_t j = 1; j < k; ++j) {
    const double limit = rel_tol * col_norm(j);
    bool zero = true;
    for (std::size_t i = 0; i < j && zero; ++i) zero = std::abs(qr.r(i, j)) <= limit;
    if (!zero) break;
    k_prime = j + 1;
  }
  return k_prime >= 2 ? static_cast<int>(k_prime) : 0;
}

SymbolOrder best_symbol_order(const CMat& h, const LinearCode& code, double rel_tol) {
  const EquivChannel eq = equivalent_channel(h, code, rel_tol);
  const std::size_t k = eq.f.cols();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  auto score = [&](const std::vector<int>& p) {
    try {
      return detect_fast_structure(gram_schmidt_qr(permute_columns(eq.f, p)), rel_tol);
    } catch (const Error&) {
      return 0;
    }
  };
  SymbolOrder best{perm, score(perm)};
  if (k <= 4) {
    while (std::next_permutation(perm.begin(), perm.end())) {
      const int s = score(perm);
      if (s > best.k_prime) best = {perm, s};
    }
    return best;
  }
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t a = 0; a < k && !improved; ++a)
      for (std::size_t b = a + 1; b < k && !improved; ++b) {
        std::vector<int> p = best.perm;
        std::swap(p[a], p[b]);
        const int s = score(p);
        if (s > best.k_prime) {
          best = {p, s};
          improved = true;
        }
      }
  }
  return best;
}

DecodeResult fast_decode(const CMat& y, const CMat& h, const LinearCode& code,
                         const Constellation& cons, const SymbolOrder* order) {
  const Problem p = make_problem(y, h, code, cons, order ? &order->perm : nullptr);
  const int kp = p.k_prime;
  if (kp < 1)
    throw Error(ErrorKind::NotFastDecodable,
                "fast_decode: code '" + code.name() + "' has k' = 0 for this order");
  const std::size_t levels = p.levels();
  const std::size_t head = static_cast<std::size_t>(kp);
  const auto& r = p.qr.r;
  const auto& alpha = p.alphabet;
  const int a_size = static_cast<int>(alpha.size());

  DecodeResult out;
  Best best;
  std::vector<int> idx(levels, 0);
  while (true) {
    // Tail rows depend only on the tail symbols.
    double metric = p.residual;
    for (std::size_t i = head; i < levels; ++i) {
      cplx acc = p.z[i];
      for (std::size_t j = i; j < levels; ++j)
        acc -= r(i, j) * alpha[static_cast<std::size_t>(idx[j])];
      metric += std::norm(acc);
    }
    // Head rows decouple: slice each over the whole alphabet.
    for (std::size_t i = 0; i < head; ++i) {
      cplx c = p.z[i];
      for (std::size_t j = head; j < levels; ++j)
        c -= r(i, j) * alpha[static_cast<std::size_t>(idx[j])];
      double best_d = std::numeric_limits<double>::infinity();
      int best_a = 0;
      for (int a = 0; a < a_size; ++a) {
        const double d = std::norm(c - r(i, i) * alpha[static_cast<std::size_t>(a)]);
        if (d < best_d) {
          best_d = d;
          best_a = a;
        }
      }
      out.metric_evals += static_cast<std::uint64_t>(a_size);
      idx[i] = best_a;
      metric += best_d;
    }
    ++out.nodes_visited;
    best.offer(metric, p.to_symbols(idx));

    bool wrapped = true;
    for (std::size_t l = levels; l > head;) {
      --l;
      if (++idx[l] < a_size) {
        wrapped = false;
        break;
      }
      idx[l] = 0;
    }
    if (wrapped) break;
  }
  out.s_hat = best.symbols;
  out.metric = ml_metric(y, h, code, cons, out.s_hat);
  return out;
}

DecodeResult sphere_decode(const CMat& y, const CMat& h, const LinearCode& code,
                           const Constellation& cons, RadiusPolicy policy) {
  const Problem p = make_problem(y, h, code, cons, nullptr);
  const std::size_t levels = p.levels();
  const auto& r = p.qr.r;
  const auto& alpha = p.alphabet;
  const std::size_t a_size = alpha.size();

  DecodeResult out;
  Best best;
  double radius2 = std::numeric_limits<double>::infinity();
  if (policy.kind == RadiusPolicy::Kind::noise_scaled)
    radius2 = policy.factor * static_cast<double>(p.qr.q.rows()) * policy.n0;

  std::vector<int> idx(levels, 0);
  std::vector<double> acc(levels + 1, 0.0);
  // Candidate order per level (Schnorr-Euchner: nearest first).
  std::vector<std::vector<std::pair<double, int>>> order(levels);

  while (true) {
    const double bound0 = radius2;
    std::function<void(std::size_t)> search = [&](std::size_t level_plus_one) {
      const std::size_t k = level_plus_one - 1;
      cplx c = p.z[k];
      for (std::size_t j = k + 1; j < levels; ++j)
        c -= r(k, j) * alpha[static_cast<std::size_t>(idx[j])];
      const double rkk2 = std::norm(r(k, k));
      const cplx center = c / r(k, k);
      auto& cand = order[k];
      cand.clear();
      for (std::size_t a = 0; a < a_size; ++a)
        cand.emplace_back(rkk2 * std::norm(center - alpha[a]), static_cast<int>(a));
      std::sort(cand.begin(), cand.end());
      for (const auto& [d, a] : cand) {
        const double cost = acc[k + 1] + d;
        const double limit = std::min(best.metric - p.residual, bound0);
        if (cost > limit) break;
        ++out.nodes_visited;
        idx[k] = a;
        acc[k] = cost;
        if (k == 0) {
          ++out.metric_evals;
          best.offer(cost + p.residual, p.to_symbols(idx));
        } else {
          search(k);
        }
      }
    };
    search(levels);
    if (!best.symbols.empty()) break;
    radius2 *= 2.0;  // nothing inside the sphere; enlarge and retry
  }
  out.s_hat = best.symbols;
  out.metric = ml_metric(y, h, code, cons, out.s_hat);
  return out;
}

}  // namespace stbc
