#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qca/error.hpp"
#include "qca/integer.hpp"
#include "qca/laurent.hpp"
#include "qca/matrix.hpp"
#include "qca/seed.hpp"

namespace qca {

// ---------------------------------------------------------------- C1, C1*

struct C1Result {
  bool pass = false;
  IntVector M;       // diagonal of B̃ᵀΛ's left block, when pass
  IntVector scales;  // d_r per principal component
};

inline C1Result check_C1(const ExtendedExchangeMatrix& ex, const IntMatrix& Lambda) {
  C1Result res;
  if (!is_skew_symmetric(Lambda)) return res;
  const auto scales = c1_scales(ex, Lambda);
  if (!scales) return res;
  res.pass = true;
  res.scales = *scales;
  res.M.assign(ex.n(), 0);
  for (std::size_t r = 0; r < ex.components().size(); ++r)
    for (std::size_t k : ex.components()[r]) res.M[k] = (*scales)[r] * ex.D0()[k];
  return res;
}

inline C1Result check_C1(const QuantumSeed& seed) { return check_C1(seed.ex(), seed.Lambda()); }

struct C1StarResult {
  bool pass = false;
  std::vector<Rational> c;  // per principal component, relative to the C1 diagonal
  bool integral = false;    // every c_r is an integer
};

inline C1StarResult check_C1star(const QuantumSeed& seed, const IntMatrix& W) {
  C1StarResult res;
  if (!is_skew_symmetric(W)) return res;
  const auto c = c1star_scalars(seed, W);
  if (!c) return res;
  res.pass = true;
  res.c = *c;
  res.integral = std::all_of(res.c.begin(), res.c.end(), [](const Rational& x) { return denominator(x) == 1; });
  return res;
}

inline C1StarResult check_C1star(const CompatibleTriple& t) { return check_C1star(t.seed(), t.W()); }

// ---------------------------------------------------------------- Ω <-> W

inline PoissonMatrix omega_from_W(const IntMatrix& W, const IntMatrix& Lambda) {
  if (W.rows() != Lambda.rows() || W.cols() != Lambda.cols() || !W.is_square())
    throw Error(ErrorKind::DimensionMismatch, "W and Lambda shapes");
  PoissonMatrix out(W.rows(), W.cols());
  for (std::size_t i = 0; i < W.rows(); ++i)
    for (std::size_t j = 0; j < W.cols(); ++j) {
      const Int& l = Lambda(i, j);
      if (l == 0) {
        out(i, j) = LaurentV(W(i, j));
      } else {
        if (W(i, j) % l != 0)
          throw Error(ErrorKind::NotIntegralOmega, "lambda(" + std::to_string(i) + "," + std::to_string(j) +
                                                       ") does not divide W");
        out(i, j) = q_analog(l) * (W(i, j) / l);
      }
    }
  return out;
}

inline IntMatrix W_from_omega(const PoissonMatrix& Omega, const IntMatrix& Lambda) {
  if (Omega.rows() != Lambda.rows() || Omega.cols() != Lambda.cols() || !Omega.is_square())
    throw Error(ErrorKind::DimensionMismatch, "Omega and Lambda shapes");
  IntMatrix W(Omega.rows(), Omega.cols());
  for (std::size_t i = 0; i < Omega.rows(); ++i)
    for (std::size_t j = 0; j < Omega.cols(); ++j) {
      const auto bad = [&] {
        return Error(ErrorKind::NotSecondDeformation, "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      };
      const Int& l = Lambda(i, j);
      if (l == 0) {
        if (!Omega(i, j).is_constant()) throw bad();
        W(i, j) = Omega(i, j).constant_term();
      } else {
        const auto q = laurent_divide_exact(Omega(i, j), q_analog(l));
        if (!q || !q->is_constant()) throw bad();
        W(i, j) = q->constant_term() * l;
      }
    }
  if (!is_skew_symmetric(W)) throw Error(ErrorKind::NotSecondDeformation, "result is not skew-symmetric");
  return W;
}

/// Ω with every entry at a position where λ_ij ≠ 0 replaced by 0.
inline PoissonMatrix hat_omega(const PoissonMatrix& Omega, const IntMatrix& Lambda) {
  PoissonMatrix out(Omega.rows(), Omega.cols());
  for (std::size_t i = 0; i < Omega.rows(); ++i)
    for (std::size_t j = 0; j < Omega.cols(); ++j)
      if (Lambda(i, j) == 0) out(i, j) = Omega(i, j);
  return out;
}

// ---------------------------------------------------------------- C2, C3

struct Witness {
  std::string condition;
  std::vector<std::size_t> indices;  // (k, j, u) for C2, (k, j, u, v) for C3, (k, j) for C4

  friend bool operator<(const Witness& a, const Witness& b) {
    return std::tie(a.condition, a.indices) < std::tie(b.condition, b.indices);
  }
  friend bool operator==(const Witness& a, const Witness& b) {
    return a.condition == b.condition && a.indices == b.indices;
  }
};

struct C23Result {
  bool c2 = true;
  bool c3 = true;
  std::vector<Witness> witnesses;  // every violation, ascending
  bool pass() const { return c2 && c3; }
};

namespace detail {

// Generic C2/C3 scan. `same(u, v, j)` tests x_uj·y_vj = x_vj·y_uj for the
// relevant entry pair, in cross-multiplied form.
template <class Same>
void scan_c2_c3(const ExtendedExchangeMatrix& ex, std::size_t k_only, bool all_k, Same&& same, C23Result& res) {
  const std::size_t m = ex.m();
  for (std::size_t k = 0; k < ex.n(); ++k) {
    if (!all_k && k != k_only) continue;
    std::vector<std::size_t> support;
    for (std::size_t u = 0; u < m; ++u)
      if (ex(u, k) != 0) support.push_back(u);
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      for (std::size_t u : support)
        if (!same(u, k, j)) {
          res.c2 = false;
          res.witnesses.push_back({"C2", {k, j, u}});
        }
      for (std::size_t a = 0; a < support.size(); ++a)
        for (std::size_t b = a + 1; b < support.size(); ++b)
          if (!same(support[a], support[b], j)) {
            res.c3 = false;
            res.witnesses.push_back({"C3", {k, j, support[a], support[b]}});
          }
    }
  }
}

inline LaurentV antisym_power(const Int& l) {
  const std::int64_t x = to_int64(l);
  return v_power(x) - v_power(-x);
}

}  // namespace detail

/// W-form: W_uj·λ_kj = W_kj·λ_uj and W_uj·λ_vj = W_vj·λ_uj.
inline C23Result check_C2_C3(const ExtendedExchangeMatrix& ex, const IntMatrix& Lambda, const IntMatrix& W) {
  C23Result res;
  detail::scan_c2_c3(ex, 0, true,
                     [&](std::size_t u, std::size_t v, std::size_t j) { return W(u, j) * Lambda(v, j) == W(v, j) * Lambda(u, j); },
                     res);
  return res;
}

inline C23Result check_C2_C3(const CompatibleTriple& t) { return check_C2_C3(t.ex(), t.Lambda(), t.W()); }

/// Ω-form: ω_uj·(v^{λ_kj} − v^{−λ_kj}) = ω_kj·(v^{λ_uj} − v^{−λ_uj}), and the
/// same shape for (u, v).
inline C23Result check_C2_C3_omega(const ExtendedExchangeMatrix& ex, const IntMatrix& Lambda,
                                   const PoissonMatrix& Omega) {
  C23Result res;
  detail::scan_c2_c3(ex, 0, true,
                     [&](std::size_t u, std::size_t v, std::size_t j) {
                       return Omega(u, j) * detail::antisym_power(Lambda(v, j)) ==
                              Omega(v, j) * detail::antisym_power(Lambda(u, j));
                     },
                     res);
  return res;
}

/// The three one-step conditions at direction k, in Ω-form; the third is
/// Σ_{t: λ_tj = 0} ω_tj b_tk = 0 for every j ≠ k.
inline C23Result check_step_conditions(const ExtendedExchangeMatrix& ex, const IntMatrix& Lambda,
                                       const PoissonMatrix& Omega, std::size_t k, bool* c4 = nullptr) {
  require_direction(ex, k);
  C23Result res;
  detail::scan_c2_c3(ex, k, false,
                     [&](std::size_t u, std::size_t v, std::size_t j) {
                       return Omega(u, j) * detail::antisym_power(Lambda(v, j)) ==
                              Omega(v, j) * detail::antisym_power(Lambda(u, j));
                     },
                     res);
  bool ok4 = true;
  for (std::size_t j = 0; j < ex.m(); ++j) {
    if (j == k) continue;
    LaurentV s;
    for (std::size_t t = 0; t < ex.m(); ++t)
      if (Lambda(t, j) == 0 && ex(t, k) != 0) s += Omega(t, j) * ex(t, k);
    if (!s.is_zero()) {
      ok4 = false;
      res.witnesses.push_back({"C4", {k, j}});
    }
  }
  if (c4) *c4 = ok4;
  return res;
}

// ---------------------------------------------------------------- C4, single-seed form

struct C4Result {
  bool pass = false;
  std::vector<LaurentV> c;  // per principal component
  std::vector<std::size_t> witness;  // (j, k) of the first bad entry
};

/// Ω̂B̃ = cD̃ with D̃ = (D0; 0) and one scalar c_r ∈ Z[v^{±1}] per principal
/// component.
inline C4Result check_C4_global(const ExtendedExchangeMatrix& ex, const IntMatrix& Lambda, const PoissonMatrix& Omega) {
  const PoissonMatrix hat = hat_omega(Omega, Lambda);
  const std::size_t m = ex.m();
  PoissonMatrix P(m, ex.n());
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < ex.n(); ++k)
      for (std::size_t t = 0; t < m; ++t)
        if (ex(t, k) != 0 && !hat(j, t).is_zero()) P(j, k) += hat(j, t) * ex(t, k);

  C4Result res;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < ex.n(); ++k)
      if (j != k && !P(j, k).is_zero()) {
        res.witness = {j, k};
        return res;
      }
  for (const auto& comp : ex.components()) {
    const std::size_t first = comp.front();
    const auto c = P(first, first).divided_by(ex.D0()[first]);
    if (!c) {
      res.witness = {first, first};
      return res;
    }
    for (std::size_t k : comp)
      if (!(P(k, k) == *c * ex.D0()[k])) {
        res.witness = {k, k};
        return res;
      }
    res.c.push_back(*c);
  }
  res.pass = true;
  return res;
}

inline C4Result check_C4_global(const QuantumSeed& seed, const PoissonMatrix& Omega) {
  return check_C4_global(seed.ex(), seed.Lambda(), Omega);
}

// ---------------------------------------------------------------- bounded verification

struct Failure {
  MutationSequence sequence;
  std::string condition;
  std::vector<std::size_t> indices;

  friend bool operator<(const Failure& a, const Failure& b) {
    return std::tie(a.sequence, a.condition, a.indices) < std::tie(b.sequence, b.condition, b.indices);
  }
};

struct CompatReport {
  C1Result c1;
  C1StarResult c1_star;
  bool c2 = true;
  bool c3 = true;
  std::optional<Witness> c2_witness;
  std::optional<Witness> c3_witness;
  bool omega_integral = false;
  C4Result c4_global;
  std::size_t depth_checked = 0;
  std::size_t visited = 0;
  bool class_exhausted = false;  // every reachable triple was visited within the depth
  std::vector<Failure> failures;

  bool pass() const { return failures.empty(); }
};

/// Explores all mutation sequences up to `depth` (deduplicating equal
/// triples), checking C1, C1*, C2 and C3 at each triple, and the single-seed
/// C4 criterion plus integrality of Ω once at the root.
inline CompatReport verify_triple_bounded(const CompatibleTriple& root, std::size_t depth) {
  CompatReport rep;
  rep.depth_checked = depth;
  rep.c1 = check_C1(root.seed());
  rep.c1_star = check_C1star(root);

  try {
    const PoissonMatrix Omega = omega_from_W(root.W(), root.Lambda());
    rep.omega_integral = true;
    rep.c4_global = check_C4_global(root.seed(), Omega);
    if (!rep.c4_global.pass) rep.failures.push_back({{}, "C4", rep.c4_global.witness});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotIntegralOmega) throw;
    rep.failures.push_back({{}, "OmegaIntegral", {}});
  }

  using Key = std::tuple<IntMatrix, IntMatrix, IntMatrix>;
  std::set<Key> seen;
  std::deque<std::pair<MutationSequence, CompatibleTriple>> queue;
  seen.insert({root.B(), root.Lambda(), root.W()});
  queue.emplace_back(MutationSequence{}, root);
  rep.class_exhausted = true;

  while (!queue.empty()) {
    auto [seq, t] = std::move(queue.front());
    queue.pop_front();
    ++rep.visited;

    const C1Result c1 = check_C1(t.seed());
    if (!c1.pass) rep.failures.push_back({seq, "C1", {}});
    if (!check_C1star(t).pass) rep.failures.push_back({seq, "C1*", {}});
    const C23Result c23 = check_C2_C3(t);
    for (const auto& w : c23.witnesses) {
      if (w.condition == "C2") {
        if (rep.c2) rep.c2_witness = w;
        rep.c2 = false;
      } else {
        if (rep.c3) rep.c3_witness = w;
        rep.c3 = false;
      }
      rep.failures.push_back({seq, w.condition, w.indices});
    }

    for (std::size_t k = 0; k < t.n(); ++k) {
      if (!seq.empty() && seq.back() == k) continue;
      CompatibleTriple child = mutate(t, k);
      Key key{child.B(), child.Lambda(), child.W()};
      if (seen.count(key)) continue;
      if (seq.size() >= depth) {
        rep.class_exhausted = false;
        continue;
      }
      seen.insert(std::move(key));
      MutationSequence next = seq;
      next.push_back(k);
      queue.emplace_back(std::move(next), std::move(child));
    }
  }
  std::sort(rep.failures.begin(), rep.failures.end());
  return rep;
}

}  // namespace qca
