#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qca/error.hpp"
#include "qca/integer.hpp"
#include "qca/laurent.hpp"
#include "qca/matrix.hpp"
#include "qca/seed.hpp"

namespace qca {

using ExponentVector = std::vector<std::int64_t>;

/// Commutation data of a (two-parameter) quantum torus:
/// X^e X^f = u^{eᵀWf} v^{eᵀΛf} X^{e+f}. W = 0 gives the one-parameter torus.
class TorusContext {
 public:
  explicit TorusContext(IntMatrix Lambda) : TorusContext(Lambda, IntMatrix(Lambda.rows(), Lambda.cols())) {}

  TorusContext(IntMatrix Lambda, IntMatrix W) : Lambda_(std::move(Lambda)), W_(std::move(W)) {
    if (!is_skew_symmetric(Lambda_) || !is_skew_symmetric(W_))
      throw Error(ErrorKind::InvalidArgument, "torus forms must be skew-symmetric");
    if (Lambda_.rows() != W_.rows()) throw Error(ErrorKind::DimensionMismatch, "Lambda and W sizes differ");
  }

  std::size_t m() const noexcept { return Lambda_.rows(); }
  const IntMatrix& Lambda() const noexcept { return Lambda_; }
  const IntMatrix& W() const noexcept { return W_; }
  bool one_parameter() const { return W_.is_zero(); }

 private:
  IntMatrix Lambda_;
  IntMatrix W_;
};

inline Int bilinear_form(const IntMatrix& M, const ExponentVector& e, const ExponentVector& f) {
  if (M.rows() != e.size() || M.cols() != f.size())
    throw Error(ErrorKind::DimensionMismatch, "bilinear form arguments");
  Int s = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    Int row = 0;
    for (std::size_t j = 0; j < f.size(); ++j)
      if (f[j] != 0) row += M(i, j) * f[j];
    s += row * e[i];
  }
  return s;
}

inline ExponentVector unit_vector(std::size_t m, std::size_t i, std::int64_t value = 1) {
  ExponentVector e(m, 0);
  e.at(i) = value;
  return e;
}

inline ExponentVector add_exponents(const ExponentVector& a, const ExponentVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "exponent lengths");
  ExponentVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_add(a[i], b[i]);
  return out;
}

struct TorusMonomial {
  LaurentUV coeff;
  ExponentVector exponent;

  friend bool operator==(const TorusMonomial& a, const TorusMonomial& b) {
    return a.coeff == b.coeff && a.exponent == b.exponent;
  }
};

inline TorusMonomial mono_mul(const TorusContext& ctx, const TorusMonomial& a, const TorusMonomial& b) {
  if (a.exponent.size() != ctx.m() || b.exponent.size() != ctx.m())
    throw Error(ErrorKind::DimensionMismatch, "monomial length differs from torus rank");
  const std::int64_t u = to_int64(bilinear_form(ctx.W(), a.exponent, b.exponent));
  const std::int64_t v = to_int64(bilinear_form(ctx.Lambda(), a.exponent, b.exponent));
  return {a.coeff * b.coeff * uv_power(u, v), add_exponents(a.exponent, b.exponent)};
}

/// Finite sum of monomials X^e with LaurentUV coefficients, zero terms dropped.
class TorusElement {
 public:
  using Terms = std::map<ExponentVector, LaurentUV>;

  TorusElement() = default;

  static TorusElement monomial(const ExponentVector& e, const LaurentUV& c = LaurentUV(1)) {
    TorusElement out;
    out.add(e, c);
    return out;
  }

  static TorusElement from(const TorusMonomial& x) { return monomial(x.exponent, x.coeff); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  LaurentUV coefficient(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? LaurentUV{} : it->second;
  }

  void add(const ExponentVector& e, const LaurentUV& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  TorusElement& operator+=(const TorusElement& rhs) {
    for (const auto& [e, c] : rhs.terms_) add(e, c);
    return *this;
  }

  TorusElement& operator-=(const TorusElement& rhs) {
    for (const auto& [e, c] : rhs.terms_) add(e, -c);
    return *this;
  }

  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
  friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
  TorusElement operator-() const { return TorusElement{} - *this; }

  /// Central scalar multiple.
  friend TorusElement operator*(const LaurentUV& k, const TorusElement& a) {
    TorusElement out;
    for (const auto& [e, c] : a.terms_) out.add(e, k * c);
    return out;
  }

  friend bool operator==(const TorusElement& a, const TorusElement& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

inline TorusElement mul(const TorusContext& ctx, const TorusElement& a, const TorusElement& b) {
  TorusElement out;
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      const TorusMonomial p = mono_mul(ctx, {ca, ea}, {cb, eb});
      out.add(p.exponent, p.coeff);
    }
  return out;
}

/// One-step mutated cluster variable X^{-e_k+[b_k]_+} + X^{-e_k+[-b_k]_+}.
inline TorusElement mutated_variable(const TorusContext& ctx, const ExtendedExchangeMatrix& ex, std::size_t k) {
  require_direction(ex, k);
  if (ctx.m() != ex.m()) throw Error(ErrorKind::DimensionMismatch, "torus rank differs from m");
  ExponentVector plus(ex.m(), 0), minus(ex.m(), 0);
  for (std::size_t i = 0; i < ex.m(); ++i) {
    const std::int64_t b = to_int64(ex(i, k));
    plus[i] = b > 0 ? b : 0;
    minus[i] = b < 0 ? -b : 0;
  }
  plus[k] -= 1;
  minus[k] -= 1;
  return TorusElement::monomial(plus) + TorusElement::monomial(minus);
}

namespace detail {

struct Letter {
  std::size_t index;
  int sign;
};

// X^e = v^{Σ_{h<l} e_h e_l λ_lh} X_0^{e_0} ⋯ X_{m-1}^{e_{m-1}}.
inline std::vector<Letter> ordered_word(const ExponentVector& e) {
  std::vector<Letter> word;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::int64_t count = e[i] < 0 ? -e[i] : e[i];
    for (std::int64_t c = 0; c < count; ++c) word.push_back({i, e[i] < 0 ? -1 : 1});
  }
  return word;
}

inline std::int64_t ordering_shift(const IntMatrix& Lambda, const ExponentVector& e) {
  Int s = 0;
  for (std::size_t h = 0; h < e.size(); ++h)
    for (std::size_t l = h + 1; l < e.size(); ++l)
      if (e[h] != 0 && e[l] != 0) s += Lambda(l, h) * e[h] * e[l];
  return to_int64(s);
}

inline TorusMonomial letter_monomial(std::size_t m, const Letter& x) {
  return {LaurentUV(1), unit_vector(m, x.index, x.sign)};
}

// Prefix products P[0]=1, P[i] = x_0 ⋯ x_{i-1}, and suffix products S[i] = x_i ⋯ x_end.
inline std::pair<std::vector<TorusMonomial>, std::vector<TorusMonomial>> partial_products(
    const TorusContext& ctx, const std::vector<Letter>& word) {
  const std::size_t m = ctx.m();
  const TorusMonomial one{LaurentUV(1), ExponentVector(m, 0)};
  std::vector<TorusMonomial> pre(word.size() + 1, one), suf(word.size() + 1, one);
  for (std::size_t i = 0; i < word.size(); ++i) pre[i + 1] = mono_mul(ctx, pre[i], letter_monomial(m, word[i]));
  for (std::size_t i = word.size(); i-- > 0;) suf[i] = mono_mul(ctx, letter_monomial(m, word[i]), suf[i + 1]);
  return {pre, suf};
}

// Bracket of two generator letters X_i^{±1}, X_j^{±1}.
inline TorusMonomial letter_bracket(const TorusContext& ctx, const PoissonMatrix& Omega, const Letter& a,
                                    const Letter& b) {
  const std::size_t m = ctx.m();
  TorusMonomial core{embed_v(Omega(a.index, b.index)),
                     add_exponents(unit_vector(m, a.index), unit_vector(m, b.index))};
  if (b.sign < 0) {
    const TorusMonomial inv = letter_monomial(m, b);
    core = mono_mul(ctx, mono_mul(ctx, inv, core), inv);
    core.coeff = -core.coeff;
  }
  if (a.sign < 0) {
    const TorusMonomial inv = letter_monomial(m, a);
    core = mono_mul(ctx, mono_mul(ctx, inv, core), inv);
    core.coeff = -core.coeff;
  }
  return core;
}

inline TorusElement monomial_bracket(const TorusContext& ctx, const PoissonMatrix& Omega, const ExponentVector& e,
                                     const ExponentVector& f) {
  const auto wa = ordered_word(e);
  const auto wb = ordered_word(f);
  const auto [apre, asuf] = partial_products(ctx, wa);
  const auto [bpre, bsuf] = partial_products(ctx, wb);
  TorusElement out;
  for (std::size_t p = 0; p < wa.size(); ++p) {
    for (std::size_t r = 0; r < wb.size(); ++r) {
      const TorusMonomial br = letter_bracket(ctx, Omega, wa[p], wb[r]);
      if (br.coeff.is_zero()) continue;
      TorusMonomial t = mono_mul(ctx, apre[p], bpre[r]);
      t = mono_mul(ctx, t, br);
      t = mono_mul(ctx, t, bsuf[r + 1]);
      t = mono_mul(ctx, t, asuf[p + 1]);
      out.add(t.exponent, t.coeff);
    }
  }
  const std::int64_t shift = checked_add(ordering_shift(ctx.Lambda(), e), ordering_shift(ctx.Lambda(), f));
  return uv_power(0, shift) * out;
}

}  // namespace detail

/// Poisson bracket on the one-parameter torus, extended from
/// {X_i, X_j} = ω_ij X^{e_i+e_j} by bilinearity and the Leibniz rule, with
/// each monomial expanded in ascending generator order.
inline TorusElement poisson_bracket_leibniz(const TorusContext& ctx, const PoissonMatrix& Omega, const TorusElement& a,
                                            const TorusElement& b) {
  if (!ctx.one_parameter()) throw Error(ErrorKind::TwoParameterUnsupported, "bracket needs W = 0");
  if (Omega.rows() != ctx.m() || Omega.cols() != ctx.m())
    throw Error(ErrorKind::DimensionMismatch, "Omega must be m x m");
  TorusElement out;
  for (const auto& [e, ca] : a.terms())
    for (const auto& [f, cb] : b.terms()) {
      if (e.size() != ctx.m() || f.size() != ctx.m())
        throw Error(ErrorKind::DimensionMismatch, "element length differs from torus rank");
      out += (ca * cb) * detail::monomial_bracket(ctx, Omega, e, f);
    }
  return out;
}

struct LogCanonicalResult {
  bool ok = false;
  LaurentV omega;         // ω′_kj when ok
  TorusElement residual;  // {X′_k, X_j} − ω′·v^{λ′_jk} X′_k X_j, or the bracket itself when no ω′ fits
};

/// Tests whether {X′_k, X_j} = ω′ v^{λ′_jk} X′_k X_j for a single ω′ ∈ Z[v^{±1}].
inline LogCanonicalResult verify_log_canonical_step(const TorusContext& ctx, const PoissonMatrix& Omega,
                                                    const QuantumSeed& seed, std::size_t k, std::size_t j) {
  require_direction(seed.ex(), k);
  if (j >= seed.m() || j == k) throw Error(ErrorKind::InvalidArgument, "need j != k inside [0,m)");
  if (ctx.m() != seed.m() || ctx.Lambda() != seed.Lambda())
    throw Error(ErrorKind::DimensionMismatch, "torus context does not match the seed");

  const TorusElement xk = mutated_variable(ctx, seed.ex(), k);
  const TorusElement xj = TorusElement::monomial(unit_vector(seed.m(), j));
  const TorusElement bracket = poisson_bracket_leibniz(ctx, Omega, xk, xj);
  const IntMatrix L1 = mutate_Lambda(seed, k);
  const TorusElement target = uv_power(0, to_int64(L1(j, k))) * mul(ctx, xk, xj);

  LogCanonicalResult res;
  res.residual = bracket;
  const auto& [e0, c0] = *target.terms().begin();
  const auto num = project_v(bracket.coefficient(e0));
  const auto den = project_v(c0);
  if (!num || !den) return res;
  const auto w = laurent_divide_exact(*num, *den);
  if (!w) return res;
  res.residual = bracket - embed_v(*w) * target;
  res.ok = res.residual.is_zero();
  if (res.ok) res.omega = *w;
  return res;
}

}  // namespace qca
