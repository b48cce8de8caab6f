#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qca/error.hpp"
#include "qca/integer.hpp"
#include "qca/laurent.hpp"
#include "qca/matrix.hpp"
#include "qca/symmetrizer.hpp"

namespace qca {

/// Skew-symmetric m×m matrix over Z[v^{±1}]; entry (i,j) is ω_ij.
using PoissonMatrix = Matrix<LaurentV>;

/// Directions are 0-based.
using MutationSequence = std::vector<std::size_t>;

/// m×n integer matrix whose top n×n block is skew-symmetrizable.
class ExtendedExchangeMatrix {
 public:
  ExtendedExchangeMatrix() = default;

  explicit ExtendedExchangeMatrix(IntMatrix B) : B_(std::move(B)) {
    if (B_.cols() == 0 || B_.rows() < B_.cols())
      throw Error(ErrorKind::InvalidSeed, "need 1 <= n <= m, got " + std::to_string(B_.rows()) + "x" +
                                              std::to_string(B_.cols()));
    const IntMatrix principal = slice(B_, 0, n(), 0, n());
    d0_ = skew_symmetrizer_diagonal(principal);
    components_ = principal_components(principal);
  }

  std::size_t m() const noexcept { return B_.rows(); }
  std::size_t n() const noexcept { return B_.cols(); }
  const IntMatrix& B() const noexcept { return B_; }
  const Int& operator()(std::size_t i, std::size_t j) const { return B_(i, j); }

  /// Minimal skew-symmetrizer of the principal part (diagonal entries).
  const IntVector& D0() const noexcept { return d0_; }

  /// Connected components of the principal part, by smallest member.
  const std::vector<std::vector<std::size_t>>& components() const noexcept { return components_; }

  /// Index of the component containing mutable index k.
  std::size_t component_of(std::size_t k) const {
    for (std::size_t r = 0; r < components_.size(); ++r)
      for (std::size_t i : components_[r])
        if (i == k) return r;
    throw Error(ErrorKind::DirectionOutOfRange, "index " + std::to_string(k) + " is not mutable");
  }

  IntMatrix principal() const { return slice(B_, 0, n(), 0, n()); }

  friend bool operator==(const ExtendedExchangeMatrix& a, const ExtendedExchangeMatrix& b) { return a.B_ == b.B_; }

 private:
  friend ExtendedExchangeMatrix mutate_B(const ExtendedExchangeMatrix& ex, std::size_t k);

  IntMatrix B_;
  IntVector d0_;
  std::vector<std::vector<std::size_t>> components_;
};

inline void require_direction(const ExtendedExchangeMatrix& ex, std::size_t k) {
  if (k >= ex.n())
    throw Error(ErrorKind::DirectionOutOfRange,
                "direction " + std::to_string(k) + " not in [0," + std::to_string(ex.n()) + ")");
}

/// Matrix mutation. The skew-symmetrizer and the component structure of the
/// principal part are mutation invariant, so they are carried over.
inline ExtendedExchangeMatrix mutate_B(const ExtendedExchangeMatrix& ex, std::size_t k) {
  require_direction(ex, k);
  const IntMatrix& B = ex.B();
  IntMatrix out(B.rows(), B.cols());
  for (std::size_t i = 0; i < B.rows(); ++i) {
    for (std::size_t j = 0; j < B.cols(); ++j) {
      if (i == k || j == k) {
        out(i, j) = -B(i, j);
      } else {
        const Int prod = B(i, k) * B(k, j);
        out(i, j) = B(i, j) + (prod > 0 ? Int(sign(B(i, k))) * prod : Int(0));
      }
    }
  }
  ExtendedExchangeMatrix res;
  res.B_ = std::move(out);
  res.d0_ = ex.d0_;
  res.components_ = ex.components_;
  return res;
}

/// Shared mutation rule for Λ, W and the integer Poisson matrix Ψ, using the
/// pre-mutation exchange matrix.
inline IntMatrix mutate_skew_form(const IntMatrix& L, const ExtendedExchangeMatrix& ex, std::size_t k) {
  require_direction(ex, k);
  const std::size_t m = ex.m();
  if (L.rows() != m || L.cols() != m) throw Error(ErrorKind::DimensionMismatch, "form must be m x m");
  IntMatrix out = L;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == k) continue;
    Int s = -L(k, j);
    for (std::size_t l = 0; l < m; ++l) {
      const Int& b = ex(l, k);
      if (b > 0) s += b * L(l, j);
    }
    out(k, j) = s;
    out(j, k) = -s;
  }
  return out;
}

inline IntMatrix mutate_Omega_nonquantum(const IntMatrix& Psi, const ExtendedExchangeMatrix& ex, std::size_t k) {
  return mutate_skew_form(Psi, ex, k);
}

/// Result of the C1 test B̃ᵀΛ = (M 0): per principal component r, the positive
/// integer d_r with M = d_r·D0 on that component.
inline std::optional<IntVector> c1_scales(const ExtendedExchangeMatrix& ex, const IntMatrix& Lambda) {
  if (Lambda.rows() != ex.m() || Lambda.cols() != ex.m()) return std::nullopt;
  const IntMatrix P = transpose(ex.B()) * Lambda;
  for (std::size_t k = 0; k < ex.n(); ++k)
    for (std::size_t j = 0; j < ex.m(); ++j)
      if (j != k && P(k, j) != 0) return std::nullopt;
  IntVector scales;
  for (const auto& comp : ex.components()) {
    const std::size_t first = comp.front();
    if (P(first, first) % ex.D0()[first] != 0) return std::nullopt;
    const Int d = P(first, first) / ex.D0()[first];
    if (d <= 0) return std::nullopt;
    for (std::size_t k : comp)
      if (P(k, k) != d * ex.D0()[k]) return std::nullopt;
    scales.push_back(d);
  }
  return scales;
}

/// Compatible pair (B̃, Λ); C1 is verified on construction.
class QuantumSeed {
 public:
  QuantumSeed(ExtendedExchangeMatrix ex, IntMatrix Lambda) : ex_(std::move(ex)), Lambda_(std::move(Lambda)) {
    if (Lambda_.rows() != ex_.m() || Lambda_.cols() != ex_.m())
      throw Error(ErrorKind::DimensionMismatch, "Lambda must be m x m");
    if (!is_skew_symmetric(Lambda_)) throw Error(ErrorKind::InvalidSeed, "Lambda is not skew-symmetric");
    if (!c1_scales(ex_, Lambda_)) throw Error(ErrorKind::InvalidSeed, "B^T Lambda is not (D 0) for positive D");
  }

  QuantumSeed(IntMatrix B, IntMatrix Lambda) : QuantumSeed(ExtendedExchangeMatrix(std::move(B)), std::move(Lambda)) {}

  const ExtendedExchangeMatrix& ex() const noexcept { return ex_; }
  const IntMatrix& B() const noexcept { return ex_.B(); }
  const IntMatrix& Lambda() const noexcept { return Lambda_; }
  std::size_t m() const noexcept { return ex_.m(); }
  std::size_t n() const noexcept { return ex_.n(); }

  friend bool operator==(const QuantumSeed& a, const QuantumSeed& b) {
    return a.ex_ == b.ex_ && a.Lambda_ == b.Lambda_;
  }

  /// Skips validation; for mutation results, which preserve C1.
  static QuantumSeed trusted(ExtendedExchangeMatrix ex, IntMatrix Lambda) {
    return QuantumSeed(std::move(ex), std::move(Lambda), Unchecked{});
  }

 private:
  struct Unchecked {};
  QuantumSeed(ExtendedExchangeMatrix ex, IntMatrix Lambda, Unchecked)
      : ex_(std::move(ex)), Lambda_(std::move(Lambda)) {}

  ExtendedExchangeMatrix ex_;
  IntMatrix Lambda_;
};

/// Per-component scalars c_r with B̃ᵀW = (c_r·M 0), where M is the C1 diagonal
/// of the seed. Empty when W has the wrong shape or pattern.
inline std::optional<std::vector<Rational>> c1star_scalars(const QuantumSeed& seed, const IntMatrix& W) {
  const auto& ex = seed.ex();
  if (W.rows() != ex.m() || W.cols() != ex.m()) return std::nullopt;
  const auto scales = c1_scales(ex, seed.Lambda());
  if (!scales) return std::nullopt;
  const IntMatrix P = transpose(ex.B()) * W;
  for (std::size_t k = 0; k < ex.n(); ++k)
    for (std::size_t j = 0; j < ex.m(); ++j)
      if (j != k && P(k, j) != 0) return std::nullopt;
  std::vector<Rational> out;
  for (std::size_t r = 0; r < ex.components().size(); ++r) {
    const auto& comp = ex.components()[r];
    const std::size_t first = comp.front();
    const Rational c = Rational(P(first, first)) / Rational((*scales)[r] * ex.D0()[first]);
    for (std::size_t k : comp)
      if (Rational(P(k, k)) != c * Rational((*scales)[r] * ex.D0()[k])) return std::nullopt;
    out.push_back(c);
  }
  return out;
}

/// (B̃, Λ, W) with C1* verified on construction. Full compatibility quantifies
/// over the mutation class and is left to the bounded verifier.
class CompatibleTriple {
 public:
  CompatibleTriple(QuantumSeed seed, IntMatrix W) : seed_(std::move(seed)), W_(std::move(W)) {
    if (W_.rows() != seed_.m() || W_.cols() != seed_.m()) throw Error(ErrorKind::DimensionMismatch, "W must be m x m");
    if (!is_skew_symmetric(W_)) throw Error(ErrorKind::InvalidSeed, "W is not skew-symmetric");
    if (!c1star_scalars(seed_, W_)) throw Error(ErrorKind::InvalidSeed, "B^T W is not a multiple of (D 0)");
  }

  const QuantumSeed& seed() const noexcept { return seed_; }
  const ExtendedExchangeMatrix& ex() const noexcept { return seed_.ex(); }
  const IntMatrix& B() const noexcept { return seed_.B(); }
  const IntMatrix& Lambda() const noexcept { return seed_.Lambda(); }
  const IntMatrix& W() const noexcept { return W_; }
  std::size_t m() const noexcept { return seed_.m(); }
  std::size_t n() const noexcept { return seed_.n(); }

  friend bool operator==(const CompatibleTriple& a, const CompatibleTriple& b) {
    return a.seed_ == b.seed_ && a.W_ == b.W_;
  }

  static CompatibleTriple trusted(QuantumSeed seed, IntMatrix W) {
    return CompatibleTriple(std::move(seed), std::move(W), Unchecked{});
  }

 private:
  struct Unchecked {};
  CompatibleTriple(QuantumSeed seed, IntMatrix W, Unchecked) : seed_(std::move(seed)), W_(std::move(W)) {}

  QuantumSeed seed_;
  IntMatrix W_;
};

inline IntMatrix mutate_Lambda(const QuantumSeed& seed, std::size_t k) {
  return mutate_skew_form(seed.Lambda(), seed.ex(), k);
}

inline IntMatrix mutate_W(const CompatibleTriple& triple, std::size_t k) {
  return mutate_skew_form(triple.W(), triple.ex(), k);
}

/// Direct mutation of the Poisson matrix at a seed (B̃, Λ). Only row and
/// column k change. The value is the formula's value whether or not Ω is
/// log-canonical with the mutated cluster; certification lives elsewhere.
inline PoissonMatrix mutate_Omega_direct(const PoissonMatrix& Omega, const ExtendedExchangeMatrix& ex,
                                         const IntMatrix& Lambda, std::size_t k) {
  require_direction(ex, k);
  const std::size_t m = ex.m();
  if (Omega.rows() != m || Omega.cols() != m || Lambda.rows() != m || Lambda.cols() != m)
    throw Error(ErrorKind::DimensionMismatch, "Omega and Lambda must be m x m");
  auto bp = [&](std::size_t i) { return positive_part(ex(i, k)); };
  auto lam = [&](std::size_t i, std::size_t j) { return to_int64(Lambda(i, j)); };

  PoissonMatrix out = Omega;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == k) continue;
    LaurentV H;
    for (std::size_t t = 0; t < m; ++t) {
      if (ex(t, k) <= 0 || Omega(t, j).is_zero()) continue;
      Int s = 0;
      for (std::size_t i = t; i < m; ++i) s += (bp(i) - (i == k ? 1 : 0)) * Lambda(j, i);
      const std::int64_t S = to_int64(s);
      const std::int64_t ljt = lam(j, t);
      const std::int64_t count = to_int64(ex(t, k));
      LaurentV inner;
      if (ljt == 0)
        inner = v_power(checked_mul(2, S), count);
      else
        for (std::int64_t h = 1; h <= count; ++h) inner += v_power(checked_add(checked_mul(2, S), -checked_mul(2 * h, ljt)));
      H += Omega(t, j) * v_power(ljt) * inner;
    }
    Int tail = 0;
    for (std::size_t i = k + 1; i < m; ++i) tail += Lambda(j, i) * bp(i);
    H -= Omega(k, j) * v_power(to_int64(Lambda(k, j) + 2 * tail));

    Int pre = Lambda(j, k);
    for (std::size_t t = 0; t < m; ++t) pre -= bp(t) * Lambda(j, t);
    const LaurentV w = v_power(to_int64(pre)) * H;
    out(k, j) = w;
    out(j, k) = -w;
  }
  return out;
}

inline PoissonMatrix mutate_Omega_direct(const PoissonMatrix& Omega, const QuantumSeed& seed, std::size_t k) {
  return mutate_Omega_direct(Omega, seed.ex(), seed.Lambda(), k);
}

inline QuantumSeed mutate(const QuantumSeed& seed, std::size_t k) {
  IntMatrix L = mutate_Lambda(seed, k);
  return QuantumSeed::trusted(mutate_B(seed.ex(), k), std::move(L));
}

inline CompatibleTriple mutate(const CompatibleTriple& triple, std::size_t k) {
  IntMatrix W = mutate_W(triple, k);
  return CompatibleTriple::trusted(mutate(triple.seed(), k), std::move(W));
}

template <class Obj>
Obj apply_sequence(Obj obj, const MutationSequence& seq) {
  for (std::size_t k : seq) obj = mutate(obj, k);
  return obj;
}

inline ExtendedExchangeMatrix apply_sequence(ExtendedExchangeMatrix ex, const MutationSequence& seq) {
  for (std::size_t k : seq) ex = mutate_B(ex, k);
  return ex;
}

}  // namespace qca
