#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qca/error.hpp"
#include "qca/integer.hpp"

namespace qca {

/// Sparse Laurent polynomial over Z in `Vars` variables.
///
/// Terms are kept in a sorted map with no zero coefficients, so structural
/// equality is ring equality. With one variable the indeterminate is
/// v = q^{1/2}; with two it is (u, v) = (p^{1/2}, q^{1/2}).
template <std::size_t Vars>
class Laurent {
 public:
  using Exponent = std::array<std::int64_t, Vars>;
  using Terms = std::map<Exponent, Int>;

  Laurent() = default;
  Laurent(const Int& constant) { add_term(Exponent{}, constant); }  // NOLINT: implicit by design of a ring
  Laurent(int constant) : Laurent(Int(constant)) {}                   // NOLINT

  static Laurent monomial(const Exponent& e, const Int& coeff = 1) {
    Laurent out;
    out.add_term(e, coeff);
    return out;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// True when the only term (if any) has the zero exponent.
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent{});
  }

  Int constant_term() const {
    auto it = terms_.find(Exponent{});
    return it == terms_.end() ? Int(0) : it->second;
  }

  Int coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Int(0) : it->second;
  }

  /// Sum of coefficients, i.e. the value at u = v = 1.
  Int evaluate_at_one() const {
    Int s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

  /// Multiplies by the monomial with exponent `shift`.
  Laurent shifted(const Exponent& shift) const {
    Laurent out;
    for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), add_exponents(e, shift), c);
    return out;
  }

  Laurent operator-() const {
    Laurent out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
  }

  Laurent& operator+=(const Laurent& rhs) {
    merge(rhs, false);
    return *this;
  }

  Laurent& operator-=(const Laurent& rhs) {
    merge(rhs, true);
    return *this;
  }

  Laurent& operator*=(const Laurent& rhs) {
    *this = *this * rhs;
    return *this;
  }

  Laurent& operator*=(const Int& k) {
    if (k == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= k;
    return *this;
  }

  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(Laurent a, const Int& k) { return a *= k; }
  friend Laurent operator*(const Int& k, Laurent a) { return a *= k; }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (b.terms_.size() == 1) return a.shifted(b.terms_.begin()->first) * b.terms_.begin()->second;
    if (a.terms_.size() == 1) return b.shifted(a.terms_.begin()->first) * a.terms_.begin()->second;
    if constexpr (Vars == 1) {
      if (auto dense = dense_product(a, b)) return *dense;
    }
    Laurent out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add_term(add_exponents(ea, eb), ca * cb);
    return out;
  }

  friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

  /// Coefficient-wise exact division by an integer.
  std::optional<Laurent> divided_by(const Int& k) const {
    if (k == 0) throw Error(ErrorKind::DivisionByZero, "integer divisor is zero");
    Laurent out;
    for (const auto& [e, c] : terms_) {
      if (c % k != 0) return std::nullopt;
      out.terms_.emplace(e, c / k);
    }
    return out;
  }

  static Exponent add_exponents(const Exponent& a, const Exponent& b) {
    Exponent out{};
    for (std::size_t i = 0; i < Vars; ++i) out[i] = checked_add(a[i], b[i]);
    return out;
  }

 private:
  // Linear-time merge of a sorted term list, walking both maps in order.
  void merge(const Laurent& rhs, bool negate) {
    if (rhs.terms_.size() * 16 < terms_.size()) {
      for (const auto& [e, c] : rhs.terms_) add_term(e, negate ? Int(-c) : c);
      return;
    }
    auto it = terms_.begin();
    for (const auto& [e, c] : rhs.terms_) {
      while (it != terms_.end() && it->first < e) ++it;
      if (it != terms_.end() && it->first == e) {
        if (negate)
          it->second -= c;
        else
          it->second += c;
        if (it->second == 0)
          it = terms_.erase(it);
        else
          ++it;
      } else {
        terms_.emplace_hint(it, e, negate ? Int(-c) : c);
      }
    }
  }

  // Product through a dense coefficient array when the degree span is not much
  // larger than the number of partial products.
  static std::optional<Laurent> dense_product(const Laurent& a, const Laurent& b) {
    const std::int64_t lo = checked_add(a.terms_.begin()->first[0], b.terms_.begin()->first[0]);
    const std::int64_t hi = checked_add(a.terms_.rbegin()->first[0], b.terms_.rbegin()->first[0]);
    const double pairs = static_cast<double>(a.terms_.size()) * static_cast<double>(b.terms_.size());
    const double span = static_cast<double>(hi) - static_cast<double>(lo) + 1;
    if (pairs < 64 || span > 4 * pairs + 1024 || span > 5e7) return std::nullopt;
    std::vector<Int> acc(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) acc[static_cast<std::size_t>(ea[0] + eb[0] - lo)] += ca * cb;
    Laurent out;
    for (std::size_t i = 0; i < acc.size(); ++i)
      if (acc[i] != 0) out.terms_.emplace_hint(out.terms_.end(), Exponent{lo + static_cast<std::int64_t>(i)}, std::move(acc[i]));
    return out;
  }

  void add_term(const Exponent& e, const Int& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
};

using LaurentV = Laurent<1>;
using LaurentUV = Laurent<2>;

inline LaurentV v_power(std::int64_t k, const Int& coeff = 1) { return LaurentV::monomial({k}, coeff); }

inline LaurentUV uv_power(std::int64_t u, std::int64_t v, const Int& coeff = 1) {
  return LaurentUV::monomial({u, v}, coeff);
}

/// Embeds Z[v^{±1}] into Z[u^{±1}, v^{±1}] with u-degree 0.
inline LaurentUV embed_v(const LaurentV& x) {
  LaurentUV out;
  for (const auto& [e, c] : x.terms()) out += uv_power(0, e[0], c);
  return out;
}

/// Inverse of embed_v; empty when some term has non-zero u-degree.
inline std::optional<LaurentV> project_v(const LaurentUV& x) {
  LaurentV out;
  for (const auto& [e, c] : x.terms()) {
    if (e[0] != 0) return std::nullopt;
    out += v_power(e[1], c);
  }
  return out;
}

/// The balanced q-analog [a] = (v^a - v^{-a}) / (v - v^{-1}).
inline LaurentV q_analog(std::int64_t a) {
  if (a < 0) return -q_analog(-a);
  LaurentV out;
  for (std::int64_t i = 0; i < a; ++i) out += v_power(a - 1 - 2 * i);
  return out;
}

inline LaurentV q_analog(const Int& a) { return q_analog(to_int64(a)); }

/// Exact quotient num/den in Z[v^{±1}], or nullopt when den does not divide num.
inline std::optional<LaurentV> laurent_divide_exact(const LaurentV& num, const LaurentV& den) {
  if (den.is_zero()) throw Error(ErrorKind::DivisionByZero, "Laurent divisor is zero");
  if (num.is_zero()) return LaurentV{};

  // Shift both to genuine polynomials with non-zero constant term; v is a unit,
  // so divisibility reduces to polynomial divisibility over Z.
  const std::int64_t num_low = num.terms().begin()->first[0];
  const std::int64_t den_low = den.terms().begin()->first[0];
  LaurentV rem = num.shifted({-num_low});
  const LaurentV d = den.shifted({-den_low});
  const auto& [den_top_e, den_top_c] = *d.terms().rbegin();
  const std::int64_t den_deg = den_top_e[0];

  LaurentV quotient;
  while (!rem.is_zero()) {
    const auto& [top_e, top_c] = *rem.terms().rbegin();
    if (top_e[0] < den_deg || top_c % den_top_c != 0) return std::nullopt;
    const LaurentV step = v_power(top_e[0] - den_deg, top_c / den_top_c);
    quotient += step;
    rem -= step * d;
  }
  return quotient.shifted({checked_add(num_low, -den_low)});
}

template <std::size_t Vars>
std::string to_string(const Laurent<Vars>& x) {
  if (x.is_zero()) return "0";
  static constexpr std::array<const char*, 2> names2{"u", "v"};
  std::string out;
  bool first = true;
  for (auto it = x.terms().rbegin(); it != x.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < Vars; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += Vars == 1 ? "v" : names2[i];
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    Int mag = abs(c);
    std::string term = mono.empty() ? mag.str() : (mag == 1 ? mono : mag.str() + "*" + mono);
    if (first) {
      out = (c < 0 ? "-" : "") + term;
      first = false;
    } else {
      out += (c < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

}  // namespace qca
