#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "qca/error.hpp"
#include "qca/integer.hpp"
#include "qca/matrix.hpp"

namespace qca {

/// Connected components of the graph on [0,n) with an edge i–j when
/// b_ij or b_ji is non-zero. Components are ordered by smallest member and
/// each is sorted ascending.
inline std::vector<std::vector<std::size_t>> principal_components(const IntMatrix& B) {
  if (!B.is_square()) throw Error(ErrorKind::DimensionMismatch, "principal part must be square");
  const std::size_t n = B.rows();
  std::vector<int> seen(n, 0);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    std::deque<std::size_t> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      comp.push_back(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (seen[j] || (B(i, j) == 0 && B(j, i) == 0)) continue;
        seen[j] = 1;
        queue.push_back(j);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// Diagonal entries of the minimal positive integer D with DB skew-symmetric.
///
/// On each component d is propagated by d_j = -d_i b_ij / b_ji from the
/// smallest member and then scaled to a primitive integer vector, which is the
/// componentwise minimum since every valid D is a positive multiple of it.
inline IntVector skew_symmetrizer_diagonal(const IntMatrix& B) {
  const auto comps = principal_components(B);
  const std::size_t n = B.rows();
  auto fail = [](const std::string& why) { throw Error(ErrorKind::NotSkewSymmetrizable, why); };

  for (std::size_t i = 0; i < n; ++i) {
    if (B(i, i) != 0) fail("non-zero diagonal entry at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const Int& a = B(i, j);
      const Int& b = B(j, i);
      if ((a == 0) != (b == 0) || sign(a) * sign(b) > 0)
        fail("sign pattern at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }

  IntVector d(n, 0);
  for (const auto& comp : comps) {
    std::vector<std::optional<Rational>> r(n);
    r[comp.front()] = Rational(1);
    std::deque<std::size_t> queue{comp.front()};
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t j : comp) {
        if (B(i, j) == 0) continue;
        const Rational want = -*r[i] * Rational(B(i, j)) / Rational(B(j, i));
        if (!r[j]) {
          r[j] = want;
          queue.push_back(j);
        } else if (*r[j] != want) {
          fail("inconsistent cycle through " + std::to_string(i) + " and " + std::to_string(j));
        }
      }
    }
    Int den = 1;
    for (std::size_t i : comp) den = lcm(den, denominator(*r[i]));
    Int content = 0;
    for (std::size_t i : comp) content = gcd(content, numerator(*r[i] * Rational(den)));
    for (std::size_t i : comp) d[i] = numerator(*r[i] * Rational(den)) / content;
  }
  return d;
}

inline IntMatrix skew_symmetrizer(const IntMatrix& B) {
  const IntVector d = skew_symmetrizer_diagonal(B);
  IntMatrix D(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
  return D;
}

}  // namespace qca
