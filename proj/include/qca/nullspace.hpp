#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qca/integer.hpp"
#include "qca/matrix.hpp"

namespace qca {

namespace detail {

inline void swap_rows(IntMatrix& M, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < M.cols(); ++j) std::swap(M(a, j), M(b, j));
}

// M.row(dst) -= k * M.row(src)
inline void sub_row(IntMatrix& M, std::size_t dst, std::size_t src, const Int& k) {
  if (k == 0) return;
  for (std::size_t j = 0; j < M.cols(); ++j) M(dst, j) -= k * M(src, j);
}

inline void negate_row(IntMatrix& M, std::size_t r) {
  for (std::size_t j = 0; j < M.cols(); ++j) M(r, j) = -M(r, j);
}

// Floor division for Int (cpp_int truncates toward zero).
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

/// Unimodular row echelon reduction restricted to columns [0, pivot_cols).
/// Pivot choice per column: smallest |entry| among rows at or below the
/// current pivot row, lowest row index on ties. Returns the pivot count.
inline std::size_t echelon(IntMatrix& M, std::size_t pivot_cols, std::vector<std::size_t>* pivot_positions = nullptr) {
  std::size_t p = 0;
  for (std::size_t c = 0; c < pivot_cols && p < M.rows(); ++c) {
    while (true) {
      std::size_t best = M.rows();
      for (std::size_t r = p; r < M.rows(); ++r) {
        if (M(r, c) == 0) continue;
        if (best == M.rows() || abs(M(r, c)) < abs(M(best, c))) best = r;
      }
      if (best == M.rows()) break;
      swap_rows(M, p, best);
      bool clean = true;
      for (std::size_t r = p + 1; r < M.rows(); ++r) {
        if (M(r, c) == 0) continue;
        sub_row(M, r, p, M(r, c) / M(p, c));
        if (M(r, c) != 0) clean = false;
      }
      if (clean) {
        if (pivot_positions) pivot_positions->push_back(c);
        ++p;
        break;
      }
    }
  }
  return p;
}

}  // namespace detail

/// Row Hermite normal form: echelon rows first with positive pivots and the
/// entries above each pivot reduced into [0, pivot), zero rows last.
inline IntMatrix hermite_normal_form(IntMatrix M) {
  std::vector<std::size_t> pivots;
  const std::size_t rank = detail::echelon(M, M.cols(), &pivots);
  for (std::size_t r = 0; r < rank; ++r) {
    const std::size_t c = pivots[r];
    if (M(r, c) < 0) detail::negate_row(M, r);
    for (std::size_t above = 0; above < r; ++above)
      detail::sub_row(M, above, r, detail::floor_div(M(above, c), M(r, c)));
  }
  return M;
}

/// Rank over Q, via the same unimodular elimination.
inline std::size_t integer_rank(IntMatrix M) { return detail::echelon(M, M.cols()); }

/// Basis of the integer lattice {x : A x = 0}, each returned as an n×1 column.
///
/// The kernel is read off the unimodular transform that clears Aᵀ, and then
/// brought to Hermite normal form, so the basis is canonical and each vector
/// is primitive.
inline std::vector<IntMatrix> integer_nullspace(const IntMatrix& A) {
  const std::size_t r = A.rows();
  const std::size_t n = A.cols();
  IntMatrix M(n, r + n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) M(i, j) = A(j, i);
    M(i, r + i) = 1;
  }
  const std::size_t rank = detail::echelon(M, r);
  if (rank == n) return {};

  IntMatrix K(n - rank, n);
  for (std::size_t i = rank; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) K(i - rank, j) = M(i, r + j);
  const IntMatrix H = hermite_normal_form(K);

  std::vector<IntMatrix> basis;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    IntMatrix col(n, 1);
    for (std::size_t j = 0; j < n; ++j) col(j, 0) = H(i, j);
    basis.push_back(std::move(col));
  }
  return basis;
}

}  // namespace qca
