#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qca/compat.hpp"
#include "qca/error.hpp"
#include "qca/integer.hpp"
#include "qca/matrix.hpp"
#include "qca/nullspace.hpp"
#include "qca/seed.hpp"

namespace qca {

using IndexSet = std::vector<std::size_t>;

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

  // Classes ordered by smallest member, members ascending.
  std::vector<IndexSet> classes() {
    std::vector<IndexSet> out;
    std::vector<std::size_t> slot(parent_.size(), parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      const std::size_t r = find(i);
      if (slot[r] == parent_.size()) {
        slot[r] = out.size();
        out.emplace_back();
      }
      out[slot[r]].push_back(i);
    }
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Position of x inside a sorted index set, or npos.
inline std::size_t position(const IndexSet& s, std::size_t x) {
  auto it = std::lower_bound(s.begin(), s.end(), x);
  return (it != s.end() && *it == x) ? static_cast<std::size_t>(it - s.begin()) : static_cast<std::size_t>(-1);
}

}  // namespace detail

// ---------------------------------------------------------------- decomposition

struct Block {
  IndexSet indices;   // subset of [0, m)
  IndexSet mutables;  // indices < n, also columns of B
  IntMatrix B;        // rows `indices`, columns `mutables`
  IntMatrix Lambda;
  std::optional<IntMatrix> W;
};

struct Decomposition {
  std::vector<Block> blocks;
  IntMatrix Lambda;  // full Λ, for the off-block slices
  std::size_t n = 0;

  bool decomposable() const { return blocks.size() > 1; }

  /// Λ restricted to rows of block a and columns of block b.
  IntMatrix theta(std::size_t a, std::size_t b) const {
    return submatrix(Lambda, blocks.at(a).indices, blocks.at(b).indices);
  }
};

/// Index sets of the relation i ~ j generated by b_ij ≠ 0 (row i, column j).
inline std::vector<IndexSet> decompose_indices(const IntMatrix& B) {
  detail::UnionFind uf(B.rows());
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j)
      if (B(i, j) != 0) uf.unite(i, j);
  return uf.classes();
}

inline Decomposition decompose(const ExtendedExchangeMatrix& ex, const IntMatrix& Lambda,
                               const std::optional<IntMatrix>& W = std::nullopt) {
  Decomposition dec;
  dec.Lambda = Lambda;
  dec.n = ex.n();
  for (auto& idx : decompose_indices(ex.B())) {
    Block b;
    for (std::size_t i : idx)
      if (i < ex.n()) b.mutables.push_back(i);
    b.indices = std::move(idx);
    b.B = submatrix(ex.B(), b.indices, b.mutables);
    b.Lambda = submatrix(Lambda, b.indices, b.indices);
    if (W) b.W = submatrix(*W, b.indices, b.indices);
    dec.blocks.push_back(std::move(b));
  }
  return dec;
}

inline Decomposition decompose(const QuantumSeed& seed) { return decompose(seed.ex(), seed.Lambda()); }
inline Decomposition decompose(const CompatibleTriple& t) { return decompose(t.ex(), t.Lambda(), t.W()); }

/// For every ordered pair of distinct blocks (I₁, I₂), Θ = Λ[I₁, I₂] must
/// satisfy B̃_{I₁}ᵀΘ = 0 and ΘB̃_{I₂} = 0.
inline bool theta_check(const Decomposition& dec) {
  if (dec.blocks.size() < 2) throw Error(ErrorKind::InvalidArgument, "theta_check needs at least two blocks");
  for (std::size_t a = 0; a < dec.blocks.size(); ++a)
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
      if (a == b) continue;
      const IntMatrix T = dec.theta(a, b);
      if (!(transpose(dec.blocks[a].B) * T).is_zero()) return false;
      if (!(T * dec.blocks[b].B).is_zero()) return false;
    }
  return true;
}

// ---------------------------------------------------------------- triviality

struct TrivialityVerdict {
  bool trivial = false;
  std::vector<std::pair<IndexSet, Int>> blocks;  // (block, a) with W|block = a·Λ|block
  IndexSet witness;                              // offending block when non-trivial
  std::string reason;
};

/// Splits [0,m) along the graph with edges λ_ij ≠ 0 or W_ij ≠ 0; the
/// quantization is trivial iff W = a·Λ on every piece for an integer a. A piece
/// where Λ vanishes but W does not is non-trivial.
inline TrivialityVerdict classify_triviality(const IntMatrix& Lambda, const IntMatrix& W) {
  if (Lambda.rows() != W.rows() || Lambda.cols() != W.cols() || !Lambda.is_square())
    throw Error(ErrorKind::DimensionMismatch, "Lambda and W shapes");
  const std::size_t m = Lambda.rows();
  detail::UnionFind uf(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (Lambda(i, j) != 0 || W(i, j) != 0) uf.unite(i, j);

  TrivialityVerdict v;
  v.trivial = true;
  for (const auto& comp : uf.classes()) {
    std::optional<std::pair<std::size_t, std::size_t>> first;
    for (std::size_t i : comp) {
      for (std::size_t j : comp)
        if (Lambda(i, j) != 0) {
          first = {i, j};
          break;
        }
      if (first) break;
    }
    auto fail = [&](std::string why) {
      v.trivial = false;
      v.blocks.clear();
      v.witness = comp;
      v.reason = std::move(why);
    };
    if (!first) {
      const bool w_zero = std::all_of(comp.begin(), comp.end(), [&](std::size_t i) {
        return std::all_of(comp.begin(), comp.end(), [&](std::size_t j) { return W(i, j) == 0; });
      });
      if (!w_zero) {
        fail("W is non-zero on a block where Lambda vanishes");
        return v;
      }
      v.blocks.emplace_back(comp, Int(0));
      continue;
    }
    const auto [fi, fj] = *first;
    if (W(fi, fj) % Lambda(fi, fj) != 0) {
      fail("W/Lambda ratio is not an integer");
      return v;
    }
    const Int a = W(fi, fj) / Lambda(fi, fj);
    for (std::size_t i : comp)
      for (std::size_t j : comp)
        if (W(i, j) != a * Lambda(i, j)) {
          fail("W is not a multiple of Lambda on the block");
          return v;
        }
    v.blocks.emplace_back(comp, a);
  }
  return v;
}

// ---------------------------------------------------------------- second deformation matrices

struct Candidate {
  IntMatrix W;
  IntVector c;  // B̃ᵀW = (diag(c_r·D0) 0), per principal component
  bool omega_integral = false;
  bool certified = false;  // verify_triple_bounded passed
  std::size_t depth = 0;
  TrivialityVerdict triviality;
};

/// Unknown layout: W_ij for i < j in row-major order, then one c per component.
inline std::size_t upper_index(std::size_t m, std::size_t i, std::size_t j) {
  return i * m - i * (i + 1) / 2 + (j - i - 1);
}

inline IntMatrix skew_from_upper(std::size_t m, const IntVector& x) {
  IntMatrix W(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      W(i, j) = x[upper_index(m, i, j)];
      W(j, i) = -W(i, j);
    }
  return W;
}

inline IntVector upper_of(const IntMatrix& W) {
  const std::size_t m = W.rows();
  IntVector x;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) x.push_back(W(i, j));
  return x;
}

/// Coefficient rows of (Bᵀ S)_kj in the upper-triangle unknowns of a skew S.
inline IntMatrix skew_product_system(const IntMatrix& B, std::size_t extra_cols = 0) {
  const std::size_t m = B.rows();
  const std::size_t n = B.cols();
  const std::size_t N = m * (m - 1) / 2;
  IntMatrix A(n * m, N + extra_cols);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t row = k * m + j;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == j || B(i, k) == 0) continue;
        if (i < j)
          A(row, upper_index(m, i, j)) += B(i, k);
        else
          A(row, upper_index(m, j, i)) -= B(i, k);
      }
    }
  return A;
}

inline Candidate certify_candidate(const QuantumSeed& seed, const IntMatrix& W, std::size_t depth) {
  Candidate cand;
  cand.W = W;
  cand.depth = depth;
  const auto star = check_C1star(seed, W);
  if (!star.pass) throw Error(ErrorKind::InvalidArgument, "candidate W violates C1*");
  const auto c1 = check_C1(seed);
  for (std::size_t r = 0; r < star.c.size(); ++r) cand.c.push_back(numerator(star.c[r] * Rational(c1.scales[r])));
  try {
    (void)omega_from_W(W, seed.Lambda());
    cand.omega_integral = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotIntegralOmega) throw;
  }
  if (cand.omega_integral) cand.certified = verify_triple_bounded(CompatibleTriple(seed, W), depth).pass();
  cand.triviality = classify_triviality(seed.Lambda(), W);
  return cand;
}

struct SolveResult {
  std::vector<IntMatrix> lattice;  // basis of all integer W with B̃ᵀW = (cD0 0), HNF order
  std::vector<Candidate> candidates;
};

/// Integer solutions W (skew) of B̃ᵀW = (diag(c_r D0) 0) with integer c_r, plus
/// certification of each basis element.
inline SolveResult solve_second_deformations(const QuantumSeed& seed, std::size_t depth) {
  const auto& ex = seed.ex();
  const std::size_t m = ex.m();
  const std::size_t N = m * (m - 1) / 2;
  const std::size_t R = ex.components().size();
  IntMatrix A = skew_product_system(ex.B(), R);
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t k : ex.components()[r]) A(k * m + k, N + r) = -ex.D0()[k];

  SolveResult out;
  for (const IntMatrix& v : integer_nullspace(A)) {
    IntVector x(N);
    for (std::size_t i = 0; i < N; ++i) x[i] = v(i, 0);
    IntMatrix W = skew_from_upper(m, x);
    out.candidates.push_back(certify_candidate(seed, W, depth));
    out.lattice.push_back(std::move(W));
  }
  return out;
}

// ---------------------------------------------------------------- C-matrices and extensions

inline bool sign_coherent_columns(const IntMatrix& C) {
  for (std::size_t j = 0; j < C.cols(); ++j) {
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < C.rows(); ++i) {
      pos = pos || C(i, j) > 0;
      neg = neg || C(i, j) < 0;
    }
    if (pos && neg) return false;
  }
  return true;
}

/// C-matrix of B at the end of `seq`: the initial principal part is chosen so
/// that mutating (B₀; I_n) along seq ends at (B; C).
inline IntMatrix c_matrix(const IntMatrix& B, const MutationSequence& seq) {
  const std::size_t n = B.rows();
  const ExtendedExchangeMatrix start(B);
  const MutationSequence back(seq.rbegin(), seq.rend());
  const ExtendedExchangeMatrix B0 = apply_sequence(start, back);
  const ExtendedExchangeMatrix end = apply_sequence(ExtendedExchangeMatrix(vstack(B0.B(), identity(n))), seq);
  if (slice(end.B(), 0, n, 0, n) != B) throw Error(ErrorKind::InvalidArgument, "mutation did not return to B");
  IntMatrix C = slice(end.B(), n, 2 * n, 0, n);
  if (!sign_coherent_columns(C)) throw Error(ErrorKind::SignCoherenceViolation, "C-matrix " + to_string(C));
  return C;
}

struct ExtensionPlan {
  QuantumSeed base;
  MutationSequence cseq;
  IntMatrix C;
  std::vector<std::size_t> row_selection;
  ExtendedExchangeMatrix B_ext;
  IntMatrix Lambda_ext;
  IntMatrix P;
  IntMatrix W_ext;
  Int a = 1;
  std::size_t p_index = 0;
  std::size_t kernel_dimension = 0;
  CompatReport report;
  TrivialityVerdict triviality;
};

inline ExtensionPlan build_extension(const QuantumSeed& seed, const MutationSequence& seq,
                                     const std::vector<std::size_t>& rows, std::size_t depth,
                                     std::size_t p_index = 0, const Int& a = 1) {
  const std::size_t n = seed.n();
  const std::size_t s = rows.size();
  if (s <= n + 1)
    throw Error(ErrorKind::SizeBound, "need more than n+1 = " + std::to_string(n + 1) + " selected rows, got " +
                                          std::to_string(s));
  for (std::size_t r : rows)
    if (r >= n) throw Error(ErrorKind::InvalidArgument, "row selection index " + std::to_string(r) + " >= n");
  if (decompose(seed).decomposable()) throw Error(ErrorKind::NotIndecomposable, "seed splits into several blocks");
  for (std::size_t k : seq) require_direction(seed.ex(), k);

  const IntMatrix C = c_matrix(seed.ex().principal(), seq);
  IntMatrix Cp(s, n);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < n; ++j) Cp(i, j) = C(rows[i], j);
  const IntMatrix tail = vstack(C, Cp);

  const std::size_t t = n + s;
  const auto kernel = integer_nullspace(skew_product_system(tail));
  if (kernel.empty()) throw Error(ErrorKind::NoNonzeroP, "kernel of (C;C')^T P = 0 is trivial");
  if (p_index >= kernel.size())
    throw Error(ErrorKind::InvalidArgument, "p-index " + std::to_string(p_index) + " outside kernel of dimension " +
                                                std::to_string(kernel.size()));
  IntVector x(t * (t - 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = kernel[p_index](i, 0);
  const IntMatrix P = skew_from_upper(t, x);

  ExtendedExchangeMatrix Bext(vstack(seed.B(), tail));
  IntMatrix Lext = block_diagonal(seed.Lambda(), IntMatrix(t, t));
  IntMatrix Wext = block_diagonal(a * seed.Lambda(), P);
  QuantumSeed ext_seed(Bext, Lext);
  CompatibleTriple triple(ext_seed, Wext);

  return ExtensionPlan{seed,
                       seq,
                       C,
                       rows,
                       std::move(Bext),
                       std::move(Lext),
                       P,
                       Wext,
                       a,
                       p_index,
                       kernel.size(),
                       verify_triple_bounded(triple, depth),
                       classify_triviality(triple.Lambda(), Wext)};
}

/// Extension (B; I_n; J) of a seed without coefficients, J drawn from rows of I_n.
inline ExtensionPlan almost_principal_builder(const QuantumSeed& seed, const std::vector<std::size_t>& J_rows,
                                              std::size_t depth, std::size_t p_index = 0, const Int& a = 1) {
  if (seed.m() != seed.n()) throw Error(ErrorKind::InvalidArgument, "seed must have no coefficients (m = n)");
  const std::size_t n = seed.n();
  const std::size_t m_ext = 2 * n + J_rows.size();
  if (m_ext <= 3 * n + 1)
    throw Error(ErrorKind::SizeBound, "extended size " + std::to_string(m_ext) + " <= 3n+1 = " +
                                          std::to_string(3 * n + 1));
  return build_extension(seed, {}, J_rows, depth, p_index, a);
}

// ---------------------------------------------------------------- seeds without coefficients

struct CoefficientFreeReport {
  SolveResult solutions;
  Decomposition decomposition;
  bool lattice_matches = false;    // solution lattice equals the span of the primitive Λ_i
  bool all_trivial = false;        // every combination with coefficients in [-bound, bound]
  bool locally_standard = false;   // Ω = a_i[λ] inside blocks, 0 across
  std::size_t combinations_checked = 0;
  std::size_t non_integral_skipped = 0;  // combinations whose Ω leaves Z[v^{±1}]
};

inline CoefficientFreeReport coefficient_free_analysis(const QuantumSeed& seed, std::size_t depth,
                                                       int coefficient_bound = 3) {
  if (seed.m() != seed.n()) throw Error(ErrorKind::InvalidArgument, "seed has coefficients");
  const std::size_t m = seed.m();
  CoefficientFreeReport rep;
  rep.solutions = solve_second_deformations(seed, depth);
  rep.decomposition = decompose(seed);

  IntMatrix found(rep.solutions.lattice.size(), m * (m - 1) / 2);
  for (std::size_t r = 0; r < found.rows(); ++r) {
    const IntVector x = upper_of(rep.solutions.lattice[r]);
    for (std::size_t j = 0; j < x.size(); ++j) found(r, j) = x[j];
  }
  IntMatrix expected(rep.decomposition.blocks.size(), m * (m - 1) / 2);
  for (std::size_t r = 0; r < rep.decomposition.blocks.size(); ++r) {
    const IndexSet& idx = rep.decomposition.blocks[r].indices;
    IntMatrix L(m, m);
    for (std::size_t i : idx)
      for (std::size_t j : idx) L(i, j) = seed.Lambda()(i, j);
    const IntVector x = upper_of(L);
    Int content = 0;
    for (const Int& e : x) content = gcd(content, e);
    for (std::size_t j = 0; j < x.size(); ++j) expected(r, j) = content == 0 ? Int(0) : x[j] / content;
  }
  rep.lattice_matches = hermite_normal_form(found) == hermite_normal_form(expected);

  // Every lattice combination with small coefficients whose Ω is integral.
  const std::size_t dim = rep.solutions.lattice.size();
  std::vector<int> coef(dim, -coefficient_bound);
  rep.all_trivial = true;
  rep.locally_standard = true;
  while (true) {
    IntMatrix W(m, m);
    for (std::size_t r = 0; r < dim; ++r) W = W + Int(coef[r]) * rep.solutions.lattice[r];
    ++rep.combinations_checked;
    std::optional<PoissonMatrix> Omega;
    try {
      Omega = omega_from_W(W, seed.Lambda());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotIntegralOmega) throw;
      ++rep.non_integral_skipped;
    }
    if (Omega) {
      const TrivialityVerdict v = classify_triviality(seed.Lambda(), W);
      if (!v.trivial) {
        rep.all_trivial = false;
        rep.locally_standard = false;
      } else {
        PoissonMatrix expect(m, m);
        for (const auto& [idx, a] : v.blocks)
          for (std::size_t i : idx)
            for (std::size_t j : idx) expect(i, j) = q_analog(seed.Lambda()(i, j)) * a;
        if (!(*Omega == expect)) rep.locally_standard = false;
      }
    }
    std::size_t pos = 0;
    while (pos < dim && coef[pos] == coefficient_bound) coef[pos++] = -coefficient_bound;
    if (pos == dim) break;
    ++coef[pos];
  }
  return rep;
}

}  // namespace qca
