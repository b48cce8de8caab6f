#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "qca/fixtures.hpp"
#include "qca/nullspace.hpp"
#include "qca/structure.hpp"
#include "support/oracles.hpp"
#include "support/random_seeds.hpp"

using namespace qca;

namespace {

template <class F>
bool throws_kind(F&& f, ErrorKind kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

// Determinant over Q by elimination.
Rational determinant(const IntMatrix& A) {
  const std::size_t n = A.rows();
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[i][j] = Rational(A(i, j));
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(M[p], M[c]);
      det = -det;
    }
    det *= M[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = M[r][c] / M[c][c];
      for (std::size_t j = c; j < n; ++j) M[r][j] -= f * M[c][j];
    }
  }
  return det;
}

// (Tᵀ S)_kj for every upper-triangle unit skew S, as matrix columns.
IntMatrix unit_skew_system(const IntMatrix& T) {
  const std::size_t t = T.rows();
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = i + 1; j < t; ++j) {
      IntMatrix S(t, t);
      S(i, j) = 1;
      S(j, i) = -1;
      const IntMatrix P = transpose(T) * S;
      IntVector v;
      for (std::size_t a = 0; a < P.rows(); ++a)
        for (std::size_t b = 0; b < P.cols(); ++b) v.push_back(P(a, b));
      cols.push_back(v);
    }
  IntMatrix A(cols.front().size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < cols[c].size(); ++r) A(r, c) = cols[c][r];
  return A;
}

IntMatrix sl2_W(const Int& w1, const Int& w2) { return fixtures::sl2(w1, w2).W(); }

}  // namespace

TEST_CASE("decomposition examples", "[structure]") {
  const auto s = fixtures::sl2(3, 1);
  const auto d1 = decompose(s);
  REQUIRE(d1.blocks.size() == 1);
  CHECK(d1.blocks[0].indices == IndexSet{0, 1, 2});
  CHECK(d1.blocks[0].W == s.W());
  CHECK(decompose(fixtures::ex5x2(1, 1)).blocks.size() == 1);

  const auto d4 = decompose(fixtures::block4free());
  REQUIRE(d4.blocks.size() == 2);
  CHECK(d4.blocks[0].indices == IndexSet{0, 1});
  CHECK(d4.blocks[1].indices == IndexSet{2, 3});
  CHECK(d4.blocks[1].B == IntMatrix{{0, 2}, {-1, 0}});
  CHECK(d4.theta(0, 1).is_zero());

  // Frozen rows join only through their non-zero entries; a zero row is alone.
  const IntMatrix B{{0, 1}, {-1, 0}, {0, 0}, {2, 0}};
  const auto parts = decompose_indices(B);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == IndexSet{0, 1, 3});
  CHECK(parts[1] == IndexSet{2});
}

TEST_CASE("decomposition is a fixed point", "[structure][property]") {
  gen::Rng rng(401);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = rng.index(1, 5);
    const std::size_t m = rng.index(n, 7);
    IntMatrix B = gen::random_exchange(rng, m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng.coin(0.4)) {
          B(i, j) = 0;
          if (i < n) B(j, i) = 0;
        }
    const auto parts = decompose_indices(B);
    std::vector<int> owner(m, -1);
    std::size_t total = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      total += parts[p].size();
      for (std::size_t i : parts[p]) owner[i] = static_cast<int>(p);
      if (p > 0) CHECK(parts[p - 1].front() < parts[p].front());
    }
    CHECK(total == m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (B(i, j) != 0) CHECK(owner[i] == owner[j]);
    for (const auto& part : parts) {
      IndexSet cols;
      for (std::size_t i : part)
        if (i < n) cols.push_back(i);
      CHECK(decompose_indices(submatrix(B, part, cols)).size() == 1);
    }
  }
}

TEST_CASE("theta check", "[structure]") {
  CHECK(theta_check(decompose(fixtures::block4free())));
  const auto seed = fixtures::block4free();
  IntMatrix L = seed.Lambda();
  L(0, 2) = 1;
  L(2, 0) = -1;
  CHECK_FALSE(theta_check(decompose(seed.ex(), L)));
  CHECK(throws_kind([] { (void)theta_check(decompose(fixtures::sl2(1, 1))); }, ErrorKind::InvalidArgument));
  // A cross term annihilated on both sides: rows 2 and 3 of a B with zero
  // frozen part, linked by Θ.
  const ExtendedExchangeMatrix ex(IntMatrix{{0, 1}, {-1, 0}, {0, 0}, {0, 0}});
  IntMatrix L2(4, 4);
  L2(0, 1) = 1;
  L2(1, 0) = -1;
  L2(2, 3) = 1;
  L2(3, 2) = -1;
  const auto dec = decompose(ex, L2);
  REQUIRE(dec.blocks.size() == 3);
  CHECK(theta_check(dec));
}

TEST_CASE("triviality classification", "[structure]") {
  for (int w1 = -3; w1 <= 3; ++w1)
    for (int w2 = -3; w2 <= 3; ++w2) {
      const auto t = fixtures::sl2(w1, w2);
      const auto v = classify_triviality(t.Lambda(), t.W());
      CHECK(v.trivial == (w1 == w2));
      if (v.trivial) {
        REQUIRE(v.blocks.size() == 1);
        CHECK(v.blocks[0].second == w1);
      }
    }
  const auto r2 = fixtures::rank2free();
  const auto five = classify_triviality(r2.Lambda(), Int(5) * r2.Lambda());
  CHECK(five.trivial);
  CHECK(five.blocks[0].second == 5);
  const auto e5 = classify_triviality(fixtures::ex5x2(1, 1).Lambda(), fixtures::ex5x2(1, 1).W());
  CHECK_FALSE(e5.trivial);
  CHECK(e5.witness == IndexSet{2, 3, 4});
  CHECK(classify_triviality(fixtures::ex5x2(1, 0).Lambda(), fixtures::ex5x2(1, 0).W()).trivial);
  CHECK(throws_kind([] { (void)classify_triviality(IntMatrix(2, 2), IntMatrix(3, 3)); }, ErrorKind::DimensionMismatch));
  // Non-integral ratio.
  const IntMatrix L{{0, 2}, {-2, 0}};
  CHECK_FALSE(classify_triviality(L, IntMatrix{{0, 1}, {-1, 0}}).trivial);
}

TEST_CASE("second deformation matrices of SL2", "[structure]") {
  const auto s = fixtures::sl2(3, 1).seed();
  const auto res = solve_second_deformations(s, 5);
  REQUIRE(res.lattice.size() == 2);
  // Each basis element has the displayed shape, and together they give every (w1, w2).
  for (const auto& W : res.lattice) {
    CHECK(W(1, 2) == 0);
    CHECK(W == sl2_W(-W(0, 1), -W(0, 2)));
  }
  const IntMatrix coords{{-res.lattice[0](0, 1), -res.lattice[0](0, 2)}, {-res.lattice[1](0, 1), -res.lattice[1](0, 2)}};
  CHECK(abs(numerator(determinant(coords))) == 1);
  for (const auto& c : res.candidates) {
    CHECK(c.omega_integral);
    CHECK(c.certified);
  }
  // Brute force over small entries of the same equations.
  // Unknowns (W01, W02, W12, c); (BᵀW)_0j = W_1j + W_2j.
  IntMatrix A(3, 4);
  A(0, 0) = -1;  // j = 0: -W01 - W02 = c
  A(0, 1) = -1;
  A(0, 3) = -1;
  A(1, 2) = -1;  // j = 1: W_21 = -W12
  A(2, 2) = 1;   // j = 2: W_12
  std::vector<IntVector> basis;
  for (const auto& W : res.lattice) basis.push_back({W(0, 1), W(0, 2), W(1, 2)});
  for (const auto& x : oracle::brute_force_kernel(A, 3)) {
    const auto co = oracle::coordinates(basis, {x[0], x[1], x[2]});
    REQUIRE(co);
    for (const auto& r : *co) CHECK(denominator(r) == 1);
  }

  const auto trivial = certify_candidate(s, sl2_W(1, 1), 5);
  CHECK(trivial.certified);
  CHECK(trivial.triviality.trivial);
  const auto nontrivial = certify_candidate(s, sl2_W(3, 1), 5);
  CHECK(nontrivial.certified);
  CHECK_FALSE(nontrivial.triviality.trivial);
  CHECK(nontrivial.c == IntVector{4});
  CHECK(throws_kind([&] { (void)certify_candidate(s, IntMatrix{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}, 2); },
                    ErrorKind::InvalidArgument));
}

TEST_CASE("second deformation matrices without coefficients", "[structure]") {
  const auto t = fixtures::rank2free();
  const auto res = solve_second_deformations(t.seed(), 4);
  REQUIRE(res.lattice.size() == 1);
  CHECK((res.lattice[0] == t.Lambda() || res.lattice[0] == -t.Lambda()));
  CHECK(res.candidates[0].triviality.trivial);
  CHECK(res.candidates[0].certified);
  // Without the c column the system B̃ᵀW = 0 has only W = 0.
  CHECK(integer_nullspace(skew_product_system(t.B())).empty());
}

TEST_CASE("solution lattice agrees with a brute-force search", "[structure][property]") {
  gen::Rng rng(402);
  for (int it = 0; it < 40; ++it) {
    const QuantumSeed s = gen::random_quantum_seed(rng, 4, 2);
    const auto res = solve_second_deformations(s, 0);
    const std::size_t m = s.m();
    std::vector<IntVector> basis;
    for (const auto& W : res.lattice) {
      basis.push_back(upper_of(W));
      // c is an integer relative to D0, i.e. after rescaling by the C1 scales.
      const auto star = check_C1star(s, W);
      REQUIRE(star.pass);
      const auto scales = check_C1(s).scales;
      for (std::size_t r = 0; r < star.c.size(); ++r) CHECK(denominator(star.c[r] * Rational(scales[r])) == 1);
    }
    // Unknowns: upper triangle of W, then one c per component. The system is
    // rebuilt from BᵀW entrywise.
    const std::size_t N = m * (m - 1) / 2;
    const std::size_t R = s.ex().components().size();
    if (N + R > 7) continue;
    IntMatrix A(s.n() * m, N + R);
    for (std::size_t x = 0; x < N; ++x) {
      IntVector e(N, 0);
      e[x] = 1;
      const IntMatrix P = transpose(s.B()) * skew_from_upper(m, e);
      for (std::size_t k = 0; k < s.n(); ++k)
        for (std::size_t j = 0; j < m; ++j) A(k * m + j, x) = P(k, j);
    }
    for (std::size_t k = 0; k < s.n(); ++k) A(k * m + k, N + s.ex().component_of(k)) = -s.ex().D0()[k];
    for (const auto& x : oracle::brute_force_kernel(A, 2)) {
      const auto co = oracle::coordinates(basis, IntVector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(N)));
      REQUIRE(co);
      for (const auto& r : *co) CHECK(denominator(r) == 1);
    }
  }
}

TEST_CASE("C-matrices", "[structure]") {
  const IntMatrix B{{0, 1}, {-1, 0}};
  CHECK(c_matrix(B, {}) == identity(2));
  CHECK(c_matrix(B, {0}) == IntMatrix{{-1, 0}, {0, 1}});
  CHECK(c_matrix(B, {0, 0}) == identity(2));
  CHECK(throws_kind([&] { (void)c_matrix(B, {2}); }, ErrorKind::DirectionOutOfRange));
  CHECK(sign_coherent_columns(IntMatrix{{1, 0}, {2, -1}}));
  CHECK_FALSE(sign_coherent_columns(IntMatrix{{1, 0}, {-2, -1}}));
}

TEST_CASE("C-matrices are sign-coherent and unimodular", "[structure][property]") {
  gen::Rng rng(403);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = rng.index(1, 4);
    const IntMatrix B = gen::random_exchange(rng, n, n);
    MutationSequence seq(rng.index(0, 8));
    for (auto& k : seq) k = rng.index(0, n - 1);
    INFO("B=" << to_string(B));
    IntMatrix C;
    REQUIRE_NOTHROW(C = c_matrix(B, seq));
    CHECK(sign_coherent_columns(C));
    const Rational d = determinant(C);
    CHECK((d == 1 || d == -1));
  }
}

TEST_CASE("cluster extension of the rank two seed", "[structure]") {
  const auto base = fixtures::rank2free().seed();
  const ExtensionPlan plan = build_extension(base, {}, {0, 0, 1, 1}, 4);
  CHECK(plan.C == identity(2));
  CHECK(plan.B_ext.m() == 8);
  CHECK_FALSE(plan.P.is_zero());
  CHECK(is_skew_symmetric(plan.P));
  const IntMatrix tail = slice(plan.B_ext.B(), 2, 8, 0, 2);
  CHECK(tail == IntMatrix{{1, 0}, {0, 1}, {1, 0}, {1, 0}, {0, 1}, {0, 1}});
  CHECK((transpose(tail) * plan.P).is_zero());
  CHECK(plan.kernel_dimension == 15 - oracle::rational_rank(unit_skew_system(tail)));
  CHECK(plan.Lambda_ext == block_diagonal(base.Lambda(), IntMatrix(6, 6)));
  CHECK(plan.W_ext == block_diagonal(base.Lambda(), plan.P));
  CHECK(plan.report.pass());
  CHECK(plan.report.depth_checked == 4);
  CHECK_FALSE(plan.triviality.trivial);

  // Every kernel vector gives a plan with the same properties.
  for (std::size_t p = 0; p < plan.kernel_dimension; ++p) {
    const auto other = build_extension(base, {}, {0, 0, 1, 1}, 3, p, 2);
    CHECK((transpose(tail) * other.P).is_zero());
    CHECK(other.report.pass());
    CHECK_FALSE(other.triviality.trivial);
  }
  CHECK(throws_kind([&] { (void)build_extension(base, {}, {0, 0, 1, 1}, 1, plan.kernel_dimension); },
                    ErrorKind::InvalidArgument));

  // A non-trivial C-matrix.
  const auto mutated = build_extension(base, {0, 1}, {0, 1, 1, 0}, 3);
  CHECK(mutated.C == c_matrix(base.B(), {0, 1}));
  CHECK(mutated.report.pass());
  CHECK_FALSE(mutated.triviality.trivial);
}

TEST_CASE("zero blocks of W survive mutation of an extension", "[structure][property]") {
  const auto base = fixtures::rank2free().seed();
  for (const MutationSequence& cseq : {MutationSequence{}, MutationSequence{1}, MutationSequence{0, 1, 0}}) {
    const ExtensionPlan plan = build_extension(base, cseq, {0, 1, 1, 0, 1}, 2, 0, 3);
    const std::size_t m = base.m();
    const std::size_t t = plan.P.rows();
    const CompatibleTriple root(QuantumSeed(plan.B_ext, plan.Lambda_ext), plan.W_ext);
    std::function<void(const CompatibleTriple&, std::size_t, std::size_t)> walk = [&](const CompatibleTriple& x,
                                                                                       std::size_t len,
                                                                                       std::size_t last) {
      const IntMatrix& W = x.W();
      CHECK(slice(W, 0, m, m, m + t).is_zero());
      CHECK(slice(W, 0, m, 0, m) == plan.a * slice(x.Lambda(), 0, m, 0, m));
      CHECK(slice(W, m, m + t, m, m + t) == plan.P);
      if (len == 6) return;
      for (std::size_t k = 0; k < x.n(); ++k)
        if (k != last) walk(mutate(x, k), len + 1, k);
    };
    walk(root, 0, root.n());
  }
}

TEST_CASE("extension preconditions", "[structure]") {
  const auto base = fixtures::rank2free().seed();
  CHECK(throws_kind([&] { (void)build_extension(base, {}, {0, 1, 1}, 1); }, ErrorKind::SizeBound));
  CHECK(throws_kind([&] { (void)build_extension(base, {}, {0, 1, 2, 1}, 1); }, ErrorKind::InvalidArgument));
  CHECK(throws_kind([&] { (void)build_extension(fixtures::block4free(), {}, {0, 1, 2, 3, 0, 1}, 1); },
                    ErrorKind::NotIndecomposable));
  CHECK(throws_kind([&] { (void)build_extension(base, {5}, {0, 0, 1, 1}, 1); }, ErrorKind::DirectionOutOfRange));
}

TEST_CASE("almost principal coefficients", "[structure]") {
  const auto base = fixtures::rank2free().seed();
  const auto plan = almost_principal_builder(base, {0, 1, 0, 1}, 4);
  CHECK(plan.B_ext.m() == 8);
  CHECK(plan.report.pass());
  CHECK_FALSE(plan.triviality.trivial);
  CHECK(throws_kind([&] { (void)almost_principal_builder(base, {0, 1, 0}, 4); }, ErrorKind::SizeBound));
  CHECK(throws_kind([&] { (void)almost_principal_builder(fixtures::sl2(1, 1).seed(), {0, 0, 0}, 1); },
                    ErrorKind::InvalidArgument));
  // n = 1: B = (0) cannot carry a compatible Λ, so the seed is rejected first.
  CHECK(throws_kind([] { (void)QuantumSeed(IntMatrix{{0}}, IntMatrix{{0}}); }, ErrorKind::InvalidSeed));
}

TEST_CASE("seeds without coefficients are locally standard", "[structure]") {
  SECTION("rank two") {
    const auto rep = coefficient_free_analysis(fixtures::rank2free().seed(), 3);
    CHECK(rep.solutions.lattice.size() == 1);
    CHECK(rep.lattice_matches);
    CHECK(rep.all_trivial);
    CHECK(rep.locally_standard);
    CHECK(rep.combinations_checked == 7);
  }
  SECTION("two blocks") {
    const auto rep = coefficient_free_analysis(fixtures::block4free(), 3);
    CHECK(rep.decomposition.blocks.size() == 2);
    CHECK(rep.solutions.lattice.size() == 2);
    CHECK(rep.lattice_matches);
    CHECK(rep.all_trivial);
    CHECK(rep.locally_standard);
    CHECK(rep.combinations_checked == 49);
    CHECK(rep.non_integral_skipped == 0);
  }
  SECTION("doubled Lambda") {
    const IntMatrix B{{0, 1}, {-1, 0}};
    const auto rep = coefficient_free_analysis(QuantumSeed(B, Int(2) * B), 3);
    CHECK(rep.lattice_matches);
    CHECK(rep.all_trivial);
    CHECK(rep.locally_standard);
    CHECK(rep.non_integral_skipped > 0);
  }
  CHECK(throws_kind([] { (void)coefficient_free_analysis(fixtures::sl2(1, 1).seed(), 1); }, ErrorKind::InvalidArgument));
}

TEST_CASE("random seeds without coefficients have only trivial second quantizations", "[structure][property]") {
  gen::Rng rng(404);
  int done = 0;
  while (done < 40) {
    const std::size_t n = rng.index(2, 4);
    const auto s = gen::try_quantum_seed(rng, n, n);
    if (!s) continue;
    ++done;
    const auto rep = coefficient_free_analysis(*s, 1, 2);
    INFO("B=" << to_string(s->B()) << " L=" << to_string(s->Lambda()));
    CHECK(rep.lattice_matches);
    CHECK(rep.all_trivial);
    CHECK(rep.locally_standard);
  }
}
