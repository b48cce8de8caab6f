#pragma once

#include "qca/integer.hpp"
#include "qca/matrix.hpp"
#include "qca/seed.hpp"

namespace qca::fixtures {

/// Quantum SL(2) with frozen b, c: B̃ = (0,1,1)ᵀ, cluster (a, b, c).
inline CompatibleTriple sl2(const Int& w1, const Int& w2) {
  IntMatrix B{{0}, {1}, {1}};
  IntMatrix L{{0, -1, -1}, {1, 0, 0}, {1, 0, 0}};
  IntMatrix W{{0, -w1, -w2}, {w1, 0, 0}, {w2, 0, 0}};
  return CompatibleTriple(QuantumSeed(B, L), W);
}

/// Rank 2 seed with three frozen rows; W = aΛ on {0,1} plus a b-block on {2,3,4}.
inline CompatibleTriple ex5x2(const Int& a, const Int& b) {
  IntMatrix B{{0, 1}, {-1, 0}, {1, 0}, {1, 0}, {1, 0}};
  IntMatrix L(5, 5);
  L(0, 1) = 1;
  L(1, 0) = -1;
  IntMatrix W(5, 5);
  W(0, 1) = a;
  W(1, 0) = -a;
  W(2, 3) = -b;
  W(2, 4) = b;
  W(3, 4) = -b;
  W(3, 2) = b;
  W(4, 2) = -b;
  W(4, 3) = b;
  return CompatibleTriple(QuantumSeed(B, L), W);
}

/// B = Λ = [[0,1],[-1,0]], no coefficients; W = Λ.
inline CompatibleTriple rank2free() {
  IntMatrix B{{0, 1}, {-1, 0}};
  return CompatibleTriple(QuantumSeed(B, B), B);
}

/// [[0,1],[-1,0]] ⊕ [[0,2],[-1,0]] with Λ the sum of two copies of [[0,1],[-1,0]].
inline QuantumSeed block4free() {
  IntMatrix B(4, 4);
  B(0, 1) = 1;
  B(1, 0) = -1;
  B(2, 3) = 2;
  B(3, 2) = -1;
  IntMatrix L(4, 4);
  L(0, 1) = 1;
  L(1, 0) = -1;
  L(2, 3) = 1;
  L(3, 2) = -1;
  return QuantumSeed(B, L);
}

}  // namespace qca::fixtures
