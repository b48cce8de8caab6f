// Walk through the quantum SL(2) seed: mutate it, check the relations of the
// two-parameter torus, certify the triple and classify its W.
#include <iostream>

#include "qca/io.hpp"
#include "qca/qca.hpp"

using namespace qca;

int main() {
  const CompatibleTriple t0 = fixtures::sl2(3, 1);
  const CompatibleTriple t1 = mutate(t0, 0);
  std::cout << "seed after mutation at 0:\n" << io::pretty(io::encode_seed(t1));

  const TorusContext ctx(t0.Lambda(), t0.W());
  const auto a = TorusElement::monomial(unit_vector(3, 0));
  const auto b = TorusElement::monomial(unit_vector(3, 1));
  const auto c = TorusElement::monomial(unit_vector(3, 2));
  const auto d = mutated_variable(ctx, t0.ex(), 0);
  const bool det = mul(ctx, a, d) - uv_power(-4, -2) * mul(ctx, b, c) == TorusElement::monomial({0, 0, 0});
  std::cout << "ad - p^-2 q^-1 bc = 1: " << (det ? "yes" : "no") << "\n";

  const CompatReport rep = verify_triple_bounded(t0, 4);
  std::cout << "compatible to depth 4: " << (rep.pass() ? "yes" : "no") << "\n";
  std::cout << "trivial: " << (classify_triviality(t0.Lambda(), t0.W()).trivial ? "yes" : "no") << "\n";

  const SolveResult sol = solve_second_deformations(t0.seed(), 4);
  std::cout << "second deformation lattice has rank " << sol.lattice.size() << "\n";
  return det && rep.pass() ? 0 : 1;
}
