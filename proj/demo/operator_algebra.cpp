// Exact exchange-operator algebra for V = lambda/x: the invariants commute,
// and projecting I2 onto the bosonic sector gives the Calogero Hamiltonian.

#include <iostream>

#include "jastrow/algebra/suites.hpp"

int main() {
  using namespace jastrow::algebra;
  auto V = rational_family();
  const int n = 3;
  auto pi1 = build_pi(0, V, n);
  std::cout << "pi_1 =\n" << pi1.to_string() << "\n\n";

  auto rep = verify_integrability(V, n, {{1, 2}, {2, 3}}, false);
  for (const auto& c : rep.checks) {
    std::cout << "[I" << c.n << ", I" << c.m << "]: " << c.terms_a << " x " << c.terms_b << " terms -> "
              << (c.zero ? "0" : c.residual) << "\n";
  }

  std::cout << "\n2m H0 for zeta = +1:\n";
  for (const auto& line : hamiltonian_rendering(V, n, +1, false)) std::cout << "  " << line << "\n";
  auto proj = verify_projection(V, n, +1, false);
  std::cout << "project(I2, +1) matches: " << (proj.pass ? "yes" : "no") << "\n";
}
