// Local energy of the trapped Lieb-Liniger-Coulomb ground state at a handful
// of random configurations: every value equals E0.

#include <cstdio>

#include "jastrow/continuum.hpp"
#include "jastrow/zoo.hpp"

int main() {
  using namespace jastrow;
  ModelSpec m = zoo_model("lieb-liniger-coulomb", {{"g", 1.0}, {"omega", 1.0}}, 3);
  std::printf("%s N=%d  E0 = %.15g\n", m.name.c_str(), m.n_particles, *m.e0());
  for (const auto& x : sample_configs(m, 5, 7, default_min_separation(m))) {
    std::printf("  x = (%+.4f, %+.4f, %+.4f)  E_loc = %.15g\n", x.positions[0], x.positions[1], x.positions[2],
                local_energy(m, x));
  }
  // without the trap-induced cross term the state is no longer an eigenstate
  ModelSpec broken = m.without(Term::cross);
  auto r = verify_eigenstate(broken, 1000, 7);
  std::printf("%s: variance %.3g -> %s\n", broken.name.c_str(), r.variance, r.pass ? "pass" : "fail");
}
