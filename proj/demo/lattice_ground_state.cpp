// Two particles with the quadratic pair interaction on a box grid: the
// lowest symmetric eigenvector against the sampled Jastrow product.

#include <cstdio>

#include "jastrow/lattice.hpp"
#include "jastrow/zoo.hpp"

int main() {
  using namespace jastrow;
  ModelSpec m = zoo_model("quadratic-pair", {}, 2);
  auto study = lattice::eigenvalue_convergence(m, 6.0, {16, 24, 32}, +1);
  for (const auto& r : study.runs) {
    std::printf("L_s=%2d  h=%.4f  E=%.8f  (E0=%.8f)  overlap %.6f\n", r.sites, r.spacing, r.e_num, *r.e0, r.overlap);
  }
  if (study.order) std::printf("eigenvalue error order %.2f\n", *study.order);

  auto rep = lattice::build_rep(lattice::Grid::box(5, 2.0), 3, -1);
  auto ax = lattice::check_projector_axioms(rep);
  std::printf("fermionic projector on 5 sites, N=3: trace %.1f, axioms %s\n", ax.projector_trace,
              ax.pass ? "hold" : "fail");
}
