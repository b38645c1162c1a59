#include <gtest/gtest.h>

#include <sstream>

#include "jastrow/lattice.hpp"
#include "jastrow/zoo.hpp"

using namespace jastrow;
using namespace jastrow::lattice;

namespace {

bool all_pass(const std::vector<Check>& cs) {
  for (const auto& c : cs) {
    if (!c.pass) return false;
  }
  return true;
}

double max_asymmetry(const RealSp& h) {
  RealSp t = h.transpose();
  return RealSp(h - t).norm();
}

}  // namespace

TEST(Grid, BoxAndRing) {
  Grid b = Grid::box(5, 3.0);
  EXPECT_DOUBLE_EQ(b.spacing, 1.0);
  EXPECT_DOUBLE_EQ(b.coordinate(0), -2.0);
  EXPECT_DOUBLE_EQ(b.coordinate(4), 2.0);
  Grid r = Grid::periodic(8, 4.0);
  EXPECT_DOUBLE_EQ(r.spacing, 0.5);
  EXPECT_DOUBLE_EQ(*r.period(), 4.0);
  EXPECT_THROW(Grid::box(3, 1.0), ModelError);
  EXPECT_THROW(Grid::periodic(8, -1.0), ModelError);
}

TEST(Rep, SmallDimensionAndPermutation) {
  LatticeRep r = build_rep(Grid::box(4, 1.0), 2, +1);
  EXPECT_EQ(r.dim(), 16u);
  const SpMat& m = r.exchange(0, 1);
  EXPECT_EQ(m.nonZeros(), 16);
  for (int k = 0; k < m.outerSize(); ++k) {
    int count = 0;
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      EXPECT_EQ(it.value(), cplx(1.0));
      ++count;
    }
    EXPECT_EQ(count, 1);
  }
}

TEST(Rep, MomentumHermitian) {
  for (int order : {2, 4}) {
    LatticeRep ring = build_rep(Grid::periodic(8, 2.0), 1, +1, order);
    SpMat pd = ring.p[0].adjoint();
    EXPECT_LT(norm(pd - ring.p[0]), 1e-14);
    LatticeRep box = build_rep(Grid::box(8, 2.0), 2, +1, order);
    SpMat bd = box.p[1].adjoint();
    EXPECT_LT(norm(bd - box.p[1]), 1e-14);
  }
}

TEST(Rep, ProjectorRankCountsMultisets) {
  LatticeRep bosons = build_rep(Grid::box(8, 1.0), 3, +1);
  LatticeRep fermions = build_rep(Grid::box(8, 1.0), 3, -1);
  auto trace = [](const SpMat& p) {
    double t = 0;
    for (int k = 0; k < p.rows(); ++k) t += p.coeff(k, k).real();
    return t;
  };
  EXPECT_NEAR(trace(bosons.projector), 120.0, 1e-10);
  EXPECT_NEAR(trace(fermions.projector), 56.0, 1e-10);
  EXPECT_EQ(block_dimension(8, 3, +1), 120u);
}

TEST(Rep, DimensionBudget) {
  LatticeBudget tight;
  tight.max_dim = 1000;
  EXPECT_THROW(build_rep(Grid::box(12, 1.0), 3, +1, 2, {}, tight), DimensionBudgetExceeded);
  EXPECT_THROW(build_rep(Grid::box(6, 1.0), 5, +1), ModelError);
}

TEST(Axioms, HoldOnAcceptanceGrids) {
  for (auto [sites, n] : std::vector<std::pair<int, int>>{{6, 3}, {4, 4}}) {
    for (int zeta : {+1, -1}) {
      LatticeRep r = build_rep(Grid::box(sites, 2.0), n, zeta);
      AxiomReport rep = check_projector_axioms(r);
      for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << " residual " << c.residual;
      EXPECT_TRUE(rep.pass);
      EXPECT_EQ(rep.expected_rank, block_dimension(sites, n, zeta));
    }
  }
}

TEST(Axioms, NegativeControlIsNonzero) {
  LatticeRep r = build_rep(Grid::box(6, 2.0), 3, +1);
  AxiomReport rep = check_projector_axioms(r);
  bool found = false;
  for (const auto& c : rep.checks) {
    if (c.name.find("x_1") != std::string::npos) {
      found = true;
      EXPECT_TRUE(c.expect_nonzero);
      EXPECT_GT(c.residual, 1e-3);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Axioms, PeriodicGrid) {
  LatticeRep r = build_rep(Grid::periodic(6, 3.0), 3, -1, 4);
  EXPECT_TRUE(check_projector_axioms(r).pass);
}

TEST(Lemma, SuiteAndPatternRestriction) {
  LatticeRep r = build_rep(Grid::box(6, 2.0), 3, +1);
  auto checks = lemma_suite(r);
  EXPECT_TRUE(all_pass(checks));
  auto x = [](const std::vector<double>& a) { return a[0]; };
  EXPECT_TRUE(check_supersymmetric_lemma(r, x, {0}, {1}).pass);
  auto prod = [](const std::vector<double>& a) { return a[0] * a[1]; };
  EXPECT_TRUE(check_supersymmetric_lemma(r, prod, {0, 1}, {1, 2}).pass);
  // x_1 x_1 and x_2 x_3 are different operators on the symmetric block
  EXPECT_FALSE(check_supersymmetric_lemma(r, prod, {0, 0}, {1, 2}).pass);
}

TEST(Hamiltonian, QuadraticPairHermitianAndSymmetric) {
  ModelSpec m = zoo_model("quadratic-pair", {}, 2);
  Grid g = Grid::box(24, 6.0);
  RealSp h = discretize_hamiltonian(m, g);
  EXPECT_LT(max_asymmetry(h), 1e-13);
  LatticeRep r = build_rep(g, 2, +1);
  SpMat hc = h.cast<cplx>();
  EXPECT_LT(norm(SpMat(hc * r.exchange(0, 1)) - SpMat(r.exchange(0, 1) * hc)), 1e-13);
}

TEST(Hamiltonian, ContactOnlyOnCoincidentSites) {
  ModelSpec with = zoo_model("lieb-liniger-coulomb", {{"g", 0.5}}, 2);
  ModelSpec without = with.without(Term::contact);
  Grid g = Grid::box(10, 3.0);
  RealSp diff = discretize_hamiltonian(with, g) - discretize_hamiltonian(without, g);
  StateSpace sp(10, 2, 1000);
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (RealSp::InnerIterator it(diff, k); it; ++it) {
      if (it.value() == 0.0) continue;
      EXPECT_EQ(it.row(), it.col());
      auto d = sp.digits(it.row());
      EXPECT_EQ(d[0], d[1]);
      EXPECT_NEAR(it.value(), with.terms.contact.strength / g.spacing, 1e-12);
    }
  }
}

TEST(Hamiltonian, RejectsInverseSquareFamilies) {
  EXPECT_THROW(discretize_hamiltonian(zoo_model("calogero-trapped", {}, 2), Grid::box(8, 3.0)), ModelError);
  EXPECT_THROW(discretize_hamiltonian(zoo_model("lieb-liniger", {}, 2), Grid::periodic(8, 3.0)), ModelError);
}

TEST(GroundState, FreeTrappedBosons) {
  ModelSpec m = zoo_model("calogero-trapped", {{"lambda", 0.0}}, 2);
  auto r2 = ground_state_overlap(m, Grid::box(32, 6.0), +1, 2);
  auto r4 = ground_state_overlap(m, Grid::box(32, 6.0), +1, 4);
  EXPECT_NEAR(r2.e_num, 1.0, 1e-2);
  EXPECT_NEAR(r4.e_num, 1.0, 1e-3);
  EXPECT_GT(r2.overlap, 0.999);
}

TEST(GroundState, QuadraticPairConvergence) {
  ModelSpec m = zoo_model("quadratic-pair", {}, 2);
  auto s = eigenvalue_convergence(m, 6.0, {24, 32, 48}, +1);
  ASSERT_TRUE(s.order);
  EXPECT_NEAR(*s.order, 2.0, 0.4);
  EXPECT_GE(s.runs.back().overlap, 0.999);
  EXPECT_LT(std::abs(s.runs.back().e_num + 0.5), 0.01);
}

TEST(GroundState, LongRangeCoulombSmallGrid) {
  ModelSpec m = zoo_model("lieb-liniger-coulomb", {{"g", 0.5}}, 2);
  auto r = ground_state_overlap(m, Grid::box(40, 6.0), +1);
  ASSERT_TRUE(r.rel_error);
  EXPECT_LT(*r.rel_error, 0.02);
  EXPECT_GT(r.overlap, 0.999);
}

TEST(GroundState, LanczosMatchesDense) {
  ModelSpec m = zoo_model("quadratic-pair", {}, 2);
  LatticeBudget dense, krylov;
  krylov.dense_limit = 10;
  Grid g = Grid::box(20, 6.0);
  auto a = ground_state_overlap(m, g, +1, 2, dense);
  auto b = ground_state_overlap(m, g, +1, 2, krylov);
  EXPECT_EQ(a.method, "dense");
  EXPECT_EQ(b.method, "lanczos");
  EXPECT_NEAR(a.e_num, b.e_num, 1e-9);
  EXPECT_NEAR(a.overlap, b.overlap, 1e-7);
}

TEST(Commutator, FreeCaseVanishes) {
  auto c = trapped_commutator_convergence(2, +1, {12, 16}, 6.0, 2, [](double) { return 0.0; });
  for (double r : c.residual) EXPECT_LT(r, 1e-12);
}

// A linear prepotential in a harmonic trap has a nonzero continuum
// commutator; the lattice residual plateaus instead of converging to zero.
TEST(Commutator, LinearPrepotentialPlateaus) {
  auto c = trapped_commutator_convergence(2, +1, {16, 32, 64}, 6.0, 2, [](double r) { return -0.1 * r; });
  EXPECT_GT(c.residual.back(), 0.05);
  EXPECT_NEAR(c.residual.back(), c.residual[1], 0.1 * c.residual.back());
}

TEST(Export, CoordinateFormat) {
  LatticeRep r = build_rep(Grid::box(4, 1.0), 2, +1);
  std::ostringstream os;
  write_coo(os, r.exchange(0, 1));
  std::istringstream is(os.str());
  int lines = 0, row, col;
  double re, im;
  while (is >> row >> col >> re >> im) {
    ++lines;
    EXPECT_EQ(re, 1.0);
    EXPECT_EQ(im, 0.0);
  }
  EXPECT_EQ(lines, 16);
}
