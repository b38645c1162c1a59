#include <gtest/gtest.h>

#include "jastrow/algebra/exchange_algebra.hpp"
#include "jastrow/util/rng.hpp"

using namespace jastrow;
using namespace jastrow::algebra;

namespace {

RationalCoeff hbar() { return param(Param::hbar); }

OperatorExpr sum_p(int n) {
  OperatorExpr out(n);
  for (int i = 0; i < n; ++i) out = out + OperatorExpr::p(n, i);
  return out;
}

// Random word of generators with small rational coefficients.
std::vector<Factor> random_word(Rng& rng, int n, int length) {
  std::vector<Factor> w;
  for (int k = 0; k < length; ++k) {
    int kind = static_cast<int>(rng.uniform() * 3);
    if (kind == 0) {
      int a = static_cast<int>(rng.uniform() * n), b = (a + 1 + static_cast<int>(rng.uniform() * (n - 1))) % n;
      RationalCoeff c = RationalCoeff::variable(a) * param(Param::lambda);
      if (rng.uniform() < 0.5) c = c * RationalCoeff::inverse_difference(a, b);
      w.push_back(Factor::c(c));
    } else if (kind == 1) {
      w.push_back(Factor::p(static_cast<int>(rng.uniform() * n)));
    } else {
      int a = static_cast<int>(rng.uniform() * n), b = (a + 1) % n;
      w.push_back(Factor::m(Perm::transposition(a, b)));
    }
  }
  return w;
}

}  // namespace

TEST(NormalOrder, CanonicalCommutator) {
  const int n = 2;
  auto e = normal_order(n, {Factor::p(0), Factor::c(RationalCoeff::variable(0))});
  auto expected = OperatorExpr::term(n, RationalCoeff::variable(0), {1, 0}, Perm::identity()) +
                  OperatorExpr::scalar(n, GQ(0, -1) * hbar());
  EXPECT_EQ(e, expected);
  EXPECT_EQ(commutator(OperatorExpr::x(n, 0), OperatorExpr::p(n, 0)), OperatorExpr::scalar(n, GQ(0, 1) * hbar()));
}

TEST(NormalOrder, ExchangeMovesCoordinates) {
  const int n = 2;
  auto M = OperatorExpr::exchange(n, Perm::transposition(0, 1));
  EXPECT_EQ(M * OperatorExpr::x(n, 0), OperatorExpr::x(n, 1) * M);
  EXPECT_EQ(M * OperatorExpr::p(n, 0), OperatorExpr::p(n, 1) * M);
  EXPECT_EQ(M * M, OperatorExpr::one(n));
}

TEST(NormalOrder, Idempotent) {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 3;
    auto e = normal_order(n, random_word(rng, n, 6));
    EXPECT_EQ(normal_order(e), e);
  }
}

TEST(Dagger, Involution) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto e = normal_order(3, random_word(rng, 3, 5));
    EXPECT_EQ(dagger(dagger(e)), e);
  }
  // (AB)† = B†A†
  auto a = normal_order(3, random_word(rng, 3, 3)), b = normal_order(3, random_word(rng, 3, 3));
  EXPECT_EQ(dagger(a * b), dagger(b) * dagger(a));
}

TEST(Momenta, BuildPi) {
  auto pi = build_pi(0, rational_family(), 3);
  EXPECT_EQ(pi.size(), 3u);
  EXPECT_EQ(dagger(pi), pi);
  EXPECT_EQ(build_pi(1, zero_family(), 3), OperatorExpr::p(3, 1));
  RationalFamily even{"even", [](int a, int b) {
                        return param(Param::lambda) * RationalCoeff::inverse_difference(a, b) *
                               RationalCoeff::inverse_difference(a, b);
                      }};
  EXPECT_THROW(build_pi(0, even, 3), ModelError);
}

TEST(Momenta, ProjectionCaveat) {
  for (int zeta : {1, -1}) {
    auto r = projection_caveat(rational_family(), 3, 0, 1, zeta);
    EXPECT_EQ(r.correct, r.expected_correct);
    EXPECT_EQ(r.naive, r.expected_naive);
    EXPECT_FALSE(r.correct == r.naive);
  }
  // the unprojected worked example: [p1, Σ_{k≠2} V_2k M_2k] = iħV'12 M12 - V12 (p1 - p2) M12
  const int n = 3;
  auto V = rational_family();
  OperatorExpr sum(n);
  for (int k : {0, 2}) sum = sum + OperatorExpr::term(n, V.at(1, k), {}, Perm::transposition(1, k));
  auto M = OperatorExpr::exchange(n, Perm::transposition(0, 1));
  auto expected = OperatorExpr::scalar(n, GQ(0, 1) * (hbar() * V.derivative_at(0, 1))) * M -
                  OperatorExpr::scalar(n, V.at(0, 1)) * (OperatorExpr::p(n, 0) - OperatorExpr::p(n, 1)) * M;
  EXPECT_EQ(commutator(OperatorExpr::p(n, 0), sum), expected);
}

TEST(Momenta, PiCommutators) {
  for (int n : {3, 4}) {
    EXPECT_TRUE(commutator(build_pi(0, rational_family(), n), build_pi(1, rational_family(), n)).is_zero());
    auto V = rational_linear_family();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        auto lhs = commutator(build_pi(i, V, n), build_pi(j, V, n));
        EXPECT_FALSE(lhs.is_zero());
        EXPECT_EQ(lhs, pi_commutator_closed_form(i, j, V, n)) << lhs.to_string();
      }
    }
  }
}

TEST(Invariants, FirstOrderIsTotalMomentum) {
  for (const auto& V : {rational_family(), rational_linear_family()}) {
    EXPECT_EQ(build_invariant(1, V, 3), sum_p(3));
  }
}

TEST(Invariants, Hermitian) {
  auto V = rational_family();
  EXPECT_EQ(dagger(build_invariant(2, V, 3)), build_invariant(2, V, 3));
  auto h = build_h_scaled(0, V, 3, TrapSpec::harmonic());
  EXPECT_EQ(dagger(h), h);
  EXPECT_EQ(dagger(build_a_scaled(0, V, 3, TrapSpec::harmonic(), false)),
            build_a_scaled(0, V, 3, TrapSpec::harmonic(), true));
}

TEST(Invariants, PermutationCovariant) {
  auto I2 = build_invariant(2, rational_family(), 3);
  for (auto s : {Perm::transposition(0, 1), three_cycle(0, 1, 2)}) {
    auto M = OperatorExpr::exchange(3, s);
    EXPECT_EQ(M * I2, I2 * M);
  }
}

TEST(Projection, Basics) {
  EXPECT_EQ(project(OperatorExpr::exchange(3, Perm::transposition(0, 1)), 1), OperatorExpr::one(3));
  EXPECT_EQ(project(OperatorExpr::exchange(3, Perm::transposition(0, 1)), -1), -OperatorExpr::one(3));
  EXPECT_EQ(project(OperatorExpr::exchange(3, three_cycle(0, 1, 2)), -1), OperatorExpr::one(3));
}

TEST(Projection, SecondInvariantGivesHamiltonian) {
  for (int zeta : {1, -1}) {
    for (int n : {2, 3, 4}) {
      auto lhs = project(build_invariant(2, rational_family(), n), zeta);
      EXPECT_EQ(lhs, homogeneous_hamiltonian_scaled(rational_family(), n, zeta)) << lhs.to_string();
    }
    auto lin = project(build_invariant(2, rational_linear_family(), 3), zeta);
    EXPECT_EQ(lin, homogeneous_hamiltonian_scaled(rational_linear_family(), 3, zeta));
  }
}

TEST(Projection, TrappedFirstInvariant) {
  for (int zeta : {1, -1}) {
    auto lhs = project(build_invariant(1, rational_family(), 3, TrapSpec::harmonic()), zeta);
    EXPECT_EQ(lhs, trapped_hamiltonian_scaled(rational_family(), 3, zeta, TrapSpec::harmonic()))
        << lhs.to_string();
  }
  TrapSpec cubic{{0, 1, 0, 1}};
  EXPECT_THROW(build_invariant(1, rational_family(), 3, cubic), ModelError);
}

TEST(Integrability, Homogeneous) {
  auto r = verify_integrability(rational_family(), 3, {{2, 3}, {1, 2}}, false);
  EXPECT_TRUE(r.pass);
  auto free = verify_integrability(zero_family(), 3, {{1, 2}}, false);
  EXPECT_TRUE(free.pass);
}

TEST(Integrability, Trapped) {
  auto r = verify_integrability(rational_family(), 3, {{1, 2}}, true);
  EXPECT_TRUE(r.pass) << (r.checks.empty() ? "" : r.checks[0].residual);
}

TEST(Integrability, LinearFamilyDoesNotCommute) {
  // with the linear piece V_ijk ≠ 0 and the momenta no longer commute
  auto r = verify_integrability(rational_linear_family(), 3, {{2, 3}}, false);
  EXPECT_FALSE(r.pass);
}

TEST(Integrability, Budget) {
  Budget tiny;
  tiny.max_terms = 10;
  EXPECT_THROW(verify_integrability(rational_family(), 3, {{2, 3}}, false, tiny), BudgetExceeded);
}

TEST(EffectiveOneBody, Identities) {
  auto r = verify_effective_one_body(rational_family(), 3, true);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.checks.size(), 10u);
  EXPECT_TRUE(verify_effective_one_body(zero_family(), 3).pass);
  EXPECT_THROW(verify_effective_one_body(rational_family(), 2), ModelError);
}

TEST(Printing, DeterministicJson) {
  auto e = build_pi(0, rational_family(), 3);
  EXPECT_EQ(e.to_json().dump(), build_pi(0, rational_family(), 3).to_json().dump());
  EXPECT_NE(e.to_string().find("lambda"), std::string::npos);
}
