#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "jastrow/pair_families.hpp"
#include "jastrow/util/rng.hpp"
#include "jastrow/zoo.hpp"

using namespace jastrow;

namespace {

// 4th-order central differences of ln f, independent of the closed forms.
double fd_first(const RealFn& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double fd_second(const RealFn& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

std::vector<PairFamily> all_families() {
  return {power_pair(2.0),      power_pair(1.5),          sine_pair(0.5, 2 * std::numbers::pi),
          sine_pair(2.0, 2.0),  exp_abs_pair(1.0),        exp_abs_pair(-0.7),
          quadratic_pair(1.0, 0.5), sinh_pair(2.0, 1.0, 0.5), toda_pair(1.0, 1.0),
          toda_pair(2.0, 0.5)};
}

}  // namespace

TEST(EvalPair, PowerLaw) {
  auto v = eval_pair(power_pair(3.0), 2.0);
  EXPECT_DOUBLE_EQ(v.f_over_f, 1.5);
  EXPECT_DOUBLE_EQ(v.fpp_over_f, 1.5);
  // numerical differentiation of ln f
  auto p = power_pair(3.0);
  EXPECT_NEAR(fd_first(p.log_value, 2.0, 1e-3), 1.5, 1e-9);
}

TEST(EvalPair, ExpAbsUsesSgnCalculus) {
  auto p = exp_abs_pair(2.0);
  auto v = eval_pair(p, -0.7);
  EXPECT_DOUBLE_EQ(v.f_over_f, -2.0);
  EXPECT_DOUBLE_EQ(v.fpp_over_f, 4.0);
  EXPECT_NEAR(fd_first(p.log_value, -0.7, 1e-3), -2.0, 1e-9);
}

TEST(EvalPair, TodaOffOrigin) {
  auto p = toda_pair(1.0, 1.0);
  EXPECT_NEAR(eval_pair(p, 0.5).fpp_over_f, std::exp(-0.5), 1e-15);
  // f''/f from numerical derivatives of ln f: (ln f)'' + ((ln f)')²
  double d1 = fd_first(p.log_value, 0.5, 1e-3), d2 = fd_second(p.log_value, 0.5, 1e-3);
  EXPECT_NEAR(d2 + d1 * d1, std::exp(-0.5), 1e-9);
}

TEST(EvalPair, SingularPointCarriesStrength) {
  try {
    eval_pair(exp_abs_pair(1.5), 0.0);
    FAIL() << "expected SingularPointError";
  } catch (const SingularPointError& e) {
    EXPECT_EQ(e.point().kind, CuspKind::contact);
    EXPECT_DOUBLE_EQ(e.point().strength, 3.0);
  }
  EXPECT_THROW(eval_pair(power_pair(1.0), 0.0), SingularPointError);
  EXPECT_THROW(eval_pair(sine_pair(0.5, 2.0), 2.0), SingularPointError);
}

TEST(PairFamily, LogDerivIsOdd) {
  Rng rng(11);
  for (const auto& p : all_families()) {
    for (int k = 0; k < 10000; ++k) {
      double x = rng.uniform(-3.0, 3.0);
      if (p.singular_at(x) || std::abs(x) < 1e-6) continue;
      double a = p.log_deriv(x), b = p.log_deriv(-x);
      ASSERT_LE(std::abs(a + b), 1e-12 * std::max(1.0, std::abs(a))) << p.name << " x=" << x;
    }
  }
}

TEST(PairFamily, FiniteDifferenceOrderIsFour) {
  for (const auto& p : all_families()) {
    for (double x : {0.37, 0.81, -1.23}) {
      auto lv = [&](const hp_real& y) { return p.log_value_hp(y); };
      double e1[3], e2[3];
      double h0 = 0.04;
      for (int k = 0; k < 3; ++k) {
        hp_real h = h0 / std::pow(2.0, k), X = x;
        hp_real d1 = (-lv(X + 2 * h) + 8 * lv(X + h) - 8 * lv(X - h) + lv(X - 2 * h)) / (12 * h);
        hp_real d2 =
            (-lv(X + 2 * h) + 16 * lv(X + h) - 30 * lv(X) + 16 * lv(X - h) - lv(X - 2 * h)) / (12 * h * h);
        double F = p.log_deriv(x);
        e1[k] = std::abs(static_cast<double>(d1) - F);
        e2[k] = std::abs(static_cast<double>(d2) + F * F - p.log_second(x));
      }
      for (double* e : {e1, e2}) {
        if (e[2] < 1e-15) continue;  // exact (polynomial) families
        double order = std::log2(e[1] / e[2]);
        EXPECT_NEAR(order, 4.0, 0.5) << p.name << " x=" << x;
      }
    }
  }
}

TEST(PairFamily, RingPeriodicity) {
  const double L = 2.0 * std::numbers::pi;
  auto p = sine_pair(0.5, L);
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    double x = rng.uniform(0.01, L - 0.01);
    EXPECT_NEAR(p.log_deriv(x + L), p.log_deriv(x), 1e-12 * std::max(1.0, std::abs(p.log_deriv(x))));
  }
}

TEST(Profile, WMatchesVForm) {
  PhysicalConstants c{1.3, 0.7};
  for (const auto& prof : {harmonic_profile(1.1, c), trig_trap_profile(0.8, 3.0, c)}) {
    for (double x : {-1.2, 0.1, 0.9}) {
      EXPECT_NEAR(prof.w(x), -c.hbar / std::sqrt(2 * c.mass) * prof.v_prime(x), 1e-12);
    }
  }
}

TEST(Zoo, ClosedFormEnergies) {
  EXPECT_DOUBLE_EQ(*zoo_model("lieb-liniger-coulomb", {{"g", 1}, {"omega", 1}}, 3).e0(), -2.5);
  EXPECT_DOUBLE_EQ(*zoo_model("calogero-trapped", {{"lambda", 2}, {"omega", 1}}, 3).e0(), 7.5);
  EXPECT_NEAR(*zoo_model("sutherland", {{"lambda", 0.5}, {"L", 2 * std::numbers::pi}}, 3).e0(), 0.25,
              1e-15);
}

TEST(Zoo, FreeCalogero) {
  auto m = zoo_model("calogero", {{"lambda", 0}}, 4);
  EXPECT_EQ(m.terms.contact.kind, CuspKind::none);
  for (double r : {0.1, 1.0, -3.0}) EXPECT_EQ(m.terms.pair(r), 0.0);
  EXPECT_EQ(*m.e0(), 0.0);
}

TEST(Zoo, Errors) {
  EXPECT_THROW(zoo_model("no-such-model", {}, 3), ModelError);
  EXPECT_THROW(zoo_model("calogero", {{"lambda", -1}}, 3), ModelError);
  EXPECT_THROW(zoo_model("sutherland", {{"lambda", 1.5}}, 3), ModelError);
  EXPECT_THROW(zoo_model("calogero", {{"omega", 1}}, 3), ModelError);
  EXPECT_THROW(zoo_model("calogero-trapped", {{"omega", 0}}, 3), ModelError);
  EXPECT_THROW(zoo_model("calogero", {}, 1), ModelError);
}

TEST(Zoo, Catalog) {
  EXPECT_GE(list_zoo().size(), 13u);
  auto rings = list_zoo(Geometry::Kind::ring);
  ASSERT_EQ(rings.size(), 2u);
  EXPECT_EQ(rings[0].name, "sutherland");
  EXPECT_EQ(rings[1].name, "sutherland-trig-trap");
  EXPECT_FALSE(zoo_model("toda-bessel", {}, 3).e0_known());
  for (const auto& e : list_zoo()) {
    for (int n = 2; n <= 6; ++n) {
      auto m = zoo_model(e.name, {}, n);
      if (m.e0_known()) EXPECT_TRUE(std::isfinite(*m.e0())) << e.name;
    }
  }
}

TEST(Zoo, UnitsPropagate) {
  PhysicalConstants c{2.0, 0.5};
  auto m = zoo_model("lieb-liniger", {{"g", 1}}, 3, c);
  EXPECT_DOUBLE_EQ(*m.e0(), -(4.0 / 0.5) * 24.0 / 6.0);
  EXPECT_DOUBLE_EQ(m.terms.contact.strength, 2.0 * 4.0 / 0.5);
}
