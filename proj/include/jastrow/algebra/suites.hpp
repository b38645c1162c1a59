#pragma once

// Named identity checks over the exchange algebra, each returning both sides
// so callers can print the derivation.

#include <string>
#include <vector>

#include "jastrow/algebra/exchange_algebra.hpp"

namespace jastrow::algebra {

struct EqualityCheck {
  std::string name;
  OperatorExpr lhs, rhs;
  bool equal = false;
};

struct ProjectionReport {
  std::string family;
  int particles = 0;
  int zeta = 1;
  bool trapped = false;
  bool three_body_zero = false;  // V_ijk ≡ 0 as a rational function
  std::vector<EqualityCheck> checks;
  bool pass = false;
};

inline bool three_body_vanishes(const RationalFamily& V, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (!three_body_coeff(V, i, j, k).is_zero()) return false;
  return true;
}

/// project(I₂, ζ) against 2m·H0; with a trap, project(Ĩ₁, ζ) against 2m·H.
inline ProjectionReport verify_projection(const RationalFamily& V, int n, int zeta, bool trapped,
                                          const Budget& budget = {}) {
  if (zeta != 1 && zeta != -1) throw ModelError("zeta must be +1 or -1");
  ProjectionReport r;
  r.family = V.name;
  r.particles = n;
  r.zeta = zeta;
  r.trapped = trapped;
  r.three_body_zero = three_body_vanishes(V, n);
  if (!trapped) {
    auto lhs = project(build_invariant(2, V, n, std::nullopt, budget), zeta);
    auto rhs = homogeneous_hamiltonian_scaled(V, n, zeta);
    r.checks.push_back({"project(I2) = 2m H0", lhs, rhs, lhs == rhs});
  } else {
    auto trap = TrapSpec::harmonic();
    auto lhs = project(build_invariant(1, V, n, trap, budget), zeta);
    auto rhs = trapped_hamiltonian_scaled(V, n, zeta, trap);
    r.checks.push_back({"project(I1~) = 2m H", lhs, rhs, lhs == rhs});
  }
  r.pass = true;
  for (const auto& c : r.checks) r.pass = r.pass && c.equal;
  return r;
}

/// The target 2m·H term by term: kinetic, pair (2ζħV' + 2V²), three-body
/// (-2V_ijk) and, with a trap, one-body and cross terms.
inline std::vector<std::string> hamiltonian_rendering(const RationalFamily& V, int n, int zeta, bool trapped) {
  std::vector<std::string> lines;
  const RationalCoeff hbar = param(Param::hbar);
  std::string kin;
  for (int i = 0; i < n; ++i) kin += (i ? " + p" : "p") + std::to_string(i + 1) + "^2";
  lines.push_back("kinetic      " + kin);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      RationalCoeff v = V.at(i, j);
      RationalCoeff pair = GQ(2 * zeta) * (hbar * V.derivative_at(i, j)) + GQ(2) * (v * v);
      lines.push_back("pair " + std::to_string(i + 1) + std::to_string(j + 1) + "      " + pair.to_string());
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        lines.push_back("three-body " + std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1) + " " +
                        (GQ(-2) * three_body_coeff(V, i, j, k)).to_string());
  if (trapped) {
    const RationalCoeff m = param(Param::mass), w = param(Param::omega);
    for (int i = 0; i < n; ++i) {
      RationalCoeff xi = RationalCoeff::variable(i);
      lines.push_back("trap " + std::to_string(i + 1) + "       " + (m * m * w * w * xi * xi - m * hbar * w).to_string());
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        lines.push_back("cross " + std::to_string(i + 1) + std::to_string(j + 1) + "     " +
                        (GQ(-2 * zeta) * (m * w * V.at(i, j) * RationalCoeff::difference(i, j))).to_string());
  }
  return lines;
}

/// [π_i, π_j] against Σ_k V_ijk (M_ijk - M_jik) for every pair.
inline std::vector<EqualityCheck> verify_pi_closed_form(const RationalFamily& V, int n, const Budget& budget = {}) {
  std::vector<EqualityCheck> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto lhs = commutator(build_pi(i, V, n), build_pi(j, V, n), budget);
      auto rhs = pi_commutator_closed_form(i, j, V, n);
      out.push_back({"[pi_" + std::to_string(i + 1) + ", pi_" + std::to_string(j + 1) + "]", lhs, rhs, lhs == rhs});
    }
  }
  return out;
}

}  // namespace jastrow::algebra
