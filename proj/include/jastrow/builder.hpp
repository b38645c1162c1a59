#pragma once

// Construction maps between pair functions, prepotentials, superpotentials
// and assembled parent Hamiltonians.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "jastrow/model_core.hpp"
#include "jastrow/pair_families.hpp"

namespace jastrow {

// ---------------------------------------------------------------------------
// pair <-> prepotential

namespace detail {

inline double core_value(Prepotential::Core core, double A, double k, double x) {
  switch (core) {
    case Prepotential::Core::none:
    case Prepotential::Core::zero: return 0.0;
    case Prepotential::Core::rational: return A / x;
    case Prepotential::Core::cot: return A / std::tan(k * x);
    case Prepotential::Core::coth: return A / std::tanh(k * x);
    case Prepotential::Core::sgn: return A * sgn(x);
  }
  return 0.0;
}

inline double core_derivative(Prepotential::Core core, double A, double k, double x) {
  switch (core) {
    case Prepotential::Core::none:
    case Prepotential::Core::zero:
    case Prepotential::Core::sgn: return 0.0;
    case Prepotential::Core::rational: return -A / (x * x);
    case Prepotential::Core::cot: {
      double s = std::sin(k * x);
      return -A * k / (s * s);
    }
    case Prepotential::Core::coth: {
      double s = std::sinh(k * x);
      return -A * k / (s * s);
    }
  }
  return 0.0;
}

inline const char* core_name(Prepotential::Core core) {
  switch (core) {
    case Prepotential::Core::none: return "none";
    case Prepotential::Core::zero: return "zero";
    case Prepotential::Core::rational: return "rational";
    case Prepotential::Core::cot: return "cot";
    case Prepotential::Core::coth: return "coth";
    case Prepotential::Core::sgn: return "sgn";
  }
  return "none";
}

inline const SingularPoint* singular_in(const std::vector<SingularPoint>& pts,
                                        std::optional<double> period, double x) {
  double y = period ? wrap_periodic(x, *period) : x;
  for (const auto& s : pts) {
    if (std::abs(y - s.x) <= 1e-14 * std::max(1.0, std::abs(x))) return &s;
  }
  return nullptr;
}

}  // namespace detail

/// V = ζħ[core(x) - βx] from its closed-form pieces.
inline Prepotential make_prepotential(Prepotential::Core core, double amplitude, double scale,
                                      double linear, int zeta, const PhysicalConstants& c,
                                      std::optional<double> period = std::nullopt) {
  c.validate();
  const double s = zeta * c.hbar;
  Prepotential V;
  V.name = std::string(detail::core_name(core)) + (linear != 0.0 ? "-linear" : "");
  V.params = {{"amplitude", amplitude}, {"beta", linear}, {"scale", scale}};
  V.zeta = zeta;
  V.hbar = c.hbar;
  V.core = core;
  V.core_amplitude = amplitude;
  V.core_scale = scale;
  V.linear = linear;
  V.period = period;
  V.value = [=](double x) { return s * (detail::core_value(core, amplitude, scale, x) - linear * x); };
  V.derivative = [=](double x) {
    return s * (detail::core_derivative(core, amplitude, scale, x) - linear);
  };
  if (core == Prepotential::Core::sgn && amplitude != 0.0) {
    V.singular_points = {{0.0, CuspKind::contact, s * 2.0 * amplitude}};
  } else if ((core == Prepotential::Core::rational || core == Prepotential::Core::cot ||
              core == Prepotential::Core::coth) &&
             amplitude != 0.0) {
    V.singular_points = {{0.0, CuspKind::none, 0.0}};
  }
  return V;
}

/// V(x) = ζħ f'(x)/f(x).
inline Prepotential prepotential_from_pair(const PairFamily& pair, int zeta,
                                           const PhysicalConstants& c) {
  c.validate();
  const double s = zeta * c.hbar;
  Prepotential V;
  V.name = "V[" + pair.name + "]";
  V.params = pair.params;
  V.zeta = zeta;
  V.hbar = c.hbar;
  V.period = pair.period;
  auto ld = pair.log_deriv;
  auto ls = pair.log_second;
  V.value = [s, ld](double x) { return s * ld(x); };
  V.derivative = [s, ld, ls](double x) {
    double F = ld(x);
    return s * (ls(x) - F * F);
  };
  for (auto pt : pair.singular_points) {
    pt.strength *= s;
    V.singular_points.push_back(pt);
  }

  auto param = [&](const char* key) {
    auto it = pair.params.find(key);
    return it == pair.params.end() ? 0.0 : it->second;
  };
  using Core = Prepotential::Core;
  if (pair.name == "constant") {
    V.core = Core::zero;
  } else if (pair.name == "power") {
    V.core = param("lambda") == 0.0 ? Core::zero : Core::rational;
    V.core_amplitude = param("lambda");
  } else if (pair.name == "sine") {
    V.core = Core::cot;
    V.core_scale = std::numbers::pi / param("L");
    V.core_amplitude = param("lambda") * V.core_scale;
  } else if (pair.name == "exp-abs") {
    V.core = Core::sgn;
    V.core_amplitude = param("g");
  } else if (pair.name == "exp-abs-quadratic") {
    V.core = Core::sgn;
    V.core_amplitude = param("g");
    V.linear = param("beta");
  } else if (pair.name == "sinh") {
    V.core = param("lambda") == 0.0 ? Core::zero : Core::coth;
    V.core_scale = param("a");
    V.core_amplitude = param("lambda") * param("a");
    V.linear = param("b");
  }
  return V;
}

/// Quadrature reference point: x0 = 1 on the line, L/4 on rings.
inline double quadrature_reference(std::optional<double> period) {
  return period ? *period / 4.0 : 1.0;
}

/// Pair function with f = exp(∫_{x0}^{|x|} V(y)/(ζħ) dy), extended evenly in
/// |x| (odd for ζ = -1).
inline PairFamily pair_from_prepotential(const Prepotential& V, int zeta,
                                         const PhysicalConstants& c) {
  c.validate();
  const double s = zeta * c.hbar;
  const auto period = V.period;
  const double x0 = quadrature_reference(period);
  PairFamily p;
  p.name = "integrated[" + V.name + "]";
  p.params = V.params;
  p.parity = zeta > 0 ? Parity::even : Parity::odd;
  p.period = period;
  auto val = V.value;
  auto der = V.derivative;
  p.log_deriv = [val, s](double x) { return val(x) / s; };
  p.log_second = [val, der, s](double x) {
    double F = val(x) / s;
    return der(x) / s + F * F;
  };
  const auto singular = V.singular_points;
  p.log_value = [val, s, x0, period, singular](double x) {
    double y = std::abs(period ? wrap_periodic(x, *period) : x);
    double lo = std::min(x0, y), hi = std::max(x0, y);
    for (const auto& sp : singular) {
      for (double cand : {sp.x, -sp.x}) {
        if (cand >= lo && cand <= hi && !(cand == x0)) {
          std::ostringstream os;
          os << "non-integrable singularity at " << cand << " between reference " << x0
             << " and " << y;
          throw SingularPointError(os.str(), sp);
        }
      }
    }
    if (y == x0) return 0.0;
    auto integrand = [&](double t) { return val(t) / s; };
    double r = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, x0, y, 15,
                                                                            1e-14);
    return r;
  };
  auto lv = p.log_value;
  p.log_value_hp = [lv](const hp_real& x) { return hp_real(lv(static_cast<double>(x))); };
  for (auto pt : V.singular_points) {
    pt.strength /= s;
    p.singular_points.push_back(pt);
  }
  return p;
}

// ---------------------------------------------------------------------------
// superpotential / one-body

/// U = W² - (ħ/√(2m)) W'.
inline RealFn riccati_external(const OneBodyProfile& profile, const PhysicalConstants& c) {
  c.validate();
  if (!profile.has_w() || !profile.w || !profile.w_prime) {
    throw ModelError("riccati_external needs a superpotential W with derivative");
  }
  const double s = c.hbar / std::sqrt(2.0 * c.mass);
  auto w = profile.w;
  auto wp = profile.w_prime;
  return [w, wp, s](double x) {
    double W = w(x);
    return W * W - s * wp(x);
  };
}

/// U = (ħ²/2m)[(v')² + v''].
inline RealFn external_from_v(const OneBodyProfile& profile, const PhysicalConstants& c) {
  c.validate();
  if (!profile.has_v() || !profile.v_prime || !profile.v_second) {
    throw ModelError("one-body profile lacks v' or v''");
  }
  const double s = c.hbar * c.hbar / (2.0 * c.mass);
  auto vp = profile.v_prime;
  auto vpp = profile.v_second;
  return [vp, vpp, s](double x) {
    double d = vp(x);
    return s * (d * d + vpp(x));
  };
}

// ---------------------------------------------------------------------------
// three-body potential and its reduction

inline constexpr double zero_sum_tolerance = 1e-12;

/// V(r1)V(r2) + V(r2)V(r3) + V(r3)V(r1) for relative separations summing to 0.
inline double three_body(const Prepotential& V, double r1, double r2, double r3) {
  if (std::abs(r1 + r2 + r3) > zero_sum_tolerance) {
    throw ModelError("three_body: separations do not sum to zero");
  }
  for (double r : {r1, r2, r3}) {
    if (const auto* sp = detail::singular_in(V.singular_points, V.period, r)) {
      throw SingularPointError("three_body: singular separation", *sp);
    }
  }
  double a = V.value(r1), b = V.value(r2), d = V.value(r3);
  return a * b + b * d + d * a;
}

struct WeierstrassParams {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Q with V(x)V(y) + V(y)V(z) + V(z)V(x) = Q(x) + Q(y) + Q(z) for x+y+z = 0.
struct Reduction {
  bool reducible = false;
  RealFn q;
  std::string reason;
};

inline Reduction reduce_three_to_two(const Prepotential& V,
                                     std::optional<WeierstrassParams> weierstrass = std::nullopt) {
  Reduction out;
  if (weierstrass) {
    const double alpha = weierstrass->alpha, beta = weierstrass->beta;
    auto val = V.value;
    auto der = V.derivative;
    out.reducible = true;
    out.reason = "generic Weierstrass form";
    out.q = [=](double x) {
      double v = val(x);
      return 0.5 * (alpha * beta - alpha * der(x) - v * v);
    };
    return out;
  }
  using Core = Prepotential::Core;
  if (V.core == Core::none) {
    out.reason = "irreducible three-body: prepotential is not of Weierstrass-zeta plus linear form";
    return out;
  }
  // V = s[core - βx] with s = ζħ; Q = s²[c0 + β x core(x) - β² x²/2].
  const double A = V.core_amplitude, k = V.core_scale, beta = V.linear;
  double c0 = 0.0;
  switch (V.core) {
    case Core::cot: c0 = A * A / 3.0; break;
    case Core::coth:
    case Core::sgn: c0 = -A * A / 3.0; break;
    default: break;
  }
  const Core core = V.core;
  const double sq = V.hbar * V.hbar;
  out.reducible = true;
  out.reason = std::string("closed form for ") + detail::core_name(core) + " core";
  out.q = [=](double x) {
    return sq * (c0 + beta * x * detail::core_value(core, A, k, x) - 0.5 * beta * beta * x * x);
  };
  return out;
}

struct LinearShift {
  Prepotential shifted;
  std::function<RealFn(const RealFn&)> shift_q;
};

/// V ↦ V - ζħβx and Q ↦ Q + ζħβ x V(x) - (ζħβ)² x²/2.
inline LinearShift linear_shift(const Prepotential& V, double beta, const PhysicalConstants& c) {
  const double b = V.zeta * c.hbar * beta;
  LinearShift out;
  out.shifted = V;
  auto val = V.value;
  auto der = V.derivative;
  out.shifted.value = [val, b](double x) { return val(x) - b * x; };
  out.shifted.derivative = [der, b](double x) { return der(x) - b; };
  out.shifted.linear = V.linear + beta;
  if (beta != 0.0) out.shifted.name = V.name + "-shifted";
  out.shifted.params["beta"] = out.shifted.linear;
  out.shift_q = [val, b](const RealFn& q) -> RealFn {
    return [q, val, b](double x) { return q(x) + b * x * val(x) - 0.5 * b * b * x * x; };
  };
  return out;
}

// ---------------------------------------------------------------------------
// assembly

struct AssembledPotential {
  RealFn external;
  RealFn two_body_smooth;
  ContactTerm contact;
  std::function<double(double, double, double)> three_body;
  bool reduced = false;
  RealFn q_function;
  RealFn reduced_two_body;  // two_body_smooth - (N-2) Q / m
  std::function<double(double, double)> cross;
};

inline AssembledPotential assemble_potential(const PairFamily& pair,
                                             const std::optional<OneBodyProfile>& one_body,
                                             int zeta, int n, const PhysicalConstants& c,
                                             const Geometry& geometry) {
  c.validate();
  if (n < 2) throw ModelError("assemble requires N >= 2");
  if (zeta != 1 && zeta != -1) throw ModelError("zeta must be +1 or -1");
  if (geometry.kind == Geometry::Kind::ring) {
    const double L = geometry.length;
    auto periodic = [L](std::optional<double> p) {
      return p && std::abs(*p - L) <= 1e-12 * L;
    };
    if (!periodic(pair.period)) throw ModelError("ring geometry requires a pair function of period L");
    if (one_body && !periodic(one_body->period)) {
      throw ModelError("ring geometry requires a one-body profile of period L");
    }
  }
  if (one_body && (!one_body->has_v() || !one_body->v_prime || !one_body->v_second)) {
    throw ModelError("one-body profile is missing v' or v''");
  }

  const double k = c.hbar * c.hbar / c.mass;
  AssembledPotential a;
  auto ld = pair.log_deriv;
  auto ls = pair.log_second;
  a.two_body_smooth = [k, ls](double r) { return k * ls(r); };
  for (const auto& sp : pair.singular_points) {
    if (sp.kind != CuspKind::none) a.contact = {sp.kind, k * sp.strength};
  }
  a.three_body = [k, ld](double r1, double r2, double r3) {
    double f1 = ld(r1), f2 = ld(r2), f3 = ld(r3);
    return -k * (f1 * f2 + f2 * f3 + f3 * f1);
  };
  if (one_body) {
    a.external = external_from_v(*one_body, c);
    auto vp = one_body->v_prime;
    a.cross = [k, vp, ld](double xi, double xj) { return k * (vp(xi) - vp(xj)) * ld(xi - xj); };
  }
  auto V = prepotential_from_pair(pair, zeta, c);
  auto red = reduce_three_to_two(V);
  if (red.reducible) {
    a.reduced = true;
    a.q_function = red.q;
    const double mult = static_cast<double>(n - 2) / c.mass;
    auto q = red.q;
    auto smooth = a.two_body_smooth;
    a.reduced_two_body = [smooth, q, mult](double r) { return smooth(r) - mult * q(r); };
  }
  return a;
}

/// Parent Hamiltonian of Ψ0 = Π exp(v_i) Π f_ij in unreduced form; its
/// eigenvalue on Ψ0 is zero.
inline ModelSpec assemble(const PairFamily& pair, const std::optional<OneBodyProfile>& one_body,
                          int zeta, int n, const PhysicalConstants& c, const Geometry& geometry) {
  auto a = assemble_potential(pair, one_body, zeta, n, c, geometry);
  ModelSpec m;
  m.name = "assembled[" + pair.name + (one_body ? "+" + one_body->name : std::string()) + "]";
  m.params = pair.params;
  if (one_body && one_body->omega != 0.0) m.params["omega"] = one_body->omega;
  m.constants = c;
  m.n_particles = n;
  m.zeta = zeta;
  m.pair = pair;
  m.one_body = one_body;
  m.geometry = geometry;
  m.terms.external = a.external;
  m.terms.pair = a.two_body_smooth;
  m.terms.contact = a.contact;
  m.terms.three_body = a.three_body;
  m.terms.cross = a.cross;
  m.e0_formula = [](int) { return 0.0; };
  m.citations = {"parent Hamiltonian of the Jastrow state (zero eigenvalue by construction)"};
  return m;
}

/// Term-by-term text rendering of an assembled Hamiltonian.
inline std::string describe_hamiltonian(const PairFamily& pair,
                                        const std::optional<OneBodyProfile>& one_body, int zeta,
                                        int n, const PhysicalConstants& c) {
  auto a = assemble_potential(pair, one_body, zeta, n, c, pair.period ? Geometry::ring(*pair.period) : Geometry::line());
  std::ostringstream os;
  os << "H = sum_i p_i^2/(2m)                       [kinetic]\n";
  if (one_body) {
    os << "  + sum_i U(x_i),  U = (hbar^2/2m)[(v')^2 + v''] = W^2 - (hbar/sqrt(2m)) W'   [Riccati external, "
       << one_body->name << "]\n";
  }
  os << "  + sum_{i<j} (hbar^2/m) f''/f(x_ij)         [two-body, pair '" << pair.name << "']\n";
  if (a.contact.kind == CuspKind::contact) {
    os << "  + sum_{i<j} " << a.contact.strength << " delta(x_ij)   [contact]\n";
  } else if (a.contact.kind == CuspKind::hard_core) {
    os << "  + sum_{i<j} " << a.contact.strength << " delta(x_ij)/|x_ij|   [hard core]\n";
  }
  if (a.reduced) {
    os << "  - (N-2)/m sum_{i<j} Q(x_ij)   [three-body reduced to two-body, N=" << n << "]\n";
  } else {
    os << "  + sum_{i<j<k} (hbar^2/m)(F_ij F_ik - F_ij F_jk + F_ik F_jk),  F = f'/f   [three-body]\n";
  }
  if (one_body) {
    os << "  + sum_{i<j} (hbar^2/m)(v'_i - v'_j) F_ij   [trap-induced cross term]\n";
  }
  os << "zeta = " << zeta << ", prepotential V = zeta*hbar*f'/f\n";
  return os.str();
}

}  // namespace jastrow
