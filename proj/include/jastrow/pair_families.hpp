#pragma once

// Code-registered pair functions f(x) and one-body profiles v(x) / W(x).
// Families with |x| dependence follow d|F|/dx = F' sgn(F): their log
// derivatives are the smooth derivative times sgn, with the distributional
// part recorded in singular_points.

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "jastrow/model_core.hpp"

namespace jastrow {

namespace detail {

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

inline hp_real hp_abs(const hp_real& x) { return x < 0 ? hp_real(-x) : x; }

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ModelError(message);
}

}  // namespace detail

/// f ≡ 1.
inline PairFamily constant_pair() {
  PairFamily p;
  p.name = "constant";
  p.log_value = [](double) { return 0.0; };
  p.log_deriv = [](double) { return 0.0; };
  p.log_second = [](double) { return 0.0; };
  p.log_value_hp = [](const hp_real&) { return hp_real(0); };
  return p;
}

/// f = |x|^λ (rational Calogero).  λ = 1 is the hard-core branch.
inline PairFamily power_pair(double lambda) {
  detail::require(lambda >= 0.0, "power pair requires lambda >= 0");
  if (lambda == 0.0) {
    auto p = constant_pair();
    p.name = "power";
    p.params = {{"lambda", 0.0}};
    return p;
  }
  PairFamily p;
  p.name = "power";
  p.params = {{"lambda", lambda}};
  p.log_value = [lambda](double x) { return lambda * std::log(std::abs(x)); };
  p.log_deriv = [lambda](double x) { return lambda / x; };
  p.log_second = [lambda](double x) { return lambda * (lambda - 1.0) / (x * x); };
  p.log_value_hp = [lambda](const hp_real& x) { return hp_real(lambda) * log(detail::hp_abs(x)); };
  if (lambda == 1.0) {
    p.singular_points = {{0.0, CuspKind::hard_core, 2.0}};
  } else {
    p.singular_points = {{0.0, CuspKind::none, 0.0}};
  }
  return p;
}

/// f = |sin(πx/L)|^λ (Sutherland), period L.
inline PairFamily sine_pair(double lambda, double L) {
  detail::require(lambda >= 0.0, "sine pair requires lambda >= 0");
  detail::require(L > 0.0, "sine pair requires L > 0");
  const double k = std::numbers::pi / L;
  PairFamily p;
  p.name = "sine";
  p.params = {{"L", L}, {"lambda", lambda}};
  p.period = L;
  p.log_value = [lambda, k](double x) { return lambda * std::log(std::abs(std::sin(k * x))); };
  p.log_deriv = [lambda, k](double x) { return lambda * k / std::tan(k * x); };
  p.log_second = [lambda, k](double x) {
    double s = std::sin(k * x);
    return lambda * (lambda - 1.0) * k * k / (s * s) - lambda * lambda * k * k;
  };
  p.log_value_hp = [lambda, k](const hp_real& x) {
    return hp_real(lambda) * log(detail::hp_abs(sin(hp_real(k) * x)));
  };
  if (lambda == 1.0) {
    p.singular_points = {{0.0, CuspKind::hard_core, 2.0}};
  } else if (lambda > 0.0) {
    p.singular_points = {{0.0, CuspKind::none, 0.0}};
  }
  return p;
}

/// f = exp(g|x|) (Lieb-Liniger); f''/f = g² + 2g δ(x).
inline PairFamily exp_abs_pair(double g) {
  PairFamily p;
  p.name = "exp-abs";
  p.params = {{"g", g}};
  p.log_value = [g](double x) { return g * std::abs(x); };
  p.log_deriv = [g](double x) { return g * detail::sgn(x); };
  p.log_second = [g](double) { return g * g; };
  p.log_value_hp = [g](const hp_real& x) { return hp_real(g) * detail::hp_abs(x); };
  if (g != 0.0) p.singular_points = {{0.0, CuspKind::contact, 2.0 * g}};
  p.normalizable_on_line = g < 0.0;
  return p;
}

/// f = exp(g|x| - βx²/2) (quadratic long-range Lieb-Liniger).
inline PairFamily quadratic_pair(double g, double beta) {
  PairFamily p;
  p.name = "exp-abs-quadratic";
  p.params = {{"beta", beta}, {"g", g}};
  p.log_value = [g, beta](double x) { return g * std::abs(x) - 0.5 * beta * x * x; };
  p.log_deriv = [g, beta](double x) { return g * detail::sgn(x) - beta * x; };
  p.log_second = [g, beta](double x) {
    double F = g * detail::sgn(x) - beta * x;
    return F * F - beta;
  };
  p.log_value_hp = [g, beta](const hp_real& x) {
    return hp_real(g) * detail::hp_abs(x) - hp_real(0.5 * beta) * x * x;
  };
  if (g != 0.0) p.singular_points = {{0.0, CuspKind::contact, 2.0 * g}};
  p.normalizable_on_line = beta > 0.0 || (beta == 0.0 && g < 0.0);
  return p;
}

/// f = |sinh(ax)|^λ exp(-bx²/2) (generalized hyperbolic).
inline PairFamily sinh_pair(double lambda, double a, double b) {
  detail::require(lambda >= 0.0, "sinh pair requires lambda >= 0");
  detail::require(a > 0.0, "sinh pair requires a > 0");
  PairFamily p;
  p.name = "sinh";
  p.params = {{"a", a}, {"b", b}, {"lambda", lambda}};
  p.log_value = [=](double x) {
    return (lambda == 0.0 ? 0.0 : lambda * std::log(std::abs(std::sinh(a * x)))) - 0.5 * b * x * x;
  };
  p.log_deriv = [=](double x) {
    return (lambda == 0.0 ? 0.0 : lambda * a / std::tanh(a * x)) - b * x;
  };
  p.log_second = [=](double x) {
    double F = (lambda == 0.0 ? 0.0 : lambda * a / std::tanh(a * x)) - b * x;
    double sh = std::sinh(a * x);
    double dF = (lambda == 0.0 ? 0.0 : -lambda * a * a / (sh * sh)) - b;
    return F * F + dF;
  };
  p.log_value_hp = [=](const hp_real& x) {
    hp_real out = -hp_real(0.5 * b) * x * x;
    if (lambda != 0.0) out += hp_real(lambda) * log(detail::hp_abs(sinh(hp_real(a) * x)));
    return out;
  };
  if (lambda == 1.0) {
    p.singular_points = {{0.0, CuspKind::hard_core, 2.0}};
  } else if (lambda > 0.0) {
    p.singular_points = {{0.0, CuspKind::none, 0.0}};
  }
  p.normalizable_on_line = b > 0.0;
  return p;
}

/// Toda-like pair f = I0(2ℓ√g e^{-|x|/(2ℓ)}), chosen so that off the
/// origin f''/f = g e^{-|x|/ℓ}.  At the origin f''/f carries -c δ(x) with
/// c = 2√g I1(2ℓ√g)/I0(2ℓ√g).
inline PairFamily toda_pair(double g, double ell) {
  detail::require(g > 0.0, "toda pair requires g > 0");
  detail::require(ell > 0.0, "toda pair requires ell > 0");
  const double sg = std::sqrt(g);
  const double z0 = 2.0 * ell * sg;
  auto z_of = [=](double x) { return z0 * std::exp(-std::abs(x) / (2.0 * ell)); };
  PairFamily p;
  p.name = "toda-bessel";
  p.params = {{"ell", ell}, {"g", g}};
  p.log_value = [=](double x) { return std::log(std::cyl_bessel_i(0.0, z_of(x))); };
  p.log_deriv = [=](double x) {
    double z = z_of(x);
    return -sg * std::exp(-std::abs(x) / (2.0 * ell)) * std::cyl_bessel_i(1.0, z) /
           std::cyl_bessel_i(0.0, z) * detail::sgn(x);
  };
  p.log_second = [=](double x) { return g * std::exp(-std::abs(x) / ell); };
  p.log_value_hp = [=](const hp_real& x) {
    hp_real z = hp_real(z0) * exp(-detail::hp_abs(x) / hp_real(2.0 * ell));
    return log(boost::math::cyl_bessel_i(0, z));
  };
  const double c = 2.0 * sg * std::cyl_bessel_i(1.0, z0) / std::cyl_bessel_i(0.0, z0);
  p.singular_points = {{0.0, CuspKind::contact, -c}};
  return p;
}

// ---------------------------------------------------------------------------
// One-body profiles

/// v = -(mω/2ħ)x², equivalently W = √(m/2) ω x.
inline OneBodyProfile harmonic_profile(double omega, const PhysicalConstants& c) {
  detail::require(omega > 0.0, "harmonic trap requires omega > 0");
  const double a = c.mass * omega / c.hbar;
  const double w_slope = std::sqrt(c.mass / 2.0) * omega;
  OneBodyProfile p;
  p.form = OneBodyProfile::Form::both;
  p.name = "harmonic";
  p.v = [a](double x) { return -0.5 * a * x * x; };
  p.v_prime = [a](double x) { return -a * x; };
  p.v_second = [a](double) { return -a; };
  p.v_hp = [a](const hp_real& x) { return -hp_real(0.5 * a) * x * x; };
  p.w = [w_slope](double x) { return w_slope * x; };
  p.w_prime = [w_slope](double) { return w_slope; };
  p.trap_length = std::sqrt(c.hbar / (c.mass * omega));
  p.harmonic = true;
  p.omega = omega;
  return p;
}

/// v = -(mω/2ħ)(L/π)² sin²(πx/L): a trap with period L.
inline OneBodyProfile trig_trap_profile(double omega, double L, const PhysicalConstants& c) {
  detail::require(omega > 0.0, "trigonometric trap requires omega > 0");
  detail::require(L > 0.0, "trigonometric trap requires L > 0");
  const double a = c.mass * omega / c.hbar;
  const double k = std::numbers::pi / L;
  const double w_scale = -c.hbar / std::sqrt(2.0 * c.mass);
  OneBodyProfile p;
  p.form = OneBodyProfile::Form::both;
  p.name = "trigonometric";
  p.v = [=](double x) {
    double s = std::sin(k * x);
    return -0.5 * a * s * s / (k * k);
  };
  p.v_prime = [=](double x) { return -0.5 * a / k * std::sin(2.0 * k * x); };
  p.v_second = [=](double x) { return -a * std::cos(2.0 * k * x); };
  p.v_hp = [=](const hp_real& x) {
    hp_real s = sin(hp_real(k) * x);
    return -hp_real(0.5 * a / (k * k)) * s * s;
  };
  p.w = [=](double x) { return w_scale * (-0.5 * a / k * std::sin(2.0 * k * x)); };
  p.w_prime = [=](double x) { return w_scale * (-a * std::cos(2.0 * k * x)); };
  p.period = L;
  p.trap_length = std::sqrt(c.hbar / (c.mass * omega));
  p.omega = omega;
  return p;
}

/// Superpotential-only profile.
inline OneBodyProfile w_profile(std::string name, RealFn w, RealFn w_prime) {
  OneBodyProfile p;
  p.form = OneBodyProfile::Form::w_form;
  p.name = std::move(name);
  p.w = std::move(w);
  p.w_prime = std::move(w_prime);
  return p;
}

/// Adds the W-form derived from v: W = -(ħ/√(2m)) v'.
inline OneBodyProfile with_superpotential(OneBodyProfile p, const PhysicalConstants& c) {
  if (!p.has_v()) throw ModelError("profile has no v-form to derive W from");
  const double s = -c.hbar / std::sqrt(2.0 * c.mass);
  auto vp = p.v_prime;
  auto vpp = p.v_second;
  p.w = [s, vp](double x) { return s * vp(x); };
  p.w_prime = [s, vpp](double x) { return s * vpp(x); };
  p.form = OneBodyProfile::Form::both;
  return p;
}

}  // namespace jastrow
