#pragma once

// Pointwise eigenstate checks: local energy (HΨ)/Ψ from closed-form log
// derivatives, an extended-precision finite-difference oracle, configuration
// sampling and cusp matching at contact interactions.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jastrow/model_core.hpp"
#include "jastrow/util/fit.hpp"
#include "jastrow/util/parallel.hpp"
#include "jastrow/util/rng.hpp"

namespace jastrow {

struct JastrowState {
  PairFamily pair;
  std::optional<OneBodyProfile> one_body;
  int n = 2;
  Geometry geometry;

  static JastrowState of(const ModelSpec& m) { return {m.pair, m.one_body, m.n_particles, m.geometry}; }

  double log_value(const ConfigVector& x) const {
    double out = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (one_body) out += one_body->v(x[i]);
      for (std::size_t j = i + 1; j < x.size(); ++j) out += pair.log_value(x[i] - x[j]);
    }
    return out;
  }
};

struct GradLap {
  std::vector<double> grad;
  std::vector<double> lap;
};

namespace detail {

inline void require_size(const JastrowState& s, const ConfigVector& x) {
  if (static_cast<int>(x.size()) != s.n) {
    throw ModelError("configuration has " + std::to_string(x.size()) + " coordinates, expected " +
                     std::to_string(s.n));
  }
}

inline void require_regular(const PairFamily& pair, const ConfigVector& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      double r = x[i] - x[j];
      if (const auto* sp = pair.singular_at(r)) {
        std::ostringstream os;
        os << "coincident particles " << i << " and " << j << " (separation " << r << ")";
        throw SingularPointError(os.str(), *sp);
      }
      if (r == 0.0) throw SingularPointError("coincident particles", {0.0, CuspKind::none, 0.0});
    }
  }
}

}  // namespace detail

/// grad_i = v'(x_i) + Σ_j F(x_ij), lap_i = v''(x_i) + Σ_j [f''/f - F²](x_ij).
inline GradLap log_gradient_laplacian(const JastrowState& s, const ConfigVector& x) {
  detail::require_size(s, x);
  detail::require_regular(s.pair, x);
  const std::size_t n = x.size();
  GradLap out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (s.one_body) {
      out.grad[i] += s.one_body->v_prime(x[i]);
      out.lap[i] += s.one_body->v_second(x[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double r = x[i] - x[j];
      double F = s.pair.log_deriv(r);
      double d = s.pair.log_second(r) - F * F;
      out.grad[i] += F;
      out.grad[j] -= F;
      out.lap[i] += d;
      out.lap[j] += d;
    }
  }
  return out;
}

/// Σ U + Σ_{i<j}[pair + cross] + Σ_{i<j<k} three-body + constant; contact
/// terms vanish off coincidence.
inline double potential_energy(const ModelSpec& m, const ConfigVector& x) {
  const auto& t = m.terms;
  const std::size_t n = x.size();
  double e = t.constant;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.external) e += t.external(x[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (t.pair) e += t.pair(x[i] - x[j]);
      if (t.cross) e += t.cross(x[i], x[j]);
      if (t.three_body) {
        for (std::size_t k = j + 1; k < n; ++k) {
          e += t.three_body(x[i] - x[j], x[j] - x[k], x[k] - x[i]);
        }
      }
    }
  }
  return e;
}

inline double kinetic_local(const ModelSpec& m, const ConfigVector& x) {
  auto gl = log_gradient_laplacian(JastrowState::of(m), x);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += gl.lap[i] + gl.grad[i] * gl.grad[i];
  return -m.constants.hbar * m.constants.hbar / (2.0 * m.constants.mass) * sum;
}

inline double local_energy(const ModelSpec& m, const ConfigVector& x) {
  return kinetic_local(m, x) + potential_energy(m, x);
}

// ---------------------------------------------------------------------------
// finite-difference oracle

namespace detail {

/// ln Ψ terms that involve particle i, at x_i = xi.
inline hp_real log_terms_of(const JastrowState& s, const ConfigVector& x, std::size_t i,
                            const hp_real& xi) {
  hp_real out = 0;
  if (s.one_body) {
    out += s.one_body->v_hp ? s.one_body->v_hp(xi) : hp_real(s.one_body->v(static_cast<double>(xi)));
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j == i) continue;
    out += s.pair.log_value_hp(xi - hp_real(x[j]));
  }
  return out;
}

}  // namespace detail

/// -(ħ²/2m) Σ_i ∂_i²Ψ/Ψ from the 5-point stencil on Ψ, in extended precision.
inline double fd_kinetic(const ModelSpec& m, const ConfigVector& x, double h) {
  const JastrowState s = JastrowState::of(m);
  detail::require_size(s, x);
  detail::require_regular(s.pair, x);
  if (!(h > 0.0)) throw ModelError("finite-difference step must be positive");
  const auto period = s.pair.period;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      double r = x[i] - x[j];
      if (period) r = wrap_periodic(r, *period);
      for (const auto& sp : s.pair.singular_points) {
        if (std::abs(r - sp.x) <= 2.0 * h) {
          std::ostringstream os;
          os << "stencil of width " << 2.0 * h << " crosses the singular separation of particles " << i
             << " and " << j;
          throw SingularPointError(os.str(), sp);
        }
      }
    }
  }
  const hp_real H(h);
  hp_real total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const hp_real xi(x[i]);
    const hp_real base = detail::log_terms_of(s, x, i, xi);
    auto ratio = [&](int step) { return exp(detail::log_terms_of(s, x, i, xi + step * H) - base); };
    hp_real d2 = (-ratio(2) + 16 * ratio(1) - 30 + 16 * ratio(-1) - ratio(-2)) / (12 * H * H);
    total += d2;
  }
  const double k = m.constants.hbar * m.constants.hbar / (2.0 * m.constants.mass);
  return -k * static_cast<double>(total);
}

inline double fd_local_energy(const ModelSpec& m, const ConfigVector& x, double h) {
  return fd_kinetic(m, x, h) + potential_energy(m, x);
}

// ---------------------------------------------------------------------------
// sampling

/// Typical length: trap length if trapped, L/2π on rings, otherwise 1.
inline double length_scale(const ModelSpec& m) {
  if (m.one_body && m.one_body->trap_length && m.geometry.kind != Geometry::Kind::ring) {
    return *m.one_body->trap_length;
  }
  if (m.geometry.kind == Geometry::Kind::ring) return m.geometry.length / (2.0 * std::numbers::pi);
  return 1.0;
}

inline double default_min_separation(const ModelSpec& m) { return 1e-3 * length_scale(m); }

/// Deterministic for a given seed.  Line: Gaussian of width length_scale;
/// ring: uniform in [0, L); box: uniform in (-w/2, w/2).
inline std::vector<ConfigVector> sample_configs(const ModelSpec& m, std::size_t count,
                                                std::uint64_t seed, double min_sep) {
  if (count < 1) throw ModelError("sample count must be at least 1");
  if (!(min_sep > 0.0)) throw ModelError("min_sep must be positive");
  Rng rng(seed);
  const double width = length_scale(m);
  const auto period = m.period();
  std::vector<ConfigVector> out;
  out.reserve(count);
  constexpr int max_attempts = 10000;
  for (std::size_t c = 0; c < count; ++c) {
    int attempts = 0;
    for (;;) {
      if (++attempts > max_attempts) {
        std::ostringstream os;
        os << "rejection sampling failed after " << max_attempts << " attempts (min_sep " << min_sep
           << " too large)";
        throw ModelError(os.str());
      }
      ConfigVector x;
      x.positions.resize(m.n_particles);
      for (auto& xi : x.positions) {
        switch (m.geometry.kind) {
          case Geometry::Kind::ring: xi = rng.uniform(0.0, m.geometry.length); break;
          case Geometry::Kind::box: xi = rng.uniform(-0.5, 0.5) * m.geometry.length; break;
          case Geometry::Kind::line: xi = width * rng.normal(); break;
        }
      }
      if (x.min_separation(period) >= min_sep) {
        out.push_back(std::move(x));
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// verification

struct LocalEnergyReport {
  std::string model;
  int n = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double variance = 0.0;
  double max_abs_dev = 0.0;
  std::optional<double> e0_expected;
  double tol_var = 0.0;
  double tol_mean = 0.0;
  bool pass = false;
  std::vector<double> values;  // per-configuration E_loc
};

struct VerifyOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::optional<double> min_sep;
  unsigned threads = 1;
};

inline LocalEnergyReport verify_eigenstate(const ModelSpec& m, const VerifyOptions& opt) {
  const double min_sep = opt.min_sep.value_or(default_min_separation(m));
  const auto configs = sample_configs(m, opt.samples, opt.seed, min_sep);
  LocalEnergyReport r;
  r.model = m.name;
  r.n = m.n_particles;
  r.samples = configs.size();
  r.seed = opt.seed;
  r.values.assign(configs.size(), 0.0);
  parallel_for(configs.size(), opt.threads, [&](std::size_t i) { r.values[i] = local_energy(m, configs[i]); });

  double sum = 0.0;
  for (double v : r.values) sum += v;
  r.mean = sum / static_cast<double>(r.values.size());
  double ss = 0.0;
  for (double v : r.values) ss += (v - r.mean) * (v - r.mean);
  r.variance = ss / static_cast<double>(r.values.size());
  r.e0_expected = m.e0();
  const double ref = r.e0_expected.value_or(r.mean);
  for (double v : r.values) r.max_abs_dev = std::max(r.max_abs_dev, std::abs(v - ref));
  r.tol_var = 1e-16 * std::max(1.0, ref * ref);
  r.tol_mean = 1e-10 * std::max(1.0, std::abs(ref));
  r.pass = std::isfinite(r.variance) && r.variance <= r.tol_var &&
           (!r.e0_expected || std::abs(r.mean - *r.e0_expected) <= r.tol_mean);
  return r;
}

inline LocalEnergyReport verify_eigenstate(const ModelSpec& m, std::size_t samples, std::uint64_t seed) {
  VerifyOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  return verify_eigenstate(m, opt);
}

// ---------------------------------------------------------------------------
// cusp conditions

struct CuspReport {
  std::string model;
  CuspKind kind = CuspKind::none;
  double jump = 0.0;      // contact: jump of f'/f; hard core: jump of f' over the slope of |f|
  double required = 0.0;  // (m/ħ²) × coefficient in H
  double error = 0.0;
  bool pass = false;
};

namespace detail {

/// Neville extrapolation of samples (eps_k, y_k) to eps = 0.
inline double extrapolate_to_zero(std::vector<double> eps, std::vector<double> y) {
  const std::size_t n = y.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      y[i] = (eps[i - level] * y[i] - eps[i] * y[i - 1]) / (eps[i - level] - eps[i]);
      if (i == level) break;
    }
  }
  return y[n - 1];
}

}  // namespace detail

inline constexpr double cusp_tolerance = 1e-10;

inline CuspReport cusp_check(const ModelSpec& m) {
  const auto& contact = m.terms.contact;
  if (contact.kind == CuspKind::none) throw ModelError("no delta term in model '" + m.name + "'");
  const double required = m.constants.mass / (m.constants.hbar * m.constants.hbar) * contact.strength;
  const auto F = m.pair.log_deriv;
  std::vector<double> eps, y;
  for (int k = 0; k < 6; ++k) {
    double e = 1e-2 * std::ldexp(1.0, -k);
    eps.push_back(e);
    if (contact.kind == CuspKind::contact) {
      y.push_back(F(e) - F(-e));
    } else {
      // f ≈ A|x|: f'(±e) = f F, and f(e)/e → A, so the normalized jump is e[F(e) - F(-e)].
      y.push_back(e * (F(e) - F(-e)));
    }
  }
  CuspReport r;
  r.model = m.name;
  r.kind = contact.kind;
  r.jump = detail::extrapolate_to_zero(eps, y);
  r.required = required;
  r.error = std::abs(r.jump - r.required);
  r.pass = r.error <= cusp_tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// finite-difference oracle

struct OracleReport {
  std::string model;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<double> steps;
  std::vector<double> orders;  // fitted per configuration; NaN when exact
  std::size_t exact = 0;       // configurations agreeing to roundoff at every step
  double min_order = 0.0, max_order = 0.0;
  double max_error = 0.0;      // at the smallest step
  bool pass = false;
};

inline constexpr double oracle_target_order = 4.0;
inline constexpr double oracle_order_tolerance = 0.5;

/// Kinetic part of the analytic local energy against the 5-point oracle;
/// the error must shrink as h^4.  Configurations keep a distance of
/// 0.3·length_scale from singular separations so the steps are asymptotic.
inline OracleReport oracle_check(const ModelSpec& m, std::size_t configs = 10, std::uint64_t seed = 1,
                                 std::vector<double> steps = {1e-2, 5e-3, 2.5e-3}, unsigned threads = 1) {
  const double scale = length_scale(m);
  const auto xs = sample_configs(m, configs, seed, 0.3 * scale);
  OracleReport r;
  r.model = m.name;
  r.n = m.n_particles;
  r.seed = seed;
  r.steps = steps;
  std::vector<std::vector<double>> errs(xs.size(), std::vector<double>(steps.size()));
  std::vector<double> refs(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t c) {
    refs[c] = kinetic_local(m, xs[c]);
    for (std::size_t k = 0; k < steps.size(); ++k) errs[c][k] = fd_kinetic(m, xs[c], steps[k] * scale) - refs[c];
  });
  r.min_order = std::numeric_limits<double>::infinity();
  r.max_order = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t c = 0; c < xs.size(); ++c) {
    const double floor = 1e-13 * std::max(1.0, std::abs(refs[c]));
    bool exact = true;
    for (double e : errs[c]) exact = exact && std::abs(e) <= floor;
    r.max_error = std::max(r.max_error, std::abs(errs[c].back()));
    if (exact) {
      ++r.exact;
      r.orders.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    std::vector<double> hs;
    for (double h : steps) hs.push_back(h * scale);
    const double q = fitted_order(hs, errs[c]);
    r.orders.push_back(q);
    r.min_order = std::min(r.min_order, q);
    r.max_order = std::max(r.max_order, q);
    ok = ok && std::abs(q - oracle_target_order) <= oracle_order_tolerance;
  }
  if (r.exact == xs.size()) r.min_order = r.max_order = std::numeric_limits<double>::quiet_NaN();
  r.pass = ok;
  return r;
}

}  // namespace jastrow
