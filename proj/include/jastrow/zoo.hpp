#pragma once

// Catalog of named models, stored in their physical (printed) form: every
// constant of the parent Hamiltonian is moved into E0, so a correct model has
// local energy identically equal to E0.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "jastrow/builder.hpp"
#include "jastrow/model_core.hpp"
#include "jastrow/pair_families.hpp"

namespace jastrow {

struct ParamSpec {
  std::string name;
  double default_value = 0.0;
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  bool min_inclusive = true;
  std::string description;
};

struct ZooEntry {
  std::string name;
  Geometry::Kind geometry = Geometry::Kind::line;
  std::vector<ParamSpec> params;
  std::string summary;
  std::string e0_text;  // closed form, or a note when unknown
  bool lattice_compatible = false;
};

namespace detail {

inline ParamSpec positive(std::string name, double def, std::string d) {
  return {std::move(name), def, 0.0, std::numeric_limits<double>::infinity(), false, std::move(d)};
}

inline ParamSpec nonneg(std::string name, double def, std::string d) {
  return {std::move(name), def, 0.0, std::numeric_limits<double>::infinity(), true, std::move(d)};
}

inline ParamSpec any_real(std::string name, double def, std::string d) {
  return {std::move(name), def, -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), true, std::move(d)};
}

inline const std::vector<ZooEntry>& zoo_entries() {
  static const std::vector<ZooEntry> entries = [] {
    using K = Geometry::Kind;
    const auto lam = nonneg("lambda", 2.0, "pair exponent");
    const auto omega = positive("omega", 1.0, "trap frequency");
    const auto ring_L = positive("L", 2.0 * std::numbers::pi, "ring circumference");
    const auto g = any_real("g", 1.0, "contact coupling (f = exp(g|x|))");
    std::vector<ZooEntry> e;
    e.push_back({"calogero", K::line, {lam}, "rational Calogero, f = |x|^lambda",
                 "E0 = 0", false});
    e.push_back({"calogero-trapped", K::line, {lam, omega},
                 "rational Calogero in a harmonic trap",
                 "E0 = N hbar omega/2 + N(N-1) lambda hbar omega/2", false});
    e.push_back({"tonks-girardeau-trapped", K::line, {omega},
                 "hard-core bosons (lambda = 1) in a harmonic trap",
                 "E0 = N hbar omega/2 + N(N-1) hbar omega/2", false});
    e.push_back({"sutherland", K::ring,
                 {{"lambda", 0.5, 0.0, 1.0, true, "pair exponent in [0, 1]"}, ring_L},
                 "Sutherland on a ring, f = |sin(pi x/L)|^lambda",
                 "E0 = (pi/L)^2 lambda^2 hbar^2 N(N^2-1)/(6m)", false});
    e.push_back({"lieb-liniger", K::line, {g}, "contact interaction, f = exp(g|x|)",
                 "E0 = -hbar^2 g^2 N(N^2-1)/(6m)", true});
    e.push_back({"lieb-liniger-coulomb", K::line, {g, omega},
                 "contact plus linear (1D Coulomb) interaction in a harmonic trap",
                 "E0 = N hbar omega/2 - g^2 hbar^2 N(N^2-1)/(6m)", true});
    e.push_back({"quadratic-lr-ll", K::line, {g, any_real("beta", 0.5, "quadratic coefficient")},
                 "contact plus long-range |x| and x^2 pair terms, f = exp(g|x| - beta x^2/2)",
                 "E0 = (hbar^2/m)[N(N-1) beta/2 - g^2 N(N^2-1)/6]", true});
    e.push_back({"hybrid-lr-ll", K::line,
                 {g, any_real("beta", 0.5, "quadratic coefficient"), omega},
                 "quadratic long-range model in a harmonic trap",
                 "E0 = N hbar omega/2 + (hbar^2/m)[beta N(N-1)/2 - g^2 N(N^2-1)/6]", true});
    e.push_back({"quadratic-pair", K::line,
                 {any_real("g", -1.0, "contact coupling (bound for g < 0)"), omega},
                 "trapped model at beta = -m omega/(N hbar): the |x| terms cancel",
                 "E0 = hbar omega/2 - g^2 hbar^2 N(N^2-1)/(6m)", true});
    e.push_back({"hyperbolic", K::line,
                 {lam, positive("a", 1.0, "inverse range"), any_real("b", 0.5, "Gaussian width")},
                 "f = |sinh(a x)|^lambda exp(-b x^2/2)",
                 "E0 = (hbar^2/m)[b N(N-1)/2 - lambda^2 a^2 N(N^2-1)/6]", false});
    e.push_back({"sutherland-trig-trap", K::ring,
                 {{"lambda", 0.5, 0.0, 1.0, true, "pair exponent in [0, 1]"}, ring_L, omega},
                 "Sutherland in a trigonometric trap",
                 "E0 = (pi/L)^2 lambda^2 hbar^2 N(N^2-1)/(6m) - N m omega^2 L^2/(16 pi^2)", false});
    e.push_back({"toda-bessel", K::line,
                 {positive("g", 1.0, "exponential pair strength"), positive("ell", 1.0, "range")},
                 "exponential pair interaction with Bessel pair function and three-body term",
                 "unknown (quasi-solvable)", true});
    e.push_back({"toda-bessel-trapped", K::line,
                 {positive("g", 1.0, "exponential pair strength"), positive("ell", 1.0, "range"),
                  omega},
                 "toda-bessel in a harmonic trap", "unknown (quasi-solvable)", true});
    return e;
  }();
  return entries;
}

inline Params resolve_params(const ZooEntry& entry, const Params& given) {
  Params out;
  for (const auto& [key, value] : given) {
    bool known = std::any_of(entry.params.begin(), entry.params.end(),
                             [&](const ParamSpec& p) { return p.name == key; });
    if (!known) throw ModelError("model '" + entry.name + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw ModelError("parameter '" + key + "' must be finite");
  }
  for (const auto& spec : entry.params) {
    auto it = given.find(spec.name);
    double v = it == given.end() ? spec.default_value : it->second;
    bool ok = (spec.min_inclusive ? v >= spec.min : v > spec.min) && v <= spec.max;
    if (!ok) {
      std::ostringstream os;
      os << "parameter '" << spec.name << "' = " << v << " out of range for model '" << entry.name
         << "'";
      throw ModelError(os.str());
    }
    out[spec.name] = v;
  }
  return out;
}

}  // namespace detail

inline const ZooEntry& zoo_entry(const std::string& name) {
  for (const auto& e : detail::zoo_entries()) {
    if (e.name == name) return e;
  }
  throw ModelError("unknown zoo model '" + name + "'");
}

inline std::vector<ZooEntry> list_zoo(std::optional<Geometry::Kind> geometry = std::nullopt) {
  std::vector<ZooEntry> out;
  for (const auto& e : detail::zoo_entries()) {
    if (!geometry || e.geometry == *geometry) out.push_back(e);
  }
  return out;
}

inline ModelSpec zoo_model(const std::string& name, const Params& given, int n,
                           const PhysicalConstants& c = {}) {
  c.validate();
  const ZooEntry& entry = zoo_entry(name);
  if (n < 2) throw ModelError("zoo models require N >= 2");
  const Params p = detail::resolve_params(entry, given);
  const double hb = c.hbar, m = c.mass, k = hb * hb / m;
  const double N = n;

  ModelSpec s;
  s.name = name;
  s.params = p;
  s.constants = c;
  s.n_particles = n;
  s.zeta = +1;
  s.lattice_compatible = entry.lattice_compatible;
  s.geometry = Geometry::line();

  auto harmonic_external = [m](double omega) {
    return [m, omega](double x) { return 0.5 * m * omega * omega * x * x; };
  };
  auto calogero_pair = [k](double lambda) -> RealFn {
    const double a = k * lambda * (lambda - 1.0);
    if (a == 0.0) return [](double) { return 0.0; };
    return [a](double r) { return a / (r * r); };
  };

  if (name == "calogero" || name == "calogero-trapped" || name == "tonks-girardeau-trapped") {
    const double lambda = name == "tonks-girardeau-trapped" ? 1.0 : p.at("lambda");
    s.pair = power_pair(lambda);
    s.terms.pair = calogero_pair(lambda);
    if (lambda == 1.0) s.terms.contact = {CuspKind::hard_core, 2.0 * k};
    if (name == "calogero") {
      s.e0_formula = [](int) { return 0.0; };
      s.citations = {"Calogero (1969), rational inverse-square model"};
    } else {
      const double omega = p.at("omega");
      s.one_body = harmonic_profile(omega, c);
      s.terms.external = harmonic_external(omega);
      s.e0_formula = [=](int nn) {
        return nn * hb * omega / 2.0 + nn * (nn - 1) * lambda * hb * omega / 2.0;
      };
      s.citations = {lambda == 1.0 ? "Girardeau (1960), hard-core bosons in a trap"
                                   : "Calogero (1971), trapped inverse-square model"};
    }
    if (name == "tonks-girardeau-trapped") s.params["lambda"] = 1.0;
  } else if (name == "sutherland" || name == "sutherland-trig-trap") {
    const double lambda = p.at("lambda"), L = p.at("L");
    const double kap = std::numbers::pi / L;
    s.geometry = Geometry::ring(L);
    s.pair = sine_pair(lambda, L);
    const double a = k * kap * kap * lambda * (lambda - 1.0);
    s.terms.pair = [a, kap](double r) {
      double sn = std::sin(kap * r);
      return a / (sn * sn);
    };
    if (lambda == 1.0) s.terms.contact = {CuspKind::hard_core, 2.0 * k};
    const double e_hom = kap * kap * lambda * lambda * k / 6.0;
    if (name == "sutherland") {
      s.e0_formula = [=](int nn) { return e_hom * nn * (nn * nn - 1.0); };
      s.citations = {"Sutherland (1971), inverse sine-square model on a ring"};
    } else {
      const double omega = p.at("omega");
      s.one_body = trig_trap_profile(omega, L, c);
      const double c4 = m * omega * omega * L * L / (16.0 * std::numbers::pi * std::numbers::pi);
      s.terms.external = [=](double x) {
        return -0.5 * hb * omega * std::cos(2.0 * kap * x) - c4 * std::cos(4.0 * kap * x);
      };
      s.terms.cross = [=](double xi, double xj) {
        return -hb * omega * lambda * std::cos(kap * (xi - xj)) * std::cos(kap * (xi + xj));
      };
      s.e0_formula = [=](int nn) { return e_hom * nn * (nn * nn - 1.0) - nn * c4; };
      s.citations = {"Sutherland model with a periodic trigonometric trap"};
    }
  } else if (name == "lieb-liniger" || name == "lieb-liniger-coulomb") {
    const double g = p.at("g");
    s.pair = exp_abs_pair(g);
    s.terms.pair = [](double) { return 0.0; };
    if (g != 0.0) s.terms.contact = {CuspKind::contact, 2.0 * g * k};
    const double e_int = -k * g * g / 6.0;
    if (name == "lieb-liniger") {
      s.e0_formula = [=](int nn) { return e_int * nn * (nn * nn - 1.0); };
      s.citations = {"Lieb and Liniger (1963); McGuire (1964) bound state"};
    } else {
      const double omega = p.at("omega");
      s.one_body = harmonic_profile(omega, c);
      s.terms.external = harmonic_external(omega);
      s.terms.cross = [=](double xi, double xj) { return -g * hb * omega * std::abs(xi - xj); };
      s.e0_formula = [=](int nn) { return nn * hb * omega / 2.0 + e_int * nn * (nn * nn - 1.0); };
      s.citations = {"contact and linear Coulomb interaction in a harmonic trap"};
    }
  } else if (name == "quadratic-lr-ll" || name == "hybrid-lr-ll" || name == "quadratic-pair") {
    const double g = p.at("g");
    const bool trapped = name != "quadratic-lr-ll";
    const double omega = trapped ? p.at("omega") : 0.0;
    const double beta = name == "quadratic-pair" ? -m * omega / (N * hb) : p.at("beta");
    if (name == "quadratic-pair") s.params["beta"] = beta;
    s.pair = quadratic_pair(g, beta);
    if (g != 0.0) s.terms.contact = {CuspKind::contact, 2.0 * g * k};
    const double e_int_pair = k * beta / 2.0, e_int_cube = -k * g * g / 6.0;
    auto e_hom = [=](int nn) { return e_int_pair * nn * (nn - 1) + e_int_cube * nn * (nn * nn - 1.0); };
    if (!trapped) {
      s.terms.pair = [=](double r) {
        return k * (-N * g * beta * std::abs(r) + 0.5 * N * beta * beta * r * r);
      };
      s.e0_formula = e_hom;
      s.citations = {"contact plus quadratic long-range interaction"};
    } else {
      s.one_body = harmonic_profile(omega, c);
      s.terms.external = harmonic_external(omega);
      if (name == "hybrid-lr-ll") {
        s.terms.pair = [=](double r) {
          return k * (-N * g * beta * std::abs(r) + 0.5 * N * beta * beta * r * r);
        };
        const double a = m * omega / hb;
        s.terms.cross = [=](double xi, double xj) {
          double r = xi - xj;
          return k * (-g * a * std::abs(r) + beta * a * r * r);
        };
        s.citations = {"hybrid long-range model in a harmonic trap"};
      } else {
        // β = -mω/(Nħ): the |x| terms cancel and the quadratic terms combine.
        const double q = -m * omega * omega / (2.0 * N);
        s.terms.pair = [q](double r) { return q * r * r; };
        s.citations = {"trapped model with vanishing long-range |x| interaction"};
      }
      s.e0_formula = [=](int nn) { return nn * hb * omega / 2.0 + e_hom(nn); };
    }
  } else if (name == "hyperbolic") {
    const double lambda = p.at("lambda"), a = p.at("a"), b = p.at("b");
    s.pair = sinh_pair(lambda, a, b);
    s.terms.pair = [=](double r) {
      double out = 0.5 * N * b * b * r * r;
      if (lambda != 0.0) {
        double sh = std::sinh(a * r);
        out += a * a * lambda * (lambda - 1.0) / (sh * sh) - lambda * N * a * b * r / std::tanh(a * r);
      }
      return k * out;
    };
    if (lambda == 1.0) s.terms.contact = {CuspKind::hard_core, 2.0 * k};
    s.e0_formula = [=](int nn) {
      return k * (b * nn * (nn - 1) / 2.0 - lambda * lambda * a * a * nn * (nn * nn - 1.0) / 6.0);
    };
    s.citations = {"generalized hyperbolic model"};
  } else if (name == "toda-bessel" || name == "toda-bessel-trapped") {
    const double g = p.at("g"), ell = p.at("ell");
    s.pair = toda_pair(g, ell);
    s.terms.pair = [=](double r) { return k * g * std::exp(-std::abs(r) / ell); };
    s.terms.contact = {CuspKind::contact, k * s.pair.singular_points.front().strength};
    auto F = s.pair.log_deriv;
    s.terms.three_body = [k, F](double r1, double r2, double r3) {
      double a = F(r1), b = F(r2), d = F(r3);
      return -k * (a * b + b * d + d * a);
    };
    s.citations = {"exponential pair interaction with Bessel-function pair factor"};
    if (name == "toda-bessel-trapped") {
      const double omega = p.at("omega");
      s.one_body = harmonic_profile(omega, c);
      s.terms.external = harmonic_external(omega);
      s.terms.cross = [hb, omega, F](double xi, double xj) {
        double r = xi - xj;
        return -hb * omega * r * F(r);
      };
    }
    // No closed-form ground-state energy: e0_formula stays empty.
  }
  return s;
}

}  // namespace jastrow
