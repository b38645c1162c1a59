#pragma once

// Domain types shared by every module: physical constants, pair families,
// prepotentials, one-body profiles, configurations and assembled models.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace jastrow {

/// Extended-precision real used by the finite-difference oracle.
using hp_real = boost::multiprecision::cpp_bin_float_50;

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0)) {
      throw ModelError("hbar and mass must be positive");
    }
  }
};

enum class Parity { even, odd };

inline int zeta_of(Parity p) { return p == Parity::even ? +1 : -1; }

/// Distributional content of f''/f at a singular point.
///  - contact:   f''/f ⊃ strength · δ(x)
///  - hard_core: f''/f ⊃ strength · δ(x)/|x|   (f vanishes linearly at x)
enum class CuspKind { none, contact, hard_core };

struct SingularPoint {
  double x = 0.0;
  CuspKind kind = CuspKind::none;
  double strength = 0.0;
};

class SingularPointError : public std::domain_error {
 public:
  SingularPointError(const std::string& what, SingularPoint point)
      : std::domain_error(what), point_(point) {}
  const SingularPoint& point() const noexcept { return point_; }

 private:
  SingularPoint point_;
};

using RealFn = std::function<double(double)>;
using HpFn = std::function<hp_real(const hp_real&)>;
using Params = std::map<std::string, double>;

/// Reduces x into (-period/2, period/2].
inline double wrap_periodic(double x, double period) {
  double r = std::remainder(x, period);
  if (r <= -period / 2) r += period;
  return r;
}

/// A named analytic pair function f(x) known through its logarithm.
struct PairFamily {
  std::string name;
  Params params;
  Parity parity = Parity::even;
  RealFn log_value;   // ln|f(x)|
  RealFn log_deriv;   // f'/f
  RealFn log_second;  // f''/f (regular part)
  HpFn log_value_hp;  // ln|f(x)| in extended precision
  std::vector<SingularPoint> singular_points;
  std::optional<double> period;
  bool normalizable_on_line = false;

  const SingularPoint* singular_at(double x) const {
    double y = period ? wrap_periodic(x, *period) : x;
    for (const auto& s : singular_points) {
      if (std::abs(y - s.x) <= 1e-14 * std::max(1.0, std::abs(x))) return &s;
    }
    return nullptr;
  }

  bool has_cusp() const {
    for (const auto& s : singular_points) {
      if (s.kind != CuspKind::none) return true;
    }
    return false;
  }
};

struct PairValues {
  double f_over_f;
  double fpp_over_f;
};

/// Closed-form f'/f and f''/f at a regular point.
inline PairValues eval_pair(const PairFamily& pair, double x) {
  if (const auto* s = pair.singular_at(x)) {
    std::ostringstream os;
    os << "pair family '" << pair.name << "' evaluated at singular point x=" << x;
    if (s->kind == CuspKind::contact) os << " (delta strength " << s->strength << ")";
    if (s->kind == CuspKind::hard_core) os << " (hard-core strength " << s->strength << "/|x|)";
    throw SingularPointError(os.str(), *s);
  }
  return {pair.log_deriv(x), pair.log_second(x)};
}

struct Prepotential {
  std::string name;
  Params params;
  RealFn value;       // V(x)
  RealFn derivative;  // V'(x), regular part
  std::vector<SingularPoint> singular_points;  // strengths refer to V'
  std::optional<double> period;
  int zeta = +1;
  double hbar = 1.0;

  /// Closed-form description when V = ζħ[core(x) - βx]; used by the
  /// three-to-two reduction.
  enum class Core { none, zero, rational, cot, coth, sgn };
  Core core = Core::none;
  double core_amplitude = 0.0;  // λ, λ(π/L), λa or g (units of 1/length)
  double core_scale = 0.0;      // π/L for cot, a for coth
  double linear = 0.0;          // β
};

/// One-body factor exp(v) of the Jastrow state, or its superpotential W.
struct OneBodyProfile {
  enum class Form { v_form, w_form, both };
  Form form = Form::v_form;
  std::string name;
  RealFn v, v_prime, v_second;
  HpFn v_hp;
  RealFn w, w_prime;
  std::optional<double> period;
  std::optional<double> trap_length;  // √(ħ/mω) for harmonic traps
  bool harmonic = false;              // v'' constant
  double omega = 0.0;

  bool has_v() const { return form != Form::w_form; }
  bool has_w() const { return form != Form::v_form; }
};

struct Geometry {
  enum class Kind { line, ring, box };
  Kind kind = Kind::line;
  double length = 0.0;  // circumference for rings, full width for boxes

  static Geometry line() { return {}; }
  static Geometry ring(double L) { return {Kind::ring, L}; }
  static Geometry box(double width) { return {Kind::box, width}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::line: return "line";
      case Kind::ring: return "ring";
      case Kind::box: return "box";
    }
    return "line";
  }
};

struct ConfigVector {
  std::vector<double> positions;

  std::size_t size() const { return positions.size(); }
  double operator[](std::size_t i) const { return positions[i]; }

  double min_separation(std::optional<double> period = std::nullopt) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions.size(); ++i) {
      for (std::size_t j = i + 1; j < positions.size(); ++j) {
        double d = positions[i] - positions[j];
        if (period) d = wrap_periodic(d, *period);
        best = std::min(best, std::abs(d));
      }
    }
    return best;
  }
};

/// Coefficient of δ(x_ij) (contact) or of δ(x_ij)/|x_ij| (hard core) in H.
struct ContactTerm {
  CuspKind kind = CuspKind::none;
  double strength = 0.0;
};

/// Potential pieces of H = Σ p²/2m + Σ U + Σ_{i<j}[pair + cross + contact]
///                        + Σ_{i<j<k} three_body + constant.
struct HamiltonianTerms {
  RealFn external;                                         // U(x_i)
  RealFn pair;                                             // even in x_ij
  ContactTerm contact;
  std::function<double(double, double, double)> three_body;  // (x_ij, x_jk, x_ki)
  std::function<double(double, double)> cross;               // (x_i, x_j)
  double constant = 0.0;
};

enum class Term { external, pair, contact, three_body, cross };

inline Term parse_term(const std::string& s) {
  if (s == "external") return Term::external;
  if (s == "pair" || s == "two-body") return Term::pair;
  if (s == "contact") return Term::contact;
  if (s == "three-body") return Term::three_body;
  if (s == "cross") return Term::cross;
  throw ModelError("unknown term '" + s + "'");
}

struct ModelSpec {
  std::string name;
  Params params;
  PhysicalConstants constants;
  int n_particles = 2;
  int zeta = +1;
  PairFamily pair;
  std::optional<OneBodyProfile> one_body;
  Geometry geometry;
  HamiltonianTerms terms;
  std::function<double(int)> e0_formula;  // empty when unknown
  std::vector<std::string> citations;
  bool lattice_compatible = false;

  bool e0_known() const { return static_cast<bool>(e0_formula); }
  std::optional<double> e0() const {
    if (!e0_formula) return std::nullopt;
    return e0_formula(n_particles);
  }
  std::optional<double> period() const {
    if (geometry.kind == Geometry::Kind::ring) return geometry.length;
    return std::nullopt;
  }

  /// Copy of this model with one potential term removed (negative controls).
  ModelSpec without(Term t) const {
    ModelSpec m = *this;
    switch (t) {
      case Term::external: m.terms.external = nullptr; break;
      case Term::pair: m.terms.pair = nullptr; break;
      case Term::contact: m.terms.contact = {}; break;
      case Term::three_body: m.terms.three_body = nullptr; break;
      case Term::cross: m.terms.cross = nullptr; break;
    }
    m.name += "[corrupted]";
    return m;
  }
};

}  // namespace jastrow
