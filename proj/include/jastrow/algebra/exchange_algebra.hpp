#pragma once

// Normal-ordered operator expressions Σ c(x) p^α M_σ and the exchange
// operator constructions built on them: generalized momenta, power-sum
// invariants, projections onto bosonic/fermionic sectors and the exact
// integrability checks.
//
// Conventions: (M_σ ψ)(x) = ψ(x_σ(1), ..., x_σ(N)), so
//   M_σ c(x) = c(x_σ) M_σ,  M_σ p_k = p_σ(k) M_σ,  M_σ M_τ = M_{σ∘τ},
// and p_k c = c p_k - iħ ∂_k c.

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jastrow/algebra/rational.hpp"
#include "jastrow/model_core.hpp"

namespace jastrow::algebra {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// permutations

struct Perm {
  std::array<std::uint8_t, max_particles> map{};

  static Perm identity() {
    Perm p;
    for (int k = 0; k < max_particles; ++k) p.map[k] = static_cast<std::uint8_t>(k);
    return p;
  }
  /// M_ij, 0-based.
  static Perm transposition(int i, int j) {
    Perm p = identity();
    std::swap(p.map[i], p.map[j]);
    return p;
  }
  static Perm from_images(const std::vector<int>& images) {
    Perm p = identity();
    for (std::size_t k = 0; k < images.size(); ++k) p.map[k] = static_cast<std::uint8_t>(images[k]);
    return p;
  }

  int operator()(int k) const { return map[k]; }
  bool is_identity() const { return *this == identity(); }

  /// (σ∘τ)(k) = σ(τ(k)).
  friend Perm operator*(const Perm& s, const Perm& t) {
    Perm r;
    for (int k = 0; k < max_particles; ++k) r.map[k] = s.map[t.map[k]];
    return r;
  }
  Perm inverse() const {
    Perm r;
    for (int k = 0; k < max_particles; ++k) r.map[map[k]] = static_cast<std::uint8_t>(k);
    return r;
  }
  int parity() const {
    int sign = 1;
    std::array<bool, max_particles> seen{};
    for (int k = 0; k < max_particles; ++k) {
      if (seen[k]) continue;
      int len = 0;
      for (int j = k; !seen[j]; j = map[j]) {
        seen[j] = true;
        ++len;
      }
      if (len % 2 == 0) sign = -sign;
    }
    return sign;
  }

  friend bool operator==(const Perm& a, const Perm& b) { return a.map == b.map; }
  friend bool operator<(const Perm& a, const Perm& b) { return a.map < b.map; }

  std::string to_string(int n) const {
    std::ostringstream os;
    os << "M[";
    for (int k = 0; k < n; ++k) os << (k ? " " : "") << int(map[k]) + 1;
    os << "]";
    return os.str();
  }
};

/// M_ijk = M_ij M_jk.
inline Perm three_cycle(int i, int j, int k) { return Perm::transposition(i, j) * Perm::transposition(j, k); }

// ---------------------------------------------------------------------------
// expressions

using Exponents = std::array<std::uint8_t, max_particles>;

struct OpKey {
  Exponents alpha{};
  Perm perm = Perm::identity();

  friend bool operator<(const OpKey& a, const OpKey& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.perm < b.perm;
  }
  friend bool operator==(const OpKey& a, const OpKey& b) { return a.alpha == b.alpha && a.perm == b.perm; }
};

struct Budget {
  std::size_t max_terms = 2'000'000;
  double max_seconds = 600.0;
};

class OperatorExpr {
 public:
  explicit OperatorExpr(int n = 1) : n_(n) {
    if (n < 1 || n > max_particles) throw ModelError("operator expressions support 1..6 particles");
  }

  static OperatorExpr scalar(int n, const RationalCoeff& c) {
    OperatorExpr e(n);
    e.add_term(OpKey{}, c);
    return e;
  }
  static OperatorExpr one(int n) { return scalar(n, RationalCoeff::constant(GQ(1))); }
  static OperatorExpr x(int n, int i) { return scalar(n, RationalCoeff::variable(i)); }
  static OperatorExpr p(int n, int i, int power = 1) {
    OperatorExpr e(n);
    OpKey k;
    k.alpha[i] = static_cast<std::uint8_t>(power);
    e.add_term(k, RationalCoeff::constant(GQ(1)));
    return e;
  }
  static OperatorExpr exchange(int n, const Perm& s) {
    OperatorExpr e(n);
    OpKey k;
    k.perm = s;
    e.add_term(k, RationalCoeff::constant(GQ(1)));
    return e;
  }
  static OperatorExpr term(int n, const RationalCoeff& c, const Exponents& alpha, const Perm& s) {
    OperatorExpr e(n);
    e.add_term(OpKey{alpha, s}, c);
    return e;
  }

  int particles() const { return n_; }
  const std::map<OpKey, RationalCoeff>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool exchange_free() const {
    for (const auto& [k, c] : terms_) {
      if (!k.perm.is_identity()) return false;
    }
    return true;
  }

  void add_term(const OpKey& k, const RationalCoeff& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) {
    check_same(a, b);
    OperatorExpr r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, c);
    return r;
  }
  OperatorExpr operator-() const {
    OperatorExpr r(n_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
  }
  friend OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) { return a + (-b); }
  friend OperatorExpr operator*(const RationalCoeff& c, const OperatorExpr& e) {
    OperatorExpr r(e.n_);
    for (const auto& [k, v] : e.terms_) r.add_term(k, c * v);
    return r;
  }
  friend OperatorExpr operator*(const GQ& c, const OperatorExpr& e) { return RationalCoeff::constant(c) * e; }

  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;
  nlohmann::json to_json() const;

  static void check_same(const OperatorExpr& a, const OperatorExpr& b) {
    if (a.n_ != b.n_) throw ModelError("operator expressions on different particle numbers");
  }

 private:
  int n_;
  std::map<OpKey, RationalCoeff> terms_;
};

namespace detail {

inline RationalCoeff minus_i_hbar_power(int g) {
  // (-iħ)^g
  static const GQ powers[4] = {GQ(1), GQ(0, -1), GQ(-1), GQ(0, 1)};
  Poly h = Poly(powers[g % 4]);
  if (g > 0) {
    std::vector<Poly::Term> t{{mono_of(var_of(Param::hbar), g), powers[g % 4]}};
    h = Poly::from_terms(std::move(t));
  }
  return RationalCoeff(h);
}

inline mpz_class binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace detail

/// Normal-ordered product a·b.
inline OperatorExpr multiply(const OperatorExpr& a, const OperatorExpr& b, const Budget& budget = {}) {
  OperatorExpr::check_same(a, b);
  const int n = a.particles();
  detail::Clock clock;
  std::map<OpKey, std::vector<RationalCoeff>> acc;
  std::size_t produced = 0;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      const Perm& s = ka.perm;
      RationalCoeff moved = s.is_identity() ? cb : cb.relabel(s.map);
      Exponents beta_s{};
      for (int k = 0; k < n; ++k) beta_s[s(k)] = kb.alpha[k];
      const Perm perm = s * kb.perm;
      // Leibniz over γ ≤ α, coordinate by coordinate.
      std::vector<std::pair<Exponents, RationalCoeff>> partial{{Exponents{}, moved}};
      for (int k = 0; k < n; ++k) {
        if (ka.alpha[k] == 0) continue;
        std::vector<std::pair<Exponents, RationalCoeff>> next;
        for (const auto& [gamma, c] : partial) {
          RationalCoeff d = c;
          for (int g = 0; g <= ka.alpha[k]; ++g) {
            if (g > 0) d = d.derivative(k);
            if (d.is_zero()) break;
            Exponents gk = gamma;
            gk[k] = static_cast<std::uint8_t>(g);
            GQ binom(mpq_class(detail::binomial(ka.alpha[k], g)));
            next.push_back({gk, binom * d});
          }
        }
        partial = std::move(next);
      }
      for (const auto& [gamma, c] : partial) {
        int order = 0;
        OpKey key;
        key.perm = perm;
        for (int k = 0; k < max_particles; ++k) {
          order += gamma[k];
          key.alpha[k] = static_cast<std::uint8_t>(ka.alpha[k] - gamma[k] + beta_s[k]);
        }
        acc[key].push_back(ca * (detail::minus_i_hbar_power(order) * c));
        if (++produced > budget.max_terms) {
          throw BudgetExceeded("term budget of " + std::to_string(budget.max_terms) + " exceeded");
        }
      }
      if (clock.seconds() > budget.max_seconds) {
        throw BudgetExceeded("time budget of " + std::to_string(budget.max_seconds) + " s exceeded");
      }
    }
  }
  OperatorExpr out(n);
  for (auto& [key, parts] : acc) {
    std::vector<const RationalCoeff*> ptrs;
    ptrs.reserve(parts.size());
    for (const auto& c : parts) ptrs.push_back(&c);
    out.add_term(key, RationalCoeff::sum(ptrs));
  }
  return out;
}

inline OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) { return multiply(a, b); }

inline OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b, const Budget& budget = {}) {
  return multiply(a, b, budget) - multiply(b, a, budget);
}

inline OperatorExpr power(const OperatorExpr& a, int n, const Budget& budget = {}) {
  if (n < 0) throw ModelError("negative operator power");
  OperatorExpr r = OperatorExpr::one(a.particles());
  for (int k = 0; k < n; ++k) r = multiply(r, a, budget);
  return r;
}

/// (c p^α M_σ)† = M_σ⁻¹ p^α c̄.
inline OperatorExpr dagger(const OperatorExpr& e) {
  const int n = e.particles();
  OperatorExpr out(n);
  for (const auto& [k, c] : e.terms()) {
    OperatorExpr t = OperatorExpr::exchange(n, k.perm.inverse()) *
                     (OperatorExpr::term(n, RationalCoeff::constant(GQ(1)), k.alpha, Perm::identity()) *
                      OperatorExpr::scalar(n, c.conj()));
    out = out + t;
  }
  return out;
}

/// A word of generators, multiplied left to right and normal-ordered.
struct Factor {
  enum class Kind { coefficient, momentum, exchange } kind = Kind::coefficient;
  RationalCoeff coeff;
  int index = 0;
  Perm perm = Perm::identity();

  static Factor c(RationalCoeff v) { return {Kind::coefficient, std::move(v), 0, Perm::identity()}; }
  static Factor p(int i) { return {Kind::momentum, {}, i, Perm::identity()}; }
  static Factor m(Perm s) { return {Kind::exchange, {}, 0, s}; }
};

inline OperatorExpr normal_order(int n, const std::vector<Factor>& word) {
  OperatorExpr r = OperatorExpr::one(n);
  for (const auto& f : word) {
    switch (f.kind) {
      case Factor::Kind::coefficient: r = r * OperatorExpr::scalar(n, f.coeff); break;
      case Factor::Kind::momentum: r = r * OperatorExpr::p(n, f.index); break;
      case Factor::Kind::exchange: r = r * OperatorExpr::exchange(n, f.perm); break;
    }
  }
  return r;
}

/// Re-multiplies every canonical term from its factors.
inline OperatorExpr normal_order(const OperatorExpr& e) {
  const int n = e.particles();
  OperatorExpr out(n);
  for (const auto& [k, c] : e.terms()) {
    std::vector<Factor> word{Factor::c(c)};
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < k.alpha[i]; ++a) word.push_back(Factor::p(i));
    }
    word.push_back(Factor::m(k.perm));
    out = out + normal_order(n, word);
  }
  return out;
}

/// Replaces every trailing M_σ by ζ^parity(σ): e P_ζ = project(e, ζ) P_ζ.
inline OperatorExpr project(const OperatorExpr& e, int zeta) {
  if (zeta != 1 && zeta != -1) throw ModelError("zeta must be +1 or -1");
  OperatorExpr out(e.particles());
  for (const auto& [k, c] : e.terms()) {
    int sign = zeta == 1 ? 1 : k.perm.parity();
    out.add_term(OpKey{k.alpha, Perm::identity()}, GQ(sign) * c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// printing

inline std::string OperatorExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << "\n  + ";
    first = false;
    os << c.to_string();
    for (int i = 0; i < n_; ++i) {
      if (k.alpha[i] == 0) continue;
      os << " p" << i + 1;
      if (k.alpha[i] > 1) os << "^" << int(k.alpha[i]);
    }
    if (!k.perm.is_identity()) os << " " << k.perm.to_string(n_);
  }
  return os.str();
}

inline nlohmann::json OperatorExpr::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : terms_) {
    nlohmann::json num = nlohmann::json::array();
    for (const auto& [m, v] : c.numerator().terms()) {
      nlohmann::json mono = nlohmann::json::object();
      for (int var = 0; var < variable_count; ++var) {
        if (m[var]) mono[variable_name(var)] = int(m[var]);
      }
      num.push_back({{"monomial", mono}, {"re", v.re.get_str()}, {"im", v.im.get_str()}});
    }
    nlohmann::json den = nlohmann::json::array();
    for (int q = 0; q < pair_count; ++q) {
      if (c.denominator()[q] == 0) continue;
      auto [a, b] = pair_of(q);
      den.push_back({a + 1, b + 1, int(c.denominator()[q])});
    }
    nlohmann::json alpha = nlohmann::json::array(), perm = nlohmann::json::array();
    for (int i = 0; i < n_; ++i) {
      alpha.push_back(int(k.alpha[i]));
      perm.push_back(int(k.perm(i)) + 1);
    }
    terms.push_back({{"p", alpha}, {"perm", perm}, {"numerator", num}, {"denominator", den}});
  }
  return {{"particles", n_}, {"terms", terms}};
}

// ---------------------------------------------------------------------------
// prepotential families in the rational class

struct RationalFamily {
  std::string name;
  std::function<RationalCoeff(int, int)> v;  // V(x_a - x_b)

  RationalCoeff at(int a, int b) const { return v(a, b); }
  /// V'(x_a - x_b) = ∂V/∂x_a.
  RationalCoeff derivative_at(int a, int b) const { return v(a, b).derivative(a); }
};

inline RationalCoeff param(Param p) { return RationalCoeff::variable(var_of(p)); }

inline RationalFamily zero_family() {
  return {"zero", [](int, int) { return RationalCoeff(); }};
}

/// V = λ/x.
inline RationalFamily rational_family() {
  return {"rational", [](int a, int b) { return param(Param::lambda) * RationalCoeff::inverse_difference(a, b); }};
}

/// V = λ/x - βx.
inline RationalFamily rational_linear_family() {
  return {"rational-linear", [](int a, int b) {
            return param(Param::lambda) * RationalCoeff::inverse_difference(a, b) -
                   param(Param::beta) * RationalCoeff::difference(a, b);
          }};
}

inline RationalFamily family_by_name(const std::string& name) {
  if (name == "rational") return rational_family();
  if (name == "rational-linear") return rational_linear_family();
  if (name == "zero" || name == "free") return zero_family();
  throw ModelError("unknown symbolic family '" + name + "' (expected rational, rational-linear or zero)");
}

inline void require_odd(const RationalFamily& V, int n) {
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!(V.at(a, b) + V.at(b, a)).is_zero()) {
        throw ModelError("prepotential '" + V.name + "' is not odd: V(x) + V(-x) != 0");
      }
    }
  }
}

/// Linear superpotential W = √(m/2) ω c x; c = 1 is the harmonic trap.
/// Higher powers leave the rational class and are rejected.
struct TrapSpec {
  std::vector<mpq_class> w_coefficients{0, 1};  // W ∝ Σ c_k x^k

  static TrapSpec harmonic() { return {}; }

  void require_linear() const {
    for (std::size_t k = 0; k < w_coefficients.size(); ++k) {
      if (k != 1 && w_coefficients[k] != 0) {
        throw ModelError("nonlinear superpotential W requested: only W = sqrt(m/2)*omega*x stays rational");
      }
    }
    if (w_coefficients.size() < 2 || w_coefficients[1] == 0) throw ModelError("superpotential W vanishes");
  }
  mpq_class slope() const { return w_coefficients[1]; }
};

/// π_i = p_i + i Σ_{j≠i} V(x_ij) M_ij.
inline OperatorExpr build_pi(int i, const RationalFamily& V, int n) {
  require_odd(V, n);
  OperatorExpr out = OperatorExpr::p(n, i);
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    out = out + OperatorExpr::term(n, GQ::i_unit() * V.at(i, j), Exponents{}, Perm::transposition(i, j));
  }
  return out;
}

/// √(2m)·a_i = π_i - i m ω c x_i and √(2m)·a_i† = π_i + i m ω c x_i.
inline OperatorExpr build_a_scaled(int i, const RationalFamily& V, int n, const TrapSpec& trap, bool dag) {
  trap.require_linear();
  RationalCoeff mw = param(Param::mass) * param(Param::omega) * RationalCoeff::constant(GQ(trap.slope())) *
                     RationalCoeff::variable(i);
  GQ phase = dag ? GQ::i_unit() : -GQ::i_unit();
  return build_pi(i, V, n) + OperatorExpr::scalar(n, phase * mw);
}

/// 2m·h_i = (π_i + imωx_i)(π_i - imωx_i).
inline OperatorExpr build_h_scaled(int i, const RationalFamily& V, int n, const TrapSpec& trap,
                                   const Budget& budget = {}) {
  return multiply(build_a_scaled(i, V, n, trap, true), build_a_scaled(i, V, n, trap, false), budget);
}

/// I_n = Σ π_i^n, or with a trap (2m)^n Ĩ_n = Σ (2m h_i)^n.
inline OperatorExpr build_invariant(int order, const RationalFamily& V, int n,
                                    const std::optional<TrapSpec>& trap = std::nullopt,
                                    const Budget& budget = {}) {
  if (order < 1) throw ModelError("invariant order must be >= 1");
  OperatorExpr out(n);
  for (int i = 0; i < n; ++i) {
    OperatorExpr base = trap ? build_h_scaled(i, V, n, *trap, budget) : build_pi(i, V, n);
    out = out + power(base, order, budget);
  }
  return out;
}

/// V_ijk = V_ij V_jk + V_jk V_ki + V_ki V_ij.
inline RationalCoeff three_body_coeff(const RationalFamily& V, int i, int j, int k) {
  RationalCoeff a = V.at(i, j), b = V.at(j, k), c = V.at(k, i);
  RationalCoeff ab = a * b, bc = b * c, ca = c * a;
  return RationalCoeff::sum({&ab, &bc, &ca});
}

/// Σ_{k≠i,j} V_ijk (M_ijk - M_jik), assembled directly.
inline OperatorExpr pi_commutator_closed_form(int i, int j, const RationalFamily& V, int n) {
  OperatorExpr out(n);
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    RationalCoeff v = three_body_coeff(V, i, j, k);
    out = out + OperatorExpr::term(n, v, Exponents{}, three_cycle(i, j, k)) -
          OperatorExpr::term(n, v, Exponents{}, three_cycle(j, i, k));
  }
  return out;
}

/// 2m·H0 = Σ p_i² + 2 Σ_{i<j} (ζħ V'_ij + V_ij²) - 2 Σ_{i<j<k} V_ijk, exchange-free.
inline OperatorExpr homogeneous_hamiltonian_scaled(const RationalFamily& V, int n, int zeta) {
  OperatorExpr out(n);
  const RationalCoeff hbar = param(Param::hbar);
  for (int i = 0; i < n; ++i) out = out + OperatorExpr::p(n, i, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      RationalCoeff v = V.at(i, j);
      RationalCoeff pair = GQ(2 * zeta) * (hbar * V.derivative_at(i, j)) + GQ(2) * (v * v);
      out = out + OperatorExpr::scalar(n, pair);
      for (int k = j + 1; k < n; ++k) out = out + OperatorExpr::scalar(n, GQ(-2) * three_body_coeff(V, i, j, k));
    }
  }
  return out;
}

/// 2m·H for the harmonic trap: 2m·H0 + Σ (m²ω²c²x_i² - mħωc) - 2mζωc Σ_{i<j} V_ij x_ij.
inline OperatorExpr trapped_hamiltonian_scaled(const RationalFamily& V, int n, int zeta, const TrapSpec& trap) {
  trap.require_linear();
  const RationalCoeff m = param(Param::mass), w = param(Param::omega), hbar = param(Param::hbar);
  const GQ c(trap.slope());
  OperatorExpr out = homogeneous_hamiltonian_scaled(V, n, zeta);
  for (int i = 0; i < n; ++i) {
    RationalCoeff xi = RationalCoeff::variable(i);
    out = out + OperatorExpr::scalar(n, (c * c) * (m * m * w * w * xi * xi) - c * (m * hbar * w));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out = out + OperatorExpr::scalar(n, GQ(-2 * zeta) * c * (m * w * V.at(i, j) * RationalCoeff::difference(i, j)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// verification suites

struct CommutatorCheck {
  int n = 0, m = 0;
  std::size_t terms_a = 0, terms_b = 0, result_terms = 0;
  bool zero = false;
  double seconds = 0.0;
  std::string residual;  // printed when nonzero
};

struct IntegrabilityReport {
  std::string family;
  int particles = 0;
  bool trapped = false;
  std::vector<CommutatorCheck> checks;
  bool pass = false;
};

/// Exact [I_n, I_m] (or the trapped scaled [Ĩ_n, Ĩ_m]) for every requested pair.
inline IntegrabilityReport verify_integrability(const RationalFamily& V, int n,
                                                const std::vector<std::pair<int, int>>& orders,
                                                bool trapped, const Budget& budget = {}) {
  if (n > 4) throw ModelError("symbolic integrability checks are limited to N <= 4");
  IntegrabilityReport rep;
  rep.family = V.name;
  rep.particles = n;
  rep.trapped = trapped;
  std::optional<TrapSpec> trap;
  if (trapped) trap = TrapSpec::harmonic();
  std::map<int, OperatorExpr> cache;
  auto invariant = [&](int order) -> const OperatorExpr& {
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_invariant(order, V, n, trap, budget)).first;
    return it->second;
  };
  rep.pass = true;
  for (auto [a, b] : orders) {
    if (a + b > 6) throw ModelError("orders with n + m > 6 exceed the supported budget");
    detail::Clock clock;
    CommutatorCheck c;
    c.n = a;
    c.m = b;
    const auto& ia = invariant(a);
    const auto& ib = invariant(b);
    c.terms_a = ia.size();
    c.terms_b = ib.size();
    auto res = commutator(ia, ib, budget);
    c.result_terms = res.size();
    c.zero = res.is_zero();
    if (!c.zero) c.residual = res.to_string();
    c.seconds = clock.seconds();
    rep.pass = rep.pass && c.zero;
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

struct IdentityCheck {
  std::string name;
  bool holds = false;
};

struct EffectiveOneBodyReport {
  std::string family;
  int particles = 0;
  std::vector<IdentityCheck> checks;
  bool pass = false;
};

/// M_ij A_j = A_i M_ij and M_ij A_k = A_k M_ij for A ∈ {π, and with a trap a, a†, h}.
inline EffectiveOneBodyReport verify_effective_one_body(const RationalFamily& V, int n, bool trapped = false) {
  if (n < 3) throw ModelError("effective one-body checks need N >= 3");
  EffectiveOneBodyReport rep;
  rep.family = V.name;
  rep.particles = n;
  using Builder = std::function<OperatorExpr(int)>;
  std::vector<std::pair<std::string, Builder>> ops{{"pi", [&](int i) { return build_pi(i, V, n); }}};
  if (trapped) {
    auto trap = TrapSpec::harmonic();
    ops.push_back({"a", [=](int i) { return build_a_scaled(i, V, n, trap, false); }});
    ops.push_back({"a_dagger", [=](int i) { return build_a_scaled(i, V, n, trap, true); }});
    ops.push_back({"h", [=](int i) { return build_h_scaled(i, V, n, trap); }});
  }
  rep.pass = true;
  for (const auto& [label, build] : ops) {
    std::vector<OperatorExpr> a;
    for (int i = 0; i < n; ++i) a.push_back(build(i));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        auto M = OperatorExpr::exchange(n, Perm::transposition(i, j));
        for (int k = 0; k < n; ++k) {
          bool holds;
          std::ostringstream name;
          if (k == j) {
            holds = (M * a[j] - a[i] * M).is_zero();
            name << "M" << i + 1 << j + 1 << " " << label << j + 1 << " = " << label << i + 1 << " M" << i + 1 << j + 1;
          } else if (k != i) {
            holds = (M * a[k] - a[k] * M).is_zero();
            name << "M" << i + 1 << j + 1 << " " << label << k + 1 << " = " << label << k + 1 << " M" << i + 1 << j + 1;
          } else {
            continue;
          }
          rep.pass = rep.pass && holds;
          rep.checks.push_back({name.str(), holds});
        }
      }
    }
  }
  return rep;
}

/// Projection caveat: commuting first and substituting M → ζ afterwards
/// differs from substituting early.
struct CaveatResult {
  OperatorExpr correct;  // project([p_i, Σ_k V_jk M_jk], ζ)
  OperatorExpr naive;    // [p_i, project(Σ_k V_jk M_jk, ζ)]
  OperatorExpr expected_correct;
  OperatorExpr expected_naive;
};

inline CaveatResult projection_caveat(const RationalFamily& V, int n, int i, int j, int zeta) {
  OperatorExpr sum(n);
  for (int k = 0; k < n; ++k) {
    if (k == j) continue;
    sum = sum + OperatorExpr::term(n, V.at(j, k), Exponents{}, Perm::transposition(j, k));
  }
  auto pi = OperatorExpr::p(n, i);
  CaveatResult r{project(commutator(pi, sum), zeta), commutator(pi, project(sum, zeta)), OperatorExpr(n),
                 OperatorExpr(n)};
  // ζ iħ V'_ij - ζ V_ij (p_i - p_j) and the early-substitution value ζ iħ V'_ij
  const RationalCoeff hbar = param(Param::hbar);
  RationalCoeff dv = V.derivative_at(i, j);
  r.expected_naive = OperatorExpr::scalar(n, GQ(0, zeta) * (hbar * dv));
  r.expected_correct = r.expected_naive - GQ(zeta) * (OperatorExpr::scalar(n, V.at(i, j)) *
                                                      (OperatorExpr::p(n, i) - OperatorExpr::p(n, j)));
  return r;
}

}  // namespace jastrow::algebra
