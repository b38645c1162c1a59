#pragma once

// Exact coefficients for the exchange-operator engine: polynomials with
// Gaussian-rational coefficients in x_1..x_N and the parameters ħ, m, λ, ω,
// β, divided by products of differences (x_a - x_b), a < b.  Fractions are
// kept reduced (no difference factor of the denominator divides the
// numerator), which makes the representation unique.

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace jastrow::algebra {

inline constexpr int max_particles = 6;

enum class Param : int { hbar = max_particles, mass, lambda, omega, beta };
inline constexpr int variable_count = max_particles + 5;

inline int var_of(Param p) { return static_cast<int>(p); }

inline const char* variable_name(int v) {
  static const char* params[] = {"hbar", "m", "lambda", "omega", "beta"};
  static const char* xs[] = {"x1", "x2", "x3", "x4", "x5", "x6"};
  return v < max_particles ? xs[v] : params[v - max_particles];
}

/// Gaussian rational re + i·im.
struct GQ {
  mpq_class re, im;

  GQ() = default;
  GQ(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
  static GQ i_unit() { return GQ(0, 1); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GQ conj() const { return GQ(re, -im); }
  GQ operator-() const { return GQ(-re, -im); }
  GQ& operator+=(const GQ& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend GQ operator+(GQ a, const GQ& b) { return a += b; }
  friend GQ operator-(const GQ& a, const GQ& b) { return GQ(a.re - b.re, a.im - b.im); }
  friend GQ operator*(const GQ& a, const GQ& b) {
    return GQ(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend bool operator==(const GQ& a, const GQ& b) { return a.re == b.re && a.im == b.im; }
};

using Mono = std::array<std::uint8_t, variable_count>;

inline Mono unit_mono() { return Mono{}; }

inline Mono mono_of(int v, int power = 1) {
  Mono m{};
  m[v] = static_cast<std::uint8_t>(power);
  return m;
}

inline Mono operator+(const Mono& a, const Mono& b) {
  Mono r;
  for (int k = 0; k < variable_count; ++k) {
    int e = a[k] + b[k];
    if (e > 255) throw std::overflow_error("monomial exponent overflow");
    r[k] = static_cast<std::uint8_t>(e);
  }
  return r;
}

/// Sparse polynomial: terms sorted by monomial, no zero coefficients.
class Poly {
 public:
  using Term = std::pair<Mono, GQ>;

  Poly() = default;
  explicit Poly(GQ c) {
    if (!c.is_zero()) terms_.push_back({unit_mono(), std::move(c)});
  }
  static Poly constant(const mpq_class& c) { return Poly(GQ(c)); }
  static Poly variable(int v) {
    Poly p;
    p.terms_.push_back({mono_of(v), GQ(1)});
    return p;
  }
  static Poly from_terms(std::vector<Term> t) {
    Poly p;
    p.terms_ = std::move(t);
    p.normalize();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->first < i->first) {
        r.terms_.push_back(*j++);
      } else {
        GQ c = i->second + j->second;
        if (!c.is_zero()) r.terms_.push_back({i->first, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) out.push_back({ma + mb, ca * cb});
    }
    return from_terms(std::move(out));
  }
  friend Poly operator*(const GQ& c, const Poly& b) {
    if (c.is_zero()) return Poly();
    Poly r = b;
    for (auto& t : r.terms_) t.second = c * t.second;
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k) {
      if (a.terms_[k].first != b.terms_[k].first || !(a.terms_[k].second == b.terms_[k].second)) return false;
    }
    return true;
  }

  Poly conj() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.second = t.second.conj();
    return r;
  }

  Poly derivative(int v) const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
      if (m[v] == 0) continue;
      Mono d = m;
      d[v] -= 1;
      out.push_back({d, GQ(mpq_class(m[v])) * c});
    }
    return from_terms(std::move(out));
  }

  /// Relabels x_k → x_{perm[k]} (parameters untouched).
  Poly relabel(const std::array<std::uint8_t, max_particles>& perm) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
      Mono r = m;
      for (int k = 0; k < max_particles; ++k) r[k] = 0;
      for (int k = 0; k < max_particles; ++k) r[perm[k]] = m[k];
      out.push_back({r, c});
    }
    return from_terms(std::move(out));
  }

  /// Multiplies by (x_a - x_b).
  Poly times_difference(int a, int b) const {
    std::vector<Term> out;
    out.reserve(2 * terms_.size());
    for (const auto& [m, c] : terms_) {
      out.push_back({m + mono_of(a), c});
      out.push_back({m + mono_of(b), -c});
    }
    return from_terms(std::move(out));
  }

  /// True iff the polynomial vanishes identically on x_a = x_b.
  bool vanishes_on_diagonal(int a, int b) const {
    std::vector<Term> sub;
    sub.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
      Mono r = m;
      r[b] = static_cast<std::uint8_t>(r[b] + r[a]);
      r[a] = 0;
      sub.push_back({r, c});
    }
    return from_terms(std::move(sub)).is_zero();
  }

  /// Exact quotient by (x_a - x_b); requires vanishes_on_diagonal(a, b).
  Poly divide_difference(int a, int b) const {
    // x_a^k = (x_a - x_b) Σ_{j<k} x_a^{k-1-j} x_b^j + x_b^k; the remainders cancel.
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
      int k = m[a];
      for (int j = 0; j < k; ++j) {
        Mono r = m;
        r[a] = static_cast<std::uint8_t>(k - 1 - j);
        r[b] = static_cast<std::uint8_t>(m[b] + j);
        out.push_back({r, c});
      }
    }
    return from_terms(std::move(out));
  }

  std::string to_string() const;

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().first == t.first) {
        merged.back().second += t.second;
      } else {
        if (!merged.empty() && merged.back().second.is_zero()) merged.pop_back();
        merged.push_back(std::move(t));
      }
    }
    if (!merged.empty() && merged.back().second.is_zero()) merged.pop_back();
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
};

namespace detail {

inline std::string gq_to_string(const GQ& c) {
  std::ostringstream os;
  if (sgn(c.im) == 0) {
    os << c.re.get_str();
  } else if (sgn(c.re) == 0) {
    if (c.im == 1) os << "i";
    else if (c.im == -1) os << "-i";
    else os << c.im.get_str() << "i";
  } else {
    os << "(" << c.re.get_str() << (sgn(c.im) > 0 ? "+" : "-") << mpq_class(abs(c.im)).get_str() << "i)";
  }
  return os.str();
}

inline std::string mono_to_string(const Mono& m) {
  std::ostringstream os;
  bool first = true;
  // parameters first, then coordinates
  auto put = [&](int v) {
    if (m[v] == 0) return;
    if (!first) os << "*";
    first = false;
    os << variable_name(v);
    if (m[v] > 1) os << "^" << int(m[v]);
  };
  for (int v = max_particles; v < variable_count; ++v) put(v);
  for (int v = 0; v < max_particles; ++v) put(v);
  return os.str();
}

}  // namespace detail

inline std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string mono = detail::mono_to_string(m);
    std::string coef = detail::gq_to_string(c);
    bool negative = sgn(c.im) == 0 && sgn(c.re) < 0;
    if (!first) os << (negative ? " - " : " + ");
    else if (negative) os << "-";
    first = false;
    if (negative) coef = coef.substr(1);
    if (mono.empty()) {
      os << coef;
    } else if (coef == "1") {
      os << mono;
    } else {
      os << coef << "*" << mono;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

inline constexpr int pair_count = max_particles * (max_particles - 1) / 2;

inline int pair_index(int a, int b) {
  // a < b
  return a * (2 * max_particles - a - 1) / 2 + (b - a - 1);
}

inline std::pair<int, int> pair_of(int index) {
  for (int a = 0; a < max_particles; ++a) {
    for (int b = a + 1; b < max_particles; ++b) {
      if (pair_index(a, b) == index) return {a, b};
    }
  }
  throw std::out_of_range("pair index");
}

/// numerator / Π_{a<b} (x_a - x_b)^{den[a,b]}, reduced.
class RationalCoeff {
 public:
  using Den = std::array<std::uint8_t, pair_count>;

  RationalCoeff() = default;
  RationalCoeff(Poly num) : num_(std::move(num)) {}  // NOLINT: implicit from polynomial
  RationalCoeff(Poly num, Den den) : num_(std::move(num)), den_(den) { reduce(); }

  static RationalCoeff constant(const GQ& c) { return RationalCoeff(Poly(c)); }
  static RationalCoeff variable(int v) { return RationalCoeff(Poly::variable(v)); }
  /// 1/(x_a - x_b) for any a ≠ b.
  static RationalCoeff inverse_difference(int a, int b) {
    Den d{};
    if (a < b) {
      d[pair_index(a, b)] = 1;
      return RationalCoeff(Poly(GQ(1)), d);
    }
    d[pair_index(b, a)] = 1;
    return RationalCoeff(Poly(GQ(-1)), d);
  }
  /// x_a - x_b.
  static RationalCoeff difference(int a, int b) { return RationalCoeff(Poly::variable(a) - Poly::variable(b)); }

  const Poly& numerator() const { return num_; }
  const Den& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const {
    return std::all_of(den_.begin(), den_.end(), [](std::uint8_t e) { return e == 0; });
  }

  friend bool operator==(const RationalCoeff& a, const RationalCoeff& b) {
    return a.den_ == b.den_ && a.num_ == b.num_;
  }

  RationalCoeff operator-() const {
    RationalCoeff r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalCoeff operator*(const RationalCoeff& a, const RationalCoeff& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Den d;
    for (int k = 0; k < pair_count; ++k) d[k] = static_cast<std::uint8_t>(a.den_[k] + b.den_[k]);
    return RationalCoeff(a.num_ * b.num_, d);
  }

  friend RationalCoeff operator*(const GQ& c, const RationalCoeff& b) {
    RationalCoeff r = b;
    r.num_ = c * r.num_;
    if (r.num_.is_zero()) r.den_ = {};
    return r;
  }

  friend RationalCoeff operator+(const RationalCoeff& a, const RationalCoeff& b) { return sum({&a, &b}); }
  friend RationalCoeff operator-(const RationalCoeff& a, const RationalCoeff& b) { return a + (-b); }

  /// Sum over a common denominator, reduced once.
  static RationalCoeff sum(const std::vector<const RationalCoeff*>& items) {
    Den lcd{};
    for (const auto* c : items) {
      if (c->is_zero()) continue;
      for (int k = 0; k < pair_count; ++k) lcd[k] = std::max(lcd[k], c->den_[k]);
    }
    Poly total;
    for (const auto* c : items) {
      if (c->is_zero()) continue;
      Poly p = c->num_;
      for (int k = 0; k < pair_count; ++k) {
        auto [a, b] = pair_of(k);
        for (int e = c->den_[k]; e < lcd[k]; ++e) p = p.times_difference(a, b);
      }
      total = total + p;
    }
    return RationalCoeff(std::move(total), lcd);
  }

  RationalCoeff conj() const {
    RationalCoeff r = *this;
    r.num_ = r.num_.conj();
    return r;
  }

  /// ∂/∂x_i.
  RationalCoeff derivative(int i) const {
    if (is_zero()) return {};
    // d(P/D) = (P' D_i - P Σ e_ab s_ab D_i/d_ab) / (D D_i), D_i = Π_{pairs ∋ i} d_ab
    Den extra{};
    std::vector<int> involved;
    for (int k = 0; k < pair_count; ++k) {
      if (den_[k] == 0) continue;
      auto [a, b] = pair_of(k);
      if (a == i || b == i) involved.push_back(k);
    }
    Poly top = num_.derivative(i);
    for (int k : involved) {
      auto [a, b] = pair_of(k);
      top = top.times_difference(a, b);
      extra[k] = 1;
    }
    for (int k : involved) {
      auto [a, b] = pair_of(k);
      GQ factor(mpq_class(-static_cast<int>(den_[k]) * (a == i ? 1 : -1)));
      Poly term = factor * num_;
      for (int other : involved) {
        if (other == k) continue;
        auto [c, d] = pair_of(other);
        term = term.times_difference(c, d);
      }
      top = top + term;
    }
    Den d = den_;
    for (int k = 0; k < pair_count; ++k) d[k] = static_cast<std::uint8_t>(d[k] + extra[k]);
    return RationalCoeff(std::move(top), d);
  }

  /// c(x) ↦ c(x_{perm(1)}, ..., x_{perm(N)}), i.e. x_k → x_{perm[k]}.
  RationalCoeff relabel(const std::array<std::uint8_t, max_particles>& perm) const {
    Poly num = num_.relabel(perm);
    Den d{};
    bool negate = false;
    for (int k = 0; k < pair_count; ++k) {
      if (den_[k] == 0) continue;
      auto [a, b] = pair_of(k);
      int pa = perm[a], pb = perm[b];
      if (pa < pb) {
        d[pair_index(pa, pb)] = static_cast<std::uint8_t>(d[pair_index(pa, pb)] + den_[k]);
      } else {
        d[pair_index(pb, pa)] = static_cast<std::uint8_t>(d[pair_index(pb, pa)] + den_[k]);
        if (den_[k] % 2) negate = !negate;
      }
    }
    if (negate) num = -num;
    RationalCoeff r;
    r.num_ = std::move(num);
    r.den_ = d;
    return r;  // relabeling preserves reducedness
  }

  std::string to_string() const {
    std::string top = num_.to_string();
    std::ostringstream den;
    bool any = false;
    for (int k = 0; k < pair_count; ++k) {
      if (den_[k] == 0) continue;
      auto [a, b] = pair_of(k);
      if (any) den << "*";
      any = true;
      den << "(x" << a + 1 << "-x" << b + 1 << ")";
      if (den_[k] > 1) den << "^" << int(den_[k]);
    }
    if (!any) return num_.size() > 1 ? "(" + top + ")" : top;
    return "(" + top + ")/(" + den.str() + ")";
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = {};
      return;
    }
    for (int k = 0; k < pair_count; ++k) {
      if (den_[k] == 0) continue;
      auto [a, b] = pair_of(k);
      while (den_[k] > 0 && num_.vanishes_on_diagonal(a, b)) {
        num_ = num_.divide_difference(a, b);
        --den_[k];
      }
    }
  }

  Poly num_;
  Den den_{};
};

}  // namespace jastrow::algebra
