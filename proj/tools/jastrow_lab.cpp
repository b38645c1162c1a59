// jastrow-lab: model catalog, assembly, continuum checks, exact operator
// algebra and lattice diagnostics behind one entry point.
//
// exit codes: 0 pass, 1 check failed (or runtime failure), 2 invalid input,
// 3 budget exceeded.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jastrow/algebra/suites.hpp"
#include "jastrow/builder.hpp"
#include "jastrow/continuum.hpp"
#include "jastrow/lattice.hpp"
#include "jastrow/report.hpp"
#include "jastrow/zoo.hpp"

using namespace jastrow;
using report::json;

namespace {

enum Exit { exit_pass = 0, exit_fail = 1, exit_invalid = 2, exit_budget = 3 };

struct Outcome {
  json result;
  bool pass = true;
  std::string text;
  std::optional<std::string> csv;
};

struct Options {
  // global
  std::string config, format = "text", out, csv_path;
  int threads = 0;
  double hbar = 1.0, mass = 1.0;
  // model selection
  std::string model, params, drop_term, geometry;
  int n = 0;
  int zeta = 1;
  // continuum
  std::size_t samples = 1000, configs = 10;
  std::uint64_t seed = 1;
  double min_sep = 0.0;
  std::string n_list = "2,3,4,5,6";
  // assembly
  std::string pair = "power", trap = "none";
  double omega = 1.0;
  // algebra
  std::string family = "rational";
  std::vector<std::string> orders;
  bool trapped = false;
  std::size_t max_terms = 2'000'000;
  double max_seconds = 600.0;
  int i = 1, j = 2;
  // lattice
  std::vector<int> sites;
  int order = 2;
  std::string boundary = "box", prepotential = "tanh", op = "exchange", matrix_path;
  double half_width = 6.0, length = 2.0 * std::numbers::pi;
  std::size_t max_dim = 250000, dense_limit = 5000;
  double min_overlap = 0.999, max_rel_error = -1.0, order_tolerance = 0.4, tolerance = 1e-8;
  double beta = 0.1, lambda = 0.7;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ModelError("cannot parse " + what + " value '" + s + "'");
  return v;
}

Params parse_params(const std::string& text) {
  Params p;
  for (const auto& kv : split(text, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ModelError("parameter '" + kv + "' is not key=value");
    std::string key = trim(kv.substr(0, eq));
    if (p.count(key)) throw ModelError("parameter '" + key + "' given twice");
    p[key] = parse_double(trim(kv.substr(eq + 1)), "parameter '" + key + "'");
  }
  return p;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    double v = parse_double(item, what);
    if (v != std::floor(v)) throw ModelError(what + " entries must be integers");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ModelError(what + " is empty");
  return out;
}

PhysicalConstants constants(const Options& o) {
  PhysicalConstants c{o.hbar, o.mass};
  c.validate();
  return c;
}

bool has_term(const ModelSpec& m, Term t) {
  switch (t) {
    case Term::external: return static_cast<bool>(m.terms.external);
    case Term::pair: return static_cast<bool>(m.terms.pair);
    case Term::contact: return m.terms.contact.kind != CuspKind::none;
    case Term::three_body: return static_cast<bool>(m.terms.three_body);
    case Term::cross: return static_cast<bool>(m.terms.cross);
  }
  return false;
}

ModelSpec build_model(const Options& o, int default_n) {
  if (o.model.empty()) throw ModelError("--model is required");
  ModelSpec m = zoo_model(o.model, parse_params(o.params), o.n > 0 ? o.n : default_n, constants(o));
  if (!o.drop_term.empty()) {
    Term t = parse_term(o.drop_term);
    if (!has_term(m, t)) throw ModelError("model '" + m.name + "' has no " + o.drop_term + " term to drop");
    m = m.without(t);
  }
  return m;
}

unsigned thread_count(const Options& o) {
  if (o.threads < 0) throw ModelError("--threads must be >= 0");
  return o.threads == 0 ? default_threads() : static_cast<unsigned>(o.threads);
}

std::string pass_word(bool pass) { return pass ? "PASS" : "FAIL"; }

std::string fmt(double v, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// zoo and assemble

Outcome cmd_zoo_list(const Options& o) {
  std::optional<Geometry::Kind> kind;
  if (!o.geometry.empty()) {
    if (o.geometry == "ring") kind = Geometry::Kind::ring;
    else if (o.geometry == "line") kind = Geometry::Kind::line;
    else throw ModelError("--geometry must be line or ring");
  }
  Outcome out;
  out.result = json::array();
  std::ostringstream text, csv;
  csv << "name,geometry,params,e0\n";
  for (const auto& e : list_zoo(kind)) {
    out.result.push_back(report::entry_json(e));
    std::string ps;
    for (const auto& p : e.params) ps += (ps.empty() ? "" : " ") + p.name + "=" + fmt(p.default_value, 6);
    text << std::left << std::setw(26) << e.name << std::setw(6) << (e.geometry == Geometry::Kind::ring ? "ring" : "line")
         << " " << std::setw(30) << ps << " E0: " << e.e0_text << "\n";
    csv << e.name << ',' << (e.geometry == Geometry::Kind::ring ? "ring" : "line") << ",\"" << ps << "\",\""
        << e.e0_text << "\"\n";
  }
  out.text = text.str();
  out.csv = csv.str();
  return out;
}

Outcome cmd_zoo_show(const Options& o) {
  ModelSpec m = build_model(o, 3);
  const ZooEntry& e = zoo_entry(m.name);
  Outcome out;
  out.result = report::model_json(m);
  std::ostringstream text;
  text << m.name << "  (" << m.geometry.to_string() << ", N=" << m.n_particles << ")\n  " << e.summary << "\n  params:";
  for (const auto& [k, v] : m.params) text << " " << k << "=" << fmt(v);
  text << "\n  E0 = " << e.e0_text;
  if (auto e0 = m.e0()) text << " = " << fmt(*e0);
  text << "\n";
  for (const auto& c : m.citations) text << "  [" << c << "]\n";
  out.text = text.str();
  return out;
}

PairFamily pair_by_name(const std::string& name, Params p) {
  auto take = [&](const std::string& key, double def) {
    auto it = p.find(key);
    double v = it == p.end() ? def : it->second;
    if (it != p.end()) p.erase(it);
    return v;
  };
  PairFamily f;
  if (name == "constant") f = constant_pair();
  else if (name == "power") f = power_pair(take("lambda", 2.0));
  else if (name == "sine") {
    double lambda = take("lambda", 2.0);
    f = sine_pair(lambda, take("L", 2.0 * std::numbers::pi));
  } else if (name == "exp-abs") f = exp_abs_pair(take("g", 1.0));
  else if (name == "quadratic") {
    double g = take("g", 1.0);
    f = quadratic_pair(g, take("beta", 0.5));
  } else if (name == "sinh") {
    double lambda = take("lambda", 2.0), a = take("a", 1.0);
    f = sinh_pair(lambda, a, take("b", 1.0));
  } else if (name == "toda") {
    double g = take("g", 1.0);
    f = toda_pair(g, take("ell", 1.0));
  } else {
    throw ModelError("unknown pair family '" + name + "' (constant, power, sine, exp-abs, quadratic, sinh, toda)");
  }
  p.erase("omega");
  if (!p.empty()) throw ModelError("pair family '" + name + "' has no parameter '" + p.begin()->first + "'");
  return f;
}

Outcome cmd_assemble(const Options& o) {
  const PhysicalConstants c = constants(o);
  const Params p = parse_params(o.params);
  PairFamily pair = pair_by_name(o.pair, p);
  Geometry g = pair.period ? Geometry::ring(*pair.period) : Geometry::line();
  std::optional<OneBodyProfile> one_body;
  if (o.trap == "harmonic") {
    one_body = harmonic_profile(o.omega, c);
  } else if (o.trap == "trig") {
    if (!pair.period) throw ModelError("the trigonometric trap needs a periodic pair family");
    one_body = trig_trap_profile(o.omega, *pair.period, c);
  } else if (o.trap != "none") {
    throw ModelError("--trap must be none, harmonic or trig");
  }
  if (o.zeta != 1 && o.zeta != -1) throw ModelError("--zeta must be +1 or -1");
  const int n = o.n > 0 ? o.n : 3;
  ModelSpec m = assemble(pair, one_body, o.zeta, n, c, g);
  Outcome out;
  out.text = describe_hamiltonian(pair, one_body, o.zeta, n, c);
  out.result = report::model_json(m);
  out.result["hamiltonian"] = out.text;
  return out;
}

// ---------------------------------------------------------------------------
// verify

Outcome cmd_local_energy(const Options& o) {
  ModelSpec m = build_model(o, 3);
  VerifyOptions opt;
  opt.samples = o.samples;
  opt.seed = o.seed;
  if (o.min_sep > 0) opt.min_sep = o.min_sep;
  opt.threads = thread_count(o);
  if (o.samples < 1) throw ModelError("--samples must be >= 1");
  auto r = verify_eigenstate(m, opt);
  Outcome out;
  out.pass = r.pass;
  out.result = report::to_json(r);
  out.result["model_spec"] = report::model_json(m);
  std::ostringstream text;
  text << r.model << "  N=" << r.n << "  samples=" << r.samples << "  seed=" << r.seed << "\n"
       << "  mean E_loc   " << fmt(r.mean, 15) << "\n"
       << "  variance     " << fmt(r.variance, 6) << "  (tol " << fmt(r.tol_var, 3) << ")\n"
       << "  max |dev|    " << fmt(r.max_abs_dev, 6) << "\n";
  if (r.e0_expected) text << "  E0 formula   " << fmt(*r.e0_expected, 15) << "\n";
  text << pass_word(r.pass) << "\n";
  out.text = text.str();
  auto xs = sample_configs(m, o.samples, o.seed, opt.min_sep.value_or(default_min_separation(m)));
  out.csv = report::local_energy_csv(xs, r.values);
  return out;
}

Outcome cmd_cusp(const Options& o) {
  ModelSpec m = build_model(o, 2);
  auto r = cusp_check(m);
  Outcome out;
  out.pass = r.pass;
  out.result = report::to_json(r);
  out.text = r.model + "  " + report::kind_name(r.kind) + " jump " + fmt(r.jump, 15) + "  required " +
             fmt(r.required, 15) + "  error " + fmt(r.error, 3) + "\n" + pass_word(r.pass) + "\n";
  return out;
}

Outcome cmd_oracle(const Options& o) {
  ModelSpec m = build_model(o, 4);
  auto r = oracle_check(m, o.configs, o.seed, {1e-2, 5e-3, 2.5e-3}, thread_count(o));
  Outcome out;
  out.pass = r.pass;
  out.result = report::to_json(r);
  std::ostringstream text;
  text << r.model << "  N=" << r.n << "  configs=" << r.orders.size() << "  exact=" << r.exact << "\n"
       << "  fitted order " << fmt(r.min_order, 4) << " .. " << fmt(r.max_order, 4) << "  (target "
       << oracle_target_order << " +/- " << oracle_order_tolerance << ")\n"
       << "  max error " << fmt(r.max_error, 3) << "\n"
       << pass_word(r.pass) << "\n";
  out.text = text.str();
  return out;
}

Outcome cmd_table(const Options& o) {
  const auto ns = parse_int_list(o.n_list, "--n-list");
  const PhysicalConstants c = constants(o);
  VerifyOptions opt;
  opt.samples = o.samples;
  opt.seed = o.seed;
  opt.threads = thread_count(o);
  Outcome out;
  out.result = json::array();
  std::ostringstream text, csv;
  csv << "model,N,mean,e0,variance,pass\n";
  csv << std::setprecision(17);
  for (const auto& e : list_zoo()) {
    for (int n : ns) {
      ModelSpec m = zoo_model(e.name, {}, n, c);
      if (!m.e0_known()) continue;
      auto r = verify_eigenstate(m, opt);
      out.pass = out.pass && r.pass;
      out.result.push_back(report::to_json(r));
      text << std::left << std::setw(26) << e.name << " N=" << n << "  mean " << std::setw(20) << fmt(r.mean, 15)
           << " E0 " << std::setw(20) << fmt(*r.e0_expected, 15) << " var " << std::setw(10) << fmt(r.variance, 3)
           << " " << pass_word(r.pass) << "\n";
      csv << e.name << ',' << n << ',' << r.mean << ',' << *r.e0_expected << ',' << r.variance << ','
          << (r.pass ? "true" : "false") << '\n';
    }
  }
  text << pass_word(out.pass) << "\n";
  out.text = text.str();
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------
// algebra

algebra::Budget budget_of(const Options& o) { return {o.max_terms, o.max_seconds}; }

int algebra_n(const Options& o) {
  int n = o.n > 0 ? o.n : 3;
  if (n > 4) throw ModelError("symbolic checks are limited to N <= 4");
  if (n < 2) throw ModelError("symbolic checks need N >= 2");
  return n;
}

Outcome cmd_commute(const Options& o) {
  auto V = algebra::family_by_name(o.family);
  std::vector<std::pair<int, int>> orders;
  for (const auto& s : o.orders.empty() ? std::vector<std::string>{"2,3"} : o.orders) {
    auto v = parse_int_list(s, "--orders");
    if (v.size() != 2 || v[0] < 1 || v[1] < 1) throw ModelError("--orders takes two positive integers a,b");
    orders.push_back({v[0], v[1]});
  }
  auto r = algebra::verify_integrability(V, algebra_n(o), orders, o.trapped, budget_of(o));
  Outcome out;
  out.pass = r.pass;
  out.result = report::to_json(r);
  std::ostringstream text;
  const std::string tag = o.trapped ? "I~" : "I";
  for (const auto& c : r.checks) {
    text << "[" << tag << c.n << ", " << tag << c.m << "]  family " << r.family << "  N=" << r.particles << "  terms "
         << c.terms_a << " x " << c.terms_b << "  ->  ";
    if (c.zero) text << "0 (exact)\n";
    else text << c.result_terms << " terms:\n" << c.residual << "\n";
  }
  text << pass_word(r.pass) << "\n";
  out.text = text.str();
  return out;
}

json equality_json(const algebra::EqualityCheck& c) {
  return {{"name", c.name}, {"lhs", c.lhs.to_json()}, {"rhs", c.rhs.to_json()}, {"lhs_text", c.lhs.to_string()},
          {"equal", c.equal}};
}

Outcome cmd_project(const Options& o, bool trapped) {
  if (o.zeta != 1 && o.zeta != -1) throw ModelError("--zeta must be +1 or -1");
  auto V = algebra::family_by_name(o.family);
  auto r = algebra::verify_projection(V, algebra_n(o), o.zeta, trapped, budget_of(o));
  Outcome out;
  out.pass = r.pass && (trapped || r.three_body_zero);
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(equality_json(c));
  out.result = {{"family", r.family}, {"N", r.particles},           {"zeta", r.zeta}, {"trapped", r.trapped},
                {"three_body_zero", r.three_body_zero}, {"checks", checks}, {"pass", out.pass}};
  const auto rendering = algebra::hamiltonian_rendering(V, r.particles, r.zeta, trapped);
  out.result["target_terms"] = rendering;
  std::ostringstream text;
  text << (trapped ? "2m H" : "2m H0") << " term by term (family " << r.family << ", N=" << r.particles
       << ", zeta=" << r.zeta << "):\n";
  for (const auto& l : rendering) text << "  " << l << "\n";
  for (const auto& c : r.checks) {
    text << c.name << ", normal-ordered:\n" << c.lhs.to_string() << "\n  equals the sum above: " << (c.equal ? "yes" : "no")
         << "\n";
  }
  text << "three-body coefficient V_ijk identically zero: " << (r.three_body_zero ? "yes" : "no") << "\n"
       << pass_word(out.pass) << "\n";
  out.text = text.str();
  return out;
}

Outcome cmd_pi_commutator(const Options& o) {
  auto V = algebra::family_by_name(o.family);
  auto checks = algebra::verify_pi_closed_form(V, algebra_n(o), budget_of(o));
  Outcome out;
  json arr = json::array();
  std::ostringstream text;
  for (const auto& c : checks) {
    out.pass = out.pass && c.equal;
    arr.push_back(equality_json(c));
    text << c.name << " = " << c.lhs.to_string() << "\n  closed form: " << (c.equal ? "equal" : "DIFFERENT") << "\n";
  }
  out.result = {{"family", V.name}, {"N", algebra_n(o)}, {"checks", arr}, {"pass", out.pass}};
  text << pass_word(out.pass) << "\n";
  out.text = text.str();
  return out;
}

Outcome cmd_one_body(const Options& o) {
  auto V = algebra::family_by_name(o.family);
  auto r = algebra::verify_effective_one_body(V, o.n > 0 ? algebra_n(o) : 3, o.trapped);
  Outcome out;
  out.pass = r.pass;
  out.result = report::to_json(r);
  std::ostringstream text;
  for (const auto& c : r.checks) text << (c.holds ? "  ok   " : "  FAIL ") << c.name << "\n";
  text << pass_word(r.pass) << "\n";
  out.text = text.str();
  return out;
}

Outcome cmd_caveat(const Options& o) {
  auto V = algebra::family_by_name(o.family);
  const int n = algebra_n(o);
  if (o.i < 1 || o.j < 1 || o.i > n || o.j > n || o.i == o.j) throw ModelError("--i and --j must be distinct in 1..N");
  if (o.zeta != 1 && o.zeta != -1) throw ModelError("--zeta must be +1 or -1");
  auto r = algebra::projection_caveat(V, n, o.i - 1, o.j - 1, o.zeta);
  const bool ok_c = r.correct == r.expected_correct, ok_n = r.naive == r.expected_naive;
  const bool differ = !(r.correct == r.naive);
  Outcome out;
  out.pass = ok_c && ok_n && (differ || V.name == "zero");
  out.result = {{"family", V.name},
                {"N", n},
                {"i", o.i},
                {"j", o.j},
                {"zeta", o.zeta},
                {"project_then_commute", r.correct.to_json()},
                {"substitute_early", r.naive.to_json()},
                {"matches_expected", ok_c && ok_n},
                {"differ", differ},
                {"pass", out.pass}};
  std::ostringstream text;
  text << "project([p_i, sum V M], zeta) = " << r.correct.to_string() << "\n"
       << "[p_i, project(sum V M, zeta)] = " << r.naive.to_string() << "\n"
       << "match expected forms: " << (ok_c && ok_n ? "yes" : "no") << ", differ: " << (differ ? "yes" : "no") << "\n"
       << pass_word(out.pass) << "\n";
  out.text = text.str();
  return out;
}

// ---------------------------------------------------------------------------
// lattice

lattice::LatticeBudget lattice_budget(const Options& o) {
  lattice::LatticeBudget b;
  b.max_dim = o.max_dim;
  b.dense_limit = o.dense_limit;
  return b;
}

void require_zeta(int z) {
  if (z != 1 && z != -1) throw ModelError("--zeta must be +1 or -1");
}

lattice::Grid grid_of(const Options& o, int sites, std::optional<double> ring_length = std::nullopt) {
  if (o.boundary == "box") return lattice::Grid::box(sites, o.half_width);
  if (o.boundary == "periodic") return lattice::Grid::periodic(sites, ring_length.value_or(o.length));
  throw ModelError("--boundary must be box or periodic");
}

int single_sites(const Options& o, int def) {
  if (o.sites.empty()) return def;
  if (o.sites.size() != 1) throw ModelError("--sites takes one value for this command");
  return o.sites.front();
}

Outcome cmd_axioms(const Options& o) {
  require_zeta(o.zeta);
  const int n = o.n > 0 ? o.n : 3;
  auto r = lattice::build_rep(grid_of(o, single_sites(o, 6)), n, o.zeta, o.order, constants(o), lattice_budget(o));
  auto ax = lattice::check_projector_axioms(r);
  auto lemma = lattice::lemma_suite(r);
  bool lemma_ok = true;
  json lj = json::array();
  for (const auto& c : lemma) {
    lemma_ok = lemma_ok && c.pass;
    lj.push_back(report::to_json(c));
  }
  Outcome out;
  out.pass = ax.pass && lemma_ok;
  out.result = {{"axioms", report::to_json(ax)}, {"lemma", lj}, {"pass", out.pass}};
  std::ostringstream text;
  text << "lattice L_s=" << ax.sites << " N=" << ax.n << " zeta=" << ax.zeta << " " << ax.boundary << "  dim "
       << ax.dim << "  tr P = " << fmt(ax.projector_trace) << " (rank " << ax.expected_rank << ")\n";
  auto line = [&](const lattice::Check& c) {
    text << (c.pass ? "  ok   " : "  FAIL ") << std::left << std::setw(44) << c.name << " " << fmt(c.residual, 3)
         << (c.expect_nonzero ? "  (must be nonzero)" : "") << "\n";
  };
  for (const auto& c : ax.checks) line(c);
  for (const auto& c : lemma) line(c);
  text << pass_word(out.pass) << "\n";
  out.text = text.str();
  return out;
}

std::string ground_state_line(const lattice::GroundStateReport& r) {
  std::ostringstream os;
  os << "  L_s=" << r.sites << " h=" << fmt(r.spacing, 6) << " block " << r.block_dim << " (" << r.method
     << ")  E=" << fmt(r.e_num, 12);
  if (r.e0) os << "  E0=" << fmt(*r.e0, 12) << "  rel " << fmt(*r.rel_error, 3);
  os << "  overlap " << fmt(r.overlap, 8) << "\n";
  return os.str();
}

Outcome cmd_overlap(const Options& o) {
  require_zeta(o.zeta);
  ModelSpec m = build_model(o, 2);
  std::optional<double> ring;
  if (m.geometry.kind == Geometry::Kind::ring) ring = m.geometry.length;
  Options go = o;
  if (ring) go.boundary = "periodic";
  auto r = lattice::ground_state_overlap(m, grid_of(go, single_sites(o, 48), ring), o.zeta, o.order,
                                         lattice_budget(o));
  Outcome out;
  out.pass = r.overlap >= o.min_overlap && (o.max_rel_error < 0 || (r.rel_error && *r.rel_error <= o.max_rel_error));
  out.result = report::to_json(r);
  out.result["min_overlap"] = o.min_overlap;
  out.result["max_rel_error"] = o.max_rel_error < 0 ? json(nullptr) : json(o.max_rel_error);
  out.result["pass"] = out.pass;
  out.text = r.model + "  N=" + std::to_string(r.n) + "\n" + ground_state_line(r) + pass_word(out.pass) + "\n";
  return out;
}

Outcome cmd_convergence(const Options& o) {
  require_zeta(o.zeta);
  ModelSpec m = build_model(o, 2);
  auto sites = o.sites.empty() ? std::vector<int>{24, 32, 48} : o.sites;
  auto s = lattice::eigenvalue_convergence(m, o.half_width, sites, o.zeta, o.order, lattice_budget(o));
  Outcome out;
  out.pass = s.order && std::abs(*s.order - o.order) <= o.order_tolerance && s.runs.back().overlap >= o.min_overlap;
  out.result = report::to_json(s);
  out.result["expected_order"] = o.order;
  out.result["order_tolerance"] = o.order_tolerance;
  out.result["min_overlap"] = o.min_overlap;
  out.result["pass"] = out.pass;
  std::ostringstream text;
  text << m.name << "  N=" << m.n_particles << "  stencil order " << o.order << "\n";
  for (const auto& r : s.runs) text << ground_state_line(r);
  text << "  fitted eigenvalue order " << (s.order ? fmt(*s.order, 4) : std::string("n/a")) << "\n"
       << pass_word(out.pass) << "\n";
  out.text = text.str();
  return out;
}

Outcome cmd_lattice_commutator(const Options& o) {
  require_zeta(o.zeta);
  RealFn v;
  if (o.prepotential == "tanh") v = lattice::smooth_prepotential(o.lambda);
  else if (o.prepotential == "linear") v = [b = o.beta](double r) { return -b * r; };
  else if (o.prepotential == "zero") v = [](double) { return 0.0; };
  else throw ModelError("--prepotential must be tanh, linear or zero");
  auto sites = o.sites.empty() ? std::vector<int>{12, 16, 24} : o.sites;
  const int n = o.n > 0 ? o.n : 2;
  auto c = lattice::trapped_commutator_convergence(n, o.zeta, sites, o.half_width, o.order, v, o.omega,
                                                   lattice_budget(o));
  Outcome out;
  out.pass = c.residual.back() <= o.tolerance;
  out.result = report::to_json(c);
  out.result["prepotential"] = o.prepotential;
  out.result["tolerance"] = o.tolerance;
  out.result["pass"] = out.pass;
  std::ostringstream text;
  text << "||[P I~1 P, P I~2 P] phi|| / ||phi||  N=" << n << " zeta=" << o.zeta << " prepotential " << o.prepotential
       << "\n";
  for (std::size_t k = 0; k < c.sites.size(); ++k)
    text << "  L_s=" << c.sites[k] << " h=" << fmt(c.spacing[k], 6) << "  residual " << fmt(c.residual[k], 6) << "\n";
  text << pass_word(out.pass) << "\n";
  out.text = text.str();
  return out;
}

Outcome cmd_export(const Options& o) {
  require_zeta(o.zeta);
  const int n = o.n > 0 ? o.n : 2;
  const int sites = single_sites(o, 6);
  std::ostringstream coo;
  std::size_t rows = 0, nnz = 0;
  auto emit = [&](const auto& a) {
    lattice::write_coo(coo, a);
    rows = static_cast<std::size_t>(a.rows());
    nnz = static_cast<std::size_t>(a.nonZeros());
  };
  if (o.op == "hamiltonian") {
    ModelSpec m = build_model(o, n);
    std::optional<double> ring;
    if (m.geometry.kind == Geometry::Kind::ring) ring = m.geometry.length;
    Options go = o;
    if (ring) go.boundary = "periodic";
    emit(lattice::discretize_hamiltonian(m, grid_of(go, sites, ring), o.order, lattice_budget(o)));
  } else {
    auto r = lattice::build_rep(grid_of(o, sites), n, o.zeta, o.order, constants(o), lattice_budget(o));
    auto index = [&](int k) {
      if (k < 1 || k > n) throw ModelError("particle index out of range 1..N");
      return k - 1;
    };
    if (o.op == "exchange") {
      if (o.i == o.j) throw ModelError("--i and --j must differ");
      emit(r.exchange(index(o.i), index(o.j)));
    } else if (o.op == "position") emit(r.x[index(o.i)]);
    else if (o.op == "momentum") emit(r.p[index(o.i)]);
    else if (o.op == "projector") emit(r.projector);
    else throw ModelError("--operator must be exchange, position, momentum, projector or hamiltonian");
  }
  Outcome out;
  out.result = {{"operator", o.op}, {"rows", rows}, {"nonzeros", nnz}, {"file", o.matrix_path}};
  if (o.matrix_path.empty()) {
    out.text = coo.str();
  } else {
    report::write_atomic(o.matrix_path, coo.str());
    out.text = o.op + ": " + std::to_string(rows) + " x " + std::to_string(rows) + ", " + std::to_string(nnz) +
               " nonzeros written to " + o.matrix_path + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// config file: key = value lines applied to options not given on the command line

std::vector<CLI::App*> active_chain(CLI::App& app) {
  std::vector<CLI::App*> chain{&app};
  for (CLI::App* cur = &app;;) {
    auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    chain.push_back(cur);
  }
  return chain;
}

void apply_config(const std::string& path, CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot read config file '" + path + "'");
  auto chain = active_chain(app);
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ModelError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw ModelError(path + ":" + std::to_string(lineno) + ": config files cannot nest");
    if (!seen.insert(key).second) throw ModelError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    CLI::Option* opt = nullptr;
    for (auto it = chain.rbegin(); it != chain.rend() && !opt; ++it) opt = (*it)->get_option_no_throw("--" + key);
    if (!opt) throw ModelError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "' for this command");
    if (opt->count() > 0) continue;  // the command line wins
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jastrow-lab: exact eigenstates, exchange-operator algebra and lattice checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--config", o.config, "key = value file; command-line flags win")->check(CLI::ExistingFile);
  app.add_option("--threads", o.threads, "worker threads (0: JASTROW_LAB_THREADS or all cores)");
  app.add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", o.out, "write the JSON report here (atomically)");
  app.add_option("--csv", o.csv_path, "write the CSV table here (atomically)");
  app.add_option("--hbar", o.hbar, "reduced Planck constant");
  app.add_option("--mass", o.mass, "particle mass");

  auto model_opts = [&](CLI::App* c, bool with_n = true) {
    c->add_option("--model", o.model, "zoo model name");
    c->add_option("--params", o.params, "k=v,k=v");
    if (with_n) c->add_option("--n", o.n, "particle number");
  };

  std::map<CLI::App*, std::function<Outcome()>> actions;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<Outcome()> fn) {
    CLI::App* c = parent->add_subcommand(name, help);
    actions[c] = std::move(fn);
    return c;
  };

  CLI::App* zoo = app.add_subcommand("zoo", "model catalog");
  zoo->require_subcommand(1);
  leaf(zoo, "list", "list registered models", [&] { return cmd_zoo_list(o); })
      ->add_option("--geometry", o.geometry, "line or ring");
  model_opts(leaf(zoo, "show", "show one model with resolved parameters", [&] { return cmd_zoo_show(o); }));

  CLI::App* asm_cmd = leaf(&app, "assemble", "parent Hamiltonian of a Jastrow product", [&] { return cmd_assemble(o); });
  asm_cmd->add_option("--pair", o.pair, "constant, power, sine, exp-abs, quadratic, sinh, toda");
  asm_cmd->add_option("--params", o.params, "pair parameters k=v,...");
  asm_cmd->add_option("--trap", o.trap, "none, harmonic or trig");
  asm_cmd->add_option("--omega", o.omega, "trap frequency");
  asm_cmd->add_option("--n", o.n, "particle number");
  asm_cmd->add_option("--zeta", o.zeta, "+1 bosons, -1 fermions");

  CLI::App* verify = app.add_subcommand("verify", "continuum eigenstate checks");
  verify->require_subcommand(1);
  auto verify_opts = [&](CLI::App* c) {
    model_opts(c);
    c->add_option("--drop-term", o.drop_term, "remove a term (negative control)");
    c->add_option("--seed", o.seed, "64-bit sampling seed");
  };
  CLI::App* le = leaf(verify, "local-energy", "E_loc constancy and E0", [&] { return cmd_local_energy(o); });
  verify_opts(le);
  le->add_option("--samples", o.samples, "number of configurations");
  le->add_option("--min-sep", o.min_sep, "minimum pair separation");
  verify_opts(leaf(verify, "cusp", "derivative jump at contact", [&] { return cmd_cusp(o); }));
  CLI::App* orc = leaf(verify, "oracle", "analytic vs finite-difference convergence", [&] { return cmd_oracle(o); });
  verify_opts(orc);
  orc->add_option("--configs", o.configs, "configurations");
  CLI::App* tab = leaf(verify, "table", "E0 table over all models with a closed form", [&] { return cmd_table(o); });
  tab->add_option("--n-list", o.n_list, "particle numbers, comma separated");
  tab->add_option("--samples", o.samples, "configurations per entry");
  tab->add_option("--seed", o.seed, "64-bit sampling seed");

  CLI::App* alg = app.add_subcommand("algebra", "exact exchange-operator algebra");
  alg->require_subcommand(1);
  auto alg_opts = [&](CLI::App* c) {
    c->add_option("--family", o.family, "rational or rational-linear");
    c->add_option("--n", o.n, "particle number (<= 4)");
    c->add_option("--max-terms", o.max_terms, "term budget");
    c->add_option("--max-seconds", o.max_seconds, "time budget");
  };
  CLI::App* com = leaf(alg, "commute", "[I_a, I_b] for each pair of orders", [&] { return cmd_commute(o); });
  alg_opts(com);
  com->add_option("--orders", o.orders, "a,b (repeatable)");
  com->add_flag("--trapped", o.trapped, "use the trapped invariants");
  CLI::App* p2 = leaf(alg, "project-i2", "project I2 onto the zeta sector", [&] { return cmd_project(o, false); });
  alg_opts(p2);
  p2->add_option("--zeta", o.zeta, "+1 or -1");
  CLI::App* p1 = leaf(alg, "project-i1", "project the trapped I1", [&] { return cmd_project(o, true); });
  alg_opts(p1);
  p1->add_option("--zeta", o.zeta, "+1 or -1");
  alg_opts(leaf(alg, "pi-commutator", "[pi_i, pi_j] against its closed form", [&] { return cmd_pi_commutator(o); }));
  CLI::App* ob = leaf(alg, "one-body", "exchange covariance of pi, a, a+, h", [&] { return cmd_one_body(o); });
  alg_opts(ob);
  ob->add_flag("--trapped", o.trapped, "include a, a+ and h");
  CLI::App* cav = leaf(alg, "caveat", "order of projection and commutation", [&] { return cmd_caveat(o); });
  alg_opts(cav);
  cav->add_option("--zeta", o.zeta, "+1 or -1");
  cav->add_option("--i", o.i, "first index (1-based)");
  cav->add_option("--j", o.j, "second index (1-based)");

  CLI::App* lat = app.add_subcommand("lattice", "finite-grid representation checks");
  lat->require_subcommand(1);
  auto lat_opts = [&](CLI::App* c) {
    c->add_option("--n", o.n, "particle number");
    c->add_option("--sites", o.sites, "grid sites (comma separated for refinements)")->delimiter(',');
    c->add_option("--zeta", o.zeta, "+1 or -1");
    c->add_option("--order", o.order, "derivative stencil order")->check(CLI::IsMember({2, 4}));
    c->add_option("--boundary", o.boundary, "box or periodic");
    c->add_option("--half-width", o.half_width, "box half width");
    c->add_option("--length", o.length, "periodic length");
    c->add_option("--max-dim", o.max_dim, "tensor-space dimension budget");
    c->add_option("--dense-limit", o.dense_limit, "largest block diagonalized densely");
  };
  lat_opts(leaf(lat, "axioms", "permutation identities, projector and lemma", [&] { return cmd_axioms(o); }));
  CLI::App* ov = leaf(lat, "overlap", "ground state vs discretized Jastrow product", [&] { return cmd_overlap(o); });
  lat_opts(ov);
  model_opts(ov, false);
  ov->add_option("--min-overlap", o.min_overlap, "pass threshold");
  ov->add_option("--max-rel-error", o.max_rel_error, "optional pass threshold on |E - E0|/|E0|");
  CLI::App* cv = leaf(lat, "convergence", "eigenvalue error under refinement", [&] { return cmd_convergence(o); });
  lat_opts(cv);
  model_opts(cv, false);
  cv->add_option("--min-overlap", o.min_overlap, "pass threshold at the finest grid");
  cv->add_option("--order-tolerance", o.order_tolerance, "allowed deviation of the fitted order");
  CLI::App* lc = leaf(lat, "commutator", "projected trapped-invariant commutator", [&] { return cmd_lattice_commutator(o); });
  lat_opts(lc);
  lc->add_option("--prepotential", o.prepotential, "tanh, linear or zero");
  lc->add_option("--lambda", o.lambda, "tanh amplitude");
  lc->add_option("--beta", o.beta, "linear slope");
  lc->add_option("--omega", o.omega, "trap frequency");
  lc->add_option("--tolerance", o.tolerance, "pass threshold on the finest residual");
  CLI::App* ex = leaf(lat, "export", "sparse matrix in coordinate text form", [&] { return cmd_export(o); });
  lat_opts(ex);
  ex->add_option("--operator", o.op, "exchange, position, momentum, projector, hamiltonian");
  ex->add_option("--i", o.i, "particle index (1-based)");
  ex->add_option("--j", o.j, "second particle for exchange");
  ex->add_option("--model", o.model, "zoo model for the Hamiltonian");
  ex->add_option("--params", o.params, "model parameters");
  ex->add_option("--matrix", o.matrix_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_invalid;
  }

  CLI::App* selected = active_chain(app).back();
  std::string command;
  for (CLI::App* a : active_chain(app)) {
    if (a != &app) command += (command.empty() ? "" : " ") + a->get_name();
  }

  try {
    if (!o.config.empty()) apply_config(o.config, app);
    auto it = actions.find(selected);
    if (it == actions.end()) throw ModelError("incomplete command");
    Outcome out = it->second();

    json doc = report::envelope(command, out.pass, out.result);
    if (!o.out.empty()) report::write_atomic(o.out, report::dump(doc));
    if (!o.csv_path.empty()) {
      if (!out.csv) throw ModelError("command '" + command + "' has no CSV table");
      report::write_atomic(o.csv_path, *out.csv);
    }
    if (o.format == "json") {
      std::cout << report::dump(doc);
    } else if (o.format == "csv") {
      if (!out.csv) throw ModelError("command '" + command + "' has no CSV table");
      std::cout << *out.csv;
    } else {
      std::cout << out.text;
    }
    return out.pass ? exit_pass : exit_fail;
  } catch (const algebra::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return exit_budget;
  } catch (const lattice::DimensionBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return exit_budget;
  } catch (const CLI::Error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::invalid_argument& e) {  // includes ModelError
    std::cerr << "invalid input: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  }
}
