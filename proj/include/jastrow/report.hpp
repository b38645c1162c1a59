#pragma once

// JSON/CSV emission shared by the CLI and the acceptance suite.  Every
// document carries "schema" and a "timestamp" that determinism comparisons
// ignore; nothing else in a report depends on wall-clock time.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>

#include "jastrow/algebra/exchange_algebra.hpp"
#include "jastrow/continuum.hpp"
#include "jastrow/lattice.hpp"
#include "jastrow/zoo.hpp"

namespace jastrow::report {

using json = nlohmann::json;

inline constexpr const char* schema_id = "jastrow-lab/1";

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline json envelope(const std::string& command, bool pass, json result) {
  return {{"schema", schema_id}, {"command", command}, {"pass", pass}, {"timestamp", utc_timestamp()},
          {"result", std::move(result)}};
}

inline json without_timestamp(json j) {
  if (j.is_object()) {
    j.erase("timestamp");
    for (auto& [k, v] : j.items()) v = without_timestamp(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = without_timestamp(v);
  }
  return j;
}

/// null for non-finite numbers (JSON has no NaN).
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

inline std::string kind_name(CuspKind k) {
  switch (k) {
    case CuspKind::none: return "none";
    case CuspKind::contact: return "contact";
    case CuspKind::hard_core: return "hard_core";
  }
  return "none";
}

inline json geometry_json(const Geometry& g) {
  json j{{"kind", g.to_string()}};
  if (g.kind != Geometry::Kind::line) j["length"] = g.length;
  return j;
}

inline json params_json(const Params& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

inline json entry_json(const ZooEntry& e) {
  json params = json::array();
  for (const auto& p : e.params) {
    params.push_back({{"name", p.name},
                      {"default", p.default_value},
                      {"min", number(p.min)},
                      {"max", number(p.max)},
                      {"min_inclusive", p.min_inclusive},
                      {"description", p.description}});
  }
  return {{"name", e.name},         {"geometry", e.geometry == Geometry::Kind::ring ? "ring" : "line"},
          {"params", params},       {"summary", e.summary},
          {"e0", e.e0_text},        {"lattice_compatible", e.lattice_compatible}};
}

inline json model_json(const ModelSpec& m) {
  return {{"name", m.name},
          {"params", params_json(m.params)},
          {"N", m.n_particles},
          {"zeta", m.zeta},
          {"hbar", m.constants.hbar},
          {"mass", m.constants.mass},
          {"geometry", geometry_json(m.geometry)},
          {"e0", optional_number(m.e0())},
          {"citations", m.citations}};
}

inline json to_json(const LocalEnergyReport& r) {
  return {{"model", r.model},
          {"N", r.n},
          {"samples", r.samples},
          {"seed", r.seed},
          {"mean", number(r.mean)},
          {"variance", number(r.variance)},
          {"max_abs_dev", number(r.max_abs_dev)},
          {"e0_expected", optional_number(r.e0_expected)},
          {"tol_mean", r.tol_mean},
          {"tol_var", r.tol_var},
          {"pass", r.pass}};
}

inline json to_json(const CuspReport& r) {
  return {{"model", r.model}, {"kind", kind_name(r.kind)}, {"jump", number(r.jump)}, {"required", r.required},
          {"error", number(r.error)}, {"tolerance", cusp_tolerance}, {"pass", r.pass}};
}

inline json to_json(const OracleReport& r) {
  json orders = json::array();
  for (double q : r.orders) orders.push_back(number(q));
  return {{"model", r.model}, {"N", r.n},       {"seed", r.seed},
          {"steps", r.steps}, {"orders", orders}, {"exact_configs", r.exact},
          {"min_order", number(r.min_order)},  {"max_order", number(r.max_order)},
          {"max_error", number(r.max_error)},  {"target", oracle_target_order},
          {"tolerance", oracle_order_tolerance}, {"pass", r.pass}};
}

inline json to_json(const algebra::IntegrabilityReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j{{"orders", {c.n, c.m}},
           {"terms_a", c.terms_a},
           {"terms_b", c.terms_b},
           {"result_terms", c.result_terms},
           {"zero", c.zero}};
    if (!c.zero) j["residual"] = c.residual;
    checks.push_back(j);
  }
  return {{"family", r.family}, {"N", r.particles}, {"trapped", r.trapped}, {"checks", checks}, {"pass", r.pass}};
}

inline json to_json(const algebra::EffectiveOneBodyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"holds", c.holds}});
  return {{"family", r.family}, {"N", r.particles}, {"checks", checks}, {"pass", r.pass}};
}

inline json to_json(const lattice::Check& c) {
  return {{"name", c.name}, {"residual", number(c.residual)}, {"tolerance", c.tolerance},
          {"expect_nonzero", c.expect_nonzero}, {"pass", c.pass}};
}

inline json to_json(const lattice::AxiomReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"N", r.n},
          {"sites", r.sites},
          {"zeta", r.zeta},
          {"order", r.order},
          {"boundary", r.boundary},
          {"dim", r.dim},
          {"projector_trace", r.projector_trace},
          {"expected_rank", r.expected_rank},
          {"checks", checks},
          {"pass", r.pass}};
}

inline json to_json(const lattice::GroundStateReport& r) {
  return {{"model", r.model},
          {"N", r.n},
          {"zeta", r.zeta},
          {"sites", r.sites},
          {"order", r.order},
          {"boundary", r.boundary},
          {"spacing", r.spacing},
          {"dim", r.dim},
          {"block_dim", r.block_dim},
          {"method", r.method},
          {"iterations", r.iterations},
          {"e_num", number(r.e_num)},
          {"e0", optional_number(r.e0)},
          {"rel_error", optional_number(r.rel_error)},
          {"overlap", number(r.overlap)}};
}

inline json to_json(const lattice::ConvergenceStudy& s) {
  json runs = json::array();
  for (const auto& r : s.runs) runs.push_back(to_json(r));
  return {{"runs", runs}, {"fitted_order", optional_number(s.order)}};
}

inline json to_json(const lattice::CommutatorConvergence& c) {
  json res = json::array();
  for (double r : c.residual) res.push_back(number(r));
  return {{"N", c.n},        {"zeta", c.zeta},     {"order", c.order},
          {"sites", c.sites}, {"spacing", c.spacing}, {"residual", res},
          {"fitted_order", optional_number(c.fitted)}};
}

/// One row per configuration: index, x_1..x_N, E_loc.
inline std::string local_energy_csv(const std::vector<ConfigVector>& xs, const std::vector<double>& values) {
  std::ostringstream os;
  os << std::setprecision(17);
  const std::size_t n = xs.empty() ? 0 : xs.front().size();
  os << "index";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i + 1;
  os << ",e_loc\n";
  for (std::size_t c = 0; c < xs.size(); ++c) {
    os << c;
    for (double x : xs[c].positions) os << ',' << x;
    os << ',' << values[c] << '\n';
  }
  return os.str();
}

/// Write via a temporary file in the same directory, then rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  if (!dir.empty()) fs::create_directories(dir);
  fs::path tmp = dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move report into place at " + path.string() + ": " + ec.message());
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace jastrow::report
