#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vgcg/deltashock.hpp"
#include "vgcg/llf.hpp"
#include "vgcg/regions.hpp"
#include "vgcg/waveid.hpp"

// Experiment orchestration: configuration files, figure-reproduction
// presets, batch execution, and data export.
namespace vgcg {

inline constexpr const char* kVersion = "0.1.0";

struct Experiment {
  std::string name = "experiment";
  PhysParams params{};
  std::vector<std::string> advisories;
  TransState left{1.0, 3.0};
  TransState right{1.0, 3.0};
  std::string frame = "transformed";  // only affects documentation: the
                                      // frames coincide at t = 0
  SolverConfig solver;
  std::set<std::string> analyses = {"classify", "curves", "regions", "run"};
  double delta_t_end = 2.0;
  double classify_horizon = 5.0;
  std::string out_dir = "out";
  std::string format = "csv";

  RiemannProblem riemann() const { return {left, right}; }
  DeltaProblem delta_problem() const {
    return {left.v, left.w, right.v, right.w};
  }
};

// ---------------------------------------------------------------------------
// Configuration files: flat INI-style sections with key = value lines.

namespace harness_detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double to_num(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  }
}

inline bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + v);
}

}  // namespace harness_detail

inline Experiment parse_config(std::istream& in,
                               const std::string& default_name) {
  using harness_detail::to_bool;
  using harness_detail::to_num;
  using harness_detail::trim;

  std::map<std::string, std::string> kv;
  std::string line, section;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected 'key = value': " + line);
    const std::string key = section + "." + trim(line.substr(0, eq));
    kv[key] = trim(line.substr(eq + 1));
  }

  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::pair<bool, std::string>{false, ""};
    std::string v = it->second;
    kv.erase(it);
    return std::pair<bool, std::string>{true, v};
  };
  auto need = [&](const std::string& key) {
    auto [ok, v] = take(key);
    if (!ok) throw std::invalid_argument("config: missing key '" + key + "'");
    return v;
  };

  Experiment exp;
  exp.name = default_name;
  const ValidatedParams vp = validate_params(
      to_num(need("params.A"), "A"), to_num(need("params.gamma"), "gamma"),
      to_num(need("params.eta"), "eta"), to_num(need("params.k"), "k"),
      to_num(need("params.beta"), "beta"));
  exp.params = vp.params;
  exp.advisories = vp.advisories;

  if (auto [ok, v] = take("riemann.frame"); ok) {
    if (v != "transformed" && v != "original")
      throw std::invalid_argument("config: frame must be transformed|original");
    exp.frame = v;
  }
  const bool original = exp.frame == "original";
  auto state_key = [&](const char* trans, const char* orig) {
    return std::string("riemann.") + (original ? orig : trans);
  };
  exp.left.v = to_num(need(state_key("v_left", "rho_left")), "left density");
  exp.left.w = to_num(need(state_key("w_left", "u_left")), "left velocity");
  exp.right.v = to_num(need(state_key("v_right", "rho_right")), "right density");
  exp.right.w = to_num(need(state_key("w_right", "u_right")), "right velocity");
  if (exp.left.v <= 0.0 || exp.right.v <= 0.0)
    throw std::invalid_argument("config: densities must be positive");

  if (auto [ok, v] = take("solver.nx"); ok) exp.solver.nx = (int)to_num(v, "nx");
  if (auto [ok, v] = take("solver.x_min"); ok) exp.solver.x_min = to_num(v, "x_min");
  if (auto [ok, v] = take("solver.x_max"); ok) exp.solver.x_max = to_num(v, "x_max");
  if (auto [ok, v] = take("solver.cfl"); ok) exp.solver.cfl = to_num(v, "cfl");
  if (auto [ok, v] = take("solver.iterations"); ok)
    exp.solver.iterations = (int)to_num(v, "iterations");
  if (auto [ok, v] = take("solver.steps_per_iteration"); ok)
    exp.solver.steps_per_iteration = (int)to_num(v, "steps_per_iteration");
  if (auto [ok, v] = take("solver.renorm_interval"); ok)
    exp.solver.renorm_interval = (int)to_num(v, "renorm_interval");
  if (auto [ok, v] = take("solver.renorm_tol"); ok)
    exp.solver.renorm_tol = to_num(v, "renorm_tol");
  if (auto [ok, v] = take("solver.stop_time"); ok)
    exp.solver.stop_time = to_num(v, "stop_time");
  exp.solver.validate();

  for (const char* a : {"run", "curves", "regions", "delta", "classify"}) {
    if (auto [ok, v] = take(std::string("analyses.") + a); ok) {
      if (to_bool(v, a)) exp.analyses.insert(a);
      else exp.analyses.erase(a);
    }
  }
  if (auto [ok, v] = take("delta.t_end"); ok) exp.delta_t_end = to_num(v, "t_end");
  if (auto [ok, v] = take("classify.horizon"); ok)
    exp.classify_horizon = to_num(v, "horizon");
  if (auto [ok, v] = take("output.directory"); ok) exp.out_dir = v;
  if (auto [ok, v] = take("output.name"); ok) exp.name = v;
  if (auto [ok, v] = take("output.format"); ok) {
    if (v != "csv" && v != "json")
      throw std::invalid_argument("config: format must be csv|json");
    exp.format = v;
  }
  if (!kv.empty())
    throw std::invalid_argument("config: unknown key '" + kv.begin()->first +
                                "'");
  return exp;
}

inline Experiment parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string name = std::filesystem::path(path).stem().string();
  return parse_config(in, name);
}

// Emits an experiment as a config document that parse_config round-trips.
inline std::string to_config(const Experiment& exp) {
  std::ostringstream os;
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  os << "[params]\n";
  os << "A = " << num(exp.params.A) << "\n";
  os << "gamma = " << num(exp.params.gamma) << "\n";
  os << "eta = " << num(exp.params.eta) << "\n";
  os << "k = " << num(exp.params.k) << "\n";
  os << "beta = " << num(exp.params.beta) << "\n\n";
  os << "[riemann]\n";
  os << "frame = " << exp.frame << "\n";
  const bool orig = exp.frame == "original";
  os << (orig ? "rho_left = " : "v_left = ") << num(exp.left.v) << "\n";
  os << (orig ? "u_left = " : "w_left = ") << num(exp.left.w) << "\n";
  os << (orig ? "rho_right = " : "v_right = ") << num(exp.right.v) << "\n";
  os << (orig ? "u_right = " : "w_right = ") << num(exp.right.w) << "\n\n";
  os << "[solver]\n";
  os << "nx = " << exp.solver.nx << "\n";
  os << "x_min = " << num(exp.solver.x_min) << "\n";
  os << "x_max = " << num(exp.solver.x_max) << "\n";
  os << "cfl = " << num(exp.solver.cfl) << "\n";
  os << "iterations = " << exp.solver.iterations << "\n";
  os << "steps_per_iteration = " << exp.solver.steps_per_iteration << "\n";
  os << "renorm_interval = " << exp.solver.renorm_interval << "\n";
  os << "renorm_tol = " << num(exp.solver.renorm_tol) << "\n\n";
  os << "[analyses]\n";
  for (const char* a : {"run", "curves", "regions", "delta", "classify"}) {
    os << a << " = " << (exp.analyses.count(a) ? "true" : "false") << "\n";
  }
  os << "\n[delta]\n";
  os << "t_end = " << num(exp.delta_t_end) << "\n\n";
  os << "[classify]\n";
  os << "horizon = " << num(exp.classify_horizon) << "\n\n";
  os << "[output]\n";
  os << "directory = " << exp.out_dir << "\n";
  os << "name = " << exp.name << "\n";
  os << "format = " << exp.format << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Preset catalog: one entry per numerical figure.  Captions fix the
// physical constants; the Riemann data places the right state in the
// captioned region, and the step counts keep every wave on the grid.

namespace harness_detail {

inline Experiment base_preset(const std::string& name, double A, double gamma,
                              double eta, double k, double beta,
                              TransState left, TransState right, int steps) {
  Experiment e;
  e.name = name;
  const ValidatedParams vp = validate_params(A, gamma, eta, k, beta);
  e.params = vp.params;
  e.advisories = vp.advisories;
  e.left = left;
  e.right = right;
  e.solver.nx = 1000;
  e.solver.x_min = -500.0;
  e.solver.x_max = 500.0;
  e.solver.iterations = 20;
  e.solver.steps_per_iteration = steps;
  return e;
}

}  // namespace harness_detail

inline std::vector<std::string> preset_names();

inline Experiment preset(const std::string& name) {
  using harness_detail::base_preset;
  const TransState L{1.0, 3.0};

  // Case 1: gamma = -2, k = 0.01.
  if (name == "case1-region6-s1c2")
    return base_preset(name, -10, -2, 3, 0.01, 10, L, {0.5, 6.0}, 35);
  if (name == "case1-region7-s1r2")
    return base_preset(name, -10, -2, 3, 0.01, 10, L, {0.5, 2.0}, 35);
  if (name == "case1-region8-r2c2")
    return base_preset(name, -500, -7, 3, 0.01, 10, L, {0.98, -72.8}, 35);
  // Case 2: gamma = -0.5, k = -0.01.
  if (name == "case2-region1-r2c2")
    return base_preset(name, -10, -0.5, 3, -0.01, 10, L, {0.5, 4.0}, 35);
  if (name == "case2-region3-s1c2")
    return base_preset(name, -10, -0.5, 3, -0.01, 10, L, {2.0, 4.0}, 35);
  if (name == "case2-region4-s1c2")
    return base_preset(name, -10, -0.5, 3, -0.01, 10, L, {2.0, 0.0}, 35);
  if (name == "case2-region5-delta") {
    Experiment e =
        base_preset(name, -10, -0.5, 3, -0.01, 10, L, {2.0, -12.0}, 100);
    e.analyses.insert("delta");
    return e;
  }
  // Case 3: gamma = -2, k = -0.01.
  if (name == "case3-region6-s1r2")
    return base_preset(name, -10, -2, 3, -0.01, 10, L, {0.5, 6.0}, 35);
  if (name == "case3-region7-s1c2")
    return base_preset(name, -10, -2, 3, -0.01, 10, L, {0.5, 1.0}, 35);
  // Case 4: gamma = -0.5, k = 0.01.
  if (name == "case4-region1-r2c2")
    return base_preset(name, -10, -0.5, 3, 0.01, 10, L, {0.5, 4.0}, 35);
  if (name == "case4-region3-s1c2")
    return base_preset(name, -10, -0.5, 3, 0.01, 10, L, {2.0, 4.0}, 35);
  if (name == "case4-region4-s1c2")
    return base_preset(name, -10, -0.5, 3, 0.01, 10, L, {2.0, 0.0}, 35);
  // Region shifts (|k| in {0.6, 2}).
  if (name == "case1-regionshift-delta") {
    Experiment e = base_preset(name, -10, -2, 3, 2, 10, L, {2.0, 2.0}, 40);
    e.analyses.insert("delta");
    return e;
  }
  if (name == "case1-regionshift-s1c2")
    return base_preset(name, -10, -2, 3, 2, 10, L, {2.0, 5.0}, 40);
  if (name == "case2-regionshift-r2c2")
    return base_preset(name, -10, -0.5, 3, -2, 10, L, {2.0, 4.0}, 40);
  if (name == "case4-regionshift-r2c2")
    return base_preset(name, -10, -0.5, 3, 0.6, 10, L, {0.5, 2.0}, 40);
  if (name == "case4-regionshift-s1c2")
    return base_preset(name, -10, -0.5, 3, 0.6, 10, L, {2.0, 8.0}, 40);
  if (name == "case3-regionshift-s1r2")
    return base_preset(name, -10, -2, 3, -0.6, 10, L, {0.5, 6.0}, 40);
  if (name == "case3-regionshift-s1c2")
    return base_preset(name, -10, -2, 3, -0.6, 10, L, {0.5, 1.0}, 40);
  // Region IX combinations.
  auto combo = [&](double A, double gamma, double eta, double k, double beta,
                   TransState right, int steps, double t_end) {
    Experiment e = base_preset(name, A, gamma, eta, k, beta, L, right, steps);
    e.analyses.insert("delta");
    e.delta_t_end = t_end;
    return e;
  };
  if (name == "case1-region9-delta2wave")
    return combo(-10, -2, 3, 0.01, 10, {2.0, -4.0}, 50, 2.0);
  if (name == "case1-region9-c2delta-near")
    return combo(-10, -2, 3, 0.01, 10, {2.0, 1.0}, 50, 2.0);
  if (name == "case1-region9-c2delta-far")
    return combo(-10, -2, 3, 0.01, 10, {2.0, 5.0}, 50, 2.0);
  if (name == "case3-region9-c2delta-close")
    return combo(-10, -2, 3, -0.01, 10, {2.0, 9.0}, 50, 2.0);
  if (name == "case3-region9-c2delta-far")
    return combo(-10, -2, 3, -0.01, 10, {2.0, 2.0}, 50, 2.0);
  // The eta - k = 5 rate makes omega_bar u_delta differentiation
  // roundoff-limited beyond t ~ 1.5; keep the horizon inside that range.
  if (name == "case3-region9-shift-close")
    return combo(-10, -2, 3, -2, 10, {2.0, 9.0}, 40, 1.5);
  if (name == "case3-region9-shift-far")
    return combo(-10, -2, 3, -2, 10, {2.0, 2.0}, 40, 1.5);
  // Delta-weight figures (original-variable data).
  auto wdelta = [&](double eta, double k) {
    Experiment e = base_preset(name, -10, -4, eta, k, 2, {2.0, 3.0},
                               {4.0, 2.0}, 35);
    e.frame = "original";
    e.analyses = {"classify", "delta"};
    e.delta_t_end = 2.0;
    return e;
  };
  if (name == "wdelta-eta-eq-minus-kgamma") return wdelta(4, 1);
  if (name == "wdelta-eta-eq-k") return wdelta(4, 4);
  if (name == "wdelta-eta-neq-kgamma") return wdelta(4, 0.5);

  std::string msg = "unknown preset '" + name + "'; available:";
  for (const std::string& n : preset_names()) msg += "\n  " + n;
  throw std::invalid_argument(msg);
}

inline std::vector<std::string> preset_names() {
  return {
      "case1-region6-s1c2",         "case1-region7-s1r2",
      "case1-region8-r2c2",         "case2-region1-r2c2",
      "case2-region3-s1c2",         "case2-region4-s1c2",
      "case2-region5-delta",        "case3-region6-s1r2",
      "case3-region7-s1c2",         "case4-region1-r2c2",
      "case4-region3-s1c2",         "case4-region4-s1c2",
      "case1-regionshift-delta",    "case1-regionshift-s1c2",
      "case2-regionshift-r2c2",     "case4-regionshift-r2c2",
      "case4-regionshift-s1c2",     "case3-regionshift-s1r2",
      "case3-regionshift-s1c2",     "case1-region9-delta2wave",
      "case1-region9-c2delta-near", "case1-region9-c2delta-far",
      "case3-region9-c2delta-close", "case3-region9-c2delta-far",
      "case3-region9-shift-close",  "case3-region9-shift-far",
      "wdelta-eta-eq-minus-kgamma", "wdelta-eta-eq-k",
      "wdelta-eta-neq-kgamma",
  };
}

// ---------------------------------------------------------------------------
// Execution and export.

struct Manifest {
  std::string name;
  bool ok = true;
  std::string error;
  std::vector<std::string> files;  // relative to the experiment directory
  nlohmann::ordered_json metadata;
};

namespace harness_detail {

inline std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Rows of doubles, written as bare CSV lines or a columns/rows JSON object.
class Table {
 public:
  Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void row(std::initializer_list<double> xs) {
    rows_.emplace_back(xs.begin(), xs.end());
  }
  void write(const std::filesystem::path& dir, const std::string& stem,
             const std::string& format, Manifest* man) const {
    const std::string fname = stem + (format == "json" ? ".json" : ".csv");
    std::ofstream os(dir / fname, std::ios::binary);
    if (format == "json") {
      nlohmann::ordered_json j;
      j["columns"] = columns_;
      j["rows"] = rows_;
      os << j.dump(1) << "\n";
    } else {
      for (const auto& r : rows_) {
        for (size_t i = 0; i < r.size(); ++i)
          os << (i ? "," : "") << g17(r[i]);
        os << "\n";
      }
    }
    man->files.push_back(fname);
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

inline nlohmann::ordered_json classification_json(const Classification& c) {
  nlohmann::ordered_json j;
  j["region"] = region_name(c.region);
  j["form"] = form_name(c.form);
  if (c.boundary) j["boundary"] = curve_name(*c.boundary);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

}  // namespace harness_detail

inline Manifest run_experiment(const Experiment& exp) {
  namespace fs = std::filesystem;
  using harness_detail::Table;
  using nlohmann::ordered_json;

  Manifest man;
  man.name = exp.name;
  const fs::path dir = fs::path(exp.out_dir) / exp.name;
  fs::create_directories(dir);

  const PhysParams& p = exp.params;
  ordered_json& meta = man.metadata;
  meta["version"] = kVersion;
  meta["name"] = exp.name;
  meta["params"] = {{"A", p.A},     {"gamma", p.gamma}, {"eta", p.eta},
                    {"k", p.k},     {"beta", p.beta},
                    {"case", p.eta_eq_k() ? "eta=k" : "eta!=k"}};
  if (!p.eta_eq_k()) meta["params"]["c"] = p.c;
  meta["advisories"] = exp.advisories;
  meta["riemann"] = {{"frame", exp.frame},
                     {"left", {exp.left.v, exp.left.w}},
                     {"right", {exp.right.v, exp.right.w}}};
  meta["solver"] = {{"nx", exp.solver.nx},
                    {"x_min", exp.solver.x_min},
                    {"x_max", exp.solver.x_max},
                    {"cfl", exp.solver.cfl},
                    {"iterations", exp.solver.iterations},
                    {"steps_per_iteration", exp.solver.steps_per_iteration},
                    {"renorm_interval", exp.solver.renorm_interval},
                    {"renorm_tol", exp.solver.renorm_tol}};
  meta["analyses"] = std::vector<std::string>(exp.analyses.begin(),
                                              exp.analyses.end());
  ordered_json verdicts;

  // Classification first, so the solver comparison has its prediction.
  Classification cls;
  const bool want_classify = exp.analyses.count("classify") != 0;
  if (want_classify) {
    cls = classify(exp.left, exp.right, 0.0, p);
    verdicts["classification"] = harness_detail::classification_json(cls);
    verdicts["asymptotic"] = harness_detail::classification_json(
        asymptotic_region(exp.left, exp.right, p));
    ordered_json evs = ordered_json::array();
    for (const CrossingEvent& e :
         crossing_times(exp.left, exp.right, p, exp.classify_horizon)) {
      evs.push_back({{"t_star", e.t_star},
                     {"from", region_name(e.from_label)},
                     {"to", region_name(e.to_label)},
                     {"boundary", curve_name(e.boundary)}});
    }
    verdicts["crossings"] = evs;
  }

  // Wave-curve samples through the left state at t = 0.
  const double v_lo = 0.2 * std::min(exp.left.v, exp.right.v);
  const double v_hi = 4.0 * std::max(exp.left.v, exp.right.v);
  if (exp.analyses.count("curves")) {
    const int n = 256;
    for (CurveKind kind : {CurveKind::S1, CurveKind::C2, CurveKind::SDelta,
                           CurveKind::SOver, CurveKind::R2Approx}) {
      Table tab({"v", "w"});
      for (int i = 0; i < n; ++i) {
        const double v = v_lo + (v_hi - v_lo) * i / (n - 1);
        const double w = kind == CurveKind::R2Approx
                             ? r2_w(exp.left, v, 0.0, 0.0, p)
                             : curve_w(kind, exp.left, v, 0.0, p);
        tab.row({v, w});
      }
      std::string stem = std::string("curve_") + curve_name(kind);
      for (auto& ch : stem) ch = ch == ' ' ? '_' : std::tolower(ch);
      tab.write(dir, stem, exp.format, &man);
    }
  }

  // Region raster at t = 0.
  if (exp.analyses.count("regions")) {
    const double mid_v = 0.5 * (v_lo + v_hi);
    double w_lo = std::min(exp.left.w, exp.right.w);
    double w_hi = std::max(exp.left.w, exp.right.w);
    for (double v : {mid_v, v_hi}) {
      w_lo = std::min(w_lo, curve_w(CurveKind::SOver, exp.left, v, 0.0, p));
      w_hi = std::max(w_hi, curve_w(CurveKind::C2, exp.left, v, 0.0, p));
    }
    const double pad = 0.2 * (w_hi - w_lo) + 1.0;
    std::ostringstream raster;
    region_raster(raster, exp.left, 0.0, p, v_lo, v_hi, w_lo - pad,
                  w_hi + pad, 81, 81);
    const std::string fname =
        exp.format == "json" ? "regions.json" : "regions.csv";
    std::ofstream os(dir / fname, std::ios::binary);
    if (exp.format == "json") {
      ordered_json rows = ordered_json::array();
      std::istringstream is(raster.str());
      std::string ln;
      while (std::getline(is, ln)) {
        const auto c1 = ln.find(',');
        const auto c2 = ln.find(',', c1 + 1);
        rows.push_back({std::stod(ln.substr(0, c1)),
                        std::stod(ln.substr(c1 + 1, c2 - c1 - 1)),
                        ln.substr(c2 + 1)});
      }
      ordered_json j;
      j["columns"] = {"v", "w", "label"};
      j["rows"] = rows;
      os << j.dump(1) << "\n";
    } else {
      os << raster.str();
    }
    man.files.push_back(fname);
  }

  // Finite-volume run, snapshot export, and wave identification.
  if (exp.analyses.count("run")) {
    try {
      const RunResult rr = run(exp.riemann(), exp.solver, p);
      const double dx = (exp.solver.x_max - exp.solver.x_min) / exp.solver.nx;
      for (size_t i = 0; i < rr.snapshots.size(); ++i) {
        const Snapshot& s = rr.snapshots[i];
        char stem[32];
        std::snprintf(stem, sizeof(stem), "snapshot_%03zu", i);
        Table tab({"x", "v", "w", "rho", "u"});
        for (size_t j = 0; j < s.v.size(); ++j) {
          const PrimState prim =
              to_primitive(TransState{s.v[j], s.w[j]}, s.t, p);
          tab.row({exp.solver.x_min + (j + 0.5) * dx, s.v[j], s.w[j],
                   prim.rho, prim.u});
        }
        tab.write(dir, stem, exp.format, &man);
      }
      ordered_json runmeta;
      std::vector<double> times;
      for (const auto& s : rr.snapshots) times.push_back(s.t);
      runmeta["snapshot_times"] = times;
      runmeta["dt_history"] = rr.dt_history;
      runmeta["lambda_history"] = rr.lambda_history;
      runmeta["delta_metric"] = rr.delta_metric;
      const DeltaDetection dd = detect_delta(rr);
      runmeta["delta_detected"] = dd.is_delta;
      runmeta["delta_growth_rate"] = dd.growth_rate;
      meta["solver_run"] = runmeta;

      if (want_classify) {
        const WaveReport rep = classify_profile(rr, cls.form, exp.riemann(), p);
        std::ofstream rp(dir / "report.txt", std::ios::binary);
        export_report(rp, rep, exp.solver.x_min, dx);
        man.files.push_back("report.txt");
        ordered_json wj;
        std::vector<std::string> seq;
        for (WaveTag t : rep.sequence) seq.push_back(wave_name(t));
        wj["sequence"] = seq;
        wj["match_defined"] = rep.match_defined;
        if (rep.match_defined) wj["match"] = rep.match;
        if (rep.has_middle_plateau) {
          wj["middle_measured"] = {rep.middle_measured.v,
                                   rep.middle_measured.w};
          try {
            wj["middle_error"] = middle_state_error(rr, exp.riemann(), p);
          } catch (const std::exception&) {
          }
        }
        verdicts["waveid"] = wj;
      }
    } catch (const SolverAbort& e) {
      man.ok = false;
      man.error = std::string("solver abort: ") + e.what();
      verdicts["solver_error"] = e.what();
    }
  }

  // Delta-shock trajectory in both frames plus deficit residuals.
  if (exp.analyses.count("delta")) {
    ordered_json dj;
    const DeltaProblem pr = exp.delta_problem();
    try {
      const InitialSpeed is = initial_speed(pr, p);
      dj["initial_speed"] = is.value;
      dj["continuation_root"] = is.continuation_root;
      dj["branch_conflict"] = is.conflict;
      dj["overcompressive_at_0"] =
          overcompressive(pr.left(), pr.right(), is.value, 0.0, p).status ==
                  Overcompress::Strict
              ? "strict"
              : "not strict";
      const StepControl ctrl = StepControl::for_rate(p.eta - p.k);
      const DeltaTrajectory traj = integrate(pr, p, exp.delta_t_end, ctrl);
      const ResidualSeries res = rh_deficit_residual(traj, pr, p);
      {
        std::ofstream os(dir / "trajectory.csv", std::ios::binary);
        export_trajectory(os, traj, res);
        man.files.push_back("trajectory.csv");
      }
      dj["t_end"] = exp.delta_t_end;
      dj["max_omega_bar"] = res.max_omega_bar;
      dj["max_residual"] = res.max_abs;
      if (pr.rho_l == pr.rho_r) {
        const ExplicitWdelta ew = explicit_wdelta(exp.delta_t_end, pr, p);
        dj["printed_formula_rel_diff"] = ew.rel_diff;
      }
    } catch (const std::exception& e) {
      dj["error"] = e.what();
    }
    verdicts["delta"] = dj;
  }

  meta["verdicts"] = verdicts;
  meta["files"] = man.files;
  if (!man.ok) meta["error"] = man.error;
  {
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    os << meta.dump(1) << "\n";
    man.files.push_back("manifest.json");
  }
  return man;
}

// Runs independent experiments concurrently; one failure never disturbs
// its siblings, and results come back in input order.
inline std::vector<Manifest> batch(const std::vector<Experiment>& exps,
                                   int parallelism) {
  if (parallelism < 1) throw std::invalid_argument("batch: parallelism < 1");
  std::vector<Manifest> out(exps.size());
  std::mutex mu;
  size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      size_t i;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (next >= exps.size()) return;
        i = next++;
      }
      try {
        out[i] = run_experiment(exps[i]);
      } catch (const std::exception& e) {
        out[i].name = exps[i].name;
        out[i].ok = false;
        out[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(parallelism, (int)exps.size());
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace vgcg
