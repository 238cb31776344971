#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vgcg/harness.hpp"

namespace {

using namespace vgcg;

struct ParamFlags {
  double A = 0, gamma = 0, eta = 0, k = 0, beta = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--A", A, "pressure amplitude (A < 0)")->required();
    cmd->add_option("--gamma", gamma, "adiabatic exponent (gamma < 0)")
        ->required();
    cmd->add_option("--eta", eta, "velocity source rate")->required();
    cmd->add_option("--k", k, "density source rate")->required();
    cmd->add_option("--beta", beta, "constant forcing")->required();
  }
  PhysParams build(std::vector<std::string>* advisories) const {
    ValidatedParams vp = validate_params(A, gamma, eta, k, beta);
    if (advisories)
      advisories->insert(advisories->end(), vp.advisories.begin(),
                         vp.advisories.end());
    return vp.params;
  }
};

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file " + path);
  return file;
}

void print_advisories(const std::vector<std::string>& advisories) {
  for (const std::string& a : advisories)
    std::cerr << "advisory: " << a << "\n";
}

int cmd_run(const std::vector<std::string>& inputs, const std::string& out,
            const std::string& format, int parallel, int nx, int iterations,
            int steps) {
  std::vector<Experiment> exps;
  for (const std::string& in : inputs) {
    Experiment e = std::filesystem::exists(in) ? parse_config_file(in)
                                               : preset(in);
    if (!out.empty()) e.out_dir = out;
    if (!format.empty()) e.format = format;
    if (nx > 0) e.solver.nx = nx;
    if (iterations > 0) e.solver.iterations = iterations;
    if (steps > 0) e.solver.steps_per_iteration = steps;
    e.solver.validate();
    print_advisories(e.advisories);
    exps.push_back(std::move(e));
  }
  const std::vector<Manifest> manifests = batch(exps, parallel);
  bool solver_failed = false;
  for (const Manifest& m : manifests) {
    if (m.ok) {
      std::cout << m.name << ": ok, " << m.files.size() << " files\n";
    } else {
      std::cout << m.name << ": FAILED: " << m.error << "\n";
      solver_failed = true;
    }
  }
  return solver_failed ? 2 : 0;
}

int cmd_curves(const ParamFlags& pf, std::vector<double> left,
               std::vector<std::string> kinds, double t, double t0,
               double vmin, double vmax, int n, const std::string& out) {
  std::vector<std::string> adv;
  const PhysParams p = pf.build(&adv);
  print_advisories(adv);
  const TransState L{left[0], left[1]};
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = vmin + (vmax - vmin) * i / (n - 1);
  std::ofstream file;
  std::ostream& os = open_or_stdout(out, file);
  for (const std::string& kname : kinds) {
    CurveKind kind;
    if (kname == "S1") kind = CurveKind::S1;
    else if (kname == "C2") kind = CurveKind::C2;
    else if (kname == "Sdelta") kind = CurveKind::SDelta;
    else if (kname == "So") kind = CurveKind::SOver;
    else if (kname == "J") kind = CurveKind::JBound;
    else if (kname == "R2") kind = CurveKind::R2Approx;
    else throw std::invalid_argument("unknown curve kind " + kname);
    if (kinds.size() > 1) os << "# " << kname << "\n";
    sample_curve(os, kind, L, t, grid, p, t0);
  }
  return 0;
}

int cmd_regions(const ParamFlags& pf, std::vector<double> left, double t,
                double vmin, double vmax, double wmin, double wmax, int nv,
                int nw, const std::string& out) {
  std::vector<std::string> adv;
  const PhysParams p = pf.build(&adv);
  print_advisories(adv);
  std::ofstream file;
  std::ostream& os = open_or_stdout(out, file);
  region_raster(os, TransState{left[0], left[1]}, t, p, vmin, vmax, wmin,
                wmax, nv, nw);
  return 0;
}

int cmd_delta(const ParamFlags& pf, std::vector<double> left,
              std::vector<double> right, double t_end,
              const std::string& out) {
  std::vector<std::string> adv;
  const PhysParams p = pf.build(&adv);
  print_advisories(adv);
  const DeltaProblem pr{left[0], left[1], right[0], right[1]};
  const InitialSpeed is = initial_speed(pr, p);
  std::cerr << "initial delta speed: " << is.value
            << (is.conflict ? " (branch conflict: bracket overrode continuation)"
                            : "")
            << "\n";
  const OvercompressStatus oc =
      overcompressive(pr.left(), pr.right(), is.value, 0.0, p);
  std::cerr << "overcompressive at t=0: "
            << (oc.status == Overcompress::Strict
                    ? "strict"
                    : oc.status == Overcompress::WeakBoundary ? "boundary"
                                                              : "no")
            << "\n";
  const DeltaTrajectory traj =
      integrate(pr, p, t_end, StepControl::for_rate(p.eta - p.k));
  const ResidualSeries res = rh_deficit_residual(traj, pr, p);
  std::cerr << "max |omega_bar| = " << res.max_omega_bar
            << ", max deficit residual = " << res.max_abs << "\n";
  std::ofstream file;
  std::ostream& os = open_or_stdout(out, file);
  export_trajectory(os, traj, res);
  return 0;
}

int cmd_classify(const ParamFlags& pf, std::vector<double> left,
                 std::vector<double> right, double t, double horizon) {
  std::vector<std::string> adv;
  const PhysParams p = pf.build(&adv);
  print_advisories(adv);
  const TransState L{left[0], left[1]}, R{right[0], right[1]};
  const CaseInfo ci = case_of(p);
  std::cout << "case " << ci.id << " (k(gamma+1) "
            << (ci.k_gamma1_sign > 0 ? "> 0" : "< 0") << ")\n";
  const Classification c = classify(L, R, t, p);
  std::cout << "region at t=" << t << ": " << region_name(c.region)
            << ", solution form: " << form_name(c.form);
  if (!c.note.empty()) std::cout << " [" << c.note << "]";
  std::cout << "\n";
  const Classification a = asymptotic_region(L, R, p);
  std::cout << "limit region: " << region_name(a.region)
            << ", solution form: " << form_name(a.form) << "\n";
  const auto events = crossing_times(L, R, p, horizon);
  if (events.empty()) {
    std::cout << "no region crossings in (0, " << horizon << "]\n";
  } else {
    for (const CrossingEvent& e : events) {
      std::cout << "crossing at t = " << e.t_star << ": "
                << region_name(e.from_label) << " -> "
                << region_name(e.to_label) << " (" << curve_name(e.boundary)
                << ")\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Riemann-problem laboratory for a 2x2 Keyfitz-Kranzer system with a "
      "varying generalized Chaplygin gas"};
  app.require_subcommand(1);

  auto* runc =
      app.add_subcommand("run", "run experiments from configs or presets");
  std::vector<std::string> inputs;
  std::string out_dir, format;
  int parallel = 1, nx = 0, iterations = 0, steps = 0;
  runc->add_option("inputs", inputs, "config files or preset names")
      ->required();
  runc->add_option("--out", out_dir, "output directory override");
  runc->add_option("--format", format, "data format")
      ->check(CLI::IsMember({"csv", "json"}));
  runc->add_option("--parallel", parallel, "concurrent experiments");
  runc->add_option("--nx", nx, "grid-size override");
  runc->add_option("--iterations", iterations, "outer iteration override");
  runc->add_option("--steps", steps, "steps-per-iteration override");

  auto* pre = app.add_subcommand("preset", "preset catalog");
  pre->require_subcommand(1);
  auto* plist = pre->add_subcommand("list", "list preset names");
  auto* pshow = pre->add_subcommand("show", "print one preset as a config");
  std::string pname;
  pshow->add_option("name", pname, "preset name")->required();

  ParamFlags cur_p, reg_p, del_p, cls_p;
  std::vector<double> cur_left, reg_left, del_left, del_right, cls_left,
      cls_right;
  std::vector<std::string> cur_kinds{"S1", "C2", "Sdelta", "So", "R2"};
  double cur_t = 0.0, cur_t0 = 0.0, cur_vmin = 0.1, cur_vmax = 5.0;
  int cur_n = 200;
  std::string cur_out;

  auto* cur =
      app.add_subcommand("curves", "sample the wave curves through a left state");
  cur_p.attach(cur);
  cur->add_option("--left", cur_left, "left state v w")->expected(2)->required();
  cur->add_option("--kind", cur_kinds, "curve kinds: S1 C2 Sdelta So J R2")
      ->delimiter(',');
  cur->add_option("--t", cur_t, "evaluation time");
  cur->add_option("--t0", cur_t0, "wave start time for R2");
  cur->add_option("--vmin", cur_vmin);
  cur->add_option("--vmax", cur_vmax);
  cur->add_option("--n", cur_n, "grid points");
  cur->add_option("--out", cur_out, "output file (default stdout)");

  double reg_t = 0.0, reg_vmin = 0.1, reg_vmax = 5.0, reg_wmin = -15.0,
         reg_wmax = 10.0;
  int reg_nv = 81, reg_nw = 81;
  std::string reg_out;
  auto* reg = app.add_subcommand("regions", "rasterize the region map");
  reg_p.attach(reg);
  reg->add_option("--left", reg_left, "left state v w")->expected(2)->required();
  reg->add_option("--t", reg_t, "evaluation time");
  reg->add_option("--vmin", reg_vmin);
  reg->add_option("--vmax", reg_vmax);
  reg->add_option("--wmin", reg_wmin);
  reg->add_option("--wmax", reg_wmax);
  reg->add_option("--nv", reg_nv);
  reg->add_option("--nw", reg_nw);
  reg->add_option("--out", reg_out, "output file (default stdout)");

  double del_tend = 2.0;
  std::string del_out;
  auto* del = app.add_subcommand("delta", "integrate a delta-shock trajectory");
  del_p.attach(del);
  del->add_option("--left", del_left, "left state rho u")
      ->expected(2)
      ->required();
  del->add_option("--right", del_right, "right state rho u")
      ->expected(2)
      ->required();
  del->add_option("--t-end", del_tend, "integration horizon");
  del->add_option("--out", del_out, "trajectory file (default stdout)");

  double cls_t = 0.0, cls_horizon = 5.0;
  auto* cls = app.add_subcommand("classify",
                                 "region, solution form, and crossing times");
  cls_p.attach(cls);
  cls->add_option("--left", cls_left, "left state v w")->expected(2)->required();
  cls->add_option("--right", cls_right, "right state v w")
      ->expected(2)
      ->required();
  cls->add_option("--t", cls_t, "evaluation time");
  cls->add_option("--horizon", cls_horizon, "crossing search horizon");

  CLI11_PARSE(app, argc, argv);

  try {
    if (runc->parsed())
      return cmd_run(inputs, out_dir, format, parallel, nx, iterations, steps);
    if (plist->parsed()) {
      for (const std::string& n : preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (pshow->parsed()) {
      std::cout << to_config(preset(pname));
      return 0;
    }
    if (cur->parsed())
      return cmd_curves(cur_p, cur_left, cur_kinds, cur_t, cur_t0, cur_vmin,
                        cur_vmax, cur_n, cur_out);
    if (reg->parsed())
      return cmd_regions(reg_p, reg_left, reg_t, reg_vmin, reg_vmax, reg_wmin,
                         reg_wmax, reg_nv, reg_nw, reg_out);
    if (del->parsed())
      return cmd_delta(del_p, del_left, del_right, del_tend, del_out);
    if (cls->parsed())
      return cmd_classify(cls_p, cls_left, cls_right, cls_t, cls_horizon);
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
