// One line per acceptance criterion; exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nilgraph/h2r.hpp"
#include "nilgraph/l3.hpp"
#include "nilgraph/pipeline.hpp"
#include "nilgraph/sister.hpp"
#include "nilgraph/surface.hpp"
#include "nilgraph/verifier.hpp"
#include "nilgraph/vortex.hpp"

using namespace nilgraph;
namespace fs = std::filesystem;

namespace {

struct Line {
  std::string what;
  double value, tol;
  bool strict = false;
  bool ok() const { return std::isfinite(value) && (strict ? value < tol : value <= tol); }
};

struct Criterion {
  std::vector<Line> lines;
  void add(const std::string& w, double v, double t, bool strict = false) { lines.push_back({w, v, t, strict}); }
  void flag(const std::string& w, bool ok) { lines.push_back({w, ok ? 0.0 : 1.0, 0.0}); }
  bool ok() const {
    for (const Line& l : lines)
      if (!l.ok()) return false;
    return !lines.empty();
  }
};

double check_value(const Report& r, const std::string& name) {
  const Check* c = r.find(name);
  return c ? c->value : std::nan("");
}

bool check_pass(const Report& r, const std::string& name) {
  const Check* c = r.find(name);
  return c && c->pass;
}

std::string tree_digest(const fs::path& dir, std::vector<std::string>& names) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& p : files) {
    names.push_back(fs::relative(p, dir).string());
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    all += names.back() + '\0' + ss.str() + '\0';
  }
  return all;
}

Criterion explicit_solutions() {
  Criterion c;
  const GridPtr g = Grid::rect(-2, 2, -2, 2, 129, 129);
  const Mask interior = margin_mask(*g, 2);
  std::vector<AnalyticGraph> fixtures = {linear_graph(0, 0), linear_graph(1.5, -0.5, 2)};
  for (double s : {0.0, 0.5, 1.0, 2.0}) fixtures.push_back(saddle_family(s));
  double analytic = 0, fd = 0;
  for (const AnalyticGraph& f : fixtures) {
    analytic = std::fmax(analytic, max_norm(pde_residual_nil3(f, g)));
    fd = std::fmax(fd, max_norm(pde_residual_nil3(f.height(g)), interior));
  }
  c.add("analytic residual", analytic, 1e-10);
  c.add("FD residual (129x129, interior)", fd, 1e-6);
  return c;
}

Criterion vortex_suite() {
  Criterion c;
  VortexOptions flat;
  flat.bc = BoundaryPreset::QFlat;
  const auto T1 = solve_vortex(QuadDifferential::constant(0.25), GridSpec::rect(-4, 4, -4, 4, 129), flat);
  c.add("|tau0 - 1|, Q = 1/4", max_norm(T1.tau0.map([](double t) { return t - 1; })), 1e-6);

  VortexOptions hyp;
  hyp.bc = BoundaryPreset::AsymptoticHyperbolic;
  const auto Q0 = QuadDifferential::polynomial({0.0}, QDomain::Disk);
  const auto T0 = solve_vortex(Q0, GridSpec::disk(0.9, 129), hyp);
  const RealField rel = RealField::generate(T0.tau0.grid_ptr(), [&](int i, int j) {
    const double d = 1 - std::norm(T0.tau0.grid().z(i, j));
    const double e = 16 / (d * d);
    return (T0.tau0(i, j) - e) / e;
  });
  c.add("Q = 0 relative error vs 16/(1-|z|^2)^2", max_norm(rel), 1e-4);

  const auto Qz = QuadDifferential::polynomial({0.0, 1.0}, QDomain::Disk);
  VortexOptions a;
  a.bc = BoundaryPreset::HyperbolicMax;
  VortexOptions b = a;
  b.init = InitialGuess::QFlat;
  b.init_shift = 1.5;
  const auto Ta = solve_vortex(Qz, GridSpec::disk(0.8, 129), a);
  const auto Tb = solve_vortex(Qz, GridSpec::disk(0.8, 129), b);
  const RealField d = RealField::generate(Ta.tau0.grid_ptr(), [&](int i, int j) {
    return std::log(Ta.tau0(i, j)) - std::log(Tb.tau0(i, j));
  });
  c.add("init independence |log tau0_a - log tau0_b|", max_norm(d), 10 * a.tol);
  return c;
}

Criterion l3_suite() {
  Criterion c;
  const GridSpec spec = GridSpec::rect(-4, 4, -4, 4, 129);
  const auto T = closed_form_constant_q(0.25, spec);
  const SpacelikeSurfaceL3 s = integrate_structure(T, QuadDifferential::constant(0.25));
  const CmcReport r = check_cmc_half(s, s.grid().check_region(0.5));
  c.add("|H - 1/2|", r.H_defect, 1e-4);
  c.add("conformality", r.anisotropy, 1e-4);
  c.add("| |Hopf| - 1/4 |", std::fmax(std::fabs(r.hopf_modulus_min - 0.25), std::fabs(r.hopf_modulus_max - 0.25)), 1e-4);
  c.add("mixed partials", r.mixed_partial, 1e-5);
  return c;
}

Criterion height_suite() {
  Criterion c;
  double worst = 0;
  for (double s = -3; s <= 3; s += 0.01) {
    // h = cosh s on the cylinder: h_z = sinh/2, h_zz = h_zzbar = cosh/4, Q = -1/4
    const auto [a, b] = system_A_pointwise(0.5 * std::sinh(s), 0.25 * std::cosh(s), 0.25 * std::cosh(s), 1, 0, -0.25);
    worst = std::fmax(worst, std::fmax(a, b));
  }
  c.add("cosh s analytic", worst, 1e-8);

  const GridSpec spec = GridSpec::rect(-4, 4, -4, 4, 129);
  const auto Q = QuadDifferential::constant(0.25);
  const auto T = closed_form_constant_q(0.25, spec);
  const SpacelikeSurfaceL3 s = integrate_structure(T, Q);
  const Height h = height_from_a(s, select_a(s, 0.0, 0.0));
  const SystemAResidual r = system_A_residual(h.h, T.tau0, Q);
  const Mask region = s.grid().check_region(0.5);
  c.add("pipeline heights, first", max_norm(r.first, region), 1e-4);
  c.add("pipeline heights, second", max_norm(r.second, region), 1e-4);
  return c;
}

RunConfig build_config(const std::string& q, const std::string& grid, const fs::path& out) {
  RunConfig cfg;
  cfg.q = q;
  cfg.grid = grid;
  cfg.out = out.string();
  return cfg;
}

Criterion nil3_suite(const RunResult& lin, const RunResult& cst) {
  Criterion c;
  for (const auto& [label, r] : {std::pair<std::string, const RunResult*>{"Q=z", &lin}, {"Q=1/4", &cst}}) {
    const Report& rep = r->report;
    c.add(label + " 4|A|^2/lambda = 1 - u^2", check_value(rep, "nil3.angle_relation"), 1e-6);
    c.add(label + " resampled minimal graph residual", check_value(rep, "nil3.resampled_pde"), 1e-4);
    c.add(label + " AR match", check_value(rep, "nil3.ar_match"), 1e-4);
    c.add(label + " AR dbar", check_value(rep, "nil3.ar_holomorphic"), 1e-4);
    c.add(label + " projection metric", check_value(rep, "nil3.projection_metric"), 1e-6);
    c.flag(label + " injective", check_pass(rep, "nil3.injective"));
  }
  return c;
}

Criterion sister_suite(const RunResult& lin, const RunResult& cst) {
  Criterion c;
  c.add("lambda, u invariance (Q=z)", check_value(lin.report, "sister.lambda_u_invariant"), 0.0);
  c.add("lambda, u invariance (Q=1/4)", check_value(cst.report, "sister.lambda_u_invariant"), 0.0);
  c.add("AR opposite, surfaces (Q=z)", check_value(lin.report, "sister.ar_opposite"), 1e-4);
  c.add("AR opposite, data (Q=z)", check_value(lin.report, "sister.ar_opposite_data"), 1e-4);
  c.add("AR opposite, data (Q=1/4)", check_value(cst.report, "sister.ar_opposite_data"), 1e-4);
  return c;
}

Criterion gauss_suite(const RunResult& lin) {
  Criterion c;
  const Report& r = lin.report;
  c.add("harmonicity", check_value(r, "h2r.harmonicity"), 1e-3);
  c.add("Weierstrass Hopf part", check_value(r, "h2r.weierstrass_hopf"), 1e-3);
  c.add("Weierstrass trace part", check_value(r, "h2r.weierstrass_trace"), 1e-3);
  c.add("<N,N> + 1", check_value(r, "h2r.hyperboloid"), 1e-5);
  c.add("d_G", check_value(r, "h2r.gauss_distance_ratio"), 1.0, true);
  return c;
}

Criterion counterexample_suite() {
  Criterion c;
  const double L1 = counterexample_alpha_length(0.999), L2 = counterexample_alpha_length(0.9999);
  c.add("relative tail L(0.9999) vs L(0.999)", std::fabs(L2 - L1) / L2, 1e-3);
  const GridPtr g = Grid::rect(-2, 2, -2, 2, 129, 129);
  bool grows = true;
  for (double s : {0.0, 0.5, 1.0, 2.0})
    grows = grows && strictly_increasing(diagonal_u2g_profile(fundamental_data(saddle_family(s).patch(g))));
  c.flag("saddle fixtures: monotone growth", grows);
  return c;
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "nilgraph_acceptance";
  fs::remove_all(root);

  int failures = 0;
  auto report = [&](int n, const std::string& title, const std::function<Criterion()>& run) {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    std::string error;
    try {
      c = run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = error.empty() && c.ok();
    if (!ok) ++failures;
    std::printf("criterion %d: %s  %s (%.1f s)\n", n, ok ? "PASS" : "FAIL", title.c_str(), secs);
    for (const Line& l : c.lines)
      std::printf("    %-4s %-44s %.3e %s %.1e\n", l.ok() ? "ok" : "BAD", l.what.c_str(), l.value,
                  l.strict ? "<" : "<=", l.tol);
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    std::fflush(stdout);
  };

  report(1, "explicit solutions", explicit_solutions);
  report(2, "vortex solver", vortex_suite);
  report(3, "L3 integration", l3_suite);
  report(4, "height equations", height_suite);

  RunResult lin, cst;
  std::string build_error;
  try {
    lin = run_build(build_config("poly:0,0;1,0", "disk:0.8,129", root / "linear_a"));
    cst = run_build(build_config("const:0.25,0", "rect:-4,4,-4,4,129", root / "constant"));
  } catch (const std::exception& e) {
    build_error = e.what();
  }
  auto needs_build = [&](const std::function<Criterion()>& f) {
    return [&, f] {
      if (!build_error.empty()) throw std::runtime_error("build failed: " + build_error);
      return f();
    };
  };
  report(5, "end-to-end Nil3 graph", needs_build([&] { return nil3_suite(lin, cst); }));
  report(6, "sister correspondence", needs_build([&] { return sister_suite(lin, cst); }));
  report(7, "Gauss map", needs_build([&] { return gauss_suite(lin); }));
  report(8, "counterexample and u2g growth", counterexample_suite);
  report(9, "determinism", needs_build([&] {
    Criterion c;
    run_build(build_config("poly:0,0;1,0", "disk:0.8,129", root / "linear_b"));
    std::vector<std::string> na, nb;
    const std::string a = tree_digest(root / "linear_a", na), b = tree_digest(root / "linear_b", nb);
    c.flag("identical file lists (" + std::to_string(na.size()) + " files)", na == nb && !na.empty());
    c.flag("identical bytes", a == b);
    return c;
  }));

  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
