#include "nilgraph/pipeline.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "nilgraph/error.hpp"
#include "nilgraph/h2r.hpp"
#include "nilgraph/io.hpp"
#include "nilgraph/l3.hpp"
#include "nilgraph/sister.hpp"
#include "nilgraph/verifier.hpp"
#include "nilgraph/vortex.hpp"

namespace nilgraph {

namespace {

std::vector<double> parse_numbers(const std::string& key, const std::string& text, std::size_t count) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || *end != '\0' || !std::isfinite(v))
      throw ParseError(key + ": expected " + std::to_string(count) + " comma-separated numbers", 1,
                       static_cast<int>(pos) + 1);
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != count) throw ParseError(key + ": expected " + std::to_string(count) + " numbers", 1, 1);
  return out;
}

double parse_positive(const std::string& key, const std::string& text) {
  const double v = parse_numbers(key, text, 1)[0];
  if (!(v > 0)) throw ParseError(key + " must be positive", 1, 1);
  return v;
}

cplx parse_complex(const std::string& key, const std::string& text) {
  const auto v = parse_numbers(key, text, 2);
  return {v[0], v[1]};
}

std::string join(const std::string& dir, const std::string& name) { return dir.empty() ? name : dir + "/" + name; }

// Module errors keep their type name in the message and gain the stage label.
template <typename F>
auto stage(const char* label, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DegenerateCase&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(std::string(label) + ": " + e.what());
  }
}

template <typename T>
double max_diff(const Field<T>& a, const Field<T>& b, const Mask& region) {
  const Grid& g = a.grid();
  double m = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!region[g.index(i, j)] || !g.active(i, j) || !b.grid().active(i, j)) continue;
      double d;
      if constexpr (std::is_same_v<T, Vec3>) d = max_abs(a(i, j) - b(i, j));
      else d = std::abs(a(i, j) - b(i, j));
      if (!std::isfinite(d)) return INFINITY;
      m = std::fmax(m, d);
    }
  return m;
}

Mask common_region(const Grid& a, const Grid& b, double scale) {
  Mask m = a.check_region(scale);
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = m[k] && b.mask()[k];
  return m;
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
  std::stringstream ss(cfg.exports);
  std::string item;
  while (std::getline(ss, item, ','))
    if (item == fmt) return true;
  return false;
}

std::string csv_text(const FieldTable& t) {
  std::ostringstream os;
  os << "x,y";
  for (const auto& n : t.names()) os << ',' << n;
  os << '\n';
  const Grid& g = *t.grid();
  std::vector<RealField> cols;
  for (std::size_t k = 0; k < t.width(); ++k) cols.push_back(t.column(k));
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      os << format_double(g.x(i)) << ',' << format_double(g.y(j));
      for (const auto& c : cols) os << ',' << format_double(c(i, j));
      os << '\n';
    }
  return os.str();
}

struct Writer {
  std::string dir;
  std::vector<std::string>* files;

  void text(const std::string& name, const std::string& contents) {
    write_file(join(dir, name), contents);
    files->push_back(name);
  }
  void table(const std::string& name, const FieldTable& t) {
    t.save(join(dir, name));
    files->push_back(name);
  }
  void mesh(const RunConfig* cfg, const std::string& stem, const VecField& X, const std::vector<MeshScalars>& s) {
    if (!cfg || wants(*cfg, "obj")) {
      std::ostringstream os;
      write_obj(os, X);
      text(stem + ".obj", os.str());
    }
    if (!cfg || wants(*cfg, "ply")) {
      std::ostringstream os;
      write_ply(os, X, s);
      text(stem + ".ply", os.str());
    }
  }
};

VecField graph_positions(const RealField& f) {
  const Grid& g = f.grid();
  return VecField::generate(f.grid_ptr(), [&](int i, int j) { return Vec3{g.x(i), g.y(j), f(i, j)}; });
}

RealField mean_defect(const RealField& H, double H0) {
  return H.map([H0](double h) { return std::fabs(h - H0); });
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "q") q = value;
  else if (key == "grid") grid = value;
  else if (key == "theta0") {
    parse_complex(key, value);
    theta0 = value;
    theta0_explicit = true;
  } else if (key == "a") {
    if (!value.empty()) parse_numbers(key, value, 3);
    a = value;
  } else if (key == "bc") {
    if (value != "auto") parse_boundary_preset(value);
    bc = value;
  } else if (key == "epsilon") {
    if (value != "auto" && value != "1" && value != "-1" && value != "+1")
      throw ParseError("epsilon must be auto, 1 or -1", 1, 1);
    epsilon = value;
  } else if (key == "vortex_tol") vortex_tol = parse_positive(key, value);
  else if (key == "closedness_tol") closedness_tol = parse_positive(key, value);
  else if (key == "check_scale") check_scale = parse_positive(key, value);
  else if (key == "resample_scale") resample_scale = parse_positive(key, value);
  else if (key == "seed") seed = static_cast<unsigned>(parse_positive(key, value));
  else if (key == "out") out = value;
  else if (key == "export") {
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
      if (item != "obj" && item != "ply" && item != "csv" && item != "none")
        throw ParseError("export formats are obj, ply, csv or none", 1, 1);
    exports = value;
  } else {
    throw ParseError("unknown config key '" + key + "'", 1, 1);
  }
}

void RunConfig::apply_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", n, static_cast<int>(b) + 1);
    auto trim = [](std::string s) {
      const std::size_t l = s.find_first_not_of(" \t\r"), r = s.find_last_not_of(" \t\r");
      return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
    };
    try {
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), n, static_cast<int>(eq) + 1 + e.column());
    }
  }
}

void RunConfig::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_text(ss.str());
}

std::map<std::string, std::string> RunConfig::values() const {
  std::map<std::string, std::string> m;
  m["q"] = q;
  m["grid"] = grid;
  if (a.empty()) m["theta0"] = theta0;
  m["a"] = a;
  m["bc"] = bc;
  m["epsilon"] = epsilon;
  m["vortex_tol"] = format_double(vortex_tol);
  m["closedness_tol"] = format_double(closedness_tol);
  m["check_scale"] = format_double(check_scale);
  m["resample_scale"] = format_double(resample_scale);
  m["seed"] = std::to_string(seed);
  m["out"] = out.empty() ? default_output_dir() : out;
  m["export"] = exports;
  return m;
}

std::string RunConfig::to_text(bool with_out) const {
  std::string s;
  for (const auto& [k, v] : values())
    if (with_out || k != "out") s += k + "=" + v + "\n";
  return s;
}

void RunConfig::validate() const {
  if (!a.empty() && theta0_explicit) throw ParseError("theta0 and a are mutually exclusive", 1, 1);
  const GridSpec spec = GridSpec::parse(grid);
  QuadDifferential::parse(q, spec.q_domain());
  if (!(check_scale <= 1) || !(resample_scale <= 1)) throw ParseError("region scales must lie in (0, 1]", 1, 1);
}

std::string default_output_dir() {
  const char* env = std::getenv("NILGRAPH_OUT");
  return env && *env ? env : "nilgraph_out";
}

RunResult run_build(const RunConfig& cfg, Progress progress) {
  auto say = [progress](const std::string& s) {
    if (progress) progress(s);
  };
  cfg.validate();
  const GridSpec spec = GridSpec::parse(cfg.grid);
  const QuadDifferential Q = QuadDifferential::parse(cfg.q, spec.q_domain());
  const std::string dir = cfg.out.empty() ? default_output_dir() : cfg.out;
  RunResult res;
  Report& rep = res.report;
  Writer out{dir, &res.files};

  VortexOptions vo;
  vo.tol = cfg.vortex_tol;
  vo.bc = cfg.bc == "auto" ? (spec.domain.shape == DomainShape::Disk ? BoundaryPreset::HyperbolicMax
                                                                      : BoundaryPreset::QFlat)
                           : parse_boundary_preset(cfg.bc);
  say("vortex: solving on " + spec.to_string() + " with " + to_string(vo.bc) + " boundary data");
  ConformalFactorField T = stage("vortex", [&] { return solve_vortex(Q, spec, vo); });
  rep.add("vortex.residual", T.residual_norm, cfg.vortex_tol);
  rep.note("vortex.newton_steps", std::to_string(T.newton_steps));
  if (Q.form() == QuadDifferential::Form::Constant && vo.bc == BoundaryPreset::QFlat) {
    // The Dirichlet data is the constant solution itself; integrate against the closed form.
    ConformalFactorField C = closed_form_constant_q(Q(0), spec);
    const Mask all = T.tau0.grid().mask();
    rep.add("vortex.closed_form_match", max_diff(T.tau0, C.tau0, all) / (4 * std::abs(Q(0))), 1e-6);
    T = std::move(C);
  }

  say("l3: integrating structure equations");
  const SpacelikeSurfaceL3 Sh = stage("l3_surfaces", [&] { return integrate_structure(T, Q); });
  const SpacelikeSurfaceL3 Sg = stage("l3_surfaces", [&] { return integrate_structure(T, Q.scaled(-1)); });
  const Mask region = Sh.grid().check_region(cfg.check_scale);
  const CmcReport cmc = check_cmc_half(Sh, region);
  rep.add("l3.mean_curvature", cmc.H_defect, 1e-4);
  rep.add("l3.conformality", cmc.anisotropy, 1e-4);
  rep.add("l3.hopf_match", cmc.hopf_defect, 1e-4);
  rep.add("l3.hopf_holomorphic", cmc.hopf_dbar, 1e-4);
  rep.add("l3.mixed_partial", cmc.mixed_partial, 1e-5);
  rep.add("l3.gauss_unit", cmc.GG_defect, 1e-5);

  say("height: selecting a and h = -<f, a>");
  const Vec3 a = stage("height", [&] {
    if (!cfg.a.empty()) {
      const auto v = parse_numbers("a", cfg.a, 3);
      return Vec3{v[0], v[1], v[2]};
    }
    return select_a(Sh, Sh.grid().domain().center(), parse_complex("theta0", cfg.theta0));
  });
  const Height h = stage("height", [&] { return height_from_a(Sh, a); });
  const SystemAResidual sa = system_A_residual(h.h, T.tau0, Q);
  rep.add("height.system_first", max_norm(sa.first, region), 1e-4);
  rep.add("height.system_second", max_norm(sa.second, region), 1e-4);

  say("nil3: vertical quadrature");
  SisterOptions so;
  so.epsilon = cfg.epsilon == "auto" ? 0 : std::stoi(cfg.epsilon);
  so.closedness_tol = cfg.closedness_tol;
  so.check_scale = cfg.check_scale;
  const GraphNil3 G = stage("sister_nil3", [&] { return build_nil3_from_l3(Sh, a, so); });
  const GridPtr& gp = G.patch.X.grid_ptr();
  const Mask nreg = gp->check_region(cfg.check_scale);
  rep.note("nil3.epsilon", std::to_string(G.epsilon));
  rep.add("nil3.closedness", G.closedness, cfg.closedness_tol);
  rep.add("nil3.loop_audit", G.loop_defect, cfg.closedness_tol);
  rep.add("nil3.angle_relation", max_norm(angle_relation_defect(G.data), nreg), 1e-6);
  rep.add("nil3.mean_curvature", max_norm(G.data.H, nreg), 1e-4);
  const ComplexField Qn = sample(Q, gp);
  rep.add("nil3.ar_match", max_diff(G.Q_AR, Qn, nreg), 1e-4);
  rep.add("nil3.ar_holomorphic", max_norm(dbar_residual(G.Q_AR), nreg), 1e-4);
  rep.add("nil3.projection_metric", projection_metric_check(G.data, nreg, cfg.seed).worst(), 1e-6);
  const Mask rs_region = gp->check_region(cfg.resample_scale);
  const InjectivityReport inj = check_injectivity(G.patch.X, rs_region);
  rep.flag("nil3.injective", inj.injective,
           std::to_string(inj.flipped_cells) + " flipped triangles, boundary " +
               (inj.boundary_simple ? "simple" : "self-intersecting"));
  const std::vector<double> prof = diagonal_u2g_profile(G.data);
  rep.flag("nil3.u2g_growth", strictly_increasing(prof), "diagonal length " + format_double(prof.back()));

  say("nil3: resampling to a Cartesian graph");
  const ResampledGraph R = stage("resample", [&] { return resample_to_graph(G, rs_region, (gp->nx() - 1) / 4 + 1); });
  const Mask rmargin = margin_mask(R.f.grid(), 4);
  const RealField pde = pde_residual_nil3(R.f);
  rep.add("nil3.resampled_pde", max_norm(pde, rmargin), 1e-4);
  rep.add("nil3.resample_inversion", R.inversion_residual, 1e-9);

  const FundamentalData sd = stage("sister", [&] { return sister_data(G.data, SisterDirection::Nil3ToH2R, 1e-3, nreg); });
  rep.add("sister.lambda_u_invariant",
          std::fmax(max_diff(sd.lambda, G.data.lambda, nreg), max_diff(sd.u, G.data.u, nreg)), 0.0);
  const ComplexField sisterQ = ar_differential(SpaceParams::h2xr(), sd);
  rep.add("sister.ar_opposite_data", max_diff(sisterQ, G.Q_AR.map([](const cplx& v) { return -v; }), nreg), 1e-4);

  FieldTable tau_t(T.tau0.grid_ptr());
  tau_t.add("tau0", T.tau0);
  out.table("tau0.field", tau_t);
  FieldTable l3_t(Sh.grid_ptr());
  l3_t.add("f", Sh.f).add("G", Sh.G);
  out.table("l3_surface.field", l3_t);
  FieldTable n_t(gp);
  n_t.add("X", G.patch.X).add("u", G.data.u).add("lambda", G.data.lambda);
  out.table("nil3_graph.field", n_t);
  FieldTable r_t(R.f.grid_ptr());
  r_t.add("f", R.f);
  out.table("nil3_resampled.field", r_t);
  out.mesh(&cfg, "nil3_graph", G.patch.X, {{"u", G.data.u}, {"lambda", G.data.lambda}});
  {
    const FundamentalData rd = fundamental_data(graph_patch(SpaceParams::nil3(), R.f));
    out.mesh(&cfg, "nil3_resampled", graph_positions(R.f), {{"u", rd.u}, {"residual", pde}});
  }
  if (wants(cfg, "csv")) out.text("nil3_resampled.csv", csv_text(r_t));

  say("h2r: horizontal component N");
  try {
    const HorizontalN hn = horizontal_N(Sg.G, Sg.Gz ? *Sg.Gz : d_z(Sg.G), T.tau0, Q, G.hz);
    const SurfaceH2xR psi = stage("h2r_builder", [&] { return build_h2r_surface(hn.N, G.h); });
    const Grid& pg = psi.N.grid();
    const Mask preg = common_region(pg, *gp, cfg.check_scale);
    rep.note("h2r.degenerate_nodes", std::to_string(hn.degenerate));
    rep.add("h2r.mean_curvature", max_norm(mean_defect(psi.data.H, 0.5), preg), 1e-4);
    rep.add("h2r.hyperboloid",
            max_norm(psi.N.map([](const Vec3& n) { return minkowski_inner(n, n) + 1; }), preg), 1e-5);
    rep.add("h2r.ar_match", max_diff(psi.Q_AR, Qn.map([](const cplx& v) { return -v; }), preg), 1e-4);
    rep.add("sister.ar_opposite", max_diff(psi.Q_AR, G.Q_AR.map([](const cplx& v) { return -v; }), preg), 1e-4);
    rep.add("sister.lambda_match",
            max_diff(psi.data.lambda.map([](double l) { return std::log(l); }),
                     G.data.lambda.map([](double l) { return std::log(l); }), preg),
            1e-4);
    rep.add("sister.u_match", max_diff(psi.data.u, G.data.u, preg), 1e-4);
    rep.add("h2r.projection_metric", projection_metric_check(psi.data, preg, cfg.seed).worst(), 1e-6);
    const VecField Gh = stage("gauss_map", [&] { return gauss_map_h2(psi); });
    rep.add("h2r.gauss_map_roundtrip", max_diff(Gh, Sg.G, preg), 1e-4);
    rep.add("h2r.harmonicity", max_norm(harmonicity_residual(Gh), preg), 1e-3);
    const WeierstrassReport w = weierstrass_check(Gh, Q, T.tau0, preg);
    rep.add("h2r.weierstrass_hopf", w.hopf_part, 1e-3);
    rep.add("h2r.weierstrass_trace", w.trace_part, 1e-3);
    rep.add("h2r.gauss_distance_ratio", max_norm(gauss_map_distance_ratio(Q, psi.data), preg), 1.0, true);

    FieldTable h_t(psi.N.grid_ptr());
    h_t.add("N", psi.N).add("h", psi.h).add("u", psi.data.u).add("lambda", psi.data.lambda);
    out.table("h2r_surface.field", h_t);
    out.mesh(&cfg, "h2r_surface", psi.patch.X, {{"u", psi.data.u}, {"residual", mean_defect(psi.data.H, 0.5)}});
  } catch (const DegenerateCase& e) {
    rep.note("h2r.degenerate", e.what());
  }

  out.text("config.txt", cfg.to_text(false));
  res.files.push_back("report.jsonl");
  write_file(join(dir, "report.jsonl"), rep.jsonl());
  return res;
}

RunResult run_vortex(const RunConfig& cfg) {
  cfg.validate();
  const GridSpec spec = GridSpec::parse(cfg.grid);
  const QuadDifferential Q = QuadDifferential::parse(cfg.q, spec.q_domain());
  VortexOptions vo;
  vo.tol = cfg.vortex_tol;
  vo.bc = cfg.bc == "auto" ? (spec.domain.shape == DomainShape::Disk ? BoundaryPreset::HyperbolicMax
                                                                      : BoundaryPreset::QFlat)
                           : parse_boundary_preset(cfg.bc);
  const ConformalFactorField T = stage("vortex", [&] { return solve_vortex(Q, spec, vo); });
  RunResult res;
  const std::string dir = cfg.out.empty() ? default_output_dir() : cfg.out;
  Writer out{dir, &res.files};
  res.report.add("vortex.residual", T.residual_norm, cfg.vortex_tol);
  res.report.note("vortex.newton_steps", std::to_string(T.newton_steps));
  FieldTable t(T.tau0.grid_ptr());
  t.add("tau0", T.tau0);
  out.table("tau0.field", t);
  out.text("config.txt", cfg.to_text(false));
  res.files.push_back("report.jsonl");
  write_file(join(dir, "report.jsonl"), res.report.jsonl());
  return res;
}

Report verify_field_file(const std::string& path, const SpaceParams& space, double check_scale) {
  const FieldTable t = FieldTable::load(path);
  const GridPtr& gp = t.grid();
  const Mask region = gp->check_region(check_scale);
  const bool nil = space.kind() == SpaceKind::Nil3;
  const double H0 = nil ? 0.0 : 0.5;
  Report rep;
  SurfacePatch patch;
  if (t.width() == 1) {
    patch = graph_patch(space, t.column(0));
  } else if (nil && t.width() >= 3) {
    patch.space = space;
    patch.kind = Parameterization::Conformal;
    patch.X = t.vec(0);
  } else if (!nil && t.width() >= 4) {
    const VecField N = t.vec(0);
    const RealField h = t.column(3);
    patch.space = space;
    patch.kind = Parameterization::Conformal;
    patch.X = VecField::generate(gp, [&](int i, int j) {
      const Vec3& n = N(i, j);
      if (!(n.x3 > 0)) throw ParseError("N column is not on the future hyperboloid", 0, 0);
      return Vec3{n.x1 / (1 + n.x3), n.x2 / (1 + n.x3), h(i, j)};
    });
  } else {
    throw ParseError("unrecognized column layout: expected a height column or surface coordinates", 3, 1);
  }
  const FundamentalData d = fundamental_data(patch);
  rep.add("verify.mean_curvature", max_norm(mean_defect(d.H, H0), region), 1e-4);
  rep.add("verify.angle_relation", max_norm(angle_relation_defect(d), region), 1e-6);
  rep.add("verify.projection_metric", projection_metric_check(patch, d, region).worst(), 1e-6);
  if (d.has_p()) {
    const ComplexField q = ar_differential(space, d);
    rep.add("verify.ar_holomorphic", max_norm(dbar_residual(q), region), 1e-4);
    if (nil) {
      const Mask rs = gp->check_region(0.75);
      const InjectivityReport inj = check_injectivity(patch.X, rs);
      rep.flag("verify.injective", inj.injective);
      if (inj.injective) {
        const ResampledGraph R = resample_to_graph(patch.X, rs, (gp->nx() - 1) / 4 + 1);
        rep.add("verify.resampled_pde", max_norm(pde_residual_nil3(R.f), margin_mask(R.f.grid(), 4)), 1e-4);
      }
    }
  } else {
    rep.note("verify.ar_holomorphic", "graph coordinates are not conformal; differential not evaluated");
    if (nil) rep.add("verify.pde", max_norm(pde_residual_nil3(t.column(0)), mask_and(region, margin_mask(*gp, 2))), 1e-4);
  }
  return rep;
}

RunResult run_demo(const std::string& name, double c, const std::string& out_dir) {
  RunResult res;
  Report& rep = res.report;
  Writer out{out_dir, &res.files};
  const GridPtr box = Grid::rect(-2, 2, -2, 2, 129, 129);
  const Mask interior = margin_mask(*box, 2);

  auto graph_demo = [&](const AnalyticGraph& g, const std::string& stem) {
    const SurfacePatch P = g.patch(box);
    const FundamentalData d = fundamental_data(P);
    const RealField f = g.height(box);
    const RealField r_an = pde_residual_nil3(g, box);
    rep.add("demo.pde_analytic", max_norm(r_an), 1e-10);
    rep.add("demo.pde_differences", max_norm(pde_residual_nil3(f), interior), 1e-6);
    rep.add("demo.mean_curvature", max_norm(d.H), 1e-10);
    rep.add("demo.angle_relation", max_norm(angle_relation_defect(d)), 1e-10);
    rep.add("demo.projection_metric", projection_metric_check(P, d, box->mask()).worst(), 1e-8);
    std::vector<double> lengths;
    for (double r : {0.5, 1.0, 1.5, 2.0})
      lengths.push_back(u2g_path_length(g, [](double t) { return cplx(t, t) / std::sqrt(2.0); },
                                        [](double) { return cplx(1, 1) / std::sqrt(2.0); }, 0.0, r));
    rep.flag("demo.u2g_growth", strictly_increasing(lengths), "diagonal length at radius 2: " +
                                                                  format_double(lengths.back()));
    FieldTable t(box);
    t.add("f", f);
    out.table(stem + ".field", t);
    out.mesh(nullptr, stem, P.X, {{"u", d.u}, {"residual", r_an}});
  };

  if (name == "saddle") {
    graph_demo(saddle_family(c), "saddle");
  } else if (name == "umbrella") {
    graph_demo(linear_graph(c, 0.5 * c), "umbrella");
  } else if (name == "cylinder") {
    const SpacelikeSurfaceL3 s = hyperbolic_cylinder(box);
    const CmcReport r = check_cmc_half(s, box->mask());
    rep.add("demo.mean_curvature", r.H_defect, 1e-8);
    rep.add("demo.conformality", r.anisotropy, 1e-8);
    rep.add("demo.hopf_modulus", std::fmax(std::fabs(r.hopf_modulus_min - 0.25), std::fabs(r.hopf_modulus_max - 0.25)),
            1e-8);
    rep.add("demo.gauss_unit", r.GG_defect, 1e-12);
    FieldTable t(box);
    t.add("f", s.f).add("G", s.G);
    out.table("cylinder.field", t);
    out.mesh(nullptr, "cylinder", s.f, {});
  } else if (name == "counterexample") {
    const AnalyticGraph g = h2r_counterexample();
    double on_axis = 0;
    for (double t = 0; t < 1; t += 1.0 / 64) on_axis = std::fmax(on_axis, std::fabs(g.jet(t, 0).f));
    rep.add("demo.alpha_on_axis", on_axis, 0.0);
    const double L3 = counterexample_alpha_length(0.999), L4 = counterexample_alpha_length(0.9999);
    rep.add("demo.u2g_tail", std::fabs(L4 - L3) / L3, 1e-3)
        .note = "alpha has finite u2g length, about " + format_double(L4);
    GridSpec spec = GridSpec::disk(0.9, 129);
    const GridPtr dg = make_vortex_grid(spec).grid;
    const RealField f = g.height(dg);
    FieldTable t(dg);
    t.add("x3", f);
    out.table("counterexample.field", t);
    out.mesh(nullptr, "counterexample", graph_positions(f), {});
  } else {
    throw Error("unknown demo '" + name + "' (saddle, umbrella, cylinder, counterexample)");
  }
  res.files.push_back("report.jsonl");
  write_file(join(out_dir, "report.jsonl"), rep.jsonl());
  return res;
}

void export_field_file(const std::string& in, const std::string& format, const std::string& out, bool poincare) {
  const FieldTable t = FieldTable::load(in);
  VecField X = t.width() >= 3 ? t.vec(0) : graph_positions(t.column(0));
  if (poincare) {
    if (t.width() < 4) throw Error("--poincare needs N1 N2 N3 h columns");
    const RealField h = t.column(3);
    X = VecField::generate(t.grid(), [&](int i, int j) {
      const Vec3 n = X(i, j);
      return Vec3{n.x1 / (1 + n.x3), n.x2 / (1 + n.x3), h(i, j)};
    });
  }
  std::ostringstream os;
  if (format == "obj") {
    write_obj(os, X);
  } else if (format == "ply") {
    std::vector<MeshScalars> s;
    for (std::size_t k = t.width() >= 3 ? 3 : 1; k < t.width(); ++k) s.push_back({t.names()[k], t.column(k)});
    write_ply(os, X, s);
  } else if (format == "csv") {
    os << csv_text(t);
  } else {
    throw Error("unknown export format '" + format + "' (obj, ply, csv)");
  }
  write_file(out, os.str());
}

}  // namespace nilgraph
