#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "nilgraph/error.hpp"
#include "nilgraph/pipeline.hpp"

using namespace nilgraph;

namespace {

void progress(const std::string& s) { std::fprintf(stderr, "[nilgraph] %s\n", s.c_str()); }

int finish(const RunResult& r, const std::string& dir, bool quiet) {
  if (!quiet) std::cout << r.report.summary();
  std::cout << "wrote " << r.files.size() << " files to " << dir << '\n';
  return r.report.all_pass() ? 0 : 1;
}

// Config file first, then explicit flags, then --set overrides.
struct ConfigFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::string q, grid, theta0, a, bc, epsilon, out, exports;

  void attach(CLI::App* app, bool full) {
    app->add_option("--config", config_file, "key=value file")->check(CLI::ExistingFile);
    app->add_option("--q", q, "quadratic differential: const:re,im | poly:c0re,c0im;... | rat:<poly>/<poly>");
    app->add_option("--grid", grid, "rect:x0,x1,y0,y1,n | disk:rho,n");
    app->add_option("--bc", bc, "auto | asymptotic-hyperbolic | qflat | hyperbolic-max");
    app->add_option("--out", out, "output directory (default $NILGRAPH_OUT or nilgraph_out)");
    if (full) {
      app->add_option("--theta0", theta0, "family parameter re,im");
      app->add_option("--a", a, "explicit unit timelike a1,a2,a3 (excludes --theta0)");
      app->add_option("--epsilon", epsilon, "auto | 1 | -1");
      app->add_option("--export", exports, "comma list of obj, ply, csv or none");
    }
    app->add_option("--set", sets, "extra key=value overrides");
  }

  RunConfig build() const {
    RunConfig cfg;
    if (!config_file.empty()) cfg.apply_file(config_file);
    const std::pair<const char*, const std::string*> flags[] = {
        {"q", &q}, {"grid", &grid}, {"theta0", &theta0}, {"a", &a}, {"bc", &bc}, {"epsilon", &epsilon},
        {"out", &out}, {"export", &exports}};
    for (const auto& [k, v] : flags)
      if (!v->empty()) cfg.set(k, *v);
    for (const auto& s : sets) cfg.apply_text(s);
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal graphs in Nil3 from H = 1/2 spacelike surfaces in L3"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress and the check summary");

  ConfigFlags build_flags, vortex_flags;
  bool print_config = false;
  CLI::App* build = app.add_subcommand("build", "run the full pipeline and write artifacts plus a report");
  build_flags.attach(build, true);
  build->add_flag("--print-config", print_config, "print the resolved configuration and exit");

  CLI::App* vortex = app.add_subcommand("vortex", "solve for the conformal factor only");
  vortex_flags.attach(vortex, false);
  bool print_vortex_config = false;
  vortex->add_flag("--print-config", print_vortex_config, "print the resolved configuration and exit");

  std::string verify_path, verify_space = "nil3";
  double verify_scale = 0.5;
  CLI::App* verify = app.add_subcommand("verify", "check a field-v1 surface file");
  verify->add_option("file", verify_path, "field-v1 file")->required();
  verify->add_option("--space", verify_space, "nil3 | h2xr")->check(CLI::IsMember({"nil3", "h2xr"}));
  verify->add_option("--check-scale", verify_scale, "interior region scale")->check(CLI::Range(0.05, 1.0));

  std::string demo_name, demo_out;
  double demo_c = 1.0;
  CLI::App* demo = app.add_subcommand("demo", "closed-form fixtures with reports");
  demo->add_option("name", demo_name, "saddle | umbrella | cylinder | counterexample")
      ->required()
      ->check(CLI::IsMember({"saddle", "umbrella", "cylinder", "counterexample"}));
  demo->add_option("--c", demo_c, "saddle parameter, or umbrella slope");
  demo->add_option("--out", demo_out, "output directory");

  std::string ex_in, ex_format = "obj", ex_out;
  bool ex_poincare = false;
  CLI::App* exp = app.add_subcommand("export", "convert a field-v1 file to a mesh or csv");
  exp->add_option("file", ex_in, "field-v1 file")->required()->check(CLI::ExistingFile);
  exp->add_option("--format", ex_format, "obj | ply | csv")->check(CLI::IsMember({"obj", "ply", "csv"}));
  exp->add_option("--out", ex_out, "output path")->required();
  exp->add_flag("--poincare", ex_poincare, "first columns are hyperboloid N followed by h");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      const RunConfig cfg = build_flags.build();
      if (print_config) {
        std::cout << cfg.to_text();
        return 0;
      }
      const RunResult r = run_build(cfg, quiet ? nullptr : progress);
      return finish(r, cfg.out.empty() ? default_output_dir() : cfg.out, quiet);
    }
    if (*vortex) {
      const RunConfig cfg = vortex_flags.build();
      if (print_vortex_config) {
        std::cout << cfg.to_text();
        return 0;
      }
      return finish(run_vortex(cfg), cfg.out.empty() ? default_output_dir() : cfg.out, quiet);
    }
    if (*verify) {
      const SpaceParams space = verify_space == "nil3" ? SpaceParams::nil3() : SpaceParams::h2xr();
      const Report r = verify_field_file(verify_path, space, verify_scale);
      std::cout << r.jsonl();
      if (!quiet) std::cerr << r.summary();
      return r.all_pass() ? 0 : 1;
    }
    if (*demo) {
      const std::string dir = demo_out.empty() ? default_output_dir() : demo_out;
      return finish(run_demo(demo_name, demo_c, dir), dir, quiet);
    }
    if (*exp) {
      export_field_file(ex_in, ex_format, ex_out, ex_poincare);
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
