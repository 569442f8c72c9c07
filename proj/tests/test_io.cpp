#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "nilgraph/error.hpp"
#include "nilgraph/io.hpp"
#include "nilgraph/pipeline.hpp"
#include "nilgraph/report.hpp"
#include "nilgraph/verifier.hpp"
#include "nilgraph/vortex.hpp"

using namespace nilgraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "nilgraph_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("field table round trip") {
    const GridPtr g = make_vortex_grid(GridSpec::disk(0.9, 17)).grid;
    const RealField a = RealField::generate(g, [&](int i, int j) { return std::sin(g->x(i)) / 3 + g->y(j) * 1e-300; });
    const ComplexField c = ComplexField::generate(g, [&](int i, int j) { return g->z(i, j) / 7.0; });
    const VecField v = VecField::generate(g, [&](int i, int j) { return Vec3{g->x(i), M_PI, std::exp(g->y(j))}; });
    FieldTable t(g);
    t.add("a", a).add("c", c).add("v", v);
    std::stringstream ss;
    t.write(ss);
    const FieldTable r = FieldTable::read(ss);
    CHECK(r.width() == 6);
    CHECK(r.names() == std::vector<std::string>{"a", "c.re", "c.im", "v1", "v2", "v3"});
    CHECK(r.grid()->domain().shape == DomainShape::Disk);
    CHECK(r.grid()->mask() == g->mask());
    const RealField ra = r.column(0);
    const VecField rv = r.vec(3);
    for (int j = 0; j < g->ny(); ++j)
      for (int i = 0; i < g->nx(); ++i)
        if (g->active(i, j)) {
          CHECK(ra(i, j) == a(i, j));
          CHECK(rv(i, j).x3 == v(i, j).x3);
        }
  }

  TEST_CASE("malformed field files") {
    const GridPtr g = Grid::rect(0, 1, 0, 1, 4, 3);
    FieldTable t(g);
    t.add("f", RealField::generate(g, [](int i, int j) { return i + 10.0 * j; }));
    std::stringstream ss;
    t.write(ss);
    const std::string full = ss.str();

    std::string cut = full.substr(0, full.rfind('\n', full.size() - 2) + 1);
    std::istringstream in(cut);
    try {
      FieldTable::read(in);
      FAIL("truncated file was accepted");
    } catch (const ParseError& e) {
      CHECK(e.line() > 0);
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }

    std::string bad = full;
    bad.replace(bad.rfind(" 21"), 3, " zz");
    std::istringstream in2(bad);
    CHECK_THROWS_AS(FieldTable::read(in2), ParseError);

    std::istringstream in3("# field-v2\n");
    CHECK_THROWS_AS(FieldTable::read(in3), ParseError);
  }

  TEST_CASE("mesh writers") {
    const GridPtr g = Grid::rect(0, 1, 0, 1, 3, 3);
    const VecField X = VecField::generate(g, [&](int i, int j) { return Vec3{g->x(i), g->y(j), 0}; });
    std::stringstream obj;
    write_obj(obj, X);
    int vs = 0, fs_ = 0;
    std::string line;
    while (std::getline(obj, line)) {
      if (line.rfind("v ", 0) == 0) ++vs;
      if (line.rfind("f ", 0) == 0) ++fs_;
    }
    CHECK(vs == 9);
    CHECK(fs_ == 8);
    std::stringstream ply;
    write_ply(ply, X, {{"u", RealField::generate(g, [](int, int) { return 1.0; })}});
    const std::string p = ply.str();
    CHECK(p.rfind("ply\n", 0) == 0);
    CHECK(p.find("element vertex 9") != std::string::npos);
    CHECK(p.find("element face 8") != std::string::npos);
    CHECK(p.find("property double u") != std::string::npos);
  }

  TEST_CASE("report lines") {
    Report r;
    r.add("a", 1e-7, 1e-6);
    r.add("b", 1.0, 1.0, true);
    r.add("c", std::nan(""), 1.0);
    r.note("d", "info");
    CHECK_FALSE(r.all_pass());
    CHECK(r.find("a")->pass);
    CHECK_FALSE(r.find("b")->pass);
    CHECK_FALSE(r.find("c")->pass);
    std::istringstream lines(r.jsonl());
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
      const auto j = nlohmann::json::parse(line);
      CHECK(j.contains("name"));
      if (j["name"] == "d") CHECK(j["pass"] == true);
      ++n;
    }
    CHECK(n == 4);
    CHECK(r.summary().find("1/3 checks passed") != std::string::npos);
  }

  TEST_CASE("config parsing") {
    RunConfig c;
    c.apply_text("# comment\nq = const:0.25,0\n\ngrid=rect:-4,4,-4,4,65  # trailing\nseed=3\n");
    CHECK(c.q == "const:0.25,0");
    CHECK(c.grid == "rect:-4,4,-4,4,65");
    CHECK(c.seed == 3);
    CHECK_NOTHROW(c.validate());

    RunConfig back;
    back.apply_text(c.to_text());
    CHECK(back.to_text() == c.to_text());
    CHECK(c.to_text(false).find("out=") == std::string::npos);

    try {
      RunConfig bad;
      bad.apply_text("q=const:1,0\nfrobnicate=1\n");
      FAIL("unknown key accepted");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(RunConfig().apply_text("justtext"), ParseError);
    CHECK_THROWS_AS(RunConfig().apply_text("epsilon=2"), ParseError);
    CHECK_THROWS_AS(RunConfig().apply_text("vortex_tol=-1"), ParseError);
    CHECK_THROWS_AS(RunConfig().apply_text("export=stl"), ParseError);
    CHECK_THROWS_AS(RunConfig().apply_text("bc=dirichlet"), Error);

    RunConfig both;
    both.apply_text("theta0=0.5,0\na=0,0,1");
    CHECK_THROWS_AS(both.validate(), ParseError);
    RunConfig zero;
    zero.apply_text("q=const:0,0\ngrid=rect:-1,1,-1,1,33");
    CHECK_THROWS_AS(zero.validate(), DomainError);
  }

  TEST_CASE("verify catches a noisy saddle") {
    const fs::path dir = scratch("verify");
    const GridPtr g = Grid::rect(-2, 2, -2, 2, 129, 129);
    const RealField f = saddle_family(1).height(g);
    FieldTable clean(g);
    clean.add("f", f);
    clean.save((dir / "clean.field").string());
    CHECK(verify_field_file((dir / "clean.field").string(), SpaceParams::nil3()).all_pass());

    std::mt19937 rng(2);
    std::uniform_real_distribution<double> n(-1e-2, 1e-2);
    FieldTable noisy(g);
    noisy.add("f", f.map([&](double v) { return v + n(rng); }));
    noisy.save((dir / "noisy.field").string());
    const Report r = verify_field_file((dir / "noisy.field").string(), SpaceParams::nil3());
    CHECK_FALSE(r.all_pass());
  }

  TEST_CASE("demos") {
    const fs::path dir = scratch("demos");
    for (const char* name : {"saddle", "umbrella", "cylinder", "counterexample"}) {
      CAPTURE(name);
      const RunResult r = run_demo(name, 1.0, (dir / name).string());
      CHECK(r.report.all_pass());
      CHECK(fs::exists(dir / name / "report.jsonl"));
    }
    CHECK_THROWS(run_demo("torus", 1.0, (dir / "x").string()));
  }

  TEST_CASE("export round trip") {
    const fs::path dir = scratch("export");
    run_demo("saddle", 0.5, dir.string());
    bool found = false;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".field") {
        found = true;
        export_field_file(e.path().string(), "csv", (dir / "out.csv").string(), false);
        const std::string csv = slurp(dir / "out.csv");
        CHECK(csv.find('\n') != std::string::npos);
        export_field_file(e.path().string(), "obj", (dir / "out.obj").string(), false);
        CHECK(slurp(dir / "out.obj").find("\nf ") != std::string::npos);
        break;
      }
    CHECK(found);
  }

  TEST_CASE("zero Q on the plane is rejected by build") {
    RunConfig c;
    c.apply_text("q=const:0,0\ngrid=rect:-4,4,-4,4,33");
    c.out = scratch("zero").string();
    CHECK_THROWS_AS(run_build(c), DomainError);
  }
}
