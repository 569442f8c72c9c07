#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "nilgraph/error.hpp"
#include "nilgraph/vortex.hpp"

using namespace nilgraph;

namespace {

double liouville(cplx z) {
  const double d = 1 - std::norm(z);
  return 16 / (d * d);
}

double max_rel_error(const RealField& t, double (*exact)(cplx), const Mask& region) {
  double m = 0;
  const Grid& g = t.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (region[g.index(i, j)] && g.active(i, j)) {
        const double e = exact(g.z(i, j));
        m = std::fmax(m, std::fabs(t(i, j) - e) / e);
      }
  return m;
}

}  // namespace

TEST_SUITE("vortex_solver") {
  TEST_CASE("grid specs") {
    const GridSpec r = GridSpec::parse("rect:-4,4,-2,2,65");
    CHECK(r.domain.shape == DomainShape::Rect);
    CHECK(r.nx == 65);
    CHECK(r.ny == 33);
    const GridSpec d = GridSpec::parse("disk:0.9,129");
    CHECK(d.domain.radius == 0.9);
    CHECK(d.q_domain() == QDomain::Disk);
    CHECK(GridSpec::parse(d.to_string()).to_string() == d.to_string());
    CHECK_THROWS_AS(GridSpec::parse("disk:1.2,65"), Error);
    CHECK_THROWS_AS(GridSpec::parse("rect:1,0,0,1,65"), Error);
    CHECK_THROWS_AS(GridSpec::parse("torus:1"), Error);
  }

  TEST_CASE("boundary presets") {
    const auto quarter = QuadDifferential::constant(0.25);
    CHECK(preset_tau0(BoundaryPreset::QFlat, quarter, cplx(1, 2)) == doctest::Approx(1.0));
    const auto zero = QuadDifferential::polynomial({0.0}, QDomain::Disk);
    CHECK(preset_tau0(BoundaryPreset::AsymptoticHyperbolic, zero, 0.0) == doctest::Approx(16.0));
    CHECK(preset_tau0(BoundaryPreset::AsymptoticHyperbolic, zero, 0.5) == doctest::Approx(256.0 / 9.0));
    CHECK(parse_boundary_preset(to_string(BoundaryPreset::HyperbolicMax)) == BoundaryPreset::HyperbolicMax);
    CHECK_THROWS_AS(parse_boundary_preset("neumann"), Error);
  }

  TEST_CASE("closed forms") {
    const auto c = closed_form_constant_q(0.25, GridSpec::rect(-4, 4, -4, 4, 33));
    for (double v : c.tau0.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    const auto z = closed_form_zero_q_disk(GridSpec::disk(0.9, 65));
    CHECK(z.tau0(32, 32) == doctest::Approx(16.0));
    CHECK(max_norm(closed_form_residual(z)) <= 1e-9);
  }

  TEST_CASE("residual of constant fields") {
    const GridPtr g = Grid::rect(-1, 1, -1, 1, 33, 33);
    const RealField one = RealField::generate(g, [](int, int) { return 1.0; });
    CHECK(max_norm(vortex_residual(one, QuadDifferential::constant(0.25))) <= 1e-14);
    const RealField r = vortex_residual(one, QuadDifferential::polynomial({0.0}, QDomain::Disk));
    for (double v : r.values()) CHECK(std::fabs(v) == doctest::Approx(0.125).epsilon(1e-12));
  }

  TEST_CASE("discrete residual of the Liouville solution") {
    const GridSpec spec = GridSpec::disk(0.9, 129);
    const GridPtr g = make_vortex_grid(spec).grid;
    const RealField t = RealField::generate(g, [&](int i, int j) { return liouville(g->z(i, j)); });
    const RealField r = vortex_residual(t, QuadDifferential::polynomial({0.0}, QDomain::Disk));
    CHECK(max_norm(r, g->check_region(0.75)) <= 1e-4);
  }

  TEST_CASE("constant Q recovers tau0 = 4|Q|") {
    VortexOptions o;
    o.bc = BoundaryPreset::QFlat;
    const auto T = solve_vortex(QuadDifferential::constant(0.25), GridSpec::rect(-4, 4, -4, 4, 129), o);
    CHECK(T.residual_norm <= o.tol);
    for (double v : T.tau0.values()) CHECK(std::fabs(v - 1.0) <= 1e-6);
  }

  TEST_CASE("zero Q on the 0.9 disk recovers the Liouville solution") {
    VortexOptions o;
    o.bc = BoundaryPreset::AsymptoticHyperbolic;
    double err[2];
    int k = 0;
    for (int n : {65, 129}) {
      const auto T = solve_vortex(QuadDifferential::polynomial({0.0}, QDomain::Disk), GridSpec::disk(0.9, n), o);
      err[k++] = max_rel_error(T.tau0, liouville, T.tau0.grid().mask());
      CHECK(T.residual_norm <= o.tol);
    }
    CHECK(err[1] <= 1e-4);
    // at least second order under refinement
    CHECK(err[0] / err[1] >= 4.0);
  }

  TEST_CASE("Q = z on the 0.8 disk stays above 4|Q|") {
    VortexOptions o;
    o.bc = BoundaryPreset::HyperbolicMax;
    const auto Q = QuadDifferential::polynomial({0.0, 1.0}, QDomain::Disk);
    const auto T = solve_vortex(Q, GridSpec::disk(0.8, 129), o);
    CHECK(T.residual_norm <= o.tol);
    const Grid& g = T.tau0.grid();
    double worst = 0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (g.active(i, j)) worst = std::fmax(worst, 4 * std::abs(Q(g.z(i, j))) - T.tau0(i, j));
    CHECK(worst <= o.tol);
  }

  TEST_CASE("initialization independence") {
    const auto Q = QuadDifferential::polynomial({0.0, 1.0}, QDomain::Disk);
    const GridSpec spec = GridSpec::disk(0.8, 65);
    VortexOptions a;
    a.bc = BoundaryPreset::HyperbolicMax;
    a.init = InitialGuess::HarmonicExtension;
    VortexOptions b = a;
    b.init = InitialGuess::QFlat;
    b.init_shift = 1.5;
    const auto Ta = solve_vortex(Q, spec, a), Tb = solve_vortex(Q, spec, b);
    const Mask& m = Ta.tau0.grid().mask();
    const RealField la = Ta.tau0.map([](double t) { return std::log(t); });
    const RealField lb = Tb.tau0.map([](double t) { return std::log(t); });
    CHECK(fixtures::max_diff(la, lb, m) <= 10 * a.tol);
  }

  TEST_CASE("solver diagnostics") {
    VortexOptions o;
    o.max_newton = 0;
    CHECK_THROWS_AS(solve_vortex(QuadDifferential::polynomial({0.0, 1.0}, QDomain::Disk), GridSpec::disk(0.8, 33), o),
                    ConvergenceError);
    VortexOptions bad;
    bad.boundary_tau0 = [](cplx) { return -1.0; };
    CHECK_THROWS_AS(solve_vortex(QuadDifferential::constant(0.25), GridSpec::rect(-1, 1, -1, 1, 17), bad), DomainError);
  }
}
