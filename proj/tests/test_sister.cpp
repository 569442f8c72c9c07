#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "fixtures.hpp"
#include "nilgraph/error.hpp"
#include "nilgraph/sister.hpp"
#include "nilgraph/verifier.hpp"

using namespace nilgraph;

namespace {

FundamentalData constant_data(const GridPtr& g, double lambda, double u, double H, cplx p, cplx A) {
  FundamentalData d;
  d.lambda = RealField::generate(g, [&](int, int) { return lambda; });
  d.u = RealField::generate(g, [&](int, int) { return u; });
  d.H = RealField::generate(g, [&](int, int) { return H; });
  d.p = ComplexField::generate(g, [&](int, int) { return p; });
  d.A = ComplexField::generate(g, [&](int, int) { return A; });
  return d;
}

}  // namespace

TEST_SUITE("sister_nil3") {
  TEST_CASE("sister data transform") {
    const GridPtr g = Grid::rect(-1, 1, -1, 1, 9, 9);
    const FundamentalData d = constant_data(g, 1, 1, 0, cplx(0, 0.25), 0.0);
    const FundamentalData s = sister_data(d, SisterDirection::Nil3ToH2R);
    CHECK(s.lambda(4, 4) == 1.0);
    CHECK(s.u(4, 4) == 1.0);
    CHECK(s.H(4, 4) == 0.5);
    CHECK(std::abs(s.p(4, 4) - 0.25) < 1e-15);
    CHECK(std::abs(s.A(4, 4)) == 0.0);

    const FundamentalData back = sister_data(s, SisterDirection::H2RToNil3);
    CHECK(back.H(4, 4) == 0.0);
    CHECK(std::abs(back.p(4, 4) - cplx(0, 0.25)) < 1e-15);

    const FundamentalData g2 = constant_data(g, 2, 0.6, 0, cplx(0.1, 0.2), cplx(0.3, -0.4));
    const FundamentalData rt = sister_data(sister_data(g2, SisterDirection::Nil3ToH2R), SisterDirection::H2RToNil3);
    CHECK(std::abs(rt.A(0, 0) - g2.A(0, 0)) < 1e-15);
    CHECK(std::abs(rt.p(0, 0) - g2.p(0, 0)) < 1e-15);

    CHECK_THROWS_AS(sister_data(d, SisterDirection::H2RToNil3), DomainError);
  }

  TEST_CASE("AR differentials of sisters are opposite") {
    const GridPtr g = Grid::rect(-1, 1, -1, 1, 9, 9);
    const FundamentalData d = constant_data(g, 2, 0.6, 0, cplx(0.1, 0.2), cplx(0.3, -0.4));
    const ComplexField qn = ar_differential(SpaceParams::nil3(), d);
    const ComplexField qh = ar_differential(SpaceParams::h2xr(), sister_data(d, SisterDirection::Nil3ToH2R));
    const cplx i(0, 1), p(0.1, 0.2), A(0.3, -0.4);
    CHECK(std::abs(qn(3, 3) - (i * p + A * A)) < 1e-15);
    CHECK(std::abs(qh(3, 3) + qn(3, 3)) < 1e-15);
  }

  TEST_CASE("cumulative quadrature") {
    const int n = 65;
    const double h = 2.0 / (n - 1);
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = std::cos(-1 + h * k);
    const auto I = cumulative_integral(g, 32, h);
    double worst = 0;
    for (int k = 0; k < n; ++k) worst = std::fmax(worst, std::fabs(I[k] - std::sin(-1 + h * k)));
    CHECK(worst <= 1e-7);
  }

  TEST_CASE("Q = z graph") {
    const auto& run = fixtures::linear_q_run();
    const GraphNil3& G = run.G;
    const Mask region = G.patch.X.grid().check_region(0.5);
    CHECK(G.closedness <= 1e-5);
    CHECK(G.loop_defect <= 1e-5);
    CHECK(max_norm(angle_relation_defect(G.data), region) <= 1e-6);
    CHECK(max_norm(G.data.H, region) <= 1e-4);
    const ComplexField Qn = sample(run.Q, G.patch.X.grid_ptr());
    double worst = 0;
    for (std::size_t k = 0; k < Qn.values().size(); ++k)
      if (region[k] && G.patch.X.grid().mask()[k]) worst = std::fmax(worst, std::abs(G.Q_AR.values()[k] - Qn.values()[k]));
    CHECK(worst <= 1e-4);
    CHECK(max_norm(dbar_residual(G.Q_AR), region) <= 1e-4);
    CHECK(check_injectivity(G.patch.X, G.patch.X.grid().check_region(0.75)).injective);
  }

  TEST_CASE("epsilon choice") {
    const auto& run = fixtures::linear_q_run();
    SisterOptions o;
    o.epsilon = -run.G.epsilon;
    CHECK_THROWS_AS(build_nil3_from_l3(run.Sh, run.a, o), IntegrabilityError);
    CHECK_THROWS_AS(build_nil3_from_l3(run.Sh, {0, 0, -1}), DomainError);
  }

  TEST_CASE("umbrella: Q = 0 gives a non-vertical plane") {
    const auto& run = fixtures::zero_q_run();
    const GraphNil3& G = run.G;
    const Mask region = G.patch.X.grid().check_region(0.5);
    CHECK(max_norm(G.Q_AR, region) <= 1e-4);

    const ResampledGraph R = resample_to_graph(G, G.patch.X.grid().check_region(0.75), 33);
    const Grid& g = R.f.grid();
    Eigen::MatrixXd M(g.size(), 3);
    Eigen::VectorXd b(g.size());
    int rows = 0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!g.active(i, j)) continue;
        M.row(rows) << 1, g.x(i), g.y(j);
        b[rows++] = R.f(i, j);
      }
    REQUIRE(rows > 100);
    const Eigen::VectorXd c = M.topRows(rows).colPivHouseholderQr().solve(b.head(rows));
    CHECK((M.topRows(rows) * c - b.head(rows)).cwiseAbs().maxCoeff() <= 1e-4);
  }

  TEST_CASE("resample the identity projection") {
    const GridPtr g = Grid::rect(-1, 1, -1, 1, 33, 33);
    const VecField X = VecField::generate(g, [&](int i, int j) {
      const double x = g->x(i), y = g->y(j);
      return Vec3{x, y, x * y / 2};
    });
    const ResampledGraph R = resample_to_graph(X, g->mask(), 17);
    const Grid& rg = R.f.grid();
    double worst = 0;
    for (int j = 0; j < rg.ny(); ++j)
      for (int i = 0; i < rg.nx(); ++i)
        if (rg.active(i, j)) worst = std::fmax(worst, std::fabs(R.f(i, j) - rg.x(i) * rg.y(j) / 2));
    CHECK(worst <= 1e-12);
    CHECK(max_norm(pde_residual_nil3(R.f)) <= 1e-10);
  }

  TEST_CASE("folded projection is rejected") {
    const GridPtr g = Grid::rect(-1, 1, -1, 1, 33, 33);
    const VecField X = VecField::generate(g, [&](int i, int j) {
      const double x = g->x(i), y = g->y(j);
      return Vec3{x * x, y, 0.0};
    });
    const InjectivityReport r = check_injectivity(X, g->mask());
    CHECK_FALSE(r.injective);
    CHECK(r.flipped_cells > 0);
    CHECK_THROWS_AS(resample_to_graph(X, g->mask(), 17), FoldError);
  }

  TEST_CASE("loop audit") {
    const GridPtr g = Grid::rect(-1, 1, -1, 1, 65, 65);
    // exact form d(x^2 y) and the non-closed form -y dx + x dy
    const RealField px = RealField::generate(g, [&](int i, int j) { return 2 * g->x(i) * g->y(j); });
    const RealField py = RealField::generate(g, [&](int i, int) { return g->x(i) * g->x(i); });
    CHECK(loop_audit(px, py, g->mask(), 1, 32) <= 1e-12);
    const RealField qx = RealField::generate(g, [&](int, int j) { return -g->y(j); });
    const RealField qy = RealField::generate(g, [&](int i, int) { return g->x(i); });
    CHECK(loop_audit(qx, qy, g->mask(), 1, 32) > 1e-2);
  }

  TEST_CASE("margin mask") {
    const GridPtr g = Grid::rect(0, 1, 0, 1, 11, 11);
    const Mask m = margin_mask(*g, 2);
    CHECK(mask_count(m) == 49);
  }
}
