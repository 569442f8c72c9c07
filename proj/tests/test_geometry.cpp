#include <array>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "nilgraph/error.hpp"
#include "nilgraph/minkowski.hpp"
#include "nilgraph/space.hpp"
#include "nilgraph/surface.hpp"
#include "nilgraph/verifier.hpp"

using namespace nilgraph;

namespace {

// Nil3 metric written straight from the line element.
Eigen::Matrix3d nil_metric(const Eigen::Vector3d& p) {
  const Eigen::Vector3d w(p.y() / 2, -p.x() / 2, 1.0);
  Eigen::Matrix3d g = w * w.transpose();
  g(0, 0) += 1;
  g(1, 1) += 1;
  return g;
}

// Gamma^k_ij from central differences of the metric.
std::array<Eigen::Matrix3d, 3> nil_christoffel(const Eigen::Vector3d& p) {
  const double h = 1e-4;
  std::array<Eigen::Matrix3d, 3> dg;
  for (int l = 0; l < 3; ++l) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[l] = h;
    dg[l] = (nil_metric(p + e) - nil_metric(p - e)) / (2 * h);
  }
  const Eigen::Matrix3d ginv = nil_metric(p).inverse();
  std::array<Eigen::Matrix3d, 3> G;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int l = 0; l < 3; ++l) s += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        G[k](i, j) = 0.5 * s;
      }
  return G;
}

// Mean curvature of the graph z = f(x, y) with upward normal, one point.
double brute_force_H(const GraphJet& jet, double x, double y) {
  const Eigen::Vector3d p(x, y, jet.f);
  const Eigen::Vector3d Xx(1, 0, jet.fx), Xy(0, 1, jet.fy);
  const Eigen::Vector3d Xxx(0, 0, jet.fxx), Xxy(0, 0, jet.fxy), Xyy(0, 0, jet.fyy);
  const Eigen::Matrix3d g = nil_metric(p);
  Eigen::Vector3d eta = g.inverse() * Xx.cross(Xy);
  eta /= std::sqrt(eta.dot(g * eta));
  if (eta.dot(g * Eigen::Vector3d(0, 0, 1)) < 0) eta = -eta;
  const auto Gam = nil_christoffel(p);
  auto nabla = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& ab) {
    Eigen::Vector3d r = ab;
    for (int k = 0; k < 3; ++k) r[k] += a.dot(Gam[k] * b);
    return r;
  };
  Eigen::Matrix2d I, II;
  I << Xx.dot(g * Xx), Xx.dot(g * Xy), Xy.dot(g * Xx), Xy.dot(g * Xy);
  II << nabla(Xx, Xx, Xxx).dot(g * eta), nabla(Xx, Xy, Xxy).dot(g * eta), nabla(Xy, Xx, Xxy).dot(g * eta),
      nabla(Xy, Xy, Xyy).dot(g * eta);
  return 0.5 * (I.inverse() * II).trace();
}

}  // namespace

TEST_SUITE("geometry_core") {
  TEST_CASE("minkowski inner product") {
    CHECK(minkowski_inner(Vec3{0, 0, 1}, Vec3{0, 0, 1}) == -1.0);
    CHECK(minkowski_inner(Vec3{1, 0, 0}, Vec3{1, 0, 0}) == 1.0);
    const Vec3 v{std::sinh(1.0), 0, std::cosh(1.0)};
    CHECK(minkowski_inner(v, v) == doctest::Approx(-1.0).epsilon(1e-14));
  }

  TEST_CASE("hyperbolic model conversions") {
    const auto apex = model_convert(HyperbolicPoint::hyperboloid({0, 0, 1}), HyperbolicModel::Klein);
    CHECK(std::fabs(apex.coords.x1) < 1e-15);
    CHECK(std::fabs(apex.coords.x2) < 1e-15);

    const auto p = HyperbolicPoint::hyperboloid({std::sinh(1.0), 0, std::cosh(1.0)});
    CHECK(model_convert(p, HyperbolicModel::Klein).coords.x1 == doctest::Approx(0.7615941560).epsilon(1e-10));
    CHECK(model_convert(p, HyperbolicModel::Poincare).coords.x1 == doctest::Approx(0.4621171573).epsilon(1e-10));

    std::mt19937 rng(3);
    std::normal_distribution<double> n(0, 1.5);
    for (int k = 0; k < 50; ++k) {
      const double a = n(rng), b = n(rng);
      const Vec3 x{a, b, std::sqrt(1 + a * a + b * b)};
      for (auto m : {HyperbolicModel::Klein, HyperbolicModel::Poincare}) {
        const auto back = model_convert(model_convert(HyperbolicPoint::hyperboloid(x), m), HyperbolicModel::Hyperboloid);
        CHECK(max_abs(back.coords - x) <= 1e-12 * x.x3);
      }
    }
  }

  TEST_CASE("model conversion rejects points off the model") {
    CHECK_THROWS_AS(model_convert(HyperbolicPoint::disk(1.2, 0, HyperbolicModel::Poincare), HyperbolicModel::Klein),
                    DomainError);
    CHECK_THROWS_AS(model_convert(HyperbolicPoint::hyperboloid({0, 0, -1}), HyperbolicModel::Klein), DomainError);
  }

  TEST_CASE("boost to e3") {
    const LorentzMap id = lorentz_transform_to_e3({0, 0, 1});
    CHECK((id.m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);

    const Vec3 a{std::sinh(1.0), 0, std::cosh(1.0)};
    CHECK(max_abs(lorentz_transform_to_e3(a)(a) - Vec3{0, 0, 1}) <= 1e-12);

    std::mt19937 rng(11);
    std::normal_distribution<double> n(0, 1);
    for (int k = 0; k < 30; ++k) {
      const double a1 = n(rng), a2 = n(rng);
      const Vec3 ak{a1, a2, std::sqrt(1 + a1 * a1 + a2 * a2)};
      const LorentzMap phi = lorentz_transform_to_e3(ak);
      CHECK(max_abs(phi(ak) - Vec3{0, 0, 1}) <= 1e-12 * ak.x3 * ak.x3);
      const Vec3 u{n(rng), n(rng), n(rng)}, v{n(rng), n(rng), n(rng)};
      CHECK(minkowski_inner(phi(u), phi(v)) == doctest::Approx(minkowski_inner(u, v)).epsilon(1e-10).scale(10));
      const LorentzMap inv = phi.inverse();
      CHECK(max_abs(inv(phi(u)) - u) <= 1e-10 * (1 + ak.x3 * ak.x3));
    }
    CHECK_THROWS_AS(lorentz_transform_to_e3({0, 0, -1}), DomainError);
    CHECK_THROWS_AS(lorentz_transform_to_e3({1, 0, 0}), DomainError);
  }

  TEST_CASE("nil3 metric matches the line element") {
    const Vec3 p{0.3, -1.1, 2.0};
    const Eigen::Matrix3d g = metric(SpaceParams::nil3(), p);
    const Eigen::Matrix3d o = nil_metric({p.x1, p.x2, p.x3});
    CHECK((g - o).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(metric_volume(SpaceParams::nil3(), p) == doctest::Approx(1.0));
    CHECK(SpaceParams::nil3().four_dim_isometry_group());
    CHECK(SpaceParams::h2xr().four_dim_isometry_group());
  }

  TEST_CASE("nil3 christoffel symbols match the metric derivatives") {
    const Vec3 p{0.7, 0.2, -0.4};
    const auto G = nil_christoffel({p.x1, p.x2, p.x3});
    const Vec3 a{0.3, -1.0, 0.5}, b{1.2, 0.4, -0.7};
    const CVec3 c = christoffel(SpaceParams::nil3(), p, to_complex(a), to_complex(b));
    const Eigen::Vector3d ea(a.x1, a.x2, a.x3), eb(b.x1, b.x2, b.x3);
    for (int k = 0; k < 3; ++k) CHECK(c[k].real() == doctest::Approx(ea.dot(G[k] * eb)).epsilon(1e-7));
  }

  TEST_CASE("angle function of the zero graph") {
    const GridPtr g = Grid::rect(-1, 1, -1, 1, 33, 33);
    const FundamentalData d = fundamental_data(graph_patch(SpaceParams::nil3(), RealField(g).map([](double) { return 0.0; })));
    CHECK(d.u(16, 16) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.u(32, 16) == doctest::Approx(0.894427191).epsilon(1e-9));
  }

  TEST_CASE("mean curvature of x^2 against the brute-force oracle") {
    const GraphJet origin{0, 0, 0, 2, 0, 0};
    CHECK(brute_force_H(origin, 0, 0) == doctest::Approx(1.0).epsilon(1e-8));

    const GridPtr g = Grid::rect(-0.5, 0.5, -0.5, 0.5, 65, 65);
    const RealField f = RealField::generate(g, [&](int i, int) { return g->x(i) * g->x(i); });
    const RealField H = mean_curvature(graph_patch(SpaceParams::nil3(), f));
    for (auto [i, j] : {std::pair{32, 32}, {40, 20}, {10, 50}}) {
      const double x = g->x(i), y = g->y(j);
      const double oracle = brute_force_H({x * x, 2 * x, 0, 2, 0, 0}, x, y);
      CHECK(H(i, j) == doctest::Approx(oracle).epsilon(1e-7));
    }
  }

  TEST_CASE("linear graphs are minimal") {
    for (auto [a, b, c] : {std::array{0.0, 0.0, 0.0}, {1.0, -0.5, 2.0}, {-3.0, 2.0, 0.1}}) {
      const AnalyticGraph lin = linear_graph(a, b, c);
      const GridPtr g = Grid::rect(-2, 2, -2, 2, 33, 33);
      CHECK(max_norm(mean_curvature(lin.patch(g))) <= 1e-12);
      CHECK(brute_force_H(lin.jet(0.4, -0.9), 0.4, -0.9) == doctest::Approx(0.0).scale(1).epsilon(1e-8));
    }
  }

  TEST_CASE("angle relation holds on graph patches") {
    const GridPtr g = Grid::rect(-2, 2, -2, 2, 65, 65);
    const FundamentalData d = fundamental_data(saddle_family(1.0).patch(g));
    CHECK(max_norm(angle_relation_defect(d)) <= 1e-12);
  }
}
