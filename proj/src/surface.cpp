#include "nilgraph/surface.hpp"

#include <cmath>

#include "nilgraph/error.hpp"

namespace nilgraph {

PatchDerivatives patch_derivatives(const SurfacePatch& patch) {
  if (patch.analytic) return *patch.analytic;
  PatchDerivatives d;
  d.Xx = diff_x(patch.X);
  d.Xy = diff_y(patch.X);
  d.Xxx = diff_xx(patch.X);
  d.Xyy = diff_yy(patch.X);
  d.Xxy = diff_y(d.Xx);
  return d;
}

namespace {

struct PointData {
  double lambda, u, H;
  cplx p, A;
};

PointData point_data(const SpaceParams& s, Parameterization kind, const Vec3& P, const Vec3& Xx, const Vec3& Xy,
                     const Vec3& Xxx, const Vec3& Xxy, const Vec3& Xyy) {
  const double E = inner(s, P, Xx, Xx);
  const double F = inner(s, P, Xx, Xy);
  const double G = inner(s, P, Xy, Xy);
  const double det = E * G - F * F;
  if (std::isfinite(det) && !(det > 0)) throw DegenerateMetric("induced metric is not positive definite");

  const Eigen::Matrix3d g = metric(s, P);
  const Vec3 c = cross(Xx, Xy);
  const double vol = metric_volume(s, P);
  Eigen::Vector3d eta = g.ldlt().solve(Eigen::Vector3d(vol * c.x1, vol * c.x2, vol * c.x3));
  eta /= std::sqrt(eta.dot(g * eta));
  const Eigen::Vector3d xi(0, 0, 1);
  double u = eta.dot(g * xi);
  if (u < 0) {
    eta = -eta;
    u = -u;
  }
  const Vec3 n{eta[0], eta[1], eta[2]};

  auto second = [&](const Vec3& d2, const Vec3& a, const Vec3& b) {
    const CVec3 acc = to_complex(d2) + christoffel(s, P, to_complex(a), to_complex(b));
    return inner(s, P, acc, to_complex(n)).real();
  };
  const double L = second(Xxx, Xx, Xx);
  const double M = second(Xxy, Xx, Xy);
  const double N = second(Xyy, Xy, Xy);

  PointData out{};
  out.u = u;
  out.H = (E * N - 2 * F * M + G * L) / (2 * det);
  const Vec3 xiv = vertical_field();
  if (kind == Parameterization::Conformal) {
    out.lambda = 0.5 * (E + G);
    out.p = 0.25 * cplx(L - N, -2 * M);
    out.A = 0.5 * cplx(inner(s, P, xiv, Xx), -inner(s, P, xiv, Xy));
  } else {
    out.lambda = std::sqrt(det);
    const Vec3 e1 = Xx / std::sqrt(E);
    Vec3 e2 = Xy - inner(s, P, Xy, e1) * e1;
    e2 = e2 / std::sqrt(inner(s, P, e2, e2));
    out.A = 0.5 * std::sqrt(out.lambda) * cplx(inner(s, P, xiv, e1), -inner(s, P, xiv, e2));
  }
  return out;
}

}  // namespace

FundamentalData fundamental_data(const SurfacePatch& patch) {
  patch.space.kind();
  const PatchDerivatives d = patch_derivatives(patch);
  const GridPtr& gp = patch.X.grid_ptr();
  FundamentalData out{RealField(gp), RealField(gp), RealField(gp), ComplexField(), ComplexField(gp)};
  if (patch.kind == Parameterization::Conformal) out.p = ComplexField(gp);
  const Grid& g = *gp;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j)) continue;
      const Vec3 Xx = d.Xx(i, j), Xy = d.Xy(i, j);
      if (!is_finite(Xx) || !is_finite(Xy) || !is_finite(d.Xxx(i, j)) || !is_finite(d.Xyy(i, j)) ||
          !is_finite(d.Xxy(i, j)))
        continue;
      const PointData pd =
          point_data(patch.space, patch.kind, patch.X(i, j), Xx, Xy, d.Xxx(i, j), d.Xxy(i, j), d.Xyy(i, j));
      out.lambda(i, j) = pd.lambda;
      out.u(i, j) = pd.u;
      out.H(i, j) = pd.H;
      out.A(i, j) = pd.A;
      if (out.has_p()) out.p(i, j) = pd.p;
    }
  return out;
}

RealField mean_curvature(const SurfacePatch& patch) {
  if (patch.kind == Parameterization::Graph && patch.space.kind() == SpaceKind::Nil3) {
    const PatchDerivatives d = patch_derivatives(patch);
    return RealField::generate(patch.X.grid_ptr(), [&](int i, int j) {
      const Vec3& P = patch.X(i, j);
      const double fx = d.Xx(i, j).x3, fy = d.Xy(i, j).x3;
      const double a = fx + P.x2 / 2, b = fy - P.x1 / 2;
      const double W = std::sqrt(1 + a * a + b * b);
      return ((1 + b * b) * d.Xxx(i, j).x3 - 2 * a * b * d.Xxy(i, j).x3 + (1 + a * a) * d.Xyy(i, j).x3) /
             (2 * W * W * W);
    });
  }
  return fundamental_data(patch).H;
}

RealField angle_relation_defect(const FundamentalData& d) {
  return RealField::generate(d.lambda.grid_ptr(), [&](int i, int j) {
    const double u = d.u(i, j);
    return 4 * std::norm(d.A(i, j)) / d.lambda(i, j) - (1 - u * u);
  });
}

SurfacePatch graph_patch(const SpaceParams& space, const RealField& f) {
  SurfacePatch p;
  p.space = space;
  p.kind = Parameterization::Graph;
  p.X = VecField::generate(f.grid_ptr(), [&](int i, int j) {
    return Vec3{f.grid().x(i), f.grid().y(j), f(i, j)};
  });
  return p;
}

}  // namespace nilgraph
