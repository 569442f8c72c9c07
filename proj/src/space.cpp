#include "nilgraph/space.hpp"

#include <cmath>

#include "nilgraph/error.hpp"

namespace nilgraph {

SpaceKind SpaceParams::kind() const {
  if (kappa == 0.0 && tau == 0.5) return SpaceKind::Nil3;
  if (kappa == -1.0 && tau == 0.0) return SpaceKind::H2xR;
  throw UnsupportedSpace("metric operations exist only for Nil3 (0, 1/2) and H2xR (-1, 0)");
}

namespace {

struct PoincareFactor {
  double e2;  // e^{2 phi}
  double px, py;
};

PoincareFactor poincare(const Vec3& p) {
  const double d = 1.0 - p.x1 * p.x1 - p.x2 * p.x2;
  if (!(d > 0)) throw DomainError("H2xR point outside the Poincare disk");
  return {4.0 / (d * d), 2 * p.x1 / d, 2 * p.x2 / d};
}

}  // namespace

Eigen::Matrix3d metric(const SpaceParams& s, const Vec3& p) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  if (s.kind() == SpaceKind::Nil3) {
    const Eigen::Vector3d th(p.x2 / 2, -p.x1 / 2, 1.0);
    g(0, 0) = 1;
    g(1, 1) = 1;
    g += th * th.transpose();
  } else {
    const double e2 = poincare(p).e2;
    g(0, 0) = e2;
    g(1, 1) = e2;
    g(2, 2) = 1;
  }
  return g;
}

double metric_volume(const SpaceParams& s, const Vec3& p) {
  if (s.kind() == SpaceKind::Nil3) return 1.0;
  return poincare(p).e2;
}

cplx inner(const SpaceParams& s, const Vec3& p, const CVec3& a, const CVec3& b) {
  if (s.kind() == SpaceKind::Nil3) {
    const cplx ta = p.x2 / 2 * a.x1 - p.x1 / 2 * a.x2 + a.x3;
    const cplx tb = p.x2 / 2 * b.x1 - p.x1 / 2 * b.x2 + b.x3;
    return a.x1 * b.x1 + a.x2 * b.x2 + ta * tb;
  }
  const double e2 = poincare(p).e2;
  return e2 * (a.x1 * b.x1 + a.x2 * b.x2) + a.x3 * b.x3;
}

double inner(const SpaceParams& s, const Vec3& p, const Vec3& a, const Vec3& b) {
  return inner(s, p, to_complex(a), to_complex(b)).real();
}

CVec3 christoffel(const SpaceParams& s, const Vec3& p, const CVec3& a, const CVec3& b) {
  const double x = p.x1, y = p.x2;
  // symmetric products a^i b^j + a^j b^i
  const cplx s01 = a.x1 * b.x2 + a.x2 * b.x1;
  const cplx s02 = a.x1 * b.x3 + a.x3 * b.x1;
  const cplx s12 = a.x2 * b.x3 + a.x3 * b.x2;
  const cplx p00 = a.x1 * b.x1, p11 = a.x2 * b.x2;
  if (s.kind() == SpaceKind::Nil3) {
    CVec3 o;
    o.x1 = y / 4 * s01 - x / 2 * p11 + 0.5 * s12;
    o.x2 = -y / 2 * p00 + x / 4 * s01 - 0.5 * s02;
    o.x3 = -x * y / 4 * p00 + (x * x - y * y) / 8 * s01 - x / 4 * s02 + x * y / 4 * p11 - y / 4 * s12;
    return o;
  }
  const PoincareFactor f = poincare(p);
  CVec3 o;
  o.x1 = f.px * p00 + f.py * s01 - f.px * p11;
  o.x2 = -f.py * p00 + f.px * s01 + f.py * p11;
  o.x3 = 0.0;
  return o;
}

Eigen::Matrix2d base_metric(const SpaceParams& s, double x, double y) {
  if (s.kind() == SpaceKind::Nil3) return Eigen::Matrix2d::Identity();
  return poincare({x, y, 0.0}).e2 * Eigen::Matrix2d::Identity();
}

}  // namespace nilgraph
