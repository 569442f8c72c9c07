#include "nilgraph/minkowski.hpp"

#include <cmath>

#include "nilgraph/error.hpp"

namespace nilgraph {

namespace {

double det3(const Vec4& a, const Vec4& b, const Vec4& c, int i, int j, int k) {
  return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
         a[k] * (b[i] * c[j] - b[j] * c[i]);
}

}  // namespace

Vec4 l4_cross(const Vec4& a, const Vec4& b, const Vec4& c) {
  // Cofactor expansion gives the covector; raising flips the timelike slot.
  Vec4 e{det3(a, b, c, 1, 2, 3), -det3(a, b, c, 0, 2, 3), det3(a, b, c, 0, 1, 3), -det3(a, b, c, 0, 1, 2)};
  e[0] = -e[0];
  return e;
}

bool HyperbolicPoint::valid() const {
  if (!is_finite(coords)) return false;
  if (model == HyperbolicModel::Hyperboloid)
    return coords.x3 > 0 && std::fabs(minkowski_inner(coords, coords) + 1.0) <= 1e-10 * std::fmax(1.0, coords.x3 * coords.x3);
  return coords.x1 * coords.x1 + coords.x2 * coords.x2 < 1.0;
}

HyperbolicPoint model_convert(const HyperbolicPoint& p, HyperbolicModel target) {
  if (!p.valid()) throw DomainError("hyperbolic point violates its model invariant");
  if (p.model == target) return p;

  Vec3 x;
  switch (p.model) {
    case HyperbolicModel::Hyperboloid:
      x = p.coords;
      break;
    case HyperbolicModel::Klein: {
      const double r2 = p.coords.x1 * p.coords.x1 + p.coords.x2 * p.coords.x2;
      const double s = 1.0 / std::sqrt(1.0 - r2);
      x = {s * p.coords.x1, s * p.coords.x2, s};
      break;
    }
    case HyperbolicModel::Poincare: {
      const double r2 = p.coords.x1 * p.coords.x1 + p.coords.x2 * p.coords.x2;
      const double d = 1.0 - r2;
      x = {2 * p.coords.x1 / d, 2 * p.coords.x2 / d, (1 + r2) / d};
      break;
    }
  }

  switch (target) {
    case HyperbolicModel::Hyperboloid:
      return HyperbolicPoint::hyperboloid(x);
    case HyperbolicModel::Klein:
      return HyperbolicPoint::disk(x.x1 / x.x3, x.x2 / x.x3, target);
    case HyperbolicModel::Poincare:
      return HyperbolicPoint::disk(x.x1 / (1 + x.x3), x.x2 / (1 + x.x3), target);
  }
  return p;
}

Vec3 LorentzMap::operator()(const Vec3& v) const {
  Eigen::Vector3d r = m * Eigen::Vector3d(v.x1, v.x2, v.x3);
  return {r[0], r[1], r[2]};
}

CVec3 LorentzMap::operator()(const CVec3& v) const { return to_complex((*this)(real(v))) + cplx(0, 1) * (*this)(imag(v)); }

LorentzMap LorentzMap::inverse() const { return {m.inverse()}; }

LorentzMap lorentz_transform_to_e3(const Vec3& a) {
  if (!is_finite(a) || a.x3 <= 0 || std::fabs(minkowski_inner(a, a) + 1.0) > 1e-10 * std::fmax(1.0, a.x3 * a.x3))
    throw DomainError("lorentz_transform_to_e3: a must be a future-pointing unit timelike vector");
  const double g = a.x3;
  const double p1 = a.x1, p2 = a.x2;
  LorentzMap L;
  L.m << 1 + p1 * p1 / (1 + g), p1 * p2 / (1 + g), -p1,
         p1 * p2 / (1 + g), 1 + p2 * p2 / (1 + g), -p2,
         -p1, -p2, g;
  return L;
}

LorentzMap vertical_symmetry() {
  LorentzMap L;
  L.m(2, 2) = -1.0;
  return L;
}

}  // namespace nilgraph
