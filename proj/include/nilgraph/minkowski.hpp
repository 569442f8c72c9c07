#pragma once

#include <array>

#include <Eigen/Dense>

#include "nilgraph/triple.hpp"

namespace nilgraph {

/// L3 with signature (+,+,-); x3 is the timelike coordinate.
using LorentzVec3 = Vec3;

inline double minkowski_inner(const Vec3& a, const Vec3& b) { return a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3; }

// Complex-bilinear extension (no conjugation), used with f_z and G_z.
inline cplx minkowski_inner(const CVec3& a, const CVec3& b) { return a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3; }
inline cplx minkowski_inner(const CVec3& a, const Vec3& b) { return a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3; }
inline cplx minkowski_inner(const Vec3& a, const CVec3& b) { return minkowski_inner(b, a); }

/// L4 with signature (-,+,+,+); index 0 is timelike.
using Vec4 = std::array<double, 4>;

inline double l4_inner(const Vec4& a, const Vec4& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

/// Vector orthogonal (in L4) to the three arguments, sign fixed by the
/// determinant with the basis in slot 0.
Vec4 l4_cross(const Vec4& a, const Vec4& b, const Vec4& c);

enum class HyperbolicModel { Hyperboloid, Poincare, Klein };

/// Point of H2. Disk models use coords.x1, x2 only.
struct HyperbolicPoint {
  Vec3 coords;
  HyperbolicModel model = HyperbolicModel::Hyperboloid;

  static HyperbolicPoint hyperboloid(const Vec3& x) { return {x, HyperbolicModel::Hyperboloid}; }
  static HyperbolicPoint disk(double x, double y, HyperbolicModel m) { return {{x, y, 0.0}, m}; }
  bool valid() const;
};

HyperbolicPoint model_convert(const HyperbolicPoint& p, HyperbolicModel target);

/// Linear map of L3 stored as a 3x3 matrix acting on (x1, x2, x3).
struct LorentzMap {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();

  Vec3 operator()(const Vec3& v) const;
  CVec3 operator()(const CVec3& v) const;
  LorentzMap inverse() const;
};

/// Positive Lorentz transform sending the future unit timelike vector a to (0,0,1).
LorentzMap lorentz_transform_to_e3(const Vec3& a);

/// Reflection x3 -> -x3, used to move a past-pointing normal to the future sheet.
LorentzMap vertical_symmetry();

}  // namespace nilgraph
