#pragma once

#include <Eigen/Dense>

#include "nilgraph/triple.hpp"

namespace nilgraph {

enum class SpaceKind { Nil3, H2xR };

/// Homogeneous space E(kappa, tau). Metric operations are implemented for
/// Nil3 = (0, 1/2) and H2xR = (-1, 0); H2xR points use Poincare disk
/// coordinates on the base.
struct SpaceParams {
  double kappa = 0.0;
  double tau = 0.5;

  static SpaceParams nil3() { return {0.0, 0.5}; }
  static SpaceParams h2xr() { return {-1.0, 0.0}; }

  bool four_dim_isometry_group() const { return kappa - 4 * tau * tau != 0.0; }
  /// Throws UnsupportedSpace for anything except the two implemented spaces.
  SpaceKind kind() const;
};

/// Metric tensor at a point (coordinate basis).
Eigen::Matrix3d metric(const SpaceParams& s, const Vec3& p);

/// sqrt(det g) at p.
double metric_volume(const SpaceParams& s, const Vec3& p);

/// Complex-bilinear g(a, b) at p.
cplx inner(const SpaceParams& s, const Vec3& p, const CVec3& a, const CVec3& b);
double inner(const SpaceParams& s, const Vec3& p, const Vec3& a, const Vec3& b);

/// Gamma^k_ij a^i b^j at p (symmetric in a, b).
CVec3 christoffel(const SpaceParams& s, const Vec3& p, const CVec3& a, const CVec3& b);

/// Unit vertical Killing field in coordinates (d/dz for both spaces).
inline Vec3 vertical_field() { return {0.0, 0.0, 1.0}; }

/// Metric of the base (R2 or H2) at the projected point, as a 2x2 matrix.
Eigen::Matrix2d base_metric(const SpaceParams& s, double x, double y);

}  // namespace nilgraph
