#pragma once

#include "nilgraph/l3.hpp"
#include "nilgraph/surface.hpp"

namespace nilgraph {

enum class SisterDirection { Nil3ToH2R, H2RToNil3 };

/// {lambda,u,0,p,A} -> {lambda,u,1/2,-ip,-iA} and back. The mean curvature
/// precondition is checked on `region` (all nodes when empty) within tol.
FundamentalData sister_data(const FundamentalData& d, SisterDirection dir, double tol = 1e-3,
                            const Mask& region = {});

struct SisterOptions {
  int epsilon = 0;  // +1, -1, or 0 to choose automatically
  double closedness_tol = 1e-5;
  double check_scale = 0.5;
};

/// Minimal graph X = (F, t) in Nil3 on the conformal parameter grid of f.
struct GraphNil3 {
  SurfacePatch patch;
  FundamentalData data;
  ComplexField Q_AR;  // i p + A^2
  RealField h;
  ComplexField hz;
  int epsilon = 1;
  double closedness = 0;  // max |Im (t_z)_zbar| on the check region
  double closedness_other = 0;  // same for the rejected epsilon, when it was tried
  double loop_defect = 0;       // worst closed-rectangle integral of dt per unit perimeter
};

GraphNil3 build_nil3_from_l3(const SpacelikeSurfaceL3& f, const Vec3& a, const SisterOptions& opts = {});

/// Max over pseudo-random grid rectangles of |loop integral of p dx + q dy|
/// divided by the rectangle perimeter.
double loop_audit(const RealField& p, const RealField& q, const Mask& region, unsigned seed, int count);

struct InjectivityReport {
  bool injective = false;
  int orientation = 0;
  std::size_t flipped_cells = 0;
  bool boundary_simple = false;
};

/// Cell orientation of (X.x1, X.x2) plus a simple-polygon test of the
/// boundary image of `region`.
InjectivityReport check_injectivity(const VecField& X, const Mask& region);

struct ResampledGraph {
  RealField f;
  double cx = 0, cy = 0, half_x = 0, half_y = 0;
  double inversion_residual = 0;
};

/// Cartesian graph t(x, y) over the largest centred rectangle inside the
/// image of `region`; throws FoldError if the projection is not injective.
ResampledGraph resample_to_graph(const VecField& X, const Mask& region, int target_n);
ResampledGraph resample_to_graph(const GraphNil3& g, const Mask& region, int target_n);

/// Abresch-Rosenberg coefficient: ip + A^2 in Nil3, p + A^2 in H2xR.
ComplexField ar_differential(const SpaceParams& space, const FundamentalData& d);
ComplexField ar_differential(const SurfacePatch& patch);

/// Active nodes at least k nodes away from the grid edge.
Mask margin_mask(const Grid& g, int k);

}  // namespace nilgraph
