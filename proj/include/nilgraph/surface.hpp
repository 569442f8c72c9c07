#pragma once

#include <optional>

#include "nilgraph/grid.hpp"
#include "nilgraph/space.hpp"

namespace nilgraph {

enum class Parameterization { Graph, Conformal };

struct PatchDerivatives {
  VecField Xx, Xy, Xxx, Xxy, Xyy;
};

/// Ambient coordinates sampled on a parameter grid. Graph patches have
/// X = (x, y, f(x, y)).
struct SurfacePatch {
  SpaceParams space;
  Parameterization kind = Parameterization::Conformal;
  VecField X;
  std::optional<PatchDerivatives> analytic;

  const Grid& grid() const { return X.grid(); }
};

/// Analytic derivatives when the patch carries them, grid differences otherwise.
PatchDerivatives patch_derivatives(const SurfacePatch& patch);

/// {lambda, u, H, p, A} with the canonical orientation u > 0. For graph
/// patches lambda is sqrt(det I) and p is left empty.
struct FundamentalData {
  RealField lambda, u, H;
  ComplexField p, A;

  bool has_p() const { return !p.empty(); }
};

FundamentalData fundamental_data(const SurfacePatch& patch);

RealField mean_curvature(const SurfacePatch& patch);

/// 4|A|^2/lambda - (1 - u^2) pointwise.
RealField angle_relation_defect(const FundamentalData& d);

/// Graph patch X = (x, y, f) built from a height field on a Cartesian grid.
SurfacePatch graph_patch(const SpaceParams& space, const RealField& f);

}  // namespace nilgraph
