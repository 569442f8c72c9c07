#pragma once

#include <optional>

#include "nilgraph/grid.hpp"
#include "nilgraph/minkowski.hpp"
#include "nilgraph/quad_diff.hpp"
#include "nilgraph/vortex.hpp"

namespace nilgraph {

/// Spacelike immersion f into L3 with conformal factor tau0 and future unit
/// normal G, satisfying f_zz = (log tau0)_z f_z - Qs G, f_{z zbar} = (tau0/4) G.
/// Qs is the structure coefficient <f_zz, G>.
struct SpacelikeSurfaceL3 {
  VecField f;
  CVecField fz;
  VecField G;
  RealField tau0;
  ComplexField Qs;
  // closed-form second derivatives and G_z, when known
  std::optional<CVecField> fzz, fzzbar, Gz;

  const Grid& grid() const { return f.grid(); }
  const GridPtr& grid_ptr() const { return f.grid_ptr(); }
};

struct InitFrame {
  Vec3 f0;
  CVec3 fz0;
  Vec3 G0;
};

enum class IntegrationOrder { RowsThenColumns, ColumnsThenRows };

struct IntegrateOptions {
  IntegrationOrder order = IntegrationOrder::RowsThenColumns;
  std::optional<InitFrame> init;  // default: f = 0, G = e3, f_z = sqrt(tau0)/2 (e1 - i e2)
  double integrability_tol = 1e-4;
};

/// RK4 along the centre row, then along every column (or the transpose).
SpacelikeSurfaceL3 integrate_structure(const ConformalFactorField& tau0, const QuadDifferential& Qs,
                                       const IntegrateOptions& opts = {});

/// f(s,t) = (sinh s, t, cosh s) on a grid with z = s + it; Qs = -1/4, tau0 = 1.
SpacelikeSurfaceL3 hyperbolic_cylinder(const GridPtr& grid);

/// G_z = f_z/2 - (2 Qs / tau0) conj(f_z), or the closed form.
CVecField gauss_map_z(const SpacelikeSurfaceL3& s);

/// <f_zz, G> by grid differences (closed form if attached).
ComplexField hopf_coefficient(const SpacelikeSurfaceL3& s);

struct CmcReport {
  double H_defect = 0;          // max |H - 1/2|
  double anisotropy = 0;        // max |<f_z,f_z>| / <f_z, conj f_z>
  double metric_factor = 0;     // max |<f_z, conj f_z> - tau0/2| / tau0
  double hopf_defect = 0;       // max |<f_zz,G> - Qs|
  double hopf_dbar = 0;         // max |d/dzbar <f_zz,G>|
  double mixed_partial = 0;     // max |(f_z)_zbar - (f_zbar)_z| / tau0
  double GG_defect = 0;         // max |<G,G> + 1|
  double Gfz_defect = 0;        // max |<G, f_z>| / sqrt(tau0)
  double hopf_modulus_min = 0, hopf_modulus_max = 0;
};

/// Derivatives come from the positions f (closed forms when attached), so
/// perturbed data is detected.
CmcReport check_cmc_half(const SpacelikeSurfaceL3& s, const Mask& region);

}  // namespace nilgraph
