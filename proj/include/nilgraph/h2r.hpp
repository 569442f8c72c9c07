#pragma once

#include <utility>

#include "nilgraph/l3.hpp"
#include "nilgraph/surface.hpp"

namespace nilgraph {

/// Unit timelike a on the sheet of G with -<f_z(z0), a> = theta0. z0 snaps to
/// the nearest active node.
Vec3 select_a(const SpacelikeSurfaceL3& f, cplx z0, cplx theta0);

struct Height {
  RealField h;
  ComplexField hz;
};

/// h = -<f, a>, h_z = -<f_z, a>. Rejects a off the sheet of G.
Height height_from_a(const SpacelikeSurfaceL3& f, const Vec3& a);

/// Residuals of
///   h_zz - (log tau0)_z h_z + Q sqrt((tau0 + 4|h_z|^2)/tau0) = 0
///   h_{z zbar} - sqrt(tau0 (tau0 + 4|h_z|^2)) / 4 = 0
struct SystemAResidual {
  RealField first, second;
};

SystemAResidual system_A_residual(const RealField& h, const RealField& tau0, const QuadDifferential& Q);
std::pair<double, double> system_A_pointwise(cplx hz, cplx hzz, double hzzbar, double tau0, cplx wz, cplx Q);

struct HorizontalN {
  VecField N;             // on the regular nodes only
  std::size_t degenerate = 0;
};

/// N = 8 Re(G_z (tau0 conj(h_z) - 4 conj(Q) h_z)) / (tau0^2 - 16|Q|^2)
///     + G sqrt((tau0 + 4|h_z|^2)/tau0).
/// Nodes with |tau0^2 - 16|Q|^2| < eps_reg tau0^2 are dropped; if all are,
/// DegenerateCase is thrown.
HorizontalN horizontal_N(const VecField& G, const CVecField& Gz, const RealField& tau0, const QuadDifferential& Q,
                         const ComplexField& hz, double eps_reg = 1e-6);
/// Same with G_z and h_z taken by grid differences.
HorizontalN horizontal_N(const VecField& G, const RealField& tau0, const QuadDifferential& Q, const RealField& h,
                         double eps_reg = 1e-6);

/// psi = (N, h) in H2xR; patch positions use Poincare coordinates on the base.
struct SurfaceH2xR {
  VecField N;
  RealField h;
  SurfacePatch patch;
  FundamentalData data;
  ComplexField Q_AR;  // p + A^2
};

SurfaceH2xR build_h2r_surface(const VecField& N, const RealField& h);

/// Hyperbolic Gauss map (hyperboloid coordinates) from the L4 normal of psi.
VecField gauss_map_h2(const SurfaceH2xR& psi);

/// |tangential part of G_{z zbar}| (Lorentz norm).
RealField harmonicity_residual(const VecField& G);
RealField harmonicity_residual(const VecField& G, const VecField& Gzzbar);

struct WeierstrassReport {
  double hopf_part = 0;   // max |<G_z,G_z> - Q|
  double trace_part = 0;  // max |2<G_z,conj G_z> - (tau0/4 + 4|Q|^2/tau0)|
};

WeierstrassReport weierstrass_check(const VecField& G, const QuadDifferential& Q, const RealField& tau0,
                                    const Mask& region);
WeierstrassReport weierstrass_check(const CVecField& Gz, const QuadDifferential& Q, const RealField& tau0,
                                    const Mask& region);

/// tau# = 16|Q|^2 / tau0; Q must not vanish on the grid.
RealField parallel_dual(const QuadDifferential& Q, const RealField& tau0);

/// d_G = 4|Q| / (lambda u^2).
RealField gauss_map_distance_ratio(const QuadDifferential& Q, const FundamentalData& d);

}  // namespace nilgraph
