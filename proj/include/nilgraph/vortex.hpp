#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nilgraph/grid.hpp"
#include "nilgraph/quad_diff.hpp"

namespace nilgraph {

/// Rectangle or disk (radius < 1, centred at 0, sampled in its bounding box)
/// with equal spacing in x and y.
struct GridSpec {
  Domain domain;
  int nx = 0, ny = 0;

  /// ny is derived so that spacing is equal in x and y.
  static GridSpec rect(double x0, double x1, double y0, double y1, int nx);
  static GridSpec disk(double radius, int n);
  /// rect:x0,x1,y0,y1,n | disk:rho,n
  static GridSpec parse(const std::string& text);
  std::string to_string() const;
  QDomain q_domain() const { return domain.shape == DomainShape::Disk ? QDomain::Disk : QDomain::Plane; }
};

/// Lattice for the Dirichlet problem: active = unknowns plus the ring of
/// nodes that carry boundary values.
struct VortexGrid {
  GridPtr grid;
  Mask unknowns;
};

VortexGrid make_vortex_grid(const GridSpec& spec);

enum class BoundaryPreset { AsymptoticHyperbolic, QFlat, HyperbolicMax };

BoundaryPreset parse_boundary_preset(const std::string& name);
std::string to_string(BoundaryPreset preset);
/// Boundary value of tau0 at z for the given preset.
double preset_tau0(BoundaryPreset preset, const QuadDifferential& Q, cplx z);

/// Closed-form w = log tau0 with its derivatives.
struct ClosedFormW {
  std::function<double(cplx)> w;
  std::function<cplx(cplx)> wz;
  std::function<double(cplx)> wzzbar;
};

struct ConformalFactorField {
  RealField tau0;
  QuadDifferential Q;
  double residual_norm = 0;
  Mask unknowns;
  int newton_steps = 0;
  std::optional<ClosedFormW> exact;

  /// (log tau0)_z: analytic when a closed form is attached, grid differences otherwise.
  ComplexField log_tau0_z() const;
};

enum class InitialGuess { HarmonicExtension, QFlat };

struct VortexOptions {
  BoundaryPreset bc = BoundaryPreset::QFlat;
  double tol = 1e-9;
  int max_newton = 200;
  InitialGuess init = InitialGuess::HarmonicExtension;
  double init_shift = 0.0;  // added to the QFlat guess
  std::function<double(cplx)> boundary_tau0;  // overrides the preset when set
};

/// Solves (log tau0)_{z zbar} = tau0/8 - 2|Q|^2/tau0 with Dirichlet data.
/// Throws ConvergenceError when the Newton budget runs out.
ConformalFactorField solve_vortex(const QuadDifferential& Q, const GridSpec& spec, const VortexOptions& opts);

/// tau0 = 4|c| for constant Q = c != 0.
ConformalFactorField closed_form_constant_q(cplx c, const GridSpec& spec);
/// tau0 = 16 / (1 - |z|^2)^2 for Q = 0 on the disk.
ConformalFactorField closed_form_zero_q_disk(const GridSpec& spec);

/// |(log tau0)_{z zbar} - tau0/8 + 2|Q|^2/tau0| by grid differences.
RealField vortex_residual(const RealField& tau0, const QuadDifferential& Q);
/// Same residual evaluated with the attached closed form.
RealField closed_form_residual(const ConformalFactorField& field);

}  // namespace nilgraph
