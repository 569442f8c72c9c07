#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nilgraph/surface.hpp"

namespace nilgraph {

struct GraphJet {
  double f = 0, fx = 0, fy = 0, fxx = 0, fxy = 0, fyy = 0;
};

/// Closed-form height function x3 = f(x1, x2) over a domain of the base.
struct AnalyticGraph {
  std::string name;
  SpaceParams space;
  Domain domain;
  std::function<GraphJet(double, double)> jet;
  /// sqrt(u^2 g(v, v)) for a base tangent vector v at (x, y).
  std::function<double(double, double, double, double)> u2g_speed;

  /// Graph patch with analytic derivatives on the given grid.
  SurfacePatch patch(const GridPtr& grid) const;
  RealField height(const GridPtr& grid) const;
};

AnalyticGraph linear_graph(double a, double b, double c = 0.0);
AnalyticGraph saddle_family(double c);
AnalyticGraph h2r_counterexample();

double pde_residual_nil3(const GraphJet& j, double x, double y);
RealField pde_residual_nil3(const AnalyticGraph& g, const GridPtr& grid);
RealField pde_residual_nil3(const RealField& f);

struct ProjectionMetricReport {
  double rho1_defect = 0;  // |rho1 - lambda| / max(1, lambda)
  double rho2_defect = 0;  // |rho2 - lambda u^2| / max(1, lambda)
  double det_defect = 0;   // |rho1 rho2 - lambda^2 u^2| / max(1, lambda^2)
  double sandwich_violation = 0;
  std::size_t directions = 0;

  double worst() const;
};

/// Eigenvalues of the projected metric against |dz|^2 for conformal data.
ProjectionMetricReport projection_metric_check(const FundamentalData& d, const Mask& region, unsigned seed = 7,
                                               int directions = 100);
/// Generalized eigenvalues {1, u^2} of the projected metric against the
/// induced one, for any parameterization.
ProjectionMetricReport projection_metric_check(const SurfacePatch& patch, const FundamentalData& d,
                                               const Mask& region, unsigned seed = 7, int directions = 100);

/// Adaptive Simpson on [a, b] to relative tolerance rel_tol.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double rel_tol = 1e-8,
                        long max_intervals = 1L << 20);

/// u^2 g length of the base curve gamma over [t0, t1].
double u2g_path_length(const AnalyticGraph& g, const std::function<cplx(double)>& gamma,
                       const std::function<cplx(double)>& dgamma, double t0, double t1);

/// Length of alpha(t) = (t, 0, 0) on the counterexample graph over [0, t1].
double counterexample_alpha_length(double t1);

/// Partial u^2 g lengths along the grid diagonal from the centre node of a
/// conformal patch, one entry per node reached.
std::vector<double> diagonal_u2g_profile(const FundamentalData& d);

bool strictly_increasing(const std::vector<double>& v);

}  // namespace nilgraph
