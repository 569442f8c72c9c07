#pragma once

#include <cmath>
#include <random>

#include "nilgraph/h2r.hpp"
#include "nilgraph/l3.hpp"
#include "nilgraph/sister.hpp"
#include "nilgraph/vortex.hpp"

namespace fixtures {

using namespace nilgraph;

// Stages of the Q(z) = z or Q = 0 run on a disk, built once per process.
struct DiskRun {
  QuadDifferential Q;
  ConformalFactorField T;
  SpacelikeSurfaceL3 Sh, Sg;
  Vec3 a;
  GraphNil3 G;
};

inline DiskRun make_disk_run(const QuadDifferential& Q, double radius, int n) {
  const GridSpec spec = GridSpec::disk(radius, n);
  VortexOptions vo;
  vo.bc = BoundaryPreset::HyperbolicMax;
  ConformalFactorField T = solve_vortex(Q, spec, vo);
  SpacelikeSurfaceL3 Sh = integrate_structure(T, Q);
  SpacelikeSurfaceL3 Sg = integrate_structure(T, Q.scaled(-1));
  const Vec3 a = select_a(Sh, 0.0, 0.0);
  GraphNil3 G = build_nil3_from_l3(Sh, a);
  return {Q, std::move(T), std::move(Sh), std::move(Sg), a, std::move(G)};
}

inline const DiskRun& linear_q_run() {
  static const DiskRun r = make_disk_run(QuadDifferential::polynomial({0.0, 1.0}, QDomain::Disk), 0.8, 129);
  return r;
}

inline const DiskRun& zero_q_run() {
  static const DiskRun r = make_disk_run(QuadDifferential::polynomial({0.0}, QDomain::Disk), 0.8, 129);
  return r;
}

inline double max_diff(const RealField& a, const RealField& b, const Mask& region) {
  double m = 0;
  const Grid& g = a.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (region[g.index(i, j)] && g.active(i, j)) m = std::fmax(m, std::fabs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace fixtures
