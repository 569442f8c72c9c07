#include "nilgraph/l3.hpp"

#include <cmath>

#include "nilgraph/error.hpp"

namespace nilgraph {

namespace {

struct State {
  Vec3 f;
  CVec3 fz;
  Vec3 G;
};

State operator+(const State& a, const State& b) { return {a.f + b.f, a.fz + b.fz, a.G + b.G}; }
State operator*(double s, const State& a) { return {s * a.f, s * a.fz, s * a.G}; }

struct Coeffs {
  double tau;
  cplx wz;
  cplx q;
};

State rhs(const State& s, const Coeffs& c, bool along_x) {
  const CVec3 G = to_complex(s.G);
  const CVec3 fzz = c.wz * s.fz + (-c.q) * G;
  const CVec3 fzzb = (c.tau / 4) * G;
  const CVec3 Gz = 0.5 * s.fz + (-2.0 * c.q / c.tau) * conj(s.fz);
  if (along_x) return {2.0 * real(s.fz), fzz + fzzb, 2.0 * real(Gz)};
  return {-2.0 * imag(s.fz), cplx(0, 1) * (fzz - fzzb), -2.0 * imag(Gz)};
}

class Integrator {
 public:
  Integrator(const ConformalFactorField& tau, const QuadDifferential& Qs)
      : tau_(tau), Qs_(Qs), g_(tau.tau0.grid()), wz_(tau.log_tau0_z()) {}

  Coeffs node(int i, int j) const { return {tau_.tau0(i, j), wz_(i, j), Qs_(g_.z(i, j))}; }

  // Coefficients halfway between (i,j) and its neighbour in direction step.
  Coeffs mid(int i, int j, bool along_x, int step) const {
    const int pos = along_x ? i : j;
    const int lo = std::min(pos, pos + step);
    const cplx zm = along_x ? cplx(g_.x(lo) + 0.5 * g_.hx(), g_.y(j)) : cplx(g_.x(i), g_.y(lo) + 0.5 * g_.hy());
    if (tau_.exact) return {std::exp(tau_.exact->w(zm)), tau_.exact->wz(zm), Qs_(zm)};
    auto [rlo, rhi] = along_x ? g_.run_x(i, j) : g_.run_y(i, j);
    const int m = std::min(4, rhi - rlo + 1);
    const int start = std::clamp(lo - 1, rlo, rhi - m + 1);
    double w[4];
    stencil::lagrange(m, lo + 0.5 - start, w, nullptr);
    double t = 0;
    cplx dz = 0;
    for (int q = 0; q < m; ++q) {
      const int a = along_x ? start + q : i, b = along_x ? j : start + q;
      t += w[q] * tau_.tau0(a, b);
      dz += w[q] * wz_(a, b);
    }
    return {t, dz, Qs_(zm)};
  }

  State step(const State& s, int i, int j, bool along_x, int dir) const {
    const double h = (along_x ? g_.hx() : g_.hy()) * dir;
    const int i2 = along_x ? i + dir : i, j2 = along_x ? j : j + dir;
    const Coeffs c0 = node(i, j), cm = mid(i, j, along_x, dir), c1 = node(i2, j2);
    const State k1 = rhs(s, c0, along_x);
    const State k2 = rhs(s + (h / 2) * k1, cm, along_x);
    const State k3 = rhs(s + (h / 2) * k2, cm, along_x);
    const State k4 = rhs(s + h * k3, c1, along_x);
    return s + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

 private:
  const ConformalFactorField& tau_;
  const QuadDifferential& Qs_;
  const Grid& g_;
  ComplexField wz_;
};

void check_frame(const InitFrame& fr, double tau) {
  const double scale = std::fmax(1.0, tau);
  const bool ok = std::abs(minkowski_inner(fr.fz0, fr.fz0)) <= 1e-10 * scale &&
                  std::abs(minkowski_inner(fr.fz0, conj(fr.fz0)) - tau / 2) <= 1e-10 * scale &&
                  std::abs(minkowski_inner(fr.fz0, fr.G0)) <= 1e-10 * std::sqrt(scale) &&
                  std::fabs(minkowski_inner(fr.G0, fr.G0) + 1) <= 1e-10 * std::fmax(1.0, fr.G0.x3 * fr.G0.x3);
  if (!ok) throw DomainError("initial frame is degenerate or not adapted to tau0");
}

}  // namespace

SpacelikeSurfaceL3 integrate_structure(const ConformalFactorField& tau, const QuadDifferential& Qs,
                                       const IntegrateOptions& opts) {
  const GridPtr& tg = tau.tau0.grid_ptr();
  const double integ = tau.exact ? max_norm(closed_form_residual(tau), tau.unknowns) : tau.residual_norm;
  if (!(integ <= opts.integrability_tol))
    throw IntegrabilityError("tau0 does not satisfy the vortex equation closely enough to integrate");
  for (int j = 0; j < tg->ny(); ++j)
    for (int i = 0; i < tg->nx(); ++i) {
      if (!tg->active(i, j)) continue;
      const cplx z = tg->z(i, j);
      const double a = std::abs(Qs(z)), b = std::abs(tau.Q(z));
      if (std::fabs(a - b) > 1e-12 * (1 + b))
        throw IntegrabilityError("|Qs| differs from the |Q| that tau0 was solved for");
    }

  const GridPtr lines = tg->with_mask(tau.unknowns);
  const auto [ic, jc] = lines->center_node();
  if (!lines->active(ic, jc)) throw DomainError("grid centre is not an interior node");

  InitFrame fr;
  if (opts.init) {
    fr = *opts.init;
  } else {
    const double r = std::sqrt(tau.tau0(ic, jc)) / 2;
    fr = {Vec3{0, 0, 0}, CVec3{r, cplx(0, -r), 0.0}, Vec3{0, 0, 1}};
  }
  check_frame(fr, tau.tau0(ic, jc));
  const bool reflect = fr.G0.x3 < 0;

  Integrator it(tau, Qs);
  std::vector<State> out(tg->size());
  Mask reached(tg->size(), 0);
  const bool rows_first = opts.order == IntegrationOrder::RowsThenColumns;

  // Integrates from (i0,j0) to both ends of its run; f(k, s) receives each node.
  auto sweep = [&](int i0, int j0, const State& s0, bool along_x, auto&& sink) {
    sink(i0, j0, s0);
    auto [lo, hi] = along_x ? lines->run_x(i0, j0) : lines->run_y(i0, j0);
    for (int dir : {+1, -1}) {
      State s = s0;
      int i = i0, j = j0;
      const int end = dir > 0 ? hi : lo;
      while ((along_x ? i : j) != end) {
        s = it.step(s, i, j, along_x, dir);
        (along_x ? i : j) += dir;
        sink(i, j, s);
      }
    }
  };

  State s0{fr.f0, fr.fz0, fr.G0};
  std::vector<std::pair<std::pair<int, int>, State>> spine;
  sweep(ic, jc, s0, rows_first, [&](int i, int j, const State& s) { spine.push_back({{i, j}, s}); });
  for (const auto& [ij, s] : spine)
    sweep(ij.first, ij.second, s, !rows_first, [&](int i, int j, const State& st) {
      out[tg->index(i, j)] = st;
      reached[tg->index(i, j)] = 1;
    });

  const GridPtr og = tg->with_mask(mask_and(reached, tg->mask()));
  const LorentzMap R = vertical_symmetry();
  SpacelikeSurfaceL3 surf;
  surf.f = VecField::generate(og, [&](int i, int j) {
    const Vec3& v = out[og->index(i, j)].f;
    return reflect ? R(v) : v;
  });
  surf.fz = CVecField::generate(og, [&](int i, int j) {
    const CVec3& v = out[og->index(i, j)].fz;
    return reflect ? R(v) : v;
  });
  surf.G = VecField::generate(og, [&](int i, int j) {
    const Vec3& v = out[og->index(i, j)].G;
    return reflect ? R(v) : v;
  });
  surf.tau0 = RealField::generate(og, [&](int i, int j) { return tau.tau0(i, j); });
  surf.Qs = ComplexField::generate(og, [&](int i, int j) { return Qs(og->z(i, j)); });
  return surf;
}

SpacelikeSurfaceL3 hyperbolic_cylinder(const GridPtr& grid) {
  SpacelikeSurfaceL3 s;
  s.f = VecField::generate(grid, [&](int i, int) {
    const double x = grid->x(i);
    return Vec3{std::sinh(x), 0.0, std::cosh(x)};
  });
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i)
      if (grid->active(i, j)) s.f(i, j).x2 = grid->y(j);
  s.fz = CVecField::generate(grid, [&](int i, int) {
    const double x = grid->x(i);
    return CVec3{0.5 * std::cosh(x), cplx(0, -0.5), 0.5 * std::sinh(x)};
  });
  s.G = VecField::generate(grid, [&](int i, int) {
    const double x = grid->x(i);
    return Vec3{std::sinh(x), 0.0, std::cosh(x)};
  });
  s.tau0 = RealField::generate(grid, [](int, int) { return 1.0; });
  s.Qs = ComplexField::generate(grid, [](int, int) { return cplx(-0.25, 0); });
  const CVecField quarterG = s.G.map([](const Vec3& g) { return to_complex(0.25 * g); });
  s.fzz = quarterG;
  s.fzzbar = quarterG;
  s.Gz = CVecField::generate(grid, [&](int i, int) {
    const double x = grid->x(i);
    return CVec3{0.5 * std::cosh(x), 0.0, 0.5 * std::sinh(x)};
  });
  return s;
}

CVecField gauss_map_z(const SpacelikeSurfaceL3& s) {
  if (s.Gz) return *s.Gz;
  return CVecField::generate(s.grid_ptr(), [&](int i, int j) {
    return 0.5 * s.fz(i, j) + (-2.0 * s.Qs(i, j) / s.tau0(i, j)) * conj(s.fz(i, j));
  });
}

ComplexField hopf_coefficient(const SpacelikeSurfaceL3& s) {
  const CVecField fzz = s.fzz ? *s.fzz : d_zz(s.f);
  return ComplexField::generate(s.grid_ptr(), [&](int i, int j) { return minkowski_inner(fzz(i, j), s.G(i, j)); });
}

CmcReport check_cmc_half(const SpacelikeSurfaceL3& s, const Mask& region) {
  const GridPtr& gp = s.grid_ptr();
  const CVecField fz = s.fzz ? s.fz : d_z(s.f);
  const CVecField fzzb = s.fzzbar ? *s.fzzbar : d_zzbar(s.f).map([](const Vec3& v) { return to_complex(v); });
  const ComplexField hopf = hopf_coefficient(s);

  CmcReport r;
  r.H_defect = max_norm(RealField::generate(gp, [&](int i, int j) {
    return -2 * minkowski_inner(fzzb(i, j), s.G(i, j)).real() / s.tau0(i, j) - 0.5;
  }), region);
  r.anisotropy = max_norm(RealField::generate(gp, [&](int i, int j) {
    return std::abs(minkowski_inner(fz(i, j), fz(i, j))) / minkowski_inner(fz(i, j), conj(fz(i, j))).real();
  }), region);
  r.metric_factor = max_norm(RealField::generate(gp, [&](int i, int j) {
    return (minkowski_inner(fz(i, j), conj(fz(i, j))).real() - s.tau0(i, j) / 2) / s.tau0(i, j);
  }), region);
  r.hopf_defect = max_norm(ComplexField::generate(gp, [&](int i, int j) { return hopf(i, j) - s.Qs(i, j); }), region);
  r.hopf_dbar = max_norm(dbar_residual(hopf), region);

  const CVecField a = d_zbar(s.fz), b = d_z(conj_field(s.fz));
  r.mixed_partial = max_norm(RealField::generate(gp, [&](int i, int j) {
    return max_abs(a(i, j) - b(i, j)) / s.tau0(i, j);
  }), region);
  r.GG_defect = max_norm(s.G.map([](const Vec3& g) { return minkowski_inner(g, g) + 1; }), region);
  r.Gfz_defect = max_norm(RealField::generate(gp, [&](int i, int j) {
    return std::abs(minkowski_inner(s.fz(i, j), s.G(i, j))) / std::sqrt(s.tau0(i, j));
  }), region);

  double mn = std::numeric_limits<double>::infinity(), mx = 0;
  for (int j = 0; j < gp->ny(); ++j)
    for (int i = 0; i < gp->nx(); ++i) {
      if (!gp->active(i, j) || !region[gp->index(i, j)]) continue;
      const double m = std::abs(hopf(i, j));
      mn = std::fmin(mn, m);
      mx = std::fmax(mx, m);
    }
  r.hopf_modulus_min = mn;
  r.hopf_modulus_max = mx;
  return r;
}

}  // namespace nilgraph
