#include "nilgraph/h2r.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "nilgraph/error.hpp"

namespace nilgraph {

namespace {

std::pair<int, int> nearest_active(const Grid& g, cplx z0) {
  const int i = static_cast<int>(std::lround((z0.real() - g.x(0)) / g.hx()));
  const int j = static_cast<int>(std::lround((z0.imag() - g.y(0)) / g.hy()));
  if (!g.active(i, j)) throw DomainError("z0 is not an active node of the surface grid");
  return {i, j};
}

}  // namespace

Vec3 select_a(const SpacelikeSurfaceL3& f, cplx z0, cplx theta0) {
  const auto [i, j] = nearest_active(f.grid(), z0);
  const Vec3 fx = 2.0 * real(f.fz(i, j));
  const Vec3 fy = -2.0 * imag(f.fz(i, j));
  Eigen::Matrix2d gram;
  gram << minkowski_inner(fx, fx), minkowski_inner(fx, fy), minkowski_inner(fy, fx), minkowski_inner(fy, fy);
  if (!(gram.determinant() > 0)) throw DomainError("select_a: f is not immersed at z0");
  // <f_z, a> = -theta0 splits into <f_x, a> = -2 Re theta0, <f_y, a> = 2 Im theta0.
  const Eigen::Vector2d c = gram.ldlt().solve(Eigen::Vector2d(-2 * theta0.real(), 2 * theta0.imag()));
  const Vec3 ap = c[0] * fx + c[1] * fy;

  // Timelike direction orthogonal to f_x, f_y: raise the Euclidean cross product.
  Vec3 n = cross(fx, fy);
  n.x3 = -n.x3;
  n = n / std::sqrt(-minkowski_inner(n, n));
  if (minkowski_inner(n, f.G(i, j)) > 0) n = -n;

  const double t = std::sqrt(1 + minkowski_inner(ap, ap));
  Vec3 a = ap + t * n;
  // The intersection with the sheet of G exists for every spacelike immersion.
  if (!(minkowski_inner(a, f.G(i, j)) < 0)) throw DomainError("select_a: no unit timelike a on the sheet of G");
  return a;
}

Height height_from_a(const SpacelikeSurfaceL3& f, const Vec3& a) {
  if (!is_finite(a) || std::fabs(minkowski_inner(a, a) + 1) > 1e-10 * std::fmax(1.0, a.x3 * a.x3))
    throw DomainError("height selector a must be unit timelike");
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (g.active(i, j) && !(minkowski_inner(a, f.G(i, j)) < 0))
        throw DomainError("height selector a is not on the sheet of the Gauss map");
  Height h;
  h.h = RealField::generate(f.grid_ptr(), [&](int i, int j) { return -minkowski_inner(f.f(i, j), a); });
  h.hz = ComplexField::generate(f.grid_ptr(), [&](int i, int j) { return -minkowski_inner(f.fz(i, j), a); });
  return h;
}

std::pair<double, double> system_A_pointwise(cplx hz, cplx hzz, double hzzbar, double tau0, cplx wz, cplx Q) {
  const double m = tau0 + 4 * std::norm(hz);
  const double first = std::abs(hzz - wz * hz + Q * std::sqrt(m / tau0));
  const double second = std::fabs(hzzbar - 0.25 * std::sqrt(tau0 * m));
  return {first, second};
}

SystemAResidual system_A_residual(const RealField& h, const RealField& tau0, const QuadDifferential& Q) {
  const ComplexField hz = d_z(h), hzz = d_zz(h);
  const RealField hzzb = d_zzbar(h);
  const ComplexField wz = d_z(tau0.map([](double t) { return std::log(t); }));
  SystemAResidual r{RealField(h.grid_ptr()), RealField(h.grid_ptr())};
  const Grid& g = h.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j)) continue;
      const auto [a, b] = system_A_pointwise(hz(i, j), hzz(i, j), hzzb(i, j), tau0(i, j), wz(i, j), Q(g.z(i, j)));
      r.first(i, j) = a;
      r.second(i, j) = b;
    }
  return r;
}

HorizontalN horizontal_N(const VecField& G, const CVecField& Gz, const RealField& tau0, const QuadDifferential& Q,
                         const ComplexField& hz, double eps_reg) {
  const Grid& g = G.grid();
  Mask regular(g.size(), 0);
  std::vector<Vec3> vals(g.size());
  std::size_t active = 0, degenerate = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j)) continue;
      ++active;
      const double t = tau0(i, j);
      const cplx q = Q(g.z(i, j));
      const double den = t * t - 16 * std::norm(q);
      if (std::fabs(den) < eps_reg * t * t) {
        ++degenerate;
        continue;
      }
      const cplx w = t * std::conj(hz(i, j)) - 4.0 * std::conj(q) * hz(i, j);
      const Vec3 horiz = (8.0 / den) * real(w * Gz(i, j));
      vals[g.index(i, j)] = horiz + std::sqrt((t + 4 * std::norm(hz(i, j))) / t) * G(i, j);
      regular[g.index(i, j)] = 1;
    }
  if (active > 0 && degenerate == active)
    throw DegenerateCase("tau0^2 - 16|Q|^2 vanishes on the whole grid: the Gauss map parametrizes a geodesic");
  const GridPtr rg = g.with_mask(mask_and(regular, g.mask()));
  HorizontalN out;
  out.N = VecField::generate(rg, [&](int i, int j) { return vals[rg->index(i, j)]; });
  out.degenerate = degenerate;
  return out;
}

HorizontalN horizontal_N(const VecField& G, const RealField& tau0, const QuadDifferential& Q, const RealField& h,
                         double eps_reg) {
  return horizontal_N(G, d_z(G), tau0, Q, d_z(h), eps_reg);
}

SurfaceH2xR build_h2r_surface(const VecField& N, const RealField& h) {
  SurfaceH2xR s;
  const GridPtr& gp = N.grid_ptr();
  s.N = N;
  s.h = RealField::generate(gp, [&](int i, int j) { return h(i, j); });
  s.patch.space = SpaceParams::h2xr();
  s.patch.kind = Parameterization::Conformal;
  s.patch.X = VecField::generate(gp, [&](int i, int j) {
    const Vec3& n = N(i, j);
    if (!(n.x3 > 0)) throw DomainError("N is not on the future hyperboloid sheet");
    return Vec3{n.x1 / (1 + n.x3), n.x2 / (1 + n.x3), h(i, j)};
  });
  s.data = fundamental_data(s.patch);
  s.Q_AR = ComplexField::generate(gp, [&](int i, int j) {
    const cplx A = s.data.A(i, j);
    return s.data.p(i, j) + A * A;
  });
  return s;
}

VecField gauss_map_h2(const SurfaceH2xR& psi) {
  const VecField Nx = diff_x(psi.N), Ny = diff_y(psi.N);
  const RealField hx = diff_x(psi.h), hy = diff_y(psi.h);
  const GridPtr& gp = psi.N.grid_ptr();
  const Grid& g = *gp;

  auto normal = [&](int i, int j) {
    const Vec3& n = psi.N(i, j);
    const Vec4 pos{n.x3, n.x1, n.x2, 0.0};
    const Vec4 px{Nx(i, j).x3, Nx(i, j).x1, Nx(i, j).x2, hx(i, j)};
    const Vec4 py{Ny(i, j).x3, Ny(i, j).x1, Ny(i, j).x2, hy(i, j)};
    Vec4 e = l4_cross(pos, px, py);
    const double nn = std::sqrt(std::fabs(l4_inner(e, e)));
    for (double& c : e) c /= nn;
    return e;
  };

  const auto [ic, jc] = g.center_node();
  if (!g.active(ic, jc)) throw DomainError("gauss_map_h2: grid centre is not active");
  const double sign = normal(ic, jc)[3] < 0 ? -1.0 : 1.0;

  auto centred = [&](int i, int j) {
    for (int k = 1; k <= 2; ++k)
      if (!g.active(i - k, j) || !g.active(i + k, j) || !g.active(i, j - k) || !g.active(i, j + k)) return false;
    return true;
  };

  return VecField::generate(gp, [&](int i, int j) {
    Vec4 e = normal(i, j);
    if (!std::isfinite(e[3])) return nan_value<Vec3>();
    for (double& c : e) c *= sign;
    const double u = e[3];
    if (!(u > 0)) {
      // One-sided differences near the rim cannot resolve the orientation.
      if (!centred(i, j)) return nan_value<Vec3>();
      throw DomainError("gauss_map_h2: angle function is not positive");
    }
    const Vec3& n = psi.N(i, j);
    const Vec4 xi{(e[0] + n.x3) / u, (e[1] + n.x1) / u, (e[2] + n.x2) / u, 1.0};
    return Vec3{xi[1], xi[2], xi[0]};
  });
}

RealField harmonicity_residual(const VecField& G, const VecField& Gzzbar) {
  return RealField::generate(G.grid_ptr(), [&](int i, int j) {
    const Vec3& v = Gzzbar(i, j);
    const Vec3& p = G(i, j);
    const Vec3 t = v + minkowski_inner(v, p) * p;
    return std::sqrt(std::fabs(minkowski_inner(t, t)));
  });
}

RealField harmonicity_residual(const VecField& G) { return harmonicity_residual(G, d_zzbar(G)); }

WeierstrassReport weierstrass_check(const CVecField& Gz, const QuadDifferential& Q, const RealField& tau0,
                                    const Mask& region) {
  const GridPtr& gp = Gz.grid_ptr();
  WeierstrassReport r;
  r.hopf_part = max_norm(ComplexField::generate(gp, [&](int i, int j) {
    return minkowski_inner(Gz(i, j), Gz(i, j)) - Q(gp->z(i, j));
  }), region);
  r.trace_part = max_norm(RealField::generate(gp, [&](int i, int j) {
    const double t = tau0(i, j);
    return 2 * minkowski_inner(Gz(i, j), conj(Gz(i, j))).real() - (t / 4 + 4 * std::norm(Q(gp->z(i, j))) / t);
  }), region);
  return r;
}

WeierstrassReport weierstrass_check(const VecField& G, const QuadDifferential& Q, const RealField& tau0,
                                    const Mask& region) {
  return weierstrass_check(d_z(G), Q, tau0, region);
}

RealField parallel_dual(const QuadDifferential& Q, const RealField& tau0) {
  return RealField::generate(tau0.grid_ptr(), [&](int i, int j) {
    const double q2 = std::norm(Q(tau0.grid().z(i, j)));
    if (q2 == 0.0) throw DomainError("parallel dual is undefined where Q vanishes");
    return 16 * q2 / tau0(i, j);
  });
}

RealField gauss_map_distance_ratio(const QuadDifferential& Q, const FundamentalData& d) {
  return RealField::generate(d.lambda.grid_ptr(), [&](int i, int j) {
    const double u = d.u(i, j);
    return 4 * std::abs(Q(d.lambda.grid().z(i, j))) / (d.lambda(i, j) * u * u);
  });
}

}  // namespace nilgraph
