#include "nilgraph/sister.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nilgraph/error.hpp"
#include "nilgraph/quad_diff.hpp"

namespace nilgraph {

namespace {

const cplx I(0, 1);

struct Quadrature {
  RealField t;
  RealField tx, ty;
  double closedness;
};

Quadrature integrate_t(const GridPtr& gp, const ComplexField& tz, const Mask& check) {
  const Grid& g = *gp;
  Quadrature q{RealField(gp), tz.map([](const cplx& v) { return 2 * v.real(); }),
               tz.map([](const cplx& v) { return -2 * v.imag(); }), 0};
  const auto [ic, jc] = g.center_node();
  if (!g.active(ic, jc)) throw DomainError("grid centre is not active");
  auto [lo, hi] = g.run_x(ic, jc);
  std::vector<double> row;
  for (int i = lo; i <= hi; ++i) row.push_back(q.tx(i, jc));
  const std::vector<double> trow = cumulative_integral(row, ic - lo, g.hx());
  for (int i = lo; i <= hi; ++i) {
    auto [clo, chi] = g.run_y(i, jc);
    std::vector<double> col;
    for (int j = clo; j <= chi; ++j) col.push_back(q.ty(i, j));
    const std::vector<double> tcol = cumulative_integral(col, jc - clo, g.hy());
    for (int j = clo; j <= chi; ++j) q.t(i, j) = trow[i - lo] + tcol[j - clo];
  }
  q.closedness = max_norm(d_zbar(tz).map([](const cplx& v) { return v.imag(); }), check);
  return q;
}

bool segments_cross(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  auto orient = [](const Vec3& p, const Vec3& q, const Vec3& r) {
    const double v = (q.x1 - p.x1) * (r.x2 - p.x2) - (q.x2 - p.x2) * (r.x1 - p.x1);
    return (v > 0) - (v < 0);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

FundamentalData sister_data(const FundamentalData& d, SisterDirection dir, double tol, const Mask& region) {
  const double H0 = dir == SisterDirection::Nil3ToH2R ? 0.0 : 0.5;
  const Mask& reg = region.empty() ? d.H.grid().mask() : region;
  const double defect = max_norm(d.H.map([H0](double h) { return h - H0; }), reg);
  if (!(defect <= tol)) throw DomainError("sister_data: mean curvature does not match the source space");
  if (!d.has_p()) throw DomainError("sister_data needs the Hopf coefficient (conformal patch)");
  const cplx rot = dir == SisterDirection::Nil3ToH2R ? -I : I;
  FundamentalData out;
  out.lambda = d.lambda;
  out.u = d.u;
  out.H = d.H.map([dir](double) { return dir == SisterDirection::Nil3ToH2R ? 0.5 : 0.0; });
  out.p = d.p.map([rot](const cplx& v) { return rot * v; });
  out.A = d.A.map([rot](const cplx& v) { return rot * v; });
  return out;
}

GraphNil3 build_nil3_from_l3(const SpacelikeSurfaceL3& f, const Vec3& a, const SisterOptions& opts) {
  if (opts.epsilon != 0 && opts.epsilon != 1 && opts.epsilon != -1) throw DomainError("epsilon must be +1 or -1");
  for (int j = 0; j < f.grid().ny(); ++j)
    for (int i = 0; i < f.grid().nx(); ++i)
      if (f.grid().active(i, j) && !(minkowski_inner(a, f.G(i, j)) < 0))
        throw DomainError("a is not on the sheet of the Gauss map");
  const LorentzMap phi = lorentz_transform_to_e3(a);
  const GridPtr& gp = f.grid_ptr();
  const VecField pf = f.f.map([&](const Vec3& v) { return phi(v); });
  const CVecField pfz = f.fz.map([&](const CVec3& v) { return phi(v); });
  const Mask check = gp->check_region(opts.check_scale);

  GraphNil3 out;
  out.h = pf.map([](const Vec3& v) { return v.x3; });
  out.hz = pfz.map([](const CVec3& v) { return v.x3; });

  auto tz_for = [&](int eps) {
    return ComplexField::generate(gp, [&](int i, int j) {
      const Vec3& P = pf(i, j);
      const CVec3& Pz = pfz(i, j);
      const cplx A = I * static_cast<double>(eps) * Pz.x3;
      return A - 0.5 * (P.x2 * Pz.x1 - P.x1 * Pz.x2);
    });
  };

  int eps = opts.epsilon == 0 ? 1 : opts.epsilon;
  Quadrature q = integrate_t(gp, tz_for(eps), check);
  if (opts.epsilon == 0 && !(q.closedness <= 10 * opts.closedness_tol)) {
    Quadrature alt = integrate_t(gp, tz_for(-eps), check);
    out.closedness_other = q.closedness;
    if (alt.closedness < q.closedness) {
      std::swap(q, alt);
      eps = -eps;
    }
  }
  if (!(q.closedness <= 10 * opts.closedness_tol))
    throw IntegrabilityError("vertical quadrature form is not closed for either sign");
  out.epsilon = eps;
  out.closedness = q.closedness;
  out.loop_defect = loop_audit(q.tx, q.ty, check, 1u, 32);
  if (!(out.loop_defect <= 10 * opts.closedness_tol))
    throw IntegrabilityError("closed-loop audit of the vertical quadrature failed");

  out.patch.space = SpaceParams::nil3();
  out.patch.kind = Parameterization::Conformal;
  out.patch.X = VecField::generate(gp, [&](int i, int j) { return Vec3{pf(i, j).x1, pf(i, j).x2, q.t(i, j)}; });
  out.data = fundamental_data(out.patch);
  out.Q_AR = ar_differential(out.patch.space, out.data);
  return out;
}

double loop_audit(const RealField& p, const RealField& q, const Mask& region, unsigned seed, int count) {
  const Grid& g = p.grid();
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> di(0, g.nx() - 1), dj(0, g.ny() - 1);
  auto inside = [&](int i, int j) { return g.active(i, j) && region[g.index(i, j)]; };
  double worst = 0;
  int done = 0;
  for (int attempt = 0; attempt < 100 * count && done < count; ++attempt) {
    int i0 = di(rng), i1 = di(rng), j0 = dj(rng), j1 = dj(rng);
    if (i0 > i1) std::swap(i0, i1);
    if (j0 > j1) std::swap(j0, j1);
    if (i1 - i0 < 4 || j1 - j0 < 4) continue;
    bool ok = true;
    for (int i = i0; i <= i1 && ok; ++i) ok = inside(i, j0) && inside(i, j1);
    for (int j = j0; j <= j1 && ok; ++j) ok = inside(i0, j) && inside(i1, j);
    if (!ok) continue;
    auto edge = [&](bool along_x, int fixed, int a, int b, const RealField& fld) {
      std::vector<double> s;
      for (int k = a; k <= b; ++k) s.push_back(along_x ? fld(k, fixed) : fld(fixed, k));
      return cumulative_integral(s, 0, along_x ? g.hx() : g.hy()).back();
    };
    const double loop = edge(true, j0, i0, i1, p) + edge(false, i1, j0, j1, q) - edge(true, j1, i0, i1, p) -
                        edge(false, i0, j0, j1, q);
    const double perim = 2 * ((i1 - i0) * g.hx() + (j1 - j0) * g.hy());
    worst = std::fmax(worst, std::fabs(loop) / perim);
    ++done;
  }
  return worst;
}

InjectivityReport check_injectivity(const VecField& X, const Mask& region) {
  const Grid& g = X.grid();
  auto inside = [&](int i, int j) { return g.active(i, j) && region[g.index(i, j)]; };
  std::size_t pos = 0, neg = 0;
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      if (!inside(i, j) || !inside(i + 1, j) || !inside(i, j + 1) || !inside(i + 1, j + 1)) continue;
      auto tri = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
        return (b.x1 - a.x1) * (c.x2 - a.x2) - (b.x2 - a.x2) * (c.x1 - a.x1);
      };
      const double s1 = tri(X(i, j), X(i + 1, j), X(i + 1, j + 1));
      const double s2 = tri(X(i, j), X(i + 1, j + 1), X(i, j + 1));
      for (double s : {s1, s2}) {
        if (s > 0) ++pos;
        else ++neg;
      }
    }
  InjectivityReport r;
  r.orientation = pos >= neg ? 1 : -1;
  r.flipped_cells = std::min(pos, neg);

  // Boundary nodes of the region ordered by angle about the centre node.
  const auto [ic, jc] = g.center_node();
  std::vector<std::pair<double, Vec3>> ring;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!inside(i, j)) continue;
      if (inside(i - 1, j) && inside(i + 1, j) && inside(i, j - 1) && inside(i, j + 1)) continue;
      ring.push_back({std::atan2(static_cast<double>(j - jc), static_cast<double>(i - ic)), X(i, j)});
    }
  std::sort(ring.begin(), ring.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  bool simple = ring.size() >= 3;
  const std::size_t n = ring.size();
  for (std::size_t a = 0; a < n && simple; ++a)
    for (std::size_t b = a + 2; b < n && simple; ++b) {
      if (a == 0 && b == n - 1) continue;
      if (segments_cross(ring[a].second, ring[(a + 1) % n].second, ring[b].second, ring[(b + 1) % n].second))
        simple = false;
    }
  r.boundary_simple = simple;
  r.injective = r.flipped_cells == 0 && simple && pos + neg > 0;
  return r;
}

ResampledGraph resample_to_graph(const VecField& X, const Mask& region, int target_n) {
  if (target_n < 5) throw DomainError("resample target needs at least 5 nodes");
  const InjectivityReport inj = check_injectivity(X, region);
  if (!inj.injective) throw FoldError("vertical projection is not injective on the grid");
  const Grid& g = X.grid();
  auto inside = [&](int i, int j) { return g.active(i, j) && region[g.index(i, j)]; };
  const auto [ic, jc] = g.center_node();
  if (!inside(ic, jc)) throw DomainError("resample: centre node outside region");
  const double cx = X(ic, jc).x1, cy = X(ic, jc).x2;

  double ax = 0, ay = 0;
  std::vector<std::pair<int, int>> nodes;
  std::vector<Vec3> bnd;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!inside(i, j)) continue;
      nodes.push_back({i, j});
      ax = std::fmax(ax, std::fabs(X(i, j).x1 - cx));
      ay = std::fmax(ay, std::fabs(X(i, j).x2 - cy));
      if (!(inside(i - 1, j) && inside(i + 1, j) && inside(i, j - 1) && inside(i, j + 1))) bnd.push_back(X(i, j));
    }
  double s = std::numeric_limits<double>::infinity();
  for (const Vec3& b : bnd) s = std::fmin(s, std::fmax(std::fabs(b.x1 - cx) / ax, std::fabs(b.x2 - cy) / ay));
  const double hx = 0.98 * s * ax, hy_max = 0.98 * s * ay;
  const double H = 2 * hx / (target_n - 1);
  const int ny = static_cast<int>(std::floor(2 * hy_max / H)) + 1;
  if (ny < 5) throw DomainError("resample: covered rectangle is too thin");
  const double hy = 0.5 * (ny - 1) * H;
  const GridPtr out = Grid::rect(cx - hx, cx + hx, cy - hy, cy + hy, target_n, ny);

  auto block_ok = [&](int i0, int j0) {
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a)
        if (!g.active(i0 + a, j0 + b)) return false;
    return true;
  };
  // 4x4 Lagrange interpolant of X at fractional index (pi, pj).
  auto eval = [&](double pi, double pj, Vec3& v, Vec3& vi, Vec3& vj) {
    int i0 = static_cast<int>(std::floor(pi)) - 1, j0 = static_cast<int>(std::floor(pj)) - 1;
    i0 = std::clamp(i0, 0, g.nx() - 4);
    j0 = std::clamp(j0, 0, g.ny() - 4);
    if (!block_ok(i0, j0)) {
      bool found = false;
      for (int dj = -2; dj <= 2 && !found; ++dj)
        for (int dI = -2; dI <= 2 && !found; ++dI)
          if (g.in_range(i0 + dI, j0 + dj) && g.in_range(i0 + dI + 3, j0 + dj + 3) && block_ok(i0 + dI, j0 + dj)) {
            i0 += dI;
            j0 += dj;
            found = true;
          }
      if (!found) return false;
    }
    double wi[4], dwi[4], wj[4], dwj[4];
    stencil::lagrange(4, pi - i0, wi, dwi);
    stencil::lagrange(4, pj - j0, wj, dwj);
    v = vi = vj = Vec3{};
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) {
        const Vec3& x = X(i0 + a, j0 + b);
        v += (wi[a] * wj[b]) * x;
        vi += (dwi[a] * wj[b]) * x;
        vj += (wi[a] * dwj[b]) * x;
      }
    return true;
  };

  ResampledGraph rg;
  rg.cx = cx;
  rg.cy = cy;
  rg.half_x = hx;
  rg.half_y = hy;
  rg.f = RealField(out);
  const double scale = std::fmax(1.0, std::fmax(ax, ay));
  for (int j = 0; j < out->ny(); ++j)
    for (int i = 0; i < out->nx(); ++i) {
      const double tx = out->x(i), ty = out->y(j);
      double best = std::numeric_limits<double>::infinity();
      std::pair<int, int> seed{ic, jc};
      for (const auto& [a, b] : nodes) {
        const double d = std::hypot(X(a, b).x1 - tx, X(a, b).x2 - ty);
        if (d < best) {
          best = d;
          seed = {a, b};
        }
      }
      double pi = seed.first, pj = seed.second;
      Vec3 v, vi, vj;
      double r = std::numeric_limits<double>::infinity();
      for (int it = 0; it < 50; ++it) {
        if (!eval(pi, pj, v, vi, vj)) throw FoldError("resample: inversion left the active grid");
        const double r1 = v.x1 - tx, r2 = v.x2 - ty;
        r = std::hypot(r1, r2);
        if (r <= 1e-13 * scale) break;
        const double det = vi.x1 * vj.x2 - vj.x1 * vi.x2;
        if (det == 0) throw FoldError("resample: singular projection Jacobian");
        pi -= (vj.x2 * r1 - vj.x1 * r2) / det;
        pj -= (-vi.x2 * r1 + vi.x1 * r2) / det;
      }
      if (!(r <= 1e-9 * scale)) throw FoldError("resample: inversion did not converge");
      rg.inversion_residual = std::fmax(rg.inversion_residual, r);
      rg.f(i, j) = v.x3;
    }
  return rg;
}

ResampledGraph resample_to_graph(const GraphNil3& g, const Mask& region, int target_n) {
  return resample_to_graph(g.patch.X, region, target_n);
}

ComplexField ar_differential(const SpaceParams& space, const FundamentalData& d) {
  if (!d.has_p()) throw DomainError("AR differential needs a conformal patch");
  const bool nil = space.kind() == SpaceKind::Nil3;
  return ComplexField::generate(d.lambda.grid_ptr(), [&](int i, int j) {
    const cplx A = d.A(i, j);
    return (nil ? I * d.p(i, j) : d.p(i, j)) + A * A;
  });
}

ComplexField ar_differential(const SurfacePatch& patch) {
  if (patch.kind != Parameterization::Conformal) throw DomainError("AR differential needs a conformal patch");
  return ar_differential(patch.space, fundamental_data(patch));
}

Mask margin_mask(const Grid& g, int k) {
  Mask m(g.size(), 0);
  for (int j = k; j < g.ny() - k; ++j)
    for (int i = k; i < g.nx() - k; ++i) m[g.index(i, j)] = g.active(i, j);
  return m;
}

}  // namespace nilgraph
