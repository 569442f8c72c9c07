#include "nilgraph/verifier.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "nilgraph/error.hpp"

namespace nilgraph {

namespace {

// sqrt(u^2 g(v, v)) for a Nil3 graph: u = 1/sqrt(1 + a^2 + b^2), g adds (a dx + b dy)^2.
double nil3_speed(const GraphJet& j, double x, double y, double vx, double vy) {
  const double a = j.fx + 0.5 * y, b = j.fy - 0.5 * x;
  const double g = vx * vx + vy * vy + std::pow(a * vx + b * vy, 2);
  return std::sqrt(g / (1 + a * a + b * b));
}

AnalyticGraph nil3_graph(std::string name, Domain domain, std::function<GraphJet(double, double)> jet) {
  AnalyticGraph g;
  g.name = std::move(name);
  g.space = SpaceParams::nil3();
  g.domain = domain;
  g.jet = jet;
  g.u2g_speed = [jet](double x, double y, double vx, double vy) { return nil3_speed(jet(x, y), x, y, vx, vy); };
  return g;
}

Domain plane_box(double r) { return Domain{DomainShape::Rect, -r, r, -r, r, 0.0}; }

}  // namespace

SurfacePatch AnalyticGraph::patch(const GridPtr& grid) const {
  SurfacePatch p;
  p.space = space;
  p.kind = Parameterization::Graph;
  PatchDerivatives d{VecField(grid), VecField(grid), VecField(grid), VecField(grid), VecField(grid)};
  p.X = VecField(grid);
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i) {
      if (!grid->active(i, j)) continue;
      const GraphJet v = jet(grid->x(i), grid->y(j));
      p.X(i, j) = Vec3{grid->x(i), grid->y(j), v.f};
      d.Xx(i, j) = Vec3{1, 0, v.fx};
      d.Xy(i, j) = Vec3{0, 1, v.fy};
      d.Xxx(i, j) = Vec3{0, 0, v.fxx};
      d.Xxy(i, j) = Vec3{0, 0, v.fxy};
      d.Xyy(i, j) = Vec3{0, 0, v.fyy};
    }
  p.analytic = std::move(d);
  return p;
}

RealField AnalyticGraph::height(const GridPtr& grid) const {
  return RealField::generate(grid, [&](int i, int j) { return jet(grid->x(i), grid->y(j)).f; });
}

AnalyticGraph linear_graph(double a, double b, double c) {
  return nil3_graph("linear", plane_box(2), [a, b, c](double x, double y) {
    return GraphJet{a * x + b * y + c, a, b, 0, 0, 0};
  });
}

AnalyticGraph saddle_family(double c) {
  return nil3_graph("saddle", plane_box(2), [c](double x, double y) {
    const double s = std::sqrt(1 + y * y);
    return GraphJet{0.5 * x * y - c * (y * s + std::asinh(y)), 0.5 * y, 0.5 * x - 2 * c * s, 0, 0.5, -2 * c * y / s};
  });
}

AnalyticGraph h2r_counterexample() {
  AnalyticGraph g;
  g.name = "counterexample";
  g.space = SpaceParams::h2xr();
  g.domain = Domain{DomainShape::Disk, -1, 1, -1, 1, 1.0};
  g.jet = [](double x, double y) {
    const double s = 1 - x * x - y * y;
    if (!(s > 0)) throw DomainError("counterexample evaluated outside the unit disk");
    const double e = std::exp(1 / s);
    const double ex = 2 * x / (s * s), ey = 2 * y / (s * s);  // d(1/s)
    const double exx = 2 / (s * s) + 8 * x * x / (s * s * s);
    const double exy = 8 * x * y / (s * s * s);
    const double eyy = 2 / (s * s) + 8 * y * y / (s * s * s);
    GraphJet j;
    j.f = y * e;
    j.fx = y * e * ex;
    j.fy = e * (1 + y * ey);
    j.fxx = y * e * (ex * ex + exx);
    j.fxy = e * (ex + y * (ey * ex + exy));
    j.fyy = e * (2 * ey + y * (ey * ey + eyy));
    return j;
  };
  // Everything is scaled by exp(-2/s) so the speed stays finite up to the rim.
  g.u2g_speed = [](double x, double y, double vx, double vy) {
    const double s = 1 - x * x - y * y;
    if (!(s > 0)) throw DomainError("curve leaves the unit disk");
    const double gx = 2 * x * y / (s * s), gy = 1 + 2 * y * y / (s * s);  // grad f / exp(1/s)
    const double log_e2phi = std::log(4.0) - 2 * std::log(s);
    const double w = std::exp(-2 / s);
    const double gv = gx * vx + gy * vy;
    const double num = std::exp(log_e2phi - 2 / s) * (vx * vx + vy * vy) + gv * gv;
    const double den = w + std::exp(-log_e2phi) * (gx * gx + gy * gy);
    return std::sqrt(num / den);
  };
  return g;
}

double pde_residual_nil3(const GraphJet& j, double x, double y) {
  const double a = j.fx + 0.5 * y, b = j.fy - 0.5 * x;
  return std::fabs((1 + b * b) * j.fxx - 2 * a * b * j.fxy + (1 + a * a) * j.fyy);
}

RealField pde_residual_nil3(const AnalyticGraph& g, const GridPtr& grid) {
  if (g.space.kind() != SpaceKind::Nil3) throw UnsupportedSpace("minimal graph equation is stated in Nil3");
  return RealField::generate(grid, [&](int i, int j) {
    const double x = grid->x(i), y = grid->y(j);
    return pde_residual_nil3(g.jet(x, y), x, y);
  });
}

RealField pde_residual_nil3(const RealField& f) {
  const RealField fx = diff_x(f), fy = diff_y(f), fxx = diff_xx(f), fyy = diff_yy(f), fxy = diff_xy(f);
  const Grid& g = f.grid();
  return RealField::generate(f.grid_ptr(), [&](int i, int j) {
    return pde_residual_nil3(GraphJet{f(i, j), fx(i, j), fy(i, j), fxx(i, j), fxy(i, j), fyy(i, j)}, g.x(i), g.y(j));
  });
}

double ProjectionMetricReport::worst() const {
  return std::fmax(std::fmax(rho1_defect, rho2_defect), std::fmax(det_defect, sandwich_violation));
}

ProjectionMetricReport projection_metric_check(const FundamentalData& d, const Mask& region, unsigned seed,
                                               int directions) {
  if (!d.has_p()) throw DomainError("projection metric against |dz|^2 needs conformal data");
  const Grid& g = d.lambda.grid();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  ProjectionMetricReport r;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j) || !region[g.index(i, j)]) continue;
      const double lam = d.lambda(i, j), u = d.u(i, j);
      const cplx A = d.A(i, j), A2 = A * A;
      if (!std::isfinite(lam) || !std::isfinite(u) || !std::isfinite(std::abs(A))) continue;
      // -A^2 dz^2 + (lambda - 2|A|^2)|dz|^2 - conj(A)^2 dzbar^2 in (dx, dy).
      const double m = lam - 2 * std::norm(A);
      Eigen::Matrix2d gF;
      gF << m - 2 * A2.real(), 2 * A2.imag(), 2 * A2.imag(), m + 2 * A2.real();
      const double mid = 0.5 * gF.trace(), rad = std::hypot(0.5 * (gF(0, 0) - gF(1, 1)), gF(0, 1));
      const double rho1 = mid + rad, rho2 = mid - rad;
      const double sc = std::fmax(1.0, lam);
      r.rho1_defect = std::fmax(r.rho1_defect, std::fabs(rho1 - lam) / sc);
      r.rho2_defect = std::fmax(r.rho2_defect, std::fabs(rho2 - lam * u * u) / sc);
      r.det_defect = std::fmax(r.det_defect, std::fabs(gF.determinant() - lam * lam * u * u) / (sc * sc));
      for (int k = 0; k < directions; ++k) {
        const double t = angle(rng);
        const Eigen::Vector2d v(std::cos(t), std::sin(t));
        const double q = v.dot(gF * v);
        const double viol = std::fmax(lam * u * u - q, q - lam) / sc;
        r.sandwich_violation = std::fmax(r.sandwich_violation, std::fmax(0.0, viol));
      }
      r.directions += directions;
    }
  return r;
}

ProjectionMetricReport projection_metric_check(const SurfacePatch& patch, const FundamentalData& d,
                                               const Mask& region, unsigned seed, int directions) {
  const PatchDerivatives pd = patch_derivatives(patch);
  const Grid& g = patch.grid();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  ProjectionMetricReport r;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j) || !region[g.index(i, j)]) continue;
      const Vec3 &X = patch.X(i, j), &Xx = pd.Xx(i, j), &Xy = pd.Xy(i, j);
      const double u = d.u(i, j);
      if (!is_finite(X) || !is_finite(Xx) || !is_finite(Xy) || !std::isfinite(u)) continue;
      const Eigen::Matrix3d M = metric(patch.space, X);
      const Eigen::Matrix2d B = base_metric(patch.space, X.x1, X.x2);
      Eigen::Matrix<double, 3, 2> J;
      J << Xx.x1, Xy.x1, Xx.x2, Xy.x2, Xx.x3, Xy.x3;
      const Eigen::Matrix2d I1 = J.transpose() * M * J;
      const Eigen::Matrix2d H = J.topRows<2>();
      const Eigen::Matrix2d gF = H.transpose() * B * H;
      // det(gF - mu I1) = 0.
      const double qa = I1.determinant(), qc = gF.determinant();
      const double qb = gF(0, 0) * I1(1, 1) + gF(1, 1) * I1(0, 0) - 2 * gF(0, 1) * I1(0, 1);
      const double disc = std::sqrt(std::fmax(0.0, qb * qb - 4 * qa * qc));
      const double mu1 = (qb + disc) / (2 * qa), mu2 = qc / (qa * mu1);
      r.rho1_defect = std::fmax(r.rho1_defect, std::fabs(mu1 - 1));
      r.rho2_defect = std::fmax(r.rho2_defect, std::fabs(mu2 - u * u));
      r.det_defect = std::fmax(r.det_defect, std::fabs(gF.determinant() / I1.determinant() - u * u));
      for (int k = 0; k < directions; ++k) {
        const double t = angle(rng);
        const Eigen::Vector2d v(std::cos(t), std::sin(t));
        const double q = v.dot(gF * v), n = v.dot(I1 * v);
        const double viol = std::fmax(u * u * n - q, q - n) / n;
        r.sandwich_violation = std::fmax(r.sandwich_violation, std::fmax(0.0, viol));
      }
      r.directions += directions;
    }
  return r;
}

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double rel_tol,
                        long max_intervals) {
  struct Piece {
    double a, b, fa, fm, fb, whole;
  };
  auto simpson = [](double a, double b, double fa, double fm, double fb) { return (b - a) / 6 * (fa + 4 * fm + fb); };
  const double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
  std::vector<Piece> stack{{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}};
  // Rough scale for the relative criterion.
  const double scale = std::fabs(stack.back().whole);
  double total = 0;
  long intervals = 1;
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double fl = fn(0.5 * (p.a + m)), fr = fn(0.5 * (m + p.b));
    const double left = simpson(p.a, m, p.fa, fl, p.fm), right = simpson(m, p.b, p.fm, fr, p.fb);
    const double err = left + right - p.whole;
    const double width = (p.b - p.a) / (b - a);
    if (std::fabs(err) <= 15 * rel_tol * std::fmax(scale, 1e-300) * width || intervals >= max_intervals) {
      total += left + right + err / 15;
      continue;
    }
    ++intervals;
    stack.push_back({m, p.b, p.fm, fr, p.fb, right});
    stack.push_back({p.a, m, p.fa, fl, p.fm, left});
  }
  if (!std::isfinite(total)) throw ConvergenceError("adaptive quadrature produced a non-finite value", total);
  return total;
}

double u2g_path_length(const AnalyticGraph& g, const std::function<cplx(double)>& gamma,
                       const std::function<cplx(double)>& dgamma, double t0, double t1) {
  for (double t : {t0, 0.5 * (t0 + t1), t1})
    if (!g.domain.contains(gamma(t))) throw DomainError("curve exits the fixture domain");
  return adaptive_simpson(
      [&](double t) {
        const cplx p = gamma(t), v = dgamma(t);
        return g.u2g_speed(p.real(), p.imag(), v.real(), v.imag());
      },
      t0, t1);
}

double counterexample_alpha_length(double t1) {
  const AnalyticGraph g = h2r_counterexample();
  return u2g_path_length(g, [](double t) { return cplx(t, 0); }, [](double) { return cplx(1, 0); }, 0.0, t1);
}

std::vector<double> diagonal_u2g_profile(const FundamentalData& d) {
  const Grid& g = d.lambda.grid();
  const auto [ic, jc] = g.center_node();
  std::vector<double> speed;
  for (int k = 0; g.active(ic + k, jc + k); ++k) {
    const double s = d.u(ic + k, jc + k) * std::sqrt(d.lambda(ic + k, jc + k));
    if (!std::isfinite(s)) break;
    speed.push_back(s);
  }
  if (speed.size() < 2) throw DomainError("diagonal profile needs at least two nodes");
  return cumulative_integral(speed, 0, std::hypot(g.hx(), g.hy()));
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] > v[k - 1])) return false;
  return !v.empty();
}

}  // namespace nilgraph
