#include "nilgraph/vortex.hpp"

#include <charconv>
#include <numbers>
#include <sstream>

#include "nilgraph/error.hpp"

namespace nilgraph {

namespace {

constexpr int kMinNodes = 17;

std::vector<double> split_numbers(const std::string& body, std::size_t offset) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    const std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double x;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("expected a number in grid spec", 1, static_cast<int>(offset + pos + 1));
    }
    if (used != tok.size()) throw ParseError("trailing text in grid spec number", 1, static_cast<int>(offset + pos + used + 1));
    v.push_back(x);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return v;
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

GridSpec GridSpec::rect(double x0, double x1, double y0, double y1, int nx) {
  if (!(x1 > x0) || !(y1 > y0)) throw DomainError("empty rectangle");
  if (nx < kMinNodes) throw DomainError("grid needs at least 17 nodes per side");
  const double h = (x1 - x0) / (nx - 1);
  const double cells = (y1 - y0) / h;
  const long ny = std::lround(cells);
  if (std::fabs(cells - static_cast<double>(ny)) > 1e-9 * std::fmax(1.0, cells))
    throw DomainError("rectangle height is not a multiple of the x spacing; grid would not be conformal");
  if (ny + 1 < kMinNodes) throw DomainError("grid needs at least 17 nodes per side");
  return {Domain{DomainShape::Rect, x0, x1, y0, y1, 0.0}, nx, static_cast<int>(ny + 1)};
}

GridSpec GridSpec::disk(double radius, int n) {
  if (!(radius > 0) || !(radius < 1)) throw DomainError("disk radius must lie in (0, 1)");
  if (n < kMinNodes) throw DomainError("grid needs at least 17 nodes per side");
  return {Domain{DomainShape::Disk, -radius, radius, -radius, radius, radius}, n, n};
}

GridSpec GridSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("grid spec needs 'rect:' or 'disk:'", 1, 1);
  const std::string kind = text.substr(0, colon);
  const auto v = split_numbers(text.substr(colon + 1), colon + 1);
  auto as_count = [&](double x) {
    if (x != std::floor(x) || x < 0) throw ParseError("node count must be a non-negative integer", 1, 1);
    return static_cast<int>(x);
  };
  if (kind == "rect") {
    if (v.size() != 5) throw ParseError("rect: needs x0,x1,y0,y1,n", 1, static_cast<int>(colon + 2));
    return rect(v[0], v[1], v[2], v[3], as_count(v[4]));
  }
  if (kind == "disk") {
    if (v.size() != 2) throw ParseError("disk: needs rho,n", 1, static_cast<int>(colon + 2));
    return disk(v[0], as_count(v[1]));
  }
  throw ParseError("unknown grid kind '" + kind + "'", 1, 1);
}

std::string GridSpec::to_string() const {
  if (domain.shape == DomainShape::Disk) return "disk:" + fmt(domain.radius) + "," + std::to_string(nx);
  return "rect:" + fmt(domain.x0) + "," + fmt(domain.x1) + "," + fmt(domain.y0) + "," + fmt(domain.y1) + "," +
         std::to_string(nx);
}

VortexGrid make_vortex_grid(const GridSpec& spec) {
  const Domain& d = spec.domain;
  const double h = (d.x1 - d.x0) / (spec.nx - 1);
  const double hy = (d.y1 - d.y0) / (spec.ny - 1);
  auto full = std::make_shared<Grid>(d, d.x0, d.y0, h, hy, spec.nx, spec.ny, Mask{});
  const std::size_t n = full->size();
  Mask unknown(n, 0), active(n, 0);
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      bool in;
      if (d.shape == DomainShape::Disk)
        in = std::abs(full->z(i, j)) < d.radius * (1 - 1e-12);
      else
        in = i > 0 && j > 0 && i < spec.nx - 1 && j < spec.ny - 1;
      unknown[full->index(i, j)] = in;
    }
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      if (!unknown[full->index(i, j)]) continue;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) active[full->index(i + di, j + dj)] = 1;
    }
  return {full->with_mask(std::move(active)), std::move(unknown)};
}

BoundaryPreset parse_boundary_preset(const std::string& name) {
  if (name == "asymptotic-hyperbolic") return BoundaryPreset::AsymptoticHyperbolic;
  if (name == "qflat") return BoundaryPreset::QFlat;
  if (name == "hyperbolic-max") return BoundaryPreset::HyperbolicMax;
  throw ParseError("unknown boundary preset '" + name + "'", 1, 1);
}

std::string to_string(BoundaryPreset preset) {
  switch (preset) {
    case BoundaryPreset::AsymptoticHyperbolic: return "asymptotic-hyperbolic";
    case BoundaryPreset::QFlat: return "qflat";
    case BoundaryPreset::HyperbolicMax: return "hyperbolic-max";
  }
  return {};
}

double preset_tau0(BoundaryPreset preset, const QuadDifferential& Q, cplx z) {
  auto hyperbolic = [&] {
    const double d = 1 - std::norm(z);
    if (!(d > 0)) throw DomainError("asymptotic-hyperbolic boundary data needs |z| < 1");
    return 16 / (d * d);
  };
  switch (preset) {
    case BoundaryPreset::AsymptoticHyperbolic: return hyperbolic();
    case BoundaryPreset::QFlat: return std::fmax(4 * std::abs(Q(z)), 1e-6);
    case BoundaryPreset::HyperbolicMax: return std::fmax(4 * std::abs(Q(z)), hyperbolic());
  }
  return 0;
}

ComplexField ConformalFactorField::log_tau0_z() const {
  if (exact) return ComplexField::generate(tau0.grid_ptr(), [&](int i, int j) { return exact->wz(tau0.grid().z(i, j)); });
  return d_z(tau0.map([](double t) { return std::log(t); }));
}

namespace {

struct Stencil {
  // offsets in index space for the 9-point operator
  std::array<std::ptrdiff_t, 4> axis;
  std::array<std::ptrdiff_t, 4> diag;
};

class VortexSystem {
 public:
  VortexSystem(const VortexGrid& vg, std::vector<double> q2)
      : g_(*vg.grid), unknown_(vg.unknowns), q2_(std::move(q2)) {
    const std::ptrdiff_t nx = g_.nx();
    st_.axis = {1, -1, nx, -nx};
    st_.diag = {nx + 1, nx - 1, -nx + 1, -nx - 1};
    h2_ = g_.hx() * g_.hx();
    for (int c = 0; c < 4; ++c)
      for (int j = 0; j < g_.ny(); ++j)
        for (int i = 0; i < g_.nx(); ++i)
          if (unknown_[g_.index(i, j)] && (i % 2) * 2 + (j % 2) == c) order_.push_back(g_.index(i, j));
    const double L = std::fmax(g_.hx() * (g_.nx() - 1), g_.hy() * (g_.ny() - 1));
    omega_ = 2.0 / (1.0 + std::sin(std::numbers::pi * g_.hx() / L));
  }

  const std::vector<std::size_t>& nodes() const { return order_; }

  void nonlinearity(const std::vector<double>& w, std::vector<double>& g, std::vector<double>& dg) const {
    g.assign(w.size(), 0.0);
    dg.assign(w.size(), 0.0);
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (!g_.mask()[k]) continue;
      const double e = std::exp(w[k]), ei = std::exp(-w[k]);
      g[k] = e / 8 - 2 * q2_[k] * ei;
      dg[k] = e / 8 + 2 * q2_[k] * ei;
    }
  }

  // R = L9 w / 4 - (g + L5' g / 12) at unknowns; with_source=false drops g.
  double residual(const std::vector<double>& w, std::vector<double>& R, bool with_source) const {
    std::vector<double> g, dg;
    if (with_source) nonlinearity(w, g, dg);
    R.assign(w.size(), 0.0);
    double mx = 0;
    for (std::size_t k : order_) {
      double ax = 0, dx = 0;
      for (auto o : st_.axis) ax += w[k + o];
      for (auto o : st_.diag) dx += w[k + o];
      double r = 0.25 * (4 * ax + dx - 20 * w[k]) / (6 * h2_);
      if (with_source) {
        double gs = 0;
        for (auto o : st_.axis) gs += g[k + o];
        r -= g[k] + (gs - 4 * g[k]) / 12;
      }
      R[k] = r;
      mx = std::fmax(mx, std::fabs(r));
    }
    return mx;
  }

  // Solves J d = -R by 4-colour SOR until |J d + R| <= lin_tol or the sweep cap.
  void solve_linear(const std::vector<double>& dg, const std::vector<double>& R, std::vector<double>& d,
                    double lin_tol) const {
    d.assign(R.size(), 0.0);
    const double c_axis = 1.0 / (6 * h2_), c_diag = 1.0 / (24 * h2_), c_self = -20.0 / (24 * h2_);
    auto row = [&](std::size_t k, const std::vector<double>& x, double& diag) {
      double s = 0;
      for (auto o : st_.axis) {
        const std::size_t m = k + o;
        if (unknown_[m]) s += (c_axis - dg[m] / 12) * x[m];
      }
      for (auto o : st_.diag) {
        const std::size_t m = k + o;
        if (unknown_[m]) s += c_diag * x[m];
      }
      diag = c_self - dg[k] * (2.0 / 3.0);
      return s;
    };
    constexpr int kMaxSweeps = 40000;
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
      for (std::size_t k : order_) {
        double diag;
        const double off = row(k, d, diag);
        const double gs = (-R[k] - off) / diag;
        d[k] += omega_ * (gs - d[k]);
      }
      if (sweep % 10 == 0) {
        double mx = 0;
        for (std::size_t k : order_) {
          double diag;
          const double off = row(k, d, diag);
          mx = std::fmax(mx, std::fabs(off + diag * d[k] + R[k]));
        }
        if (mx <= lin_tol) return;
      }
    }
  }

 private:
  const Grid& g_;
  const Mask& unknown_;
  std::vector<double> q2_;
  Stencil st_;
  double h2_;
  double omega_;
  std::vector<std::size_t> order_;
};

}  // namespace

ConformalFactorField solve_vortex(const QuadDifferential& Q, const GridSpec& spec, const VortexOptions& opts) {
  if (!(opts.tol > 0)) throw DomainError("vortex tolerance must be positive");
  const VortexGrid vg = make_vortex_grid(spec);
  const Grid& g = *vg.grid;
  const std::size_t n = g.size();

  std::vector<double> q2(n, 0.0), w(n, 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.index(i, j);
      if (!g.mask()[k]) continue;
      const cplx z = g.z(i, j);
      q2[k] = std::norm(Q(z));
      if (vg.unknowns[k]) continue;
      const double tb = opts.boundary_tau0 ? opts.boundary_tau0(z) : preset_tau0(opts.bc, Q, z);
      if (!(tb > 0) || !std::isfinite(tb)) throw DomainError("boundary tau0 must be positive and finite");
      w[k] = std::log(tb);
    }

  VortexSystem sys(vg, q2);
  std::vector<double> R, d, gv, dg;

  if (opts.init == InitialGuess::QFlat) {
    for (std::size_t k : sys.nodes()) w[k] = std::log(std::fmax(4 * std::sqrt(q2[k]), 1e-6)) + opts.init_shift;
  } else {
    for (std::size_t k : sys.nodes()) w[k] = 0.0;
    const double r0 = sys.residual(w, R, false);
    std::vector<double> zero(n, 0.0);
    sys.solve_linear(zero, R, d, 1e-12 * std::fmax(1.0, r0));
    for (std::size_t k : sys.nodes()) w[k] += d[k];
  }

  double res = sys.residual(w, R, true);
  int step = 0;
  while (res > opts.tol) {
    if (step >= opts.max_newton) throw ConvergenceError("vortex Newton iteration did not converge", res);
    ++step;
    sys.nonlinearity(w, gv, dg);
    const double lin_tol = std::fmax(0.1 * opts.tol, 0.01 * res * std::fmin(1.0, res));
    sys.solve_linear(dg, R, d, lin_tol);

    std::vector<double> trial(w), Rt;
    double alpha = 1.0, rt = 0;
    for (int half = 0; half < 30; ++half) {
      for (std::size_t k : sys.nodes()) trial[k] = w[k] + alpha * d[k];
      rt = sys.residual(trial, Rt, true);
      if (std::isfinite(rt) && rt < (1 - 1e-4 * alpha) * res) break;
      alpha *= 0.5;
    }
    if (!std::isfinite(rt)) throw ConvergenceError("vortex Newton step produced non-finite values", res);
    w.swap(trial);
    R.swap(Rt);
    res = rt;
  }

  RealField tau(vg.grid);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (g.active(i, j)) tau(i, j) = std::exp(w[g.index(i, j)]);
  return ConformalFactorField{std::move(tau), Q, res, vg.unknowns, step, std::nullopt};
}

ConformalFactorField closed_form_constant_q(cplx c, const GridSpec& spec) {
  if (c == cplx(0, 0)) throw DomainError("constant closed form needs c != 0");
  const VortexGrid vg = make_vortex_grid(spec);
  const double t = 4 * std::abs(c);
  RealField tau = RealField::generate(vg.grid, [&](int, int) { return t; });
  ClosedFormW cf{[t](cplx) { return std::log(t); }, [](cplx) { return cplx(0, 0); }, [](cplx) { return 0.0; }};
  return ConformalFactorField{std::move(tau), QuadDifferential::constant(c, spec.q_domain()), 0.0, vg.unknowns, 0, cf};
}

ConformalFactorField closed_form_zero_q_disk(const GridSpec& spec) {
  const VortexGrid vg = make_vortex_grid(spec);
  ClosedFormW cf{
      [](cplx z) { return std::log(16.0) - 2 * std::log(1 - std::norm(z)); },
      [](cplx z) { return 2.0 * std::conj(z) / (1 - std::norm(z)); },
      [](cplx z) {
        const double d = 1 - std::norm(z);
        return 2 / (d * d);
      }};
  RealField tau = RealField::generate(vg.grid, [&](int i, int j) {
    const double d = 1 - std::norm(vg.grid->z(i, j));
    if (!(d > 0)) throw DomainError("zero-Q closed form needs the grid inside the unit disk");
    return 16 / (d * d);
  });
  return ConformalFactorField{std::move(tau), QuadDifferential::constant(0.0, QDomain::Disk), 0.0, vg.unknowns, 0, cf};
}

RealField vortex_residual(const RealField& tau0, const QuadDifferential& Q) {
  for (double t : tau0.values())
    if (std::isfinite(t) && !(t > 0)) throw DomainError("tau0 must be positive");
  const RealField w = tau0.map([](double t) { return std::log(t); });
  const RealField lap = d_zzbar(w);
  return RealField::generate(tau0.grid_ptr(), [&](int i, int j) {
    const double t = tau0(i, j);
    return std::fabs(lap(i, j) - t / 8 + 2 * std::norm(Q(tau0.grid().z(i, j))) / t);
  });
}

RealField closed_form_residual(const ConformalFactorField& field) {
  if (!field.exact) throw DomainError("field carries no closed form");
  const Grid& g = field.tau0.grid();
  return RealField::generate(field.tau0.grid_ptr(), [&](int i, int j) {
    const cplx z = g.z(i, j);
    const double t = std::exp(field.exact->w(z));
    return std::fabs(field.exact->wzzbar(z) - t / 8 + 2 * std::norm(field.Q(z)) / t);
  });
}

}  // namespace nilgraph
