#include "nilgraph/grid.hpp"

#include <algorithm>
#include <mutex>

namespace nilgraph {

bool Domain::contains(cplx z) const {
  const double eps = 1e-12 * std::fmax(1.0, std::fmax(std::fabs(x1 - x0), std::fabs(y1 - y0)));
  if (shape == DomainShape::Disk) return std::abs(z) < radius;
  return z.real() >= x0 - eps && z.real() <= x1 + eps && z.imag() >= y0 - eps && z.imag() <= y1 + eps;
}

Grid::Grid(Domain domain, double x0, double y0, double hx, double hy, int nx, int ny, Mask active)
    : domain_(domain), x0_(x0), y0_(y0), hx_(hx), hy_(hy), nx_(nx), ny_(ny), active_(std::move(active)) {
  if (nx < 2 || ny < 2) throw DomainError("grid needs at least 2x2 nodes");
  if (!(hx > 0) || !(hy > 0)) throw DomainError("grid spacing must be positive");
  if (active_.empty()) active_.assign(size(), 1);
  if (active_.size() != size()) throw DomainError("mask size does not match grid");
}

GridPtr Grid::rect(double x0, double x1, double y0, double y1, int nx, int ny) {
  if (!(x1 > x0) || !(y1 > y0)) throw DomainError("empty rectangle");
  if (nx < 2 || ny < 2) throw DomainError("grid needs at least 2x2 nodes");
  Domain d{DomainShape::Rect, x0, x1, y0, y1, 0.0};
  return std::make_shared<Grid>(d, x0, y0, (x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1), nx, ny, Mask{});
}

std::pair<int, int> Grid::run_x(int i, int j) const {
  int lo = i, hi = i;
  while (active(lo - 1, j)) --lo;
  while (active(hi + 1, j)) ++hi;
  return {lo, hi};
}

std::pair<int, int> Grid::run_y(int i, int j) const {
  int lo = j, hi = j;
  while (active(i, lo - 1)) --lo;
  while (active(i, hi + 1)) ++hi;
  return {lo, hi};
}

GridPtr Grid::with_mask(Mask active) const {
  return std::make_shared<Grid>(domain_, x0_, y0_, hx_, hy_, nx_, ny_, std::move(active));
}

Mask Grid::check_region(double scale) const {
  Mask m(size(), 0);
  const cplx c = domain_.center();
  const double slack = 1e-9 * std::fmax(hx_, hy_);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      if (!active(i, j)) continue;
      const cplx d = z(i, j) - c;
      bool in;
      if (domain_.shape == DomainShape::Disk) {
        in = std::abs(z(i, j)) <= scale * domain_.radius + slack;
      } else {
        in = std::fabs(d.real()) <= scale * 0.5 * (domain_.x1 - domain_.x0) + slack &&
             std::fabs(d.imag()) <= scale * 0.5 * (domain_.y1 - domain_.y0) + slack;
      }
      m[index(i, j)] = in ? 1 : 0;
    }
  return m;
}

std::pair<int, int> Grid::center_node() const {
  const cplx c = domain_.center();
  int i = static_cast<int>(std::lround((c.real() - x0_) / hx_));
  int j = static_cast<int>(std::lround((c.imag() - y0_) / hy_));
  i = std::clamp(i, 0, nx_ - 1);
  j = std::clamp(j, 0, ny_ - 1);
  return {i, j};
}

Mask mask_and(const Mask& a, const Mask& b) {
  if (a.size() != b.size()) throw DomainError("mask size mismatch");
  Mask m(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) m[k] = (a[k] && b[k]) ? 1 : 0;
  return m;
}

std::size_t mask_count(const Mask& m) {
  return static_cast<std::size_t>(std::count_if(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; }));
}

namespace {

// Integral over [lo, lo+1] of node samples g (unit spacing times h), 4th order.
double cell_integral(const std::vector<double>& g, int lo, double h) {
  const int n = static_cast<int>(g.size());
  if (n < 4) return h * 0.5 * (g[lo] + g[lo + 1]);
  if (lo - 1 >= 0 && lo + 2 < n) return h / 24 * (-g[lo - 1] + 13 * g[lo] + 13 * g[lo + 1] - g[lo + 2]);
  if (lo + 3 < n) return h / 24 * (9 * g[lo] + 19 * g[lo + 1] - 5 * g[lo + 2] + g[lo + 3]);
  return h / 24 * (g[lo - 2] - 5 * g[lo - 1] + 19 * g[lo] + 9 * g[lo + 1]);
}

}  // namespace

std::vector<double> cumulative_integral(const std::vector<double>& g, int k0, double h) {
  std::vector<double> out(g.size(), 0.0);
  for (int k = k0; k + 1 < static_cast<int>(g.size()); ++k) out[k + 1] = out[k] + cell_integral(g, k, h);
  for (int k = k0; k > 0; --k) out[k - 1] = out[k] - cell_integral(g, k - 1, h);
  return out;
}

namespace stencil {

namespace {

using Table = std::array<std::array<double, kMaxWidth>, 3>;

// Fornberg's recursion for nodes 0..m-1 evaluated at x0 = k.
Table fornberg(int m, int k) {
  double c[3][kMaxWidth][kMaxWidth] = {};
  const double x0 = k;
  c[0][0][0] = 1.0;
  double c1 = 1.0;
  for (int n = 1; n < m; ++n) {
    double c2 = 1.0;
    for (int nu = 0; nu < n; ++nu) {
      const double c3 = n - nu;
      c2 *= c3;
      for (int d = std::min(n, 2); d >= 0; --d) {
        const double prev = d > 0 ? c[d - 1][n - 1][nu] : 0.0;
        c[d][n][nu] = ((n - x0) * c[d][n - 1][nu] - d * prev) / c3;
      }
    }
    for (int d = std::min(n, 2); d >= 0; --d) {
      const double prev = d > 0 ? c[d - 1][n - 1][n - 1] : 0.0;
      c[d][n][n] = c1 / c2 * (d * prev - (n - 1 - x0) * c[d][n - 1][n - 1]);
    }
    c1 = c2;
  }
  Table t{};
  for (int d = 0; d < 3; ++d)
    for (int q = 0; q < m; ++q) t[d][q] = c[d][m - 1][q];
  return t;
}

}  // namespace

const Table& weights(int m, int k) {
  static std::array<std::array<Table, kMaxWidth>, kMaxWidth + 1> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int mm = 1; mm <= kMaxWidth; ++mm)
      for (int kk = 0; kk < mm; ++kk) cache[mm][kk] = fornberg(mm, kk);
  });
  if (m < 1 || m > kMaxWidth || k < 0 || k >= m) throw DomainError("stencil request out of range");
  return cache[m][k];
}

void lagrange(int m, double t, double* w, double* dw) {
  for (int a = 0; a < m; ++a) {
    double num = 1.0, den = 1.0, deriv = 0.0;
    for (int b = 0; b < m; ++b) {
      if (b == a) continue;
      den *= a - b;
      num *= t - b;
    }
    for (int b = 0; b < m; ++b) {
      if (b == a) continue;
      double prod = 1.0;
      for (int c = 0; c < m; ++c)
        if (c != a && c != b) prod *= t - c;
      deriv += prod;
    }
    w[a] = num / den;
    if (dw) dw[a] = deriv / den;
  }
}

}  // namespace stencil

}  // namespace nilgraph
