#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "nilgraph/error.hpp"
#include "nilgraph/triple.hpp"

namespace nilgraph {

enum class DomainShape { Rect, Disk };

/// The continuous region a grid samples. Disk grids live in their bounding box.
struct Domain {
  DomainShape shape = DomainShape::Rect;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double radius = 0;  // Disk only; centred at the origin

  bool contains(cplx z) const;
  cplx center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

using Mask = std::vector<std::uint8_t>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Uniform lattice, row-major with y outermost (index = j * nx + i). Nodes
/// outside `active` carry no data.
class Grid {
 public:
  Grid(Domain domain, double x0, double y0, double hx, double hy, int nx, int ny, Mask active);

  static GridPtr rect(double x0, double x1, double y0, double y1, int nx, int ny);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double x(int i) const { return x0_ + hx_ * i; }
  double y(int j) const { return y0_ + hy_ * j; }
  cplx z(int i, int j) const { return {x(i), y(j)}; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  bool active(int i, int j) const { return in_range(i, j) && active_[index(i, j)] != 0; }
  const Mask& mask() const { return active_; }
  const Domain& domain() const { return domain_; }
  bool conformal() const { return std::fabs(hx_ - hy_) <= 1e-12 * std::fmax(hx_, hy_); }

  /// Inclusive bounds of the run of active nodes through (i, j) along x / y.
  std::pair<int, int> run_x(int i, int j) const;
  std::pair<int, int> run_y(int i, int j) const;

  /// Same lattice, different active set.
  GridPtr with_mask(Mask active) const;

  /// Active nodes inside the concentric copy of the domain scaled by `scale`.
  Mask check_region(double scale) const;

  /// Index of the node nearest the domain centre.
  std::pair<int, int> center_node() const;

 private:
  Domain domain_;
  double x0_, y0_, hx_, hy_;
  int nx_, ny_;
  Mask active_;
};

template <class T>
T nan_value() {
  constexpr double n = std::numeric_limits<double>::quiet_NaN();
  if constexpr (std::is_same_v<T, double>) return n;
  else if constexpr (std::is_same_v<T, cplx>) return cplx(n, n);
  else if constexpr (std::is_same_v<T, Vec3>) return Vec3{n, n, n};
  else return CVec3{cplx(n, n), cplx(n, n), cplx(n, n)};
}

template <class T>
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid) : grid_(std::move(grid)), v_(grid_->size(), nan_value<T>()) {}

  template <class Fn>
  static Field generate(GridPtr grid, Fn&& fn) {
    Field f(grid);
    for (int j = 0; j < grid->ny(); ++j)
      for (int i = 0; i < grid->nx(); ++i)
        if (grid->active(i, j)) f(i, j) = fn(i, j);
    return f;
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool empty() const { return !grid_; }

  T& operator()(int i, int j) { return v_[grid_->index(i, j)]; }
  const T& operator()(int i, int j) const { return v_[grid_->index(i, j)]; }
  std::span<const T> values() const { return v_; }
  std::span<T> values() { return v_; }

  template <class Fn>
  auto map(Fn&& fn) const {
    using R = decltype(fn(std::declval<const T&>()));
    Field<R> out(grid_);
    for (int j = 0; j < grid_->ny(); ++j)
      for (int i = 0; i < grid_->nx(); ++i)
        if (grid_->active(i, j)) out(i, j) = fn((*this)(i, j));
    return out;
  }

 private:
  GridPtr grid_;
  std::vector<T> v_;
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;
using VecField = Field<Vec3>;
using CVecField = Field<CVec3>;

template <class T>
struct complexified { using type = cplx; };
template <>
struct complexified<Vec3> { using type = CVec3; };
template <>
struct complexified<CVec3> { using type = CVec3; };
template <class T>
using complexified_t = typename complexified<T>::type;

namespace stencil {

constexpr int kMaxWidth = 5;

/// Finite-difference weights on nodes 0..m-1 (unit spacing) at node k for
/// derivative order 0..2. Returns weights[order][q].
const std::array<std::array<double, kMaxWidth>, 3>& weights(int m, int k);

/// Lagrange basis values and first derivatives at fractional position t for
/// nodes 0..m-1.
void lagrange(int m, double t, double* w, double* dw);

}  // namespace stencil

namespace detail {

template <class T>
T apply_line(const Field<T>& f, int i, int j, bool along_x, int order) {
  const Grid& g = f.grid();
  if (!g.active(i, j)) return nan_value<T>();
  auto [lo, hi] = along_x ? g.run_x(i, j) : g.run_y(i, j);
  const int pos = along_x ? i : j;
  const int m = std::min(stencil::kMaxWidth, hi - lo + 1);
  if (m < order + 1 || m < 2) return nan_value<T>();
  const int start = std::clamp(pos - 2, lo, hi - m + 1);
  const auto& w = stencil::weights(m, pos - start)[order];
  const double h = along_x ? g.hx() : g.hy();
  T acc{};
  for (int q = 0; q < m; ++q) acc += w[q] * (along_x ? f(start + q, j) : f(i, start + q));
  return acc * (1.0 / std::pow(h, order));
}

}  // namespace detail

template <class T>
Field<T> diff_x(const Field<T>& f) {
  return Field<T>::generate(f.grid_ptr(), [&](int i, int j) { return detail::apply_line(f, i, j, true, 1); });
}
template <class T>
Field<T> diff_y(const Field<T>& f) {
  return Field<T>::generate(f.grid_ptr(), [&](int i, int j) { return detail::apply_line(f, i, j, false, 1); });
}
template <class T>
Field<T> diff_xx(const Field<T>& f) {
  return Field<T>::generate(f.grid_ptr(), [&](int i, int j) { return detail::apply_line(f, i, j, true, 2); });
}
template <class T>
Field<T> diff_yy(const Field<T>& f) {
  return Field<T>::generate(f.grid_ptr(), [&](int i, int j) { return detail::apply_line(f, i, j, false, 2); });
}
template <class T>
Field<T> diff_xy(const Field<T>& f) { return diff_y(diff_x(f)); }

/// d/dz = (d/dx - i d/dy) / 2.
template <class T>
Field<complexified_t<T>> d_z(const Field<T>& f) {
  const auto fx = diff_x(f), fy = diff_y(f);
  const cplx I(0, 1);
  return Field<complexified_t<T>>::generate(f.grid_ptr(), [&](int i, int j) {
    return complexified_t<T>(0.5 * (fx(i, j) + (-I) * fy(i, j)));
  });
}

/// d/dzbar = (d/dx + i d/dy) / 2.
template <class T>
Field<complexified_t<T>> d_zbar(const Field<T>& f) {
  const auto fx = diff_x(f), fy = diff_y(f);
  const cplx I(0, 1);
  return Field<complexified_t<T>>::generate(f.grid_ptr(), [&](int i, int j) {
    return complexified_t<T>(0.5 * (fx(i, j) + I * fy(i, j)));
  });
}

/// d^2/dz dzbar = Laplacian / 4.
template <class T>
Field<T> d_zzbar(const Field<T>& f) {
  const auto fxx = diff_xx(f), fyy = diff_yy(f);
  return Field<T>::generate(f.grid_ptr(), [&](int i, int j) { return 0.25 * (fxx(i, j) + fyy(i, j)); });
}

/// d^2/dz^2 = (f_xx - f_yy - 2i f_xy) / 4.
template <class T>
Field<complexified_t<T>> d_zz(const Field<T>& f) {
  const auto fxx = diff_xx(f), fyy = diff_yy(f), fxy = diff_xy(f);
  const cplx I(0, 1);
  return Field<complexified_t<T>>::generate(f.grid_ptr(), [&](int i, int j) {
    return complexified_t<T>(0.25 * (fxx(i, j) - fyy(i, j)) + (-0.5 * I) * fxy(i, j));
  });
}

/// Max of |v| over nodes where `region` is set (and the value is finite).
/// Returns +inf if some region node is non-finite, so broken data fails checks.
template <class T>
double max_norm(const Field<T>& f, const Mask& region) {
  double m = 0;
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!region[g.index(i, j)] || !g.active(i, j)) continue;
      const T& v = f(i, j);
      if (!is_finite(v)) return std::numeric_limits<double>::infinity();
      m = std::fmax(m, abs_value(v));
    }
  return m;
}

template <class T>
double max_norm(const Field<T>& f) { return max_norm(f, f.grid().mask()); }

inline CVecField conj_field(const CVecField& f) { return f.map([](const CVec3& v) { return conj(v); }); }
inline ComplexField conj_field(const ComplexField& f) { return f.map([](const cplx& v) { return std::conj(v); }); }

Mask mask_and(const Mask& a, const Mask& b);
std::size_t mask_count(const Mask& m);

/// Running integral of uniformly spaced samples from index k0 (4th order).
std::vector<double> cumulative_integral(const std::vector<double>& g, int k0, double h);

}  // namespace nilgraph
