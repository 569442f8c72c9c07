#pragma once

#include <cmath>
#include <complex>

namespace nilgraph {

using cplx = std::complex<double>;

/// Three-component vector over double or complex<double>. Used both for
/// Lorentzian vectors of L3 and for coordinate vectors in Nil3 / H2xR.
template <class T>
struct Triple {
  T x1{}, x2{}, x3{};

  constexpr T& operator[](int i) { return i == 0 ? x1 : (i == 1 ? x2 : x3); }
  constexpr const T& operator[](int i) const { return i == 0 ? x1 : (i == 1 ? x2 : x3); }

  Triple& operator+=(const Triple& o) {
    x1 += o.x1; x2 += o.x2; x3 += o.x3;
    return *this;
  }
  Triple& operator-=(const Triple& o) {
    x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
    return *this;
  }
  template <class S>
  Triple& operator*=(S s) {
    x1 *= s; x2 *= s; x3 *= s;
    return *this;
  }
};

template <class T>
Triple<T> operator+(Triple<T> a, const Triple<T>& b) { return a += b; }
template <class T>
Triple<T> operator-(Triple<T> a, const Triple<T>& b) { return a -= b; }
template <class T>
Triple<T> operator-(const Triple<T>& a) { return {-a.x1, -a.x2, -a.x3}; }

template <class T>
Triple<T> operator*(double s, const Triple<T>& a) { return {s * a.x1, s * a.x2, s * a.x3}; }
template <class T>
Triple<T> operator*(const Triple<T>& a, double s) { return s * a; }
template <class T>
Triple<T> operator/(const Triple<T>& a, double s) { return {a.x1 / s, a.x2 / s, a.x3 / s}; }

inline Triple<cplx> operator*(cplx s, const Triple<double>& a) { return {s * a.x1, s * a.x2, s * a.x3}; }
inline Triple<cplx> operator*(cplx s, const Triple<cplx>& a) { return {s * a.x1, s * a.x2, s * a.x3}; }
inline Triple<cplx> operator+(const Triple<cplx>& a, const Triple<double>& b) {
  return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
}
inline Triple<cplx> operator+(const Triple<double>& a, const Triple<cplx>& b) { return b + a; }
inline Triple<cplx> operator-(const Triple<cplx>& a, const Triple<double>& b) {
  return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
}

using Vec3 = Triple<double>;
using CVec3 = Triple<cplx>;

inline CVec3 to_complex(const Vec3& v) { return {v.x1, v.x2, v.x3}; }
inline Vec3 real(const CVec3& v) { return {v.x1.real(), v.x2.real(), v.x3.real()}; }
inline Vec3 imag(const CVec3& v) { return {v.x1.imag(), v.x2.imag(), v.x3.imag()}; }
inline CVec3 conj(const CVec3& v) { return {std::conj(v.x1), std::conj(v.x2), std::conj(v.x3)}; }

inline double max_abs(const Vec3& v) {
  return std::fmax(std::fabs(v.x1), std::fmax(std::fabs(v.x2), std::fabs(v.x3)));
}
inline double max_abs(const CVec3& v) {
  return std::fmax(std::abs(v.x1), std::fmax(std::abs(v.x2), std::abs(v.x3)));
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, a.x1 * b.x2 - a.x2 * b.x1};
}

inline double euclid_dot(const Vec3& a, const Vec3& b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3; }

// Helpers so grid code can be written once for scalar, complex and vector fields.
inline double abs_value(double v) { return std::fabs(v); }
inline double abs_value(const cplx& v) { return std::abs(v); }
inline double abs_value(const Vec3& v) { return max_abs(v); }
inline double abs_value(const CVec3& v) { return max_abs(v); }

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
template <class T>
bool is_finite(const Triple<T>& v) { return is_finite(v.x1) && is_finite(v.x2) && is_finite(v.x3); }

}  // namespace nilgraph
