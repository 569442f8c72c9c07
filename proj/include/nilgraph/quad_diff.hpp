#pragma once

#include <string>
#include <vector>

#include "nilgraph/grid.hpp"

namespace nilgraph {

enum class QDomain { Plane, Disk };

/// Closed-form holomorphic coefficient Q(z) of Q dz^2: constant, polynomial
/// or a pole-free rational function.
class QuadDifferential {
 public:
  enum class Form { Constant, Polynomial, Rational };

  static QuadDifferential constant(cplx c, QDomain domain = QDomain::Plane);
  /// coeffs[k] multiplies z^k.
  static QuadDifferential polynomial(std::vector<cplx> coeffs, QDomain domain = QDomain::Plane);
  static QuadDifferential rational(std::vector<cplx> num, std::vector<cplx> den, QDomain domain = QDomain::Plane);

  /// Grammar: const:re,im | poly:c0re,c0im;c1re,c1im;... | rat:<poly>/<poly>
  /// where <poly> is the coefficient list of poly:.
  static QuadDifferential parse(const std::string& spec, QDomain domain);

  Form form() const { return form_; }
  QDomain domain() const { return domain_; }
  bool identically_zero() const;
  bool in_domain(cplx z) const;

  /// Q(z) without the domain check.
  cplx operator()(cplx z) const;
  /// Same function multiplied by s (used for the sign-flipped structure coefficient).
  QuadDifferential scaled(cplx s) const;

  std::string to_string() const;
  const std::vector<cplx>& numerator() const { return num_; }
  const std::vector<cplx>& denominator() const { return den_; }

 private:
  QuadDifferential(Form f, std::vector<cplx> num, std::vector<cplx> den, QDomain d);
  void validate() const;

  Form form_;
  std::vector<cplx> num_, den_;
  QDomain domain_;
};

/// Q(z), throwing DomainError outside the declared domain.
cplx evaluate(const QuadDifferential& Q, cplx z);

/// Q sampled on the active nodes (no domain check: bounded plane patches and
/// boundary rings may sit anywhere the closed form is finite).
ComplexField sample(const QuadDifferential& Q, const GridPtr& grid);

/// |d field / d zbar| by grid differences.
RealField dbar_residual(const ComplexField& field);

/// Roots of c0 + c1 z + ... via the companion matrix.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs);

}  // namespace nilgraph
