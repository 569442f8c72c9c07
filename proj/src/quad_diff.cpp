#include "nilgraph/quad_diff.hpp"

#include <charconv>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nilgraph/error.hpp"

namespace nilgraph {

namespace {

std::vector<cplx> trimmed(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx(0, 0)) c.pop_back();
  return c;
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string poly_string(const std::vector<cplx>& c) {
  std::string s;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k) s += ';';
    s += fmt(c[k].real()) + "," + fmt(c[k].imag());
  }
  return s.empty() ? "0,0" : s;
}

double parse_number(const std::string& text, std::size_t& pos, std::size_t offset, const std::string& full) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(text.substr(pos), &used);
  } catch (const std::exception&) {
    throw ParseError("expected a number in Q spec '" + full + "'", 1, static_cast<int>(offset + pos + 1));
  }
  pos += used;
  return v;
}

// Parses "re,im;re,im;..." starting at text[pos] until end or a '/'.
std::vector<cplx> parse_poly(const std::string& text, std::size_t& pos, std::size_t offset, const std::string& full) {
  std::vector<cplx> c;
  while (true) {
    std::size_t p = pos;
    const double re = parse_number(text, p, offset, full);
    if (p >= text.size() || text[p] != ',')
      throw ParseError("expected ',' between real and imaginary parts", 1, static_cast<int>(offset + p + 1));
    ++p;
    const double im = parse_number(text, p, offset, full);
    c.emplace_back(re, im);
    pos = p;
    if (pos < text.size() && text[pos] == ';') {
      ++pos;
      continue;
    }
    break;
  }
  return c;
}

}  // namespace

QuadDifferential::QuadDifferential(Form f, std::vector<cplx> num, std::vector<cplx> den, QDomain d)
    : form_(f), num_(std::move(num)), den_(std::move(den)), domain_(d) {
  validate();
}

QuadDifferential QuadDifferential::constant(cplx c, QDomain domain) {
  return QuadDifferential(Form::Constant, {c}, {1.0}, domain);
}

QuadDifferential QuadDifferential::polynomial(std::vector<cplx> coeffs, QDomain domain) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  return QuadDifferential(Form::Polynomial, std::move(coeffs), {1.0}, domain);
}

QuadDifferential QuadDifferential::rational(std::vector<cplx> num, std::vector<cplx> den, QDomain domain) {
  if (num.empty()) num.push_back(0.0);
  return QuadDifferential(Form::Rational, std::move(num), std::move(den), domain);
}

void QuadDifferential::validate() const {
  for (const cplx& c : num_)
    if (!is_finite(c)) throw DomainError("non-finite Q coefficient");
  for (const cplx& c : den_)
    if (!is_finite(c)) throw DomainError("non-finite Q coefficient");
  if (domain_ == QDomain::Plane && identically_zero())
    throw DomainError("Q must not vanish identically on the plane");

  const std::vector<cplx> d = trimmed(den_);
  if (d.empty()) throw DomainError("rational Q has zero denominator");
  if (d.size() == 1) return;
  if (domain_ == QDomain::Plane) throw DomainError("rational Q on the plane must have a constant denominator");

  // Cauchy bound: every root has |r| >= |d0| / (|d0| + max_k |dk|).
  double mx = 0;
  for (std::size_t k = 1; k < d.size(); ++k) mx = std::fmax(mx, std::abs(d[k]));
  const double a0 = std::abs(d[0]);
  if (a0 / (a0 + mx) >= 1.0) return;
  for (const cplx& r : polynomial_roots(d))
    if (std::abs(r) < 1.0) throw DomainError("rational Q has a pole inside the unit disk");
}

bool QuadDifferential::identically_zero() const { return trimmed(num_).empty(); }

bool QuadDifferential::in_domain(cplx z) const { return domain_ == QDomain::Plane || std::abs(z) < 1.0; }

cplx QuadDifferential::operator()(cplx z) const {
  if (form_ == Form::Constant) return num_[0];
  const cplx n = horner(num_, z);
  if (form_ == Form::Polynomial) return n;
  return n / horner(den_, z);
}

QuadDifferential QuadDifferential::scaled(cplx s) const {
  std::vector<cplx> n = num_;
  for (cplx& c : n) c *= s;
  return QuadDifferential(form_, std::move(n), den_, domain_);
}

std::string QuadDifferential::to_string() const {
  switch (form_) {
    case Form::Constant:
      return "const:" + fmt(num_[0].real()) + "," + fmt(num_[0].imag());
    case Form::Polynomial:
      return "poly:" + poly_string(num_);
    case Form::Rational:
      return "rat:" + poly_string(num_) + "/" + poly_string(den_);
  }
  return {};
}

QuadDifferential QuadDifferential::parse(const std::string& spec, QDomain domain) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("Q spec needs a 'kind:' prefix", 1, 1);
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  const std::size_t off = colon + 1;
  std::size_t pos = 0;
  auto finish = [&] {
    if (pos != body.size()) throw ParseError("unexpected trailing text in Q spec", 1, static_cast<int>(off + pos + 1));
  };
  if (kind == "const") {
    auto c = parse_poly(body, pos, off, spec);
    finish();
    if (c.size() != 1) throw ParseError("const: takes exactly one re,im pair", 1, static_cast<int>(off + 1));
    return constant(c[0], domain);
  }
  if (kind == "poly") {
    auto c = parse_poly(body, pos, off, spec);
    finish();
    return polynomial(std::move(c), domain);
  }
  if (kind == "rat") {
    auto n = parse_poly(body, pos, off, spec);
    if (pos >= body.size() || body[pos] != '/')
      throw ParseError("rat: needs '<poly>/<poly>'", 1, static_cast<int>(off + pos + 1));
    ++pos;
    auto d = parse_poly(body, pos, off, spec);
    finish();
    return rational(std::move(n), std::move(d), domain);
  }
  throw ParseError("unknown Q kind '" + kind + "'", 1, 1);
}

cplx evaluate(const QuadDifferential& Q, cplx z) {
  if (!Q.in_domain(z)) throw DomainError("z outside the domain of Q");
  return Q(z);
}

ComplexField sample(const QuadDifferential& Q, const GridPtr& grid) {
  return ComplexField::generate(grid, [&](int i, int j) { return Q(grid->z(i, j)); });
}

RealField dbar_residual(const ComplexField& field) {
  if (field.grid().nx() < 3 || field.grid().ny() < 3) throw DomainError("dbar_residual needs at least a 3x3 grid");
  const ComplexField d = d_zbar(field);
  return d.map([](const cplx& v) { return std::abs(v); });
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  const std::vector<cplx> c = trimmed(coeffs);
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
  for (int k = 0; k < n; ++k) comp(k, n - 1) = -c[k] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return r;
}

}  // namespace nilgraph
