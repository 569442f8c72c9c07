#include "nilgraph/io.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nilgraph/error.hpp"

namespace nilgraph {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FieldTable::FieldTable(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw DomainError("field table needs a grid");
}

FieldTable& FieldTable::add(const std::string& name, const RealField& f) {
  if (f.grid().nx() != grid_->nx() || f.grid().ny() != grid_->ny()) throw DomainError("column grid mismatch");
  std::vector<double> col(grid_->size());
  for (int j = 0; j < grid_->ny(); ++j)
    for (int i = 0; i < grid_->nx(); ++i) col[grid_->index(i, j)] = grid_->active(i, j) ? f(i, j) : NAN;
  names_.push_back(name);
  columns_.push_back(std::move(col));
  return *this;
}

FieldTable& FieldTable::add(const std::string& name, const ComplexField& f) {
  add(name + ".re", f.map([](const cplx& v) { return v.real(); }));
  return add(name + ".im", f.map([](const cplx& v) { return v.imag(); }));
}

FieldTable& FieldTable::add(const std::string& name, const VecField& f) {
  add(name + "1", f.map([](const Vec3& v) { return v.x1; }));
  add(name + "2", f.map([](const Vec3& v) { return v.x2; }));
  return add(name + "3", f.map([](const Vec3& v) { return v.x3; }));
}

RealField FieldTable::column(std::size_t k) const {
  if (k >= columns_.size()) throw DomainError("field column index out of range");
  return RealField::generate(grid_, [&](int i, int j) { return columns_[k][grid_->index(i, j)]; });
}

VecField FieldTable::vec(std::size_t k) const {
  if (k + 3 > columns_.size()) throw DomainError("field has fewer columns than a vector needs");
  return VecField::generate(grid_, [&](int i, int j) {
    const std::size_t n = grid_->index(i, j);
    return Vec3{columns_[k][n], columns_[k + 1][n], columns_[k + 2][n]};
  });
}

void FieldTable::write(std::ostream& os) const {
  const Domain& d = grid_->domain();
  const double x1 = grid_->x(grid_->nx() - 1), y1 = grid_->y(grid_->ny() - 1);
  os << "# field-v1\n";
  os << "domain " << format_double(grid_->x(0)) << ' ' << format_double(x1) << ' ' << format_double(grid_->y(0))
     << ' ' << format_double(y1) << '\n';
  os << "shape " << grid_->nx() << ' ' << grid_->ny() << '\n';
  if (d.shape == DomainShape::Disk) os << "# disk " << format_double(d.radius) << '\n';
  os << "# columns x y";
  for (const auto& n : names_) os << ' ' << n;
  os << '\n';
  for (int j = 0; j < grid_->ny(); ++j)
    for (int i = 0; i < grid_->nx(); ++i) {
      os << format_double(grid_->x(i)) << ' ' << format_double(grid_->y(j));
      for (const auto& c : columns_) os << ' ' << format_double(c[grid_->index(i, j)]);
      os << '\n';
    }
}

void FieldTable::save(const std::string& path) const {
  std::ostringstream ss;
  write(ss);
  write_file(path, ss.str());
}

namespace {

struct LineReader {
  std::istream& is;
  int line = 0;
  std::string text;

  bool next() {
    if (!std::getline(is, text)) return false;
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    return true;
  }
};

// Splits on blanks, recording the 1-based column of each token.
std::vector<std::pair<std::string, int>> tokens(const std::string& s) {
  std::vector<std::pair<std::string, int>> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    const std::size_t b = k;
    while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    if (k > b) out.push_back({s.substr(b, k - b), static_cast<int>(b) + 1});
  }
  return out;
}

double to_double(const std::pair<std::string, int>& tok, int line) {
  const char* s = tok.first.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0') throw ParseError("expected a number, got '" + tok.first + "'", line, tok.second);
  return v;
}

int to_int(const std::pair<std::string, int>& tok, int line) {
  const double v = to_double(tok, line);
  if (v != std::floor(v) || v < 2 || v > 1e6) throw ParseError("expected a node count >= 2", line, tok.second);
  return static_cast<int>(v);
}

}  // namespace

FieldTable FieldTable::read(std::istream& is) {
  LineReader r{is, 0, {}};
  if (!r.next() || r.text.rfind("# field-v1", 0) != 0) throw ParseError("missing '# field-v1' header", 1, 1);
  if (!r.next()) throw ParseError("missing domain line", r.line + 1, 1);
  auto dt = tokens(r.text);
  if (dt.size() != 5 || dt[0].first != "domain") throw ParseError("expected 'domain x0 x1 y0 y1'", r.line, 1);
  const double x0 = to_double(dt[1], r.line), x1 = to_double(dt[2], r.line);
  const double y0 = to_double(dt[3], r.line), y1 = to_double(dt[4], r.line);
  if (!r.next()) throw ParseError("missing shape line", r.line + 1, 1);
  auto st = tokens(r.text);
  if (st.size() != 3 || st[0].first != "shape") throw ParseError("expected 'shape nx ny'", r.line, 1);
  const int nx = to_int(st[1], r.line), ny = to_int(st[2], r.line);
  if (!(x1 > x0) || !(y1 > y0)) throw ParseError("empty domain", 2, 1);

  double disk = 0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  std::size_t width = 0;
  const std::size_t total = static_cast<std::size_t>(nx) * ny;
  std::size_t rows = 0;
  const double hx = (x1 - x0) / (nx - 1), hy = (y1 - y0) / (ny - 1);
  while (rows < total) {
    if (!r.next()) throw ParseError("file ends after " + std::to_string(rows) + " of " + std::to_string(total) + " rows",
                                    r.line + 1, 1);
    auto t = tokens(r.text);
    if (t.empty()) continue;
    if (t[0].first[0] == '#') {
      if (t.size() == 3 && t[1].first == "disk") disk = to_double(t[2], r.line);
      if (t.size() >= 2 && t[1].first == "columns")
        for (std::size_t k = 4; k < t.size(); ++k) names.push_back(t[k].first);
      continue;
    }
    if (rows == 0) {
      if (t.size() < 3) throw ParseError("rows need x, y and at least one value", r.line, 1);
      width = t.size() - 2;
      cols.assign(width, std::vector<double>(total));
    }
    if (t.size() != width + 2)
      throw ParseError("expected " + std::to_string(width + 2) + " numbers, got " + std::to_string(t.size()), r.line,
                       t.size() < width + 2 ? static_cast<int>(r.text.size()) + 1 : t[width + 2].second);
    const int i = static_cast<int>(rows % nx), j = static_cast<int>(rows / nx);
    const double x = to_double(t[0], r.line), y = to_double(t[1], r.line);
    if (std::fabs(x - (x0 + i * hx)) > 1e-9 * hx || std::fabs(y - (y0 + j * hy)) > 1e-9 * hy)
      throw ParseError("node coordinates do not match the declared grid", r.line, 1);
    for (std::size_t k = 0; k < width; ++k) cols[k][rows] = to_double(t[k + 2], r.line);
    ++rows;
  }
  if (names.size() != width) {
    names.clear();
    for (std::size_t k = 0; k < width; ++k) names.push_back("v" + std::to_string(k + 1));
  }
  Mask active(total, 1);
  for (std::size_t n = 0; n < total; ++n)
    for (const auto& c : cols)
      if (!std::isfinite(c[n])) active[n] = 0;
  Domain d{DomainShape::Rect, x0, x1, y0, y1, 0.0};
  if (disk > 0) {
    d.shape = DomainShape::Disk;
    d.radius = disk;
  }
  FieldTable out(std::make_shared<Grid>(d, x0, y0, hx, hy, nx, ny, std::move(active)));
  out.names_ = std::move(names);
  out.columns_ = std::move(cols);
  return out;
}

FieldTable FieldTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read(in);
}

namespace {

struct MeshTopology {
  std::vector<int> vertex_of;  // grid index -> vertex id or -1
  std::vector<std::pair<int, int>> vertices;
  std::vector<std::array<int, 3>> faces;
};

MeshTopology topology(const VecField& X) {
  const Grid& g = X.grid();
  MeshTopology t;
  t.vertex_of.assign(g.size(), -1);
  auto ok = [&](int i, int j) { return g.active(i, j) && is_finite(X(i, j)); };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (ok(i, j)) {
        t.vertex_of[g.index(i, j)] = static_cast<int>(t.vertices.size());
        t.vertices.push_back({i, j});
      }
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      if (!ok(i, j) || !ok(i + 1, j) || !ok(i, j + 1) || !ok(i + 1, j + 1)) continue;
      const int a = t.vertex_of[g.index(i, j)], b = t.vertex_of[g.index(i + 1, j)];
      const int c = t.vertex_of[g.index(i + 1, j + 1)], d = t.vertex_of[g.index(i, j + 1)];
      const Vec3 ac = X(i + 1, j + 1) - X(i, j), bd = X(i, j + 1) - X(i + 1, j);
      if (euclid_dot(ac, ac) <= euclid_dot(bd, bd)) {
        t.faces.push_back({a, b, c});
        t.faces.push_back({a, c, d});
      } else {
        t.faces.push_back({a, b, d});
        t.faces.push_back({b, c, d});
      }
    }
  return t;
}

}  // namespace

void write_obj(std::ostream& os, const VecField& X) {
  const MeshTopology t = topology(X);
  for (const auto& [i, j] : t.vertices) {
    const Vec3& v = X(i, j);
    os << "v " << format_double(v.x1) << ' ' << format_double(v.x2) << ' ' << format_double(v.x3) << '\n';
  }
  for (const auto& f : t.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void write_ply(std::ostream& os, const VecField& X, const std::vector<MeshScalars>& scalars) {
  const MeshTopology t = topology(X);
  os << "ply\nformat ascii 1.0\nelement vertex " << t.vertices.size() << '\n';
  os << "property double x\nproperty double y\nproperty double z\n";
  for (const auto& s : scalars) os << "property double " << s.name << '\n';
  os << "element face " << t.faces.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (const auto& [i, j] : t.vertices) {
    const Vec3& v = X(i, j);
    os << format_double(v.x1) << ' ' << format_double(v.x2) << ' ' << format_double(v.x3);
    for (const auto& s : scalars) os << ' ' << format_double(s.values(i, j));
    os << '\n';
  }
  for (const auto& f : t.faces) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, p);
}

}  // namespace nilgraph
