#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nilgraph/grid.hpp"

namespace nilgraph {

/// Named real columns over one grid, serialized as field-v1. Complex columns
/// are stored as re/im pairs and vector columns as three components.
class FieldTable {
 public:
  explicit FieldTable(GridPtr grid);

  FieldTable& add(const std::string& name, const RealField& f);
  FieldTable& add(const std::string& name, const ComplexField& f);
  FieldTable& add(const std::string& name, const VecField& f);

  std::size_t width() const { return columns_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const GridPtr& grid() const { return grid_; }
  /// Column k restricted to nodes where every column is finite.
  RealField column(std::size_t k) const;
  VecField vec(std::size_t k) const;

  void write(std::ostream& os) const;
  void save(const std::string& path) const;
  static FieldTable read(std::istream& is);
  static FieldTable load(const std::string& path);

 private:
  GridPtr grid_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

struct MeshScalars {
  std::string name;
  RealField values;
};

/// Triangulated grid quads (shorter diagonal) over the active nodes.
void write_obj(std::ostream& os, const VecField& X);
/// ASCII PLY with optional per-vertex scalar properties.
void write_ply(std::ostream& os, const VecField& X, const std::vector<MeshScalars>& scalars);

/// Writes the file through a temporary name and renames it into place.
void write_file(const std::string& path, const std::string& contents);

/// printf-style %.17g.
std::string format_double(double v);

}  // namespace nilgraph
