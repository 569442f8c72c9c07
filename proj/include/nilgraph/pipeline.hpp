#pragma once

#include <map>
#include <string>
#include <vector>

#include "nilgraph/report.hpp"
#include "nilgraph/space.hpp"

namespace nilgraph {

/// Flat key=value run description. Every key has a printable default.
struct RunConfig {
  std::string q = "poly:0,0;1,0";
  std::string grid = "disk:0.8,129";
  std::string theta0 = "0,0";
  std::string a;  // explicit height selector a1,a2,a3; excludes theta0
  std::string bc = "auto";
  std::string epsilon = "auto";
  double vortex_tol = 1e-9;
  double closedness_tol = 1e-5;
  double check_scale = 0.5;
  double resample_scale = 0.75;
  unsigned seed = 7;
  std::string out;
  std::string exports = "obj,ply";

  /// Throws ParseError for unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
  /// Applies key=value lines; '#' starts a comment.
  void apply_text(const std::string& text);
  void apply_file(const std::string& path);
  std::map<std::string, std::string> values() const;
  /// The copy stored next to build outputs leaves out the output directory.
  std::string to_text(bool with_out = true) const;
  void validate() const;

  bool theta0_explicit = false;
};

/// $NILGRAPH_OUT when set, otherwise nilgraph_out.
std::string default_output_dir();

struct RunResult {
  Report report;
  std::vector<std::string> files;
};

/// Events printed while a command runs; empty by default.
using Progress = void (*)(const std::string&);

/// Full pipeline: vortex solve, L3 integration, heights, Nil3 graph,
/// resampling, H2xR sister and reports. Module errors are rethrown with the
/// failing stage in the message.
RunResult run_build(const RunConfig& cfg, Progress progress = nullptr);
/// Conformal factor only.
RunResult run_vortex(const RunConfig& cfg);
/// Checks a field-v1 surface file written by build, demo or export.
Report verify_field_file(const std::string& path, const SpaceParams& space, double check_scale = 0.5);
/// saddle | umbrella | cylinder | counterexample
RunResult run_demo(const std::string& name, double c, const std::string& out_dir);
/// Converts a field-v1 file to obj, ply or csv.
void export_field_file(const std::string& in, const std::string& format, const std::string& out, bool poincare);

}  // namespace nilgraph
