#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nilgraph {

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool strict = false;  // value < tolerance instead of <=
  bool pass = false;
  bool informational = false;
  std::string note;
};

/// Verification report written as JSON lines, one check per line.
class Report {
 public:
  /// Passes when value is finite and within tolerance.
  Check& add(const std::string& name, double value, double tolerance, bool strict = false);
  Check& flag(const std::string& name, bool ok, const std::string& note = {});
  /// Informational entry that always passes.
  Check& note(const std::string& name, const std::string& text);
  void merge(const Report& other, const std::string& prefix = {});

  bool all_pass() const;
  const std::vector<Check>& checks() const { return checks_; }
  const Check* find(const std::string& name) const;

  std::string jsonl() const;
  std::string summary() const;

 private:
  std::vector<Check> checks_;
};

}  // namespace nilgraph
