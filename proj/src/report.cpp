#include "nilgraph/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace nilgraph {

Check& Report::add(const std::string& name, double value, double tolerance, bool strict) {
  Check c;
  c.name = name;
  c.value = value;
  c.tolerance = tolerance;
  c.strict = strict;
  c.pass = std::isfinite(value) && (strict ? value < tolerance : value <= tolerance);
  checks_.push_back(c);
  return checks_.back();
}

Check& Report::flag(const std::string& name, bool ok, const std::string& note) {
  Check& c = add(name, ok ? 0.0 : 1.0, 0.0);
  c.note = note;
  return c;
}

Check& Report::note(const std::string& name, const std::string& text) {
  Check& c = add(name, 0.0, 0.0);
  c.informational = true;
  c.note = text;
  return c;
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (Check c : other.checks_) {
    c.name = prefix + c.name;
    checks_.push_back(c);
  }
}

bool Report::all_pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

std::string Report::jsonl() const {
  std::string out;
  for (const auto& c : checks_) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    if (c.informational) {
      j["note"] = c.note;
      j["pass"] = true;
      out += j.dump();
      out += '\n';
      continue;
    }
    if (std::isfinite(c.value)) j["value"] = c.value;
    else j["value"] = nullptr;
    j["tolerance"] = c.tolerance;
    if (c.strict) j["strict"] = true;
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string Report::summary() const {
  std::ostringstream os;
  std::size_t failed = 0, counted = 0;
  for (const auto& c : checks_) {
    if (c.informational) {
      os << "NOTE " << c.name << "  " << c.note << '\n';
      continue;
    }
    char line[64];
    std::snprintf(line, sizeof line, "%.3e %s %.1e", c.value, c.strict ? "<" : "<=", c.tolerance);
    os << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << line;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
    ++counted;
    if (!c.pass) ++failed;
  }
  os << counted - failed << '/' << counted << " checks passed\n";
  return os.str();
}

}  // namespace nilgraph
