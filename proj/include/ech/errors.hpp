#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ech {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input that failed to parse (files, rationals, CLI model specs).
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A tie or an exact hit on a filtration threshold. These are not numerical
// noise: all actions are exact rationals, so a tie means the input data is
// genuinely degenerate (e.g. the axis ratio needs a better rational
// approximation).
struct DegeneracyError : Error {
  explicit DegeneracyError(const std::string& msg) : Error(msg) {}
};

// A filtered computation ran out of room: the requested class or value is
// not visible below the top threshold of the tower at hand.
struct DepthError : Error {
  explicit DepthError(const std::string& msg) : Error(msg) {}
};

// A discretized operator was sampled too coarsely to give a trustworthy
// answer (winding ambiguous, eigenfunction magnitude below the floor).
struct ResolutionError : Error {
  explicit ResolutionError(const std::string& msg) : Error(msg) {}
};

struct Violation {
  std::string kind;    // short tag, e.g. "dsquare", "action-order"
  std::string detail;  // human-readable description naming the offenders
  bool structural = true;  // false: filtration-tier (action) violations
};

// Report produced by the validators. Structural violations (shapes, d^2,
// grading homogeneity, duplicate ids, label leaks) make the algebra
// meaningless; filtration violations (action monotonicity) only invalidate
// the ops that use the action filtration (truncation, towers, spectral
// invariants).
struct ValidationReport {
  std::vector<Violation> items;

  bool ok() const { return items.empty(); }
  bool structural_ok() const {
    for (const auto& v : items)
      if (v.structural) return false;
    return true;
  }
  std::string summary(std::size_t max_items = 8) const {
    if (items.empty()) return "valid";
    std::string s = std::to_string(items.size()) + " violation(s):";
    std::size_t shown = 0;
    for (const auto& v : items) {
      if (shown++ == max_items) {
        s += " ...";
        break;
      }
      s += "\n  [" + v.kind + "] " + v.detail;
    }
    return s;
  }
};

struct ValidationError : Error {
  ValidationReport report;
  explicit ValidationError(ValidationReport r) : Error(r.summary()), report(std::move(r)) {}
};

}  // namespace ech
