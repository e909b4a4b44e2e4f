#ifndef CROSSMAP_VALIDATION_HPP
#define CROSSMAP_VALIDATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "crossmap/core.hpp"

namespace crossmap {

/// Checks the mass-preserving condition on a draft: one error per source whose
/// outgoing weights do not sum to exactly 1, plus duplicate and range errors.
/// Same rule as build_crossmap.
inline ValidationReport check_mass_preserving(const EdgeListDraft& draft) {
  return detail::audit_draft(draft).second;
}

struct CoverageReport {
  bool conformable = true;
  std::vector<Key> uncovered_keys;
  Rational mass_at_risk;
};

/// Lists every array key the crossmap has no instructions for, and the mass
/// that a join on source keys would silently lose.
inline CoverageReport check_coverage(const Crossmap& map, const SharedMassArray& array) {
  CoverageReport report;
  for (const auto& [key, value] : array.entries()) {
    if (map.has_source(key)) continue;
    report.uncovered_keys.push_back(key);
    if (value) report.mass_at_risk += *value;
  }
  report.conformable = report.uncovered_keys.empty();
  return report;
}

enum class ZeroPolicy { allow_zero, strict_positive };

enum class ArrayFindingKind { missing_value, negative_value, nonpositive_value };

inline const char* to_string(ArrayFindingKind k) {
  switch (k) {
    case ArrayFindingKind::missing_value: return "missing_value";
    case ArrayFindingKind::negative_value: return "negative_value";
    case ArrayFindingKind::nonpositive_value: return "nonpositive_value";
  }
  return "unknown";
}

struct ArrayFinding {
  Key key;
  ArrayFindingKind kind;
  std::optional<Rational> value;
  std::string message;
};

inline std::vector<ArrayFinding> check_array(const SharedMassArray& array,
                                             ZeroPolicy policy = ZeroPolicy::allow_zero) {
  std::vector<ArrayFinding> findings;
  for (const auto& [key, value] : array.entries()) {
    if (!value) {
      findings.push_back({key, ArrayFindingKind::missing_value, std::nullopt,
                          "value for " + key.str() +
                              " is missing (NA); replace with zero explicitly before transforming"});
    } else if (value->sign() < 0) {
      findings.push_back({key, ArrayFindingKind::negative_value, *value,
                          "value for " + key.str() + " is negative (" + to_string(*value) + ")"});
    } else if (value->is_zero() && policy == ZeroPolicy::strict_positive) {
      findings.push_back({key, ArrayFindingKind::nonpositive_value, *value,
                          "value for " + key.str() + " is zero under the strict-positive policy"});
    }
  }
  return findings;
}

}  // namespace crossmap

#endif  // CROSSMAP_VALIDATION_HPP
