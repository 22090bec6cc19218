#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "gedkit/graph.hpp"

namespace ged {

// Absolute tolerance used when comparing two costs for equality.
inline constexpr double kCostTolerance = 1e-9;

inline bool costs_equal(double a, double b) { return std::fabs(a - b) <= kCostTolerance; }

/*
 * The six edit costs. Substituting identically labeled vertices (edges)
 * is always free; vsub/esub only apply on a label mismatch.
 */
struct CostModel {
  double vsub = 2.0;
  double vdel = 4.0;
  double vins = 4.0;
  double esub = 1.0;
  double edel = 2.0;
  double eins = 2.0;

  // Throws InvalidArgument on a negative or non-finite cost.
  void validate() const;

  double vertex_substitution(const Label& a, const Label& b) const { return a == b ? 0.0 : vsub; }
  double edge_substitution(const Label& a, const Label& b) const { return a == b ? 0.0 : esub; }

  bool symmetric() const { return vdel == vins && edel == eins; }

  bool operator==(const CostModel&) const = default;

  // vsub=2 vdel=vins=4 esub=1 edel=eins=2
  static CostModel defaults() { return {}; }
  // Substitutions 1, insertions/deletions 2.
  static CostModel uniform() { return {1.0, 2.0, 2.0, 1.0, 2.0, 2.0}; }
  // High insertion/deletion costs that discourage structural changes.
  static CostModel setting2() { return {4.0, 12.0, 12.0, 1.0, 10.0, 10.0}; }

  // Accepts a preset name (default, uniform, setting2) or six
  // comma-separated numbers "vsub,vdel,vins,esub,edel,eins".
  static CostModel parse(std::string_view text);
  std::string to_string() const;
};

}  // namespace ged
