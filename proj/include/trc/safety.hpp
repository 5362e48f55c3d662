#pragma once

#include <set>
#include <string>
#include <vector>

#include "trc/ast.hpp"

namespace trc {

/// Position of a node: child indices from the root of the query body.
using NodePath = std::vector<std::size_t>;

/// Nodes connected to the root without passing through a negation,
/// implication or universal quantifier. Those blocking nodes themselves are
/// members; their descendants are not.
struct BasePartition {
  std::set<NodePath> nodes;

  bool contains(const NodePath& p) const { return nodes.contains(p); }
};

BasePartition base_partition(const Formula& f);
BasePartition base_partition(const Query& q);

/// Node at `path` in `f`.
const Formula& node_at(const Formula& f, const NodePath& path);

struct Violation {
  int condition = 0;  // 1..4
  NodePath node;
  SourceSpan span;
  std::string message;
};

struct SafetyReport {
  std::vector<Violation> violations;

  bool safe() const { return violations.empty(); }
  /// Distinct violated condition numbers, ascending.
  std::vector<int> conditions() const;
  /// One line per violation: `condition <n>: <message> at <start>..<end>`.
  std::string to_text() const;
};

/// Checks the four syntactic safety conditions. Boolean queries are safe.
SafetyReport check_safety(const Query& q);

}  // namespace trc
