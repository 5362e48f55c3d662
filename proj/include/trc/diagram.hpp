#pragma once

// Diagram document model: a tree of partitions (the base canvas, negation
// scopes and fuse boxes) holding table, built-in and output boxes, with
// unlabeled equijoin edges between box attributes.

#include <optional>
#include <string>
#include <vector>

#include "trc/ast.hpp"

namespace trc {

enum class PartitionKind { Base, Negation, FuseBox };

struct Partition {
  std::string id;
  PartitionKind kind = PartitionKind::Base;
  std::string parent;  // empty for the base partition
  std::string group;   // fuse group id, FuseBox only

  bool operator==(const Partition&) const = default;
};

struct TableBox {
  std::string id;
  std::string relation;
  std::string var;
  std::string partition;
  std::vector<std::string> attributes;

  bool operator==(const TableBox&) const = default;
};

/// Unary "θc" (anchor $1) or binary "θ" (anchors $1, $2) built-in relation.
struct BuiltinBox {
  std::string id;
  CmpOp op = CmpOp::Eq;
  std::optional<Constant> constant;
  std::string partition;

  bool unary() const { return constant.has_value(); }
  BuiltinRelation relation() const { return {op, constant}; }
  bool operator==(const BuiltinBox&) const = default;
};

struct OutputBox {
  std::string id = "out";
  std::vector<std::string> header;
  std::string partition;

  bool operator==(const OutputBox&) const = default;
};

struct Endpoint {
  std::string box;
  std::string attr;

  auto operator<=>(const Endpoint&) const = default;
};

struct Edge {
  Endpoint a;
  Endpoint b;

  bool operator==(const Edge&) const = default;
};

/// Display shortcuts over built-in boxes. `Fused` shows a unary built-in as a
/// selection inside the attribute row of its table, `Condition` as a
/// standalone condition box, `Arrow` shows a binary built-in as a labeled
/// arrow between its two anchored attributes.
enum class HintKind { Fused, Condition, Arrow };

struct Hint {
  HintKind kind = HintKind::Condition;
  std::string box;

  bool operator==(const Hint&) const = default;
};

struct Diagram {
  std::vector<Partition> partitions;  // document order, base first
  std::vector<TableBox> tables;
  std::vector<BuiltinBox> builtins;
  std::vector<OutputBox> outputs;  // at most one in a valid diagram
  std::vector<Edge> edges;
  std::vector<Hint> hints;

  bool operator==(const Diagram&) const = default;

  const Partition* partition(const std::string& id) const;
  const TableBox* table(const std::string& id) const;
  const BuiltinBox* builtin(const std::string& id) const;
  const OutputBox* output(const std::string& id) const;
  const Hint* hint_for(const std::string& box) const;
  /// Partition id of any box, or empty if the id is unknown.
  std::string partition_of(const std::string& box) const;
  std::vector<const Partition*> children_of(const std::string& partition) const;
  /// Ancestors of `id` from its parent up to the base partition.
  std::vector<std::string> ancestors(const std::string& id) const;
  /// Number of enclosing Negation partitions of a partition, itself included.
  std::size_t negation_depth(const std::string& partition) const;
};

struct ValidityReport {
  std::vector<std::string> problems;

  bool valid() const { return problems.empty(); }
  std::string to_text() const;
};

ValidityReport validate(const Diagram& d);

/// Replaces each fuse group under P with one Negation child of P whose
/// children are Negation partitions holding the former members' contents.
/// Throws InvalidDiagram if `d` is not valid.
Diagram expand_fuse_boxes(const Diagram& d);

}  // namespace trc
