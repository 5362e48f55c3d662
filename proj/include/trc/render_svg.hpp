#pragma once

#include <string>
#include <vector>

#include "trc/diagram.hpp"

namespace trc {

struct Rect {
  int x = 0, y = 0, w = 0, h = 0;

  bool operator==(const Rect&) const = default;
  bool contains(const Rect& r) const { return r.x >= x && r.y >= y && r.x + r.w <= x + w && r.y + r.h <= y + h; }
};

struct SceneZone {
  std::string partition;
  PartitionKind kind = PartitionKind::Negation;
  Rect rect;
  std::size_t depth = 0;  // enclosing negation scopes, itself included
  std::string group;

  bool operator==(const SceneZone&) const = default;
};

enum class BoxStyle { Table, Builtin, Condition, Output };

struct SceneBox {
  std::string id;
  BoxStyle style = BoxStyle::Table;
  Rect rect;
  std::string title;
  std::vector<std::string> rows;
  std::vector<std::string> row_keys;  // attribute behind each row ("" for fused selections)
  std::string partition;
  std::size_t depth = 0;

  bool operator==(const SceneBox&) const = default;
};

enum class LineStyle { Edge, Arrow, Dotted };

struct SceneLine {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  LineStyle style = LineStyle::Edge;
  std::string label;

  bool operator==(const SceneLine&) const = default;
};

struct Scene {
  int width = 0, height = 0;
  std::vector<SceneZone> zones;  // pre-order, parents before children
  std::vector<SceneBox> boxes;
  std::vector<SceneLine> lines;

  bool operator==(const Scene&) const = default;
};

struct LayoutOptions {
  /// Vertical gap between members of a fuse group; 0 draws them touching.
  int fuse_gap = 0;
};

/// Deterministic layout on an 8px grid. Inside a partition, boxes are stacked
/// vertically in document order, followed by nested partitions; members of a
/// fuse group are stacked with equal widths. Text is measured at 8px per
/// character.
Scene layout(const Diagram& d, const LayoutOptions& options = {});

struct SvgOptions {
  bool peirce_shading = false;    // fill zones at odd negation depth gray
  bool dotted_connectors = false; // join non-touching fuse members with dotted lines
};

std::string to_svg(const Scene& scene, const SvgOptions& options = {});

}  // namespace trc
