#include "trc/render_svg.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

namespace trc {

namespace {

constexpr int kGrid = 8;
constexpr int kChar = 8;
constexpr int kRow = 24;
constexpr int kPad = 16;
constexpr int kGap = 16;
constexpr int kMargin = 8;
constexpr int kMinZone = 48;

constexpr const char* kGray = "#d9d9d9";
constexpr const char* kWhite = "#ffffff";
constexpr const char* kSelectionTint = "#dbe9f6";
constexpr const char* kBinaryTint = "#fde0c5";

int snap(int v) { return (v + kGrid - 1) / kGrid * kGrid; }

int text_width(const std::string& s) {
  int n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n * kChar;
}

// Horizontal reach of an edge curve beyond its right-most endpoint.
int bulge(const SceneLine& l) { return snap(24 + std::abs(l.y2 - l.y1) / 4); }

bool has_title(const SceneBox& b) { return !b.title.empty(); }

int row_center(const SceneBox& b, std::size_t row) {
  return b.rect.y + kRow * static_cast<int>(row + (has_title(b) ? 1 : 0)) + kRow / 2;
}

void size_box(SceneBox& b) {
  int w = text_width(b.title);
  for (const auto& r : b.rows) w = std::max(w, text_width(r));
  b.rect.w = std::max(snap(w + 2 * kGrid), kMinZone);
  b.rect.h = kRow * static_cast<int>(b.rows.size() + (has_title(b) ? 1 : 0));
}

struct Size {
  int w = 0, h = 0;
};

class LayoutBuilder {
 public:
  LayoutBuilder(const Diagram& d, const LayoutOptions& options) : d_(d), options_(options) {}

  Scene run() {
    collect_boxes();
    const Partition* base = nullptr;
    for (const auto& p : d_.partitions) {
      if (p.kind == PartitionKind::Base) {
        base = &p;
        break;
      }
    }
    if (!base) return scene_;
    const Size s = measure(base->id);
    place(base->id, kMargin, kMargin, s.w);
    connect();
    int right = kMargin + s.w;
    for (const auto& l : scene_.lines) {
      if (l.style != LineStyle::Dotted) right = std::max(right, std::max(l.x1, l.x2) + bulge(l) + text_width(l.label));
    }
    scene_.width = right + kMargin;
    scene_.height = s.h + 2 * kMargin;
    return scene_;
  }

 private:
  const Diagram& d_;
  LayoutOptions options_;
  Scene scene_;
  std::map<std::string, std::vector<SceneBox>> pending_;  // partition -> unplaced boxes
  std::map<std::string, Size> sizes_;
  std::map<std::string, std::size_t> placed_;  // box id -> index in scene_.boxes

  void collect_boxes() {
    std::map<std::string, SceneBox> tables;
    for (const auto& t : d_.tables) {
      SceneBox b;
      b.id = t.id;
      b.style = BoxStyle::Table;
      b.title = t.relation;
      b.rows = t.attributes;
      b.row_keys = t.attributes;
      b.partition = t.partition;
      tables.emplace(t.id, std::move(b));
    }
    for (const auto& bx : d_.builtins) {
      const auto* h = d_.hint_for(bx.id);
      if (!h || h->kind != HintKind::Fused) continue;
      for (const auto& e : d_.edges) {
        const Endpoint* other = e.a.box == bx.id ? &e.b : e.b.box == bx.id ? &e.a : nullptr;
        if (!other || !tables.count(other->box)) continue;
        auto& tb = tables.at(other->box);
        tb.rows.push_back(other->attr + std::string(op_text(bx.op)) + constant_text(*bx.constant));
        tb.row_keys.emplace_back();
        break;
      }
    }

    for (const auto& o : d_.outputs) {
      SceneBox b;
      b.id = o.id;
      b.style = BoxStyle::Output;
      b.title = "Q";
      b.rows = o.header;
      b.row_keys = o.header;
      b.partition = o.partition;
      pending_[o.partition].push_back(std::move(b));
    }
    for (const auto& t : d_.tables) pending_[t.partition].push_back(tables.at(t.id));
    for (const auto& bx : d_.builtins) {
      const auto* h = d_.hint_for(bx.id);
      if (h && h->kind != HintKind::Condition) continue;
      SceneBox b;
      b.id = bx.id;
      b.partition = bx.partition;
      if (h) {
        b.style = BoxStyle::Condition;
        b.rows = {bx.relation().name()};
        b.row_keys = {"$1"};
      } else {
        b.style = BoxStyle::Builtin;
        b.title = bx.relation().name();
        b.rows = bx.unary() ? std::vector<std::string>{"$1"} : std::vector<std::string>{"$1", "$2"};
        b.row_keys = b.rows;
      }
      pending_[bx.partition].push_back(std::move(b));
    }
    for (auto& [_, boxes] : pending_) {
      for (auto& b : boxes) size_box(b);
    }
  }

  // Child partitions in document order, members of one fuse group gathered
  // at the position of the first member.
  std::vector<std::vector<const Partition*>> child_slots(const std::string& id) const {
    std::vector<std::vector<const Partition*>> slots;
    std::map<std::string, std::size_t> group_slot;
    for (const auto* c : d_.children_of(id)) {
      if (c->kind == PartitionKind::FuseBox) {
        auto [it, fresh] = group_slot.emplace(c->group, slots.size());
        if (fresh) slots.emplace_back();
        slots[it->second].push_back(c);
      } else {
        slots.push_back({c});
      }
    }
    return slots;
  }

  Size slot_size(const std::vector<const Partition*>& slot) {
    Size s;
    for (std::size_t i = 0; i < slot.size(); ++i) {
      const Size m = measure(slot[i]->id);
      s.w = std::max(s.w, m.w);
      s.h += m.h + (i ? options_.fuse_gap : 0);
    }
    return s;
  }

  Size measure(const std::string& id) {
    if (auto it = sizes_.find(id); it != sizes_.end()) return it->second;
    int w = 0, h = 0, items = 0;
    for (const auto& b : pending_[id]) {
      w = std::max(w, b.rect.w);
      h += b.rect.h;
      ++items;
    }
    for (const auto& slot : child_slots(id)) {
      const Size s = slot_size(slot);
      w = std::max(w, s.w);
      h += s.h;
      ++items;
    }
    if (items > 1) h += kGap * (items - 1);
    const Size out{std::max(w + 2 * kPad, kMinZone), std::max(h + 2 * kPad, kMinZone)};
    sizes_[id] = out;
    return out;
  }

  void place(const std::string& id, int x, int y, int width) {
    const Partition* p = d_.partition(id);
    SceneZone z;
    z.partition = id;
    z.kind = p->kind;
    z.rect = {x, y, width, sizes_.at(id).h};
    z.depth = d_.negation_depth(id);
    z.group = p->group;
    scene_.zones.push_back(z);

    const std::size_t depth = z.depth;
    int cy = y + kPad;
    for (auto b : pending_[id]) {
      b.rect.x = x + kPad;
      b.rect.y = cy;
      b.depth = depth;
      cy += b.rect.h + kGap;
      placed_[b.id] = scene_.boxes.size();
      scene_.boxes.push_back(std::move(b));
    }
    for (const auto& slot : child_slots(id)) {
      const int slot_w = slot.size() > 1 ? slot_size(slot).w : sizes_.at(slot.front()->id).w;
      for (std::size_t i = 0; i < slot.size(); ++i) {
        const int h = sizes_.at(slot[i]->id).h;
        place(slot[i]->id, x + kPad, cy, slot_w);
        if (i + 1 < slot.size() && options_.fuse_gap > 0) {
          const int mid = x + kPad + slot_w / 2;
          scene_.lines.push_back({mid, cy + h, mid, cy + h + options_.fuse_gap, LineStyle::Dotted, ""});
        }
        cy += h + (i + 1 < slot.size() ? options_.fuse_gap : 0);
      }
      cy += kGap;
    }
  }

  // Right-hand anchor point of an attribute row.
  std::optional<std::pair<int, int>> anchor(const Endpoint& e) const {
    auto it = placed_.find(e.box);
    if (it == placed_.end()) return std::nullopt;
    const auto& b = scene_.boxes[it->second];
    for (std::size_t i = 0; i < b.row_keys.size(); ++i) {
      if (b.row_keys[i] == e.attr) return std::pair{b.rect.x + b.rect.w, row_center(b, i)};
    }
    return std::nullopt;
  }

  void add_line(const std::pair<int, int>& a, const std::pair<int, int>& b, LineStyle style, std::string label) {
    scene_.lines.push_back({a.first, a.second, b.first, b.second, style, std::move(label)});
  }

  void connect() {
    std::map<std::string, std::map<std::string, std::vector<Endpoint>>> arrow_ends;  // builtin -> anchor -> far ends
    for (const auto& e : d_.edges) {
      const auto* ha = d_.hint_for(e.a.box);
      const auto* hb = d_.hint_for(e.b.box);
      if ((ha && ha->kind == HintKind::Fused) || (hb && hb->kind == HintKind::Fused)) continue;
      if (ha && ha->kind == HintKind::Arrow) {
        arrow_ends[e.a.box][e.a.attr].push_back(e.b);
        continue;
      }
      if (hb && hb->kind == HintKind::Arrow) {
        arrow_ends[e.b.box][e.b.attr].push_back(e.a);
        continue;
      }
      const auto a = anchor(e.a);
      const auto b = anchor(e.b);
      if (a && b) add_line(*a, *b, LineStyle::Edge, "");
    }
    for (const auto& bx : d_.builtins) {
      auto it = arrow_ends.find(bx.id);
      if (it == arrow_ends.end()) continue;
      auto& ends = it->second;
      std::optional<std::pair<int, int>> first[2];
      const char* anchors[2] = {"$1", "$2"};
      for (int k = 0; k < 2; ++k) {
        for (const auto& far : ends[anchors[k]]) {
          const auto pt = anchor(far);
          if (!pt) continue;
          if (!first[k]) first[k] = pt;
          else add_line(*first[k], *pt, LineStyle::Edge, "");
        }
      }
      if (first[0] && first[1]) add_line(*first[0], *first[1], LineStyle::Arrow, std::string(op_text(bx.op)));
    }
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* zone_fill(std::size_t depth, bool shading) { return shading && depth % 2 ? kGray : kWhite; }

void rect(std::ostringstream& os, const Rect& r, const std::string& attrs) {
  os << "<rect x=\"" << r.x << "\" y=\"" << r.y << "\" width=\"" << r.w << "\" height=\"" << r.h << "\" " << attrs
     << "/>\n";
}

void text(std::ostringstream& os, int x, int y, const std::string& s, const std::string& attrs = "") {
  os << "<text x=\"" << x << "\" y=\"" << y << "\"" << (attrs.empty() ? "" : " " + attrs) << ">" << escape(s)
     << "</text>\n";
}

}  // namespace

Scene layout(const Diagram& d, const LayoutOptions& options) { return LayoutBuilder(d, options).run(); }

std::string to_svg(const Scene& scene, const SvgOptions& options) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << scene.width << "\" height=\""
     << scene.height << "\" viewBox=\"0 0 " << scene.width << " " << scene.height << "\">\n";
  os << "<defs>\n<marker id=\"arrowhead\" markerWidth=\"8\" markerHeight=\"8\" refX=\"8\" refY=\"4\" "
        "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" fill=\"#333333\"/></marker>\n</defs>\n";
  os << "<g font-family=\"monospace\" font-size=\"13\">\n";

  os << "<g id=\"zones\">\n";
  for (const auto& z : scene.zones) {
    const std::string fill = z.kind == PartitionKind::Base || options.peirce_shading
                                 ? zone_fill(z.depth, options.peirce_shading)
                                 : "none";
    std::string attrs = "id=\"" + escape(z.partition) + "\" fill=\"" + fill + "\"";
    switch (z.kind) {
      case PartitionKind::Base:
        attrs += " stroke=\"none\"";
        break;
      case PartitionKind::Negation:
        attrs += " rx=\"12\" ry=\"12\" stroke=\"#333333\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"";
        break;
      case PartitionKind::FuseBox:
        attrs += " stroke=\"#000000\" stroke-width=\"3\"";
        break;
    }
    rect(os, z.rect, attrs);
  }
  os << "</g>\n";

  os << "<g id=\"boxes\">\n";
  for (const auto& b : scene.boxes) {
    const bool gray = options.peirce_shading && b.depth % 2;
    os << "<g id=\"" << escape(b.id) << "\" data-zone=\"" << (gray ? "gray" : "white") << "\">\n";
    const char* fill = b.style == BoxStyle::Condition ? kSelectionTint
                       : b.style == BoxStyle::Builtin ? (b.rows.size() > 1 ? kBinaryTint : kSelectionTint)
                                                      : kWhite;
    rect(os, b.rect, std::string("fill=\"") + fill + "\" stroke=\"#000000\"");
    const int tx = b.rect.x + kGrid;
    if (has_title(b)) {
      text(os, tx, b.rect.y + kRow - 8, b.title, "font-weight=\"bold\"");
    }
    for (std::size_t i = 0; i < b.rows.size(); ++i) {
      const int top = row_center(b, i) - kRow / 2;
      if (b.row_keys[i].empty()) {
        rect(os, {b.rect.x + 1, top + 1, b.rect.w - 2, kRow - 2}, std::string("fill=\"") + kSelectionTint + "\"");
      }
      if (i > 0 || has_title(b)) {
        os << "<line x1=\"" << b.rect.x << "\" y1=\"" << top << "\" x2=\"" << b.rect.x + b.rect.w << "\" y2=\"" << top
           << "\" stroke=\"#000000\"/>\n";
      }
      text(os, tx, top + kRow - 8, b.rows[i]);
    }
    os << "</g>\n";
  }
  os << "</g>\n";

  os << "<g id=\"lines\" fill=\"none\">\n";
  for (const auto& l : scene.lines) {
    if (l.style == LineStyle::Dotted) {
      if (!options.dotted_connectors) continue;
      os << "<line x1=\"" << l.x1 << "\" y1=\"" << l.y1 << "\" x2=\"" << l.x2 << "\" y2=\"" << l.y2
         << "\" stroke=\"#000000\" stroke-width=\"2\" stroke-dasharray=\"2 4\"/>\n";
      continue;
    }
    const int reach = std::max(l.x1, l.x2) + bulge(l);
    os << "<path d=\"M" << l.x1 << "," << l.y1 << " C" << reach << "," << l.y1 << " " << reach << "," << l.y2 << " "
       << l.x2 << "," << l.y2 << "\" stroke=\"#000000\" stroke-width=\"1.5\"";
    if (l.style == LineStyle::Arrow) os << " marker-end=\"url(#arrowhead)\"";
    os << "/>\n";
    if (l.style == LineStyle::Arrow && !l.label.empty()) {
      const int lx = std::max(l.x1, l.x2) + bulge(l) * 3 / 4 + 4;
      text(os, lx, (l.y1 + l.y2) / 2 + 4, l.label, "fill=\"#a04000\"");
    }
  }
  os << "</g>\n</g>\n</svg>\n";
  return os.str();
}

}  // namespace trc
