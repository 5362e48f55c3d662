#include "trc/diagram.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace trc {

const Partition* Diagram::partition(const std::string& id) const {
  for (const auto& p : partitions) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const TableBox* Diagram::table(const std::string& id) const {
  for (const auto& t : tables) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const BuiltinBox* Diagram::builtin(const std::string& id) const {
  for (const auto& b : builtins) {
    if (b.id == id) return &b;
  }
  return nullptr;
}

const OutputBox* Diagram::output(const std::string& id) const {
  for (const auto& o : outputs) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const Hint* Diagram::hint_for(const std::string& box) const {
  for (const auto& h : hints) {
    if (h.box == box) return &h;
  }
  return nullptr;
}

std::string Diagram::partition_of(const std::string& box) const {
  if (const auto* t = table(box)) return t->partition;
  if (const auto* b = builtin(box)) return b->partition;
  if (const auto* o = output(box)) return o->partition;
  return {};
}

std::vector<const Partition*> Diagram::children_of(const std::string& id) const {
  std::vector<const Partition*> out;
  for (const auto& p : partitions) {
    if (p.parent == id && p.kind != PartitionKind::Base) out.push_back(&p);
  }
  return out;
}

std::vector<std::string> Diagram::ancestors(const std::string& id) const {
  std::vector<std::string> out;
  const Partition* p = partition(id);
  while (p && !p->parent.empty() && out.size() <= partitions.size()) {
    out.push_back(p->parent);
    p = partition(p->parent);
  }
  return out;
}

std::size_t Diagram::negation_depth(const std::string& id) const {
  std::size_t depth = 0;
  const Partition* p = partition(id);
  for (std::size_t steps = 0; p && steps <= partitions.size(); ++steps) {
    if (p->kind == PartitionKind::Negation) ++depth;
    p = p->parent.empty() ? nullptr : partition(p->parent);
  }
  return depth;
}

std::string ValidityReport::to_text() const {
  std::string out;
  for (const auto& p : problems) out += p + "\n";
  return out;
}

namespace {

class Validator {
 public:
  explicit Validator(const Diagram& d) : d_(d) {}

  ValidityReport run() {
    check_partitions();
    check_boxes();
    check_edges();
    check_hints();
    check_leaves();
    return std::move(report_);
  }

 private:
  void fail(std::string msg) { report_.problems.push_back(std::move(msg)); }

  void check_partitions() {
    std::set<std::string> ids;
    std::size_t bases = 0;
    std::map<std::string, std::vector<const Partition*>> groups;
    for (const auto& p : d_.partitions) {
      if (!ids.insert(p.id).second) fail("partition id '" + p.id + "' is used twice");
      if (p.kind == PartitionKind::Base) {
        ++bases;
        if (!p.parent.empty()) fail("base partition '" + p.id + "' has a parent");
        continue;
      }
      if (!d_.partition(p.parent)) {
        fail("partition '" + p.id + "' has unknown parent '" + p.parent + "'");
        continue;
      }
      if (p.kind == PartitionKind::FuseBox) {
        if (p.group.empty()) fail("fuse box '" + p.id + "' has no group");
        groups[p.group].push_back(&p);
      } else if (!p.group.empty()) {
        fail("negation partition '" + p.id + "' has a fuse group");
      }
      if (d_.ancestors(p.id).size() > d_.partitions.size()) fail("partition '" + p.id + "' is on a cycle");
    }
    if (bases != 1) fail("diagram needs exactly one base partition, found " + std::to_string(bases));
    for (const auto& [g, members] : groups) {
      if (members.size() < 2) fail("fuse group '" + g + "' has fewer than 2 members");
      for (const auto* m : members) {
        if (m->parent != members.front()->parent) fail("members of fuse group '" + g + "' have different parents");
      }
    }
  }

  void check_boxes() {
    std::set<std::string> ids, vars;
    auto check_id = [&](const std::string& id, const std::string& partition) {
      if (!ids.insert(id).second) fail("box id '" + id + "' is used twice");
      if (!d_.partition(partition)) fail("box '" + id + "' is in unknown partition '" + partition + "'");
    };
    for (const auto& t : d_.tables) {
      check_id(t.id, t.partition);
      if (!vars.insert(t.var).second) fail("tuple variable '" + t.var + "' is used by two tables");
      std::set<std::string> attrs(t.attributes.begin(), t.attributes.end());
      if (attrs.size() != t.attributes.size()) fail("table '" + t.id + "' lists an attribute twice");
    }
    for (const auto& b : d_.builtins) check_id(b.id, b.partition);
    if (d_.outputs.size() > 1) fail("diagram has " + std::to_string(d_.outputs.size()) + " output boxes");
    for (const auto& o : d_.outputs) {
      check_id(o.id, o.partition);
      const auto* p = d_.partition(o.partition);
      if (p && p->kind != PartitionKind::Base) fail("output box is not in the base partition");
      if (o.header.empty()) fail("output box has an empty header");
      std::set<std::string> attrs(o.header.begin(), o.header.end());
      if (attrs.size() != o.header.size()) fail("output header lists an attribute twice");
    }
  }

  bool has_attr(const Endpoint& e) const {
    if (const auto* t = d_.table(e.box)) {
      return std::find(t->attributes.begin(), t->attributes.end(), e.attr) != t->attributes.end();
    }
    if (const auto* b = d_.builtin(e.box)) return e.attr == "$1" || (!b->unary() && e.attr == "$2");
    if (const auto* o = d_.output(e.box)) return std::find(o->header.begin(), o->header.end(), e.attr) != o->header.end();
    return false;
  }

  bool nested(const std::string& p1, const std::string& p2) const {
    if (p1 == p2) return true;
    const auto a1 = d_.ancestors(p1), a2 = d_.ancestors(p2);
    return std::find(a1.begin(), a1.end(), p2) != a1.end() || std::find(a2.begin(), a2.end(), p1) != a2.end();
  }

  void check_edges() {
    std::map<std::string, std::map<std::string, int>> anchors;
    for (std::size_t i = 0; i < d_.edges.size(); ++i) {
      const auto& e = d_.edges[i];
      const std::string where = "edge " + std::to_string(i + 1);
      bool ok = true;
      for (const auto* end : {&e.a, &e.b}) {
        if (d_.partition_of(end->box).empty()) {
          fail(where + " references unknown box '" + end->box + "'");
          ok = false;
        } else if (!has_attr(*end)) {
          fail(where + " references unknown attribute '" + end->attr + "' of '" + end->box + "'");
          ok = false;
        }
        if (d_.builtin(end->box)) ++anchors[end->box][end->attr];
      }
      if (ok && !nested(d_.partition_of(e.a.box), d_.partition_of(e.b.box))) {
        fail(where + " connects partitions that are not nested in each other");
      }
    }
    for (const auto& b : d_.builtins) {
      const auto& a = anchors[b.id];
      const int n1 = a.contains("$1") ? a.at("$1") : 0;
      const int n2 = a.contains("$2") ? a.at("$2") : 0;
      if (b.unary() && n1 != 1) {
        fail("unary built-in '" + b.id + "' needs exactly one edge, has " + std::to_string(n1));
      }
      if (!b.unary() && (n1 != 1 || n2 != 1)) {
        fail("binary built-in '" + b.id + "' needs one edge at $1 and one at $2");
      }
    }
  }

  void check_hints() {
    std::set<std::string> seen;
    for (const auto& h : d_.hints) {
      if (!seen.insert(h.box).second) fail("box '" + h.box + "' has two hints");
      const auto* b = d_.builtin(h.box);
      if (!b) {
        fail("hint refers to '" + h.box + "', which is not a built-in box");
        continue;
      }
      if (h.kind == HintKind::Arrow && b->unary()) fail("arrow hint on unary built-in '" + h.box + "'");
      if (h.kind != HintKind::Arrow && !b->unary()) fail("selection hint on binary built-in '" + h.box + "'");
      if (h.kind == HintKind::Fused) {
        bool fused = false;
        for (const auto& e : d_.edges) {
          const Endpoint* other = e.a.box == b->id ? &e.b : e.b.box == b->id ? &e.a : nullptr;
          const auto* t = other ? d_.table(other->box) : nullptr;
          if (t && t->partition == b->partition) fused = true;
        }
        if (!fused) fail("fused selection '" + h.box + "' is not attached to a table in its partition");
      }
    }
  }

  void check_leaves() {
    for (const auto& p : d_.partitions) {
      if (p.kind == PartitionKind::Base || !d_.children_of(p.id).empty()) continue;
      auto in_p = [&](const auto& boxes) {
        return std::any_of(boxes.begin(), boxes.end(), [&](const auto& b) { return b.partition == p.id; });
      };
      if (!in_p(d_.tables) && !in_p(d_.builtins)) fail("leaf partition '" + p.id + "' is empty");
    }
  }

  const Diagram& d_;
  ValidityReport report_;
};

}  // namespace

ValidityReport validate(const Diagram& d) { return Validator(d).run(); }

Diagram expand_fuse_boxes(const Diagram& d) {
  if (auto r = validate(d); !r.valid()) throw InvalidDiagram("cannot expand an invalid diagram: " + r.problems.front());
  Diagram out = d;
  std::set<std::string> ids;
  for (const auto& p : d.partitions) ids.insert(p.id);
  std::size_t next = 1;
  auto fresh = [&] {
    while (ids.contains("p" + std::to_string(next))) ++next;
    ids.insert("p" + std::to_string(next));
    return "p" + std::to_string(next);
  };
  std::vector<Partition> expanded;
  std::map<std::string, std::string> shell;  // group -> new negation id
  for (const auto& p : d.partitions) {
    if (p.kind != PartitionKind::FuseBox) {
      expanded.push_back(p);
      continue;
    }
    auto it = shell.find(p.group);
    if (it == shell.end()) {
      it = shell.emplace(p.group, fresh()).first;
      expanded.push_back(Partition{it->second, PartitionKind::Negation, p.parent, ""});
    }
    expanded.push_back(Partition{p.id, PartitionKind::Negation, it->second, ""});
  }
  out.partitions = std::move(expanded);
  return out;
}

}  // namespace trc
