#include "trc/safety.hpp"

#include <algorithm>
#include <map>

namespace trc {
namespace {

bool blocks(const Formula& f) { return f.is<Not>() || f.is<Implies>() || f.is<Forall>(); }

void collect_base(const Formula& f, NodePath& path, std::set<NodePath>& out) {
  out.insert(path);
  if (blocks(f)) return;
  const auto kids = children(f);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    collect_base(*kids[i], path, out);
    path.pop_back();
  }
}

struct BindingPred {
  NodePath path;
  std::string attr;
};

class Checker {
 public:
  explicit Checker(const Query& q) : q_(q), out_(q.output->var) {
    NodePath path;
    std::set<std::string> existential;
    collect(*q.body, path, existential);
  }

  SafetyReport run() {
    SafetyReport report;
    const auto base = base_partition(q_);
    const auto& header = q_.output->header;

    for (const auto& a : header) {
      const bool bound = std::any_of(bindings_.begin(), bindings_.end(),
                                     [&](const BindingPred& b) { return b.attr == a; });
      if (!bound) {
        add(report, 1, {}, "output attribute " + out_ + "." + a + " has no binding predicate");
      }
    }
    for (const auto& b : bindings_) {
      if (!base.contains(b.path)) {
        add(report, 2, b.path, "binding predicate of " + out_ + "." + b.attr + " is outside the base partition");
      }
    }
    std::set<NodePath> reported_or;
    for (const auto& b : bindings_) {
      if (!base.contains(b.path)) continue;
      bool has_or = false;
      for (std::size_t len = 0; len < b.path.size(); ++len) {
        const NodePath prefix(b.path.begin(), b.path.begin() + static_cast<std::ptrdiff_t>(len));
        const auto* disj = node_at(*q_.body, prefix).get_if<Or>();
        if (!disj) continue;
        has_or = true;
        if (reported_or.contains(prefix)) continue;
        if (auto why = check_disjunction(*disj, prefix)) {
          reported_or.insert(prefix);
          add(report, 3, prefix, *why);
        }
      }
      if (!has_or) {
        const std::size_t uses = attr_uses_.count(b.attr) ? attr_uses_.at(b.attr) : 0;
        if (uses > 1) {
          add(report, 4, b.path,
              "output attribute " + out_ + "." + b.attr + " appears in another predicate besides its binding predicate");
        }
      }
    }
    return report;
  }

 private:
  void add(SafetyReport& r, int cond, const NodePath& path, std::string msg) {
    r.violations.push_back({cond, path, node_at(*q_.body, path).span(), std::move(msg)});
  }

  // Binding predicates and how often each output attribute is referenced.
  void collect(const Formula& f, NodePath& path, std::set<std::string>& existential) {
    if (f.is_predicate()) {
      for (const auto& ref : attr_refs(f)) {
        if (ref.var == out_) ++attr_uses_[ref.attr];
      }
      if (auto attr = binding_attr(f, existential)) bindings_.push_back({path, *attr});
      return;
    }
    std::vector<std::string> added;
    if (const auto* e = f.get_if<Exists>()) {
      for (const auto& b : e->bindings) {
        if (existential.insert(b.var).second) added.push_back(b.var);
      }
    }
    const auto kids = children(f);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      path.push_back(i);
      collect(*kids[i], path, existential);
      path.pop_back();
    }
    for (const auto& v : added) existential.erase(v);
  }

  std::optional<std::string> binding_attr(const Formula& f, const std::set<std::string>& existential) const {
    if (const auto* s = f.get_if<SelPred>()) {
      if (s->op == CmpOp::Eq && s->left.var == out_) return s->left.attr;
      return std::nullopt;
    }
    const auto& j = f.as<JoinPred>();
    if (j.op != CmpOp::Eq) return std::nullopt;
    if (j.left.var == out_ && existential.contains(j.right.var)) return j.left.attr;
    if (j.right.var == out_ && existential.contains(j.left.var)) return j.right.attr;
    return std::nullopt;
  }

  // Header attributes bound by binding predicates inside the subtree at `path`.
  std::set<std::string> defined_in(const NodePath& path) const {
    std::set<std::string> out;
    for (const auto& b : bindings_) {
      if (b.path.size() >= path.size() && std::equal(path.begin(), path.end(), b.path.begin())) out.insert(b.attr);
    }
    return out;
  }

  std::optional<std::string> check_disjunction(const Or& disj, const NodePath& at) const {
    std::optional<std::set<std::string>> first;
    for (std::size_t i = 0; i < disj.children.size(); ++i) {
      const auto free = free_vars(*disj.children[i]);
      if (free != std::set<std::string>{out_}) {
        return "disjunct " + std::to_string(i + 1) + " does not have " + out_ + " as its only free variable";
      }
      NodePath child = at;
      child.push_back(i);
      auto defined = defined_in(child);
      if (!first) {
        first = std::move(defined);
      } else if (defined != *first) {
        return "disjuncts bind different attributes of " + out_;
      }
    }
    return std::nullopt;
  }

  const Query& q_;
  std::string out_;
  std::vector<BindingPred> bindings_;
  std::map<std::string, std::size_t> attr_uses_;
};

}  // namespace

BasePartition base_partition(const Formula& f) {
  BasePartition bp;
  NodePath path;
  collect_base(f, path, bp.nodes);
  return bp;
}

BasePartition base_partition(const Query& q) { return base_partition(*q.body); }

const Formula& node_at(const Formula& f, const NodePath& path) {
  const Formula* cur = &f;
  for (auto i : path) {
    auto kids = children(*cur);
    cur = kids.at(i).get();
  }
  return *cur;
}

std::vector<int> SafetyReport::conditions() const {
  std::set<int> c;
  for (const auto& v : violations) c.insert(v.condition);
  return {c.begin(), c.end()};
}

std::string SafetyReport::to_text() const {
  std::string out;
  for (const auto& v : violations) {
    out += "condition " + std::to_string(v.condition) + ": " + v.message + " at " + v.span.to_string() + "\n";
  }
  return out;
}

SafetyReport check_safety(const Query& q) {
  if (q.is_boolean()) return {};
  return Checker(q).run();
}

}  // namespace trc
