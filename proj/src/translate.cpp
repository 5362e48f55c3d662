#include "trc/translate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "trc/fragments.hpp"
#include "trc/normal_form.hpp"

namespace trc {
namespace {

// Scopes are numbered as they are entered: 0 is the top level, each negation
// and each disjunct opens a new one.
class BuiltinRewriter {
 public:
  explicit BuiltinRewriter(const Query& q) {
    for (const auto& v : bound_vars(*q.body)) used_.insert(v);
    if (q.output) {
      used_.insert(q.output->var);
      output_ = q.output->var;
    }
  }

  FormulaPtr rewrite(const FormulaPtr& f, int scope) {
    if (const auto* s = f->get_if<SelPred>()) {
      const auto c = fresh("c");
      return make_exists({Binding{c, BuiltinRelation{s->op, s->value}}},
                         make_join(s->left, CmpOp::Eq, AttrRef{c, "$1"}, f->span()), f->span());
    }
    if (const auto* j = f->get_if<JoinPred>()) {
      if (j->op == CmpOp::Eq && (co_scoped(j->left.var, scope) || co_scoped(j->right.var, scope))) return f;
      const auto v = fresh("j");
      return make_exists({Binding{v, BuiltinRelation{j->op, std::nullopt}}},
                         make_and({make_join(j->left, CmpOp::Eq, AttrRef{v, "$1"}, f->span()),
                                   make_join(AttrRef{v, "$2"}, CmpOp::Eq, j->right, f->span())},
                                  f->span()),
                         f->span());
    }
    if (f->is<Forall>() || f->is<Implies>()) {
      throw FragmentError("built-in form needs a query without forall and ->", f->span());
    }
    if (const auto* e = f->get_if<Exists>()) {
      for (const auto& b : e->bindings) scope_of_[b.var] = scope;
    }
    auto kids = children(*f);
    for (auto& k : kids) {
      const bool opens = f->is<Not>() || f->is<Or>();
      k = rewrite(k, opens ? ++next_scope_ : scope);
    }
    return with_children(*f, std::move(kids));
  }

 private:
  bool co_scoped(const std::string& var, int scope) const {
    if (var == output_) return false;
    auto it = scope_of_.find(var);
    return it != scope_of_.end() && it->second == scope;
  }

  std::string fresh(const std::string& prefix) {
    for (int i = 1;; ++i) {
      auto name = prefix + std::to_string(i);
      if (used_.insert(name).second) return name;
    }
  }

  std::set<std::string> used_;
  std::string output_;
  std::map<std::string, int> scope_of_;
  int next_scope_ = 0;
};

class DiagramBuilder {
 public:
  DiagramBuilder(const Query& q, bool shortcuts) : q_(q), shortcuts_(shortcuts) {
    d_.partitions.push_back({"p0", PartitionKind::Base, "", ""});
    if (q.output) {
      d_.outputs.push_back({"out", q.output->header, "p0"});
      box_of_[q.output->var] = "out";
    }
  }

  Diagram build() {
    walk(*q_.body, "p0");
    for (const auto& [pred, partition] : preds_) place(*pred, partition);
    return std::move(d_);
  }

 private:
  std::string new_partition(PartitionKind kind, const std::string& parent, const std::string& group = {}) {
    auto id = "p" + std::to_string(d_.partitions.size());
    d_.partitions.push_back({id, kind, parent, group});
    return id;
  }

  std::string new_builtin(CmpOp op, std::optional<Constant> c, const std::string& partition) {
    auto id = "b" + std::to_string(d_.builtins.size() + 1);
    d_.builtins.push_back({id, op, std::move(c), partition});
    return id;
  }

  void walk(const Formula& f, const std::string& partition) {
    std::visit(overloaded{
                   [&](const JoinPred&) { preds_.emplace_back(&f, partition); },
                   [&](const SelPred&) { preds_.emplace_back(&f, partition); },
                   [&](const Not& n) { walk(*n.body, new_partition(PartitionKind::Negation, partition)); },
                   [&](const And& n) {
                     for (const auto& c : n.children) walk(*c, partition);
                   },
                   [&](const Or& n) {
                     if (!shortcuts_) throw FragmentError("diagram with built-ins needs a query without or", f.span());
                     const auto group = "g" + std::to_string(++groups_);
                     for (const auto& c : n.children) walk(*c, new_partition(PartitionKind::FuseBox, partition, group));
                   },
                   [&](const Implies&) { throw FragmentError("diagrams need a query without ->", f.span()); },
                   [&](const Forall&) { throw FragmentError("diagrams need a query without forall", f.span()); },
                   [&](const Exists& n) {
                     for (const auto& b : n.bindings) {
                       var_partition_[b.var] = partition;
                       if (const auto* bi = std::get_if<BuiltinRelation>(&b.relation)) {
                         box_of_[b.var] = new_builtin(bi->op, bi->constant, partition);
                       } else {
                         auto id = "t" + std::to_string(d_.tables.size() + 1);
                         d_.tables.push_back({id, std::get<std::string>(b.relation), b.var, partition, {}});
                         box_of_[b.var] = id;
                       }
                     }
                     walk(*n.body, partition);
                   },
               },
               f.node());
  }

  Endpoint endpoint(const AttrRef& ref) {
    auto it = box_of_.find(ref.var);
    if (it == box_of_.end()) throw FragmentError("tuple variable '" + ref.var + "' is not bound");
    for (auto& t : d_.tables) {
      if (t.id == it->second && std::find(t.attributes.begin(), t.attributes.end(), ref.attr) == t.attributes.end()) {
        t.attributes.push_back(ref.attr);
      }
    }
    return {it->second, ref.attr};
  }

  bool is_table_var(const std::string& var) const { return d_.table(box_of_.count(var) ? box_of_.at(var) : "") != nullptr; }

  bool co_scoped(const std::string& var, const std::string& partition) const {
    if (q_.output && var == q_.output->var) return false;
    auto it = var_partition_.find(var);
    return it != var_partition_.end() && it->second == partition;
  }

  void place(const Formula& pred, const std::string& partition) {
    if (const auto* j = pred.get_if<JoinPred>()) {
      if (j->op == CmpOp::Eq &&
          (!shortcuts_ || co_scoped(j->left.var, partition) || co_scoped(j->right.var, partition))) {
        d_.edges.push_back({endpoint(j->left), endpoint(j->right)});
        return;
      }
      if (!shortcuts_) throw FragmentError("predicate is not in built-in form: " + std::string(op_text(j->op)));
      const auto b = new_builtin(j->op, std::nullopt, partition);
      d_.edges.push_back({endpoint(j->left), {b, "$1"}});
      d_.edges.push_back({{b, "$2"}, endpoint(j->right)});
      d_.hints.push_back({HintKind::Arrow, b});
      return;
    }
    const auto& s = pred.as<SelPred>();
    if (!shortcuts_) throw FragmentError("selection is not in built-in form", pred.span());
    const auto b = new_builtin(s.op, s.value, partition);
    d_.edges.push_back({endpoint(s.left), {b, "$1"}});
    const bool fused = is_table_var(s.left.var) && co_scoped(s.left.var, partition);
    d_.hints.push_back({fused ? HintKind::Fused : HintKind::Condition, b});
  }

  const Query& q_;
  bool shortcuts_;
  Diagram d_;
  std::map<std::string, std::string> box_of_;
  std::map<std::string, std::string> var_partition_;
  std::vector<std::pair<const Formula*, std::string>> preds_;
  int groups_ = 0;
};

class ReadBack {
 public:
  explicit ReadBack(const Diagram& d) : d_(d) { name_boxes(); }

  Query run() {
    for (std::size_t i = 0; i < d_.edges.size(); ++i) {
      const auto& e = d_.edges[i];
      if (d_.hint_for(e.a.box) || d_.hint_for(e.b.box)) continue;
      preds_[deeper(d_.partition_of(e.a.box), d_.partition_of(e.b.box))].push_back(
          make_join(ref(e.a), CmpOp::Eq, ref(e.b)));
    }
    for (const auto& b : d_.builtins) {
      if (const auto* h = d_.hint_for(b.id)) preds_[b.partition].push_back(desugar(b, *h));
    }
    const auto& base = *std::find_if(d_.partitions.begin(), d_.partitions.end(),
                                     [](const Partition& p) { return p.kind == PartitionKind::Base; });
    auto body = content(base.id);
    if (const auto* a = body->get_if<And>(); a && a->children.empty()) {
      throw InvalidDiagram("diagram has no boxes");
    }
    Query q;
    if (!d_.outputs.empty()) q.output = OutputSpec{names_.at(d_.outputs.front().id), d_.outputs.front().header};
    q.body = body;
    return normalize(q);
  }

 private:
  void name_boxes() {
    std::set<std::string> used;
    std::map<char, int> counter;
    auto take = [&](char initial) {
      for (;;) {
        const int n = ++counter[initial];
        std::string name(1, initial);
        if (n > 1) name += std::to_string(n);
        if (used.insert(name).second) return name;
      }
    };
    for (const auto& o : d_.outputs) names_[o.id] = take('q');
    for (const auto& t : d_.tables) {
      const auto c = t.relation.empty() ? 'x' : static_cast<unsigned char>(t.relation.front());
      names_[t.id] = take(std::isalpha(c) ? static_cast<char>(std::tolower(c)) : 'x');
    }
    for (const auto& b : d_.builtins) {
      if (!d_.hint_for(b.id)) names_[b.id] = take(b.unary() ? 'c' : 'j');
    }
  }

  AttrRef ref(const Endpoint& e) const { return {names_.at(e.box), e.attr}; }

  std::string deeper(const std::string& p1, const std::string& p2) const {
    const auto a1 = d_.ancestors(p1);
    return std::find(a1.begin(), a1.end(), p2) != a1.end() || p1 == p2 ? p1 : p2;
  }

  FormulaPtr desugar(const BuiltinBox& b, const Hint& h) const {
    std::optional<Endpoint> at1, at2;
    for (const auto& e : d_.edges) {
      for (const auto& [self, other] : {std::pair{&e.a, &e.b}, std::pair{&e.b, &e.a}}) {
        if (self->box != b.id) continue;
        (self->attr == "$1" ? at1 : at2) = *other;
      }
    }
    if (h.kind == HintKind::Arrow) return make_join(ref(*at1), b.op, ref(*at2));
    return make_sel(ref(*at1), b.op, *b.constant);
  }

  FormulaPtr content(const std::string& partition) {
    std::vector<Binding> bindings;
    for (const auto& t : d_.tables) {
      if (t.partition == partition) bindings.push_back({names_.at(t.id), t.relation});
    }
    for (const auto& b : d_.builtins) {
      if (b.partition == partition && !d_.hint_for(b.id)) bindings.push_back({names_.at(b.id), b.relation()});
    }
    std::vector<FormulaPtr> parts = preds_[partition];
    std::vector<std::string> groups_done;
    for (const auto* child : d_.children_of(partition)) {
      if (child->kind == PartitionKind::Negation) {
        parts.push_back(make_not(content(child->id)));
        continue;
      }
      if (std::find(groups_done.begin(), groups_done.end(), child->group) != groups_done.end()) continue;
      groups_done.push_back(child->group);
      std::vector<FormulaPtr> members;
      for (const auto* m : d_.children_of(partition)) {
        if (m->kind == PartitionKind::FuseBox && m->group == child->group) members.push_back(content(m->id));
      }
      parts.push_back(make_or(std::move(members)));
    }
    auto body = parts.size() == 1 ? parts.front() : make_and(std::move(parts));
    if (bindings.empty()) return body;
    return make_exists(std::move(bindings), body);
  }

  const Diagram& d_;
  std::map<std::string, std::string> names_;
  std::map<std::string, std::vector<FormulaPtr>> preds_;
};

}  // namespace

Query to_builtin_form(const Query& q) {
  BuiltinRewriter rw(q);
  Query out{q.output, rw.rewrite(q.body, 0)};
  return maximal_scope(normalize(out));
}

Diagram trc_to_diagram(const Query& q) {
  if (classify(q) != Fragment::ENC) {
    throw FragmentError("diagram with built-ins needs a query with only exists, not and and", q.body->span());
  }
  return DiagramBuilder(to_builtin_form(q), false).build();
}

Diagram trc_to_representationB(const Query& q) {
  if (classify(q) == Fragment::Full) {
    throw FragmentError("diagrams need a query without forall and ->", q.body->span());
  }
  return DiagramBuilder(maximal_scope(normalize(q)), true).build();
}

Query diagram_to_trc(const Diagram& d, const ReadBackOptions& options) {
  if (auto r = validate(d); !r.valid()) throw InvalidDiagram("invalid diagram: " + r.problems.front());
  if (!options.fuse_as_disjunction) {
    const auto expanded = expand_fuse_boxes(d);
    return ReadBack(expanded).run();
  }
  return ReadBack(d).run();
}

}  // namespace trc
