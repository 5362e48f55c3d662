#include "trc/atoms.hpp"

#include <algorithm>

#include "renaming.hpp"

namespace trc {

Atom orient(const Atom& a) {
  if (const auto* j = std::get_if<JoinPred>(&a); j && j->right < j->left) {
    return JoinPred{j->right, mirror(j->op), j->left};
  }
  return a;
}

AtomBag::AtomBag(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (auto& a : atoms_) a = orient(a);
  std::sort(atoms_.begin(), atoms_.end());
}

std::size_t AtomBag::count(const Atom& a) const {
  const auto o = orient(a);
  auto [lo, hi] = std::equal_range(atoms_.begin(), atoms_.end(), o);
  return static_cast<std::size_t>(hi - lo);
}

AtomBag atoms(const Formula& f) {
  std::vector<Atom> out;
  for_each_node(f, [&](const Formula& n) {
    if (const auto* j = n.get_if<JoinPred>()) out.emplace_back(*j);
    if (const auto* s = n.get_if<SelPred>()) out.emplace_back(*s);
    if (const auto* e = n.get_if<Exists>()) out.insert(out.end(), e->bindings.begin(), e->bindings.end());
    if (const auto* a = n.get_if<Forall>()) out.insert(out.end(), a->bindings.begin(), a->bindings.end());
  });
  return AtomBag(std::move(out));
}

AtomBag atoms(const Query& q) { return atoms(*q.body); }

std::string atom_text(const Atom& a) {
  return std::visit(overloaded{
                        [](const Binding& b) { return b.var + " in " + relation_name(b.relation); },
                        [](const JoinPred& j) {
                          return j.left.var + "." + j.left.attr + " " + std::string(op_text(j.op)) + " " +
                                 j.right.var + "." + j.right.attr;
                        },
                        [](const SelPred& s) {
                          return s.left.var + "." + s.left.attr + " " + std::string(op_text(s.op)) + " " +
                                 constant_text(s.value);
                        },
                    },
                    a);
}

namespace detail {

std::vector<VarClass> classify_vars(const AtomBag& bag, const Renaming& fixed_view) {
  std::map<std::string, std::vector<std::string>> sig;
  std::map<std::string, std::string> relation;

  for (const auto& a : bag.atoms()) {
    if (const auto* b = std::get_if<Binding>(&a)) {
      relation[b->var] = relation_name(b->relation);
    }
  }
  auto view = [&](const AttrRef& r, const std::string& self) {
    if (r.var == self) return "*." + r.attr;
    if (fixed_view.contains(r.var)) return "@" + fixed_view.at(r.var) + "." + r.attr;
    return "_." + r.attr;
  };
  for (const auto& a : bag.atoms()) {
    if (const auto* j = std::get_if<JoinPred>(&a)) {
      for (const auto& self : {j->left.var, j->right.var}) {
        if (!relation.contains(self)) continue;
        std::string fwd = view(j->left, self) + std::string(op_text(j->op)) + view(j->right, self);
        std::string bwd = view(j->right, self) + std::string(op_text(mirror(j->op))) + view(j->left, self);
        sig[self].push_back(std::min(fwd, bwd));
        if (j->left.var == j->right.var) break;
      }
    } else if (const auto* s = std::get_if<SelPred>(&a)) {
      if (relation.contains(s->left.var)) {
        sig[s->left.var].push_back(view(s->left, s->left.var) + std::string(op_text(s->op)) +
                                   constant_text(s->value));
      }
    }
  }
  std::vector<detail::VarClass> out;
  for (const auto& [v, rel] : relation) {
    auto& s = sig[v];
    std::sort(s.begin(), s.end());
    std::string key = rel;
    for (const auto& d : s) key += "|" + d;
    out.push_back({v, key});
  }
  return out;
}

}  // namespace detail

namespace {

AtomBag rename_bag(const AtomBag& bag, const detail::Renaming& names) {
  auto ren = [&](const std::string& v) {
    auto it = names.find(v);
    return it == names.end() ? v : it->second;
  };
  std::vector<Atom> out;
  for (const auto& a : bag.atoms()) {
    out.push_back(std::visit(overloaded{
                                 [&](const Binding& b) -> Atom { return Binding{ren(b.var), b.relation}; },
                                 [&](const JoinPred& j) -> Atom {
                                   return JoinPred{{ren(j.left.var), j.left.attr}, j.op,
                                                   {ren(j.right.var), j.right.attr}};
                                 },
                                 [&](const SelPred& s) -> Atom {
                                   return SelPred{{ren(s.left.var), s.left.attr}, s.op, s.value};
                                 },
                             },
                             a));
  }
  return AtomBag(std::move(out));
}

}  // namespace

bool match_up_to_renaming(const AtomBag& a, const AtomBag& b, const std::map<std::string, std::string>& fixed) {
  if (a.size() != b.size()) return false;
  detail::Renaming view_a, view_b;
  for (const auto& [from, to] : fixed) {
    view_a[from] = from;
    view_b[to] = from;
  }
  const auto from = detail::classify_vars(a, view_a);
  const auto to = detail::classify_vars(b, view_b);
  return detail::search_bijection(from, to, fixed,
                                  [&](const detail::Renaming& r) { return rename_bag(a, r) == b; });
}

}  // namespace trc
