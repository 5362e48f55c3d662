#include "trc/alpha_equiv.hpp"

#include <algorithm>

#include "renaming.hpp"
#include "trc/atoms.hpp"

namespace trc {

FormulaPtr canonical_order(const FormulaPtr& f) {
  if (const auto* j = f->get_if<JoinPred>()) {
    return make(std::get<JoinPred>(orient(*j)), f->span());
  }
  if (f->is<SelPred>()) return f;
  auto kids = children(*f);
  for (auto& k : kids) k = canonical_order(k);
  auto less = [](const FormulaPtr& x, const FormulaPtr& y) { return structural_compare(*x, *y) < 0; };
  if (f->is<And>() || f->is<Or>()) std::sort(kids.begin(), kids.end(), less);
  if (const auto* e = f->get_if<Exists>()) {
    auto bs = e->bindings;
    std::sort(bs.begin(), bs.end());
    return make_exists(std::move(bs), kids.at(0), f->span());
  }
  if (const auto* a = f->get_if<Forall>()) {
    auto bs = a->bindings;
    std::sort(bs.begin(), bs.end());
    return make_forall(std::move(bs), kids.at(0), f->span());
  }
  return with_children(*f, std::move(kids));
}

namespace {

// Every bound variable collapsed to one name: equal shapes are necessary.
FormulaPtr shape(const Query& q) {
  std::map<std::string, std::string> names;
  for (const auto& v : bound_vars(*q.body)) names[v] = "_";
  if (q.output) names[q.output->var] = "@";
  return canonical_order(rename_vars(q.body, names));
}

}  // namespace

bool alpha_equiv(const Query& a, const Query& b) {
  if (a.is_boolean() != b.is_boolean()) return false;
  detail::Renaming view_a, view_b;
  if (a.output) {
    if (a.output->header != b.output->header) return false;
    view_a[a.output->var] = "q";
    view_b[b.output->var] = "q";
  }
  if (!structurally_equal(*shape(a), *shape(b))) return false;

  const auto from = detail::classify_vars(atoms(a), view_a);
  const auto to = detail::classify_vars(atoms(b), view_b);
  detail::Renaming fixed;
  if (a.output) fixed[a.output->var] = b.output->var;
  const auto target = canonical_order(b.body);
  return detail::search_bijection(from, to, fixed, [&](const detail::Renaming& r) {
    return structurally_equal(*canonical_order(rename_vars(a.body, r)), *target);
  });
}

}  // namespace trc
