#include "trc/fragments.hpp"

#include "trc/normal_form.hpp"

namespace trc {
namespace {

void count(RewriteStats* stats) {
  if (stats) ++stats->steps;
}

FormulaPtr negate(const FormulaPtr& f, RewriteStats* stats) {
  if (const auto* n = f->get_if<Not>()) {
    count(stats);
    return n->body;
  }
  return make_not(f, f->span());
}

FormulaPtr drop_forall_implies(const FormulaPtr& f, RewriteStats* stats) {
  if (const auto* a = f->get_if<Forall>()) {
    count(stats);
    auto inner = drop_forall_implies(make_not(a->body, a->body->span()), stats);
    return make_not(make_exists(a->bindings, inner, f->span()), f->span());
  }
  if (const auto* i = f->get_if<Implies>()) {
    count(stats);
    return make_or({drop_forall_implies(negate(i->premise, stats), stats), drop_forall_implies(i->conclusion, stats)},
                   f->span());
  }
  if (const auto* n = f->get_if<Not>()) {
    // not(a -> b) becomes a and not(b) directly rather than not(not(a) or b).
    if (const auto* i = n->body->get_if<Implies>()) {
      count(stats);
      return make_and({drop_forall_implies(i->premise, stats), drop_forall_implies(negate(i->conclusion, stats), stats)},
                      f->span());
    }
    if (const auto* inner = n->body->get_if<Not>()) {
      count(stats);
      return drop_forall_implies(inner->body, stats);
    }
  }
  auto kids = children(*f);
  if (kids.empty()) return f;
  for (auto& k : kids) k = drop_forall_implies(k, stats);
  return with_children(*f, std::move(kids));
}

// Rewrites `From` nodes into the negated dual `To`; And/Or flattening and
// double-negation cancellation happen eagerly as nodes are built.
template <typename From, typename To>
FormulaPtr dualize(const FormulaPtr& f, RewriteStats* stats) {
  auto kids = children(*f);
  if (kids.empty()) return f;
  if (f->is<From>()) {
    count(stats);
    std::vector<FormulaPtr> negated;
    for (const auto& k : kids) {
      auto n = negate(dualize<From, To>(k, stats), stats);
      if (const auto* inner = n->template get_if<To>()) {
        negated.insert(negated.end(), inner->children.begin(), inner->children.end());
      } else {
        negated.push_back(n);
      }
    }
    return make_not(make(To{std::move(negated)}, f->span()), f->span());
  }
  for (auto& k : kids) k = dualize<From, To>(k, stats);
  return with_children(*f, std::move(kids));
}

}  // namespace

std::string_view fragment_name(Fragment f) {
  switch (f) {
    case Fragment::ENC: return "ENC";
    case Fragment::ENCV: return "ENCV";
    case Fragment::Full: return "Full";
  }
  return "?";
}

Fragment classify(const Formula& f) {
  Fragment out = Fragment::ENC;
  for_each_node(f, [&](const Formula& n) {
    if (n.is<Forall>() || n.is<Implies>()) out = Fragment::Full;
    else if (n.is<Or>() && out == Fragment::ENC) out = Fragment::ENCV;
  });
  return out;
}

Fragment classify(const Query& q) { return classify(*q.body); }

Query remove_forall_implies(const Query& q, RewriteStats* stats) {
  return Query{q.output, normalize(drop_forall_implies(q.body, stats))};
}

Query remove_disjunction(const Query& q, RewriteStats* stats) {
  if (classify(q) == Fragment::Full) {
    throw FragmentError("disjunction removal needs a query without forall and ->", q.body->span());
  }
  return Query{q.output, normalize(dualize<Or, And>(q.body, stats))};
}

Query remove_conjunction(const Query& q, RewriteStats* stats) {
  return Query{q.output, normalize(dualize<And, Or>(q.body, stats))};
}

}  // namespace trc
