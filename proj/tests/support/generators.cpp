#include "generators.hpp"

#include <set>

#include "trc/normal_form.hpp"

namespace trc::testing {

const std::map<std::string, std::vector<std::string>>& generator_schema() {
  static const std::map<std::string, std::vector<std::string>> schema{
      {"R", {"A", "B"}}, {"S", {"A", "B"}}, {"T", {"B", "C"}}};
  return schema;
}

QueryGenerator::QueryGenerator(std::uint64_t seed, GenOptions options) : rng_(seed), options_(options) {}

int QueryGenerator::pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

bool QueryGenerator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

Constant QueryGenerator::constant() { return Constant{std::int64_t{pick(4)}}; }

CmpOp QueryGenerator::op() {
  // Equalities dominate so that joins actually connect variables.
  static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Eq, CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
  return ops[pick(8)];
}

FormulaPtr QueryGenerator::predicate(const std::vector<Var>& scope, const Var* must_use) {
  const Var& a = must_use ? *must_use : scope[pick(static_cast<int>(scope.size()))];
  const AttrRef left{a.name, a.attrs[pick(static_cast<int>(a.attrs.size()))]};
  if (coin(0.35)) return make_sel(left, op(), constant());
  const Var& b = scope[pick(static_cast<int>(scope.size()))];
  const AttrRef right{b.name, b.attrs[pick(static_cast<int>(b.attrs.size()))]};
  if (coin(0.5)) return make_join(left, op(), right);
  return make_join(right, op(), left);
}

FormulaPtr QueryGenerator::quantified(int depth, const std::vector<Var>& scope, bool universal) {
  const auto& schema = generator_schema();
  std::vector<Binding> bindings;
  auto inner = scope;
  const int n = 1 + (coin(0.3) ? 1 : 0);
  for (int i = 0; i < n; ++i) {
    auto it = schema.begin();
    std::advance(it, pick(static_cast<int>(schema.size())));
    const std::string name = "v" + std::to_string(++counter_);
    bindings.push_back(Binding{name, it->first});
    inner.push_back(Var{name, it->second});
  }
  std::vector<FormulaPtr> body;
  // Tie every new variable to something so the bindings are not idle.
  for (std::size_t i = scope.size(); i < inner.size(); ++i) {
    if (coin(0.8)) body.push_back(predicate(inner, &inner[i]));
  }
  if (body.empty() || depth > 0) body.push_back(formula(depth - 1, inner));
  auto f = body.size() == 1 ? body.front() : make_and(std::move(body));
  return universal ? make_forall(std::move(bindings), f) : make_exists(std::move(bindings), f);
}

FormulaPtr QueryGenerator::formula(int depth, const std::vector<Var>& scope) {
  const bool full = options_.fragment == Fragment::Full;
  const bool with_or = options_.fragment != Fragment::ENC;
  if (depth <= 0 || (!scope.empty() && coin(0.25))) {
    if (scope.empty()) return quantified(0, scope, false);
    return predicate(scope);
  }
  for (;;) {
    switch (pick(7)) {
      case 0:
        return make_not(formula(depth - 1, scope));
      case 1: {
        std::vector<FormulaPtr> kids;
        for (int i = 0, n = 2 + pick(2); i < n; ++i) kids.push_back(formula(depth - 1, scope));
        return make_and(std::move(kids));
      }
      case 2: {
        if (!with_or) continue;
        std::vector<FormulaPtr> kids;
        for (int i = 0, n = 2 + pick(2); i < n; ++i) kids.push_back(formula(depth - 1, scope));
        return make_or(std::move(kids));
      }
      case 3:
      case 4:
        return quantified(depth, scope, false);
      case 5:
        if (!full) continue;
        return quantified(depth, scope, true);
      case 6:
        if (!full) continue;
        return make_implies(formula(depth - 1, scope), formula(depth - 1, scope));
    }
  }
}

Query QueryGenerator::next() {
  counter_ = 0;
  if (coin(options_.boolean_ratio)) {
    return normalize(Query{std::nullopt, quantified(options_.max_depth, {}, false)});
  }
  std::vector<std::string> header{"A"};
  if (coin(0.5)) header.push_back("B");
  const Var out{"q", header};
  auto body = formula(options_.max_depth, {out});

  std::set<std::string> used;
  for_each_node(*body, [&](const Formula& n) {
    if (!n.is_predicate()) return;
    for (const auto& r : attr_refs(n)) {
      if (r.var == "q") used.insert(r.attr);
    }
  });
  std::vector<FormulaPtr> extra{body};
  for (const auto& h : header) {
    if (used.contains(h)) continue;
    if (coin(0.7)) {
      const std::string name = "v" + std::to_string(++counter_);
      extra.push_back(make_exists({Binding{name, "R"}}, make_join({"q", h}, CmpOp::Eq, {name, "A"})));
    } else {
      extra.push_back(make_sel({"q", h}, CmpOp::Eq, constant()));
    }
  }
  if (extra.size() > 1) body = make_and(std::move(extra));
  return normalize(Query{OutputSpec{"q", header}, body});
}

}  // namespace trc::testing
