#include "trc/ast.hpp"

#include <charconv>

namespace trc {

std::string SourceSpan::to_string() const {
  return std::to_string(start) + ".." + std::to_string(end);
}

CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Le;
    case CmpOp::Eq:
    case CmpOp::Ne: return op;
  }
  return op;
}

std::string_view op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string constant_text(const Constant& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  std::string out = "\"";
  for (char ch : std::get<std::string>(c)) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '"';
  return out;
}

bool same_kind(const Constant& a, const Constant& b) { return a.index() == b.index(); }

bool compare(CmpOp op, const Constant& lhs, const Constant& rhs) {
  if (!same_kind(lhs, rhs)) {
    throw EvalError(EvalError::Kind::TypeError,
                    "cannot compare " + constant_text(lhs) + " with " + constant_text(rhs));
  }
  const auto ord = lhs <=> rhs;
  switch (op) {
    case CmpOp::Eq: return ord == 0;
    case CmpOp::Ne: return ord != 0;
    case CmpOp::Lt: return ord < 0;
    case CmpOp::Le: return ord <= 0;
    case CmpOp::Gt: return ord > 0;
    case CmpOp::Ge: return ord >= 0;
  }
  return false;
}

std::string BuiltinRelation::name() const {
  std::string out(op_text(op));
  if (constant) out += constant_text(*constant);
  return out;
}

std::optional<BuiltinRelation> parse_builtin_name(std::string_view name) {
  BuiltinRelation rel;
  std::size_t len = 0;
  if (name.starts_with("<=")) rel.op = CmpOp::Le, len = 2;
  else if (name.starts_with(">=")) rel.op = CmpOp::Ge, len = 2;
  else if (name.starts_with("!=")) rel.op = CmpOp::Ne, len = 2;
  else if (name.starts_with("<")) rel.op = CmpOp::Lt, len = 1;
  else if (name.starts_with(">")) rel.op = CmpOp::Gt, len = 1;
  else if (name.starts_with("=")) rel.op = CmpOp::Eq, len = 1;
  else return std::nullopt;

  std::string_view rest = name.substr(len);
  if (rest.empty()) return rel;
  if (rest.front() == '"') {
    if (rest.size() < 2 || rest.back() != '"') return std::nullopt;
    std::string value;
    for (std::size_t i = 1; i + 1 < rest.size(); ++i) {
      char ch = rest[i];
      if (ch == '\\') {
        if (i + 2 >= rest.size()) return std::nullopt;
        ch = rest[++i];
      } else if (ch == '"') {
        return std::nullopt;
      }
      value += ch;
    }
    rel.constant = std::move(value);
    return rel;
  }
  std::int64_t value = 0;
  const char* first = rest.data();
  const char* last = rest.data() + rest.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  rel.constant = value;
  return rel;
}

std::string relation_name(const Relation& rel) {
  if (const auto* s = std::get_if<std::string>(&rel)) return *s;
  return std::get<BuiltinRelation>(rel).name();
}

bool is_builtin(const Relation& rel) { return std::holds_alternative<BuiltinRelation>(rel); }

FormulaPtr make(Formula::Node node, SourceSpan span) {
  return std::make_shared<const Formula>(std::move(node), span);
}
FormulaPtr make_not(FormulaPtr body, SourceSpan span) { return make(Not{std::move(body)}, span); }
FormulaPtr make_and(std::vector<FormulaPtr> children, SourceSpan span) {
  return make(And{std::move(children)}, span);
}
FormulaPtr make_or(std::vector<FormulaPtr> children, SourceSpan span) {
  return make(Or{std::move(children)}, span);
}
FormulaPtr make_implies(FormulaPtr premise, FormulaPtr conclusion, SourceSpan span) {
  return make(Implies{std::move(premise), std::move(conclusion)}, span);
}
FormulaPtr make_exists(std::vector<Binding> bindings, FormulaPtr body, SourceSpan span) {
  return make(Exists{std::move(bindings), std::move(body)}, span);
}
FormulaPtr make_forall(std::vector<Binding> bindings, FormulaPtr body, SourceSpan span) {
  return make(Forall{std::move(bindings), std::move(body)}, span);
}
FormulaPtr make_join(AttrRef left, CmpOp op, AttrRef right, SourceSpan span) {
  return make(JoinPred{std::move(left), op, std::move(right)}, span);
}
FormulaPtr make_sel(AttrRef left, CmpOp op, Constant value, SourceSpan span) {
  return make(SelPred{std::move(left), op, std::move(value)}, span);
}

std::vector<FormulaPtr> children(const Formula& f) {
  return std::visit(overloaded{
                        [](const JoinPred&) { return std::vector<FormulaPtr>{}; },
                        [](const SelPred&) { return std::vector<FormulaPtr>{}; },
                        [](const Not& n) { return std::vector<FormulaPtr>{n.body}; },
                        [](const And& n) { return n.children; },
                        [](const Or& n) { return n.children; },
                        [](const Implies& n) {
                          return std::vector<FormulaPtr>{n.premise, n.conclusion};
                        },
                        [](const Exists& n) { return std::vector<FormulaPtr>{n.body}; },
                        [](const Forall& n) { return std::vector<FormulaPtr>{n.body}; },
                    },
                    f.node());
}

FormulaPtr with_children(const Formula& f, std::vector<FormulaPtr> kids) {
  return std::visit(overloaded{
                        [&](const JoinPred& p) { return make(p, f.span()); },
                        [&](const SelPred& p) { return make(p, f.span()); },
                        [&](const Not&) { return make_not(kids.at(0), f.span()); },
                        [&](const And&) { return make_and(std::move(kids), f.span()); },
                        [&](const Or&) { return make_or(std::move(kids), f.span()); },
                        [&](const Implies&) { return make_implies(kids.at(0), kids.at(1), f.span()); },
                        [&](const Exists& n) { return make_exists(n.bindings, kids.at(0), f.span()); },
                        [&](const Forall& n) { return make_forall(n.bindings, kids.at(0), f.span()); },
                    },
                    f.node());
}

namespace {

std::strong_ordering compare_lists(const std::vector<FormulaPtr>& a, const std::vector<FormulaPtr>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = structural_compare(*a[i], *b[i]); c != 0) return c;
  }
  return a.size() <=> b.size();
}

}  // namespace

std::strong_ordering structural_compare(const Formula& a, const Formula& b) {
  if (a.node().index() != b.node().index()) return a.node().index() <=> b.node().index();
  return std::visit(
      overloaded{
          [&](const JoinPred& p) { return p <=> b.as<JoinPred>(); },
          [&](const SelPred& p) { return p <=> b.as<SelPred>(); },
          [&](const Not& n) { return structural_compare(*n.body, *b.as<Not>().body); },
          [&](const And& n) { return compare_lists(n.children, b.as<And>().children); },
          [&](const Or& n) { return compare_lists(n.children, b.as<Or>().children); },
          [&](const Implies& n) {
            const auto& o = b.as<Implies>();
            if (auto c = structural_compare(*n.premise, *o.premise); c != 0) return c;
            return structural_compare(*n.conclusion, *o.conclusion);
          },
          [&](const Exists& n) {
            const auto& o = b.as<Exists>();
            if (auto c = n.bindings <=> o.bindings; c != 0) return c;
            return structural_compare(*n.body, *o.body);
          },
          [&](const Forall& n) {
            const auto& o = b.as<Forall>();
            if (auto c = n.bindings <=> o.bindings; c != 0) return c;
            return structural_compare(*n.body, *o.body);
          },
      },
      a.node());
}

bool structurally_equal(const Formula& a, const Formula& b) { return structural_compare(a, b) == 0; }

bool structurally_equal(const Query& a, const Query& b) {
  return a.output == b.output && structurally_equal(*a.body, *b.body);
}

void for_each_node(const Formula& f, const std::function<void(const Formula&)>& fn) {
  fn(f);
  for (const auto& c : children(f)) for_each_node(*c, fn);
}

std::vector<AttrRef> attr_refs(const Formula& pred) {
  if (const auto* j = pred.get_if<JoinPred>()) return {j->left, j->right};
  if (const auto* s = pred.get_if<SelPred>()) return {s->left};
  return {};
}

FormulaPtr rename_vars(const FormulaPtr& f, const std::map<std::string, std::string>& names) {
  auto ren = [&](const std::string& v) {
    auto it = names.find(v);
    return it == names.end() ? v : it->second;
  };
  auto ren_ref = [&](const AttrRef& r) { return AttrRef{ren(r.var), r.attr}; };
  auto ren_bindings = [&](std::vector<Binding> bs) {
    for (auto& b : bs) b.var = ren(b.var);
    return bs;
  };
  if (const auto* j = f->get_if<JoinPred>()) return make_join(ren_ref(j->left), j->op, ren_ref(j->right), f->span());
  if (const auto* s = f->get_if<SelPred>()) return make_sel(ren_ref(s->left), s->op, s->value, f->span());
  auto kids = children(*f);
  for (auto& k : kids) k = rename_vars(k, names);
  if (const auto* e = f->get_if<Exists>()) return make_exists(ren_bindings(e->bindings), kids.at(0), f->span());
  if (const auto* a = f->get_if<Forall>()) return make_forall(ren_bindings(a->bindings), kids.at(0), f->span());
  return with_children(*f, std::move(kids));
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (f.is_predicate()) {
    for (const auto& ref : attr_refs(f)) {
      if (!bound.contains(ref.var)) out.insert(ref.var);
    }
    return;
  }
  const std::vector<Binding>* bindings = nullptr;
  if (const auto* e = f.get_if<Exists>()) bindings = &e->bindings;
  if (const auto* a = f.get_if<Forall>()) bindings = &a->bindings;
  std::vector<std::string> added;
  if (bindings) {
    for (const auto& b : *bindings) {
      if (bound.insert(b.var).second) added.push_back(b.var);
    }
  }
  for (const auto& c : children(f)) collect_free(*c, bound, out);
  for (const auto& v : added) bound.erase(v);
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

std::vector<Binding> all_bindings(const Formula& f) {
  std::vector<Binding> out;
  for_each_node(f, [&](const Formula& n) {
    if (const auto* e = n.get_if<Exists>()) out.insert(out.end(), e->bindings.begin(), e->bindings.end());
    if (const auto* a = n.get_if<Forall>()) out.insert(out.end(), a->bindings.begin(), a->bindings.end());
  });
  return out;
}

std::vector<std::string> bound_vars(const Formula& f) {
  std::vector<std::string> out;
  for (const auto& b : all_bindings(f)) out.push_back(b.var);
  return out;
}

std::size_t ast_size(const Formula& f) {
  std::size_t n = 0;
  for_each_node(f, [&](const Formula& node) {
    ++n;
    if (const auto* e = node.get_if<Exists>()) n += e->bindings.size();
    if (const auto* a = node.get_if<Forall>()) n += a->bindings.size();
  });
  return n;
}

}  // namespace trc
