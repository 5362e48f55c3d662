#include "trc/normal_form.hpp"

#include <algorithm>
#include <map>

namespace trc {
namespace {

// Every bound variable is bound exactly once and never occurs outside its scope.
void check_bindings(const Formula& f) {
  std::map<std::string, SourceSpan> seen;
  for_each_node(f, [&](const Formula& n) {
    const std::vector<Binding>* bindings = nullptr;
    if (const auto* e = n.get_if<Exists>()) bindings = &e->bindings;
    if (const auto* a = n.get_if<Forall>()) bindings = &a->bindings;
    if (!bindings) return;
    for (const auto& b : *bindings) {
      auto [it, fresh] = seen.emplace(b.var, n.span());
      if (!fresh) {
        throw RebindError("tuple variable '" + b.var + "' is bound more than once", n.span());
      }
    }
  });
  for (const auto& v : free_vars(f)) {
    if (auto it = seen.find(v); it != seen.end()) {
      throw FreeBoundError("tuple variable '" + v + "' occurs both free and bound", it->second);
    }
  }
}

template <typename Conn>
std::vector<FormulaPtr> flatten(const std::vector<FormulaPtr>& kids) {
  std::vector<FormulaPtr> out;
  for (const auto& k : kids) {
    if (const auto* inner = k->get_if<Conn>()) {
      out.insert(out.end(), inner->children.begin(), inner->children.end());
    } else {
      out.push_back(k);
    }
  }
  return out;
}

FormulaPtr normalize_rec(const FormulaPtr& f) {
  return std::visit(
      overloaded{
          [&](const JoinPred&) { return f; },
          [&](const SelPred&) { return f; },
          [&](const Not& n) {
            auto body = normalize_rec(n.body);
            if (const auto* inner = body->get_if<Not>()) return inner->body;
            return make_not(body, f->span());
          },
          [&](const And& n) {
            std::vector<FormulaPtr> kids;
            for (const auto& c : n.children) kids.push_back(normalize_rec(c));
            kids = flatten<And>(kids);
            if (kids.size() == 1) return kids.front();
            return make_and(std::move(kids), f->span());
          },
          [&](const Or& n) {
            std::vector<FormulaPtr> kids;
            for (const auto& c : n.children) kids.push_back(normalize_rec(c));
            kids = flatten<Or>(kids);
            if (kids.size() == 1) return kids.front();
            return make_or(std::move(kids), f->span());
          },
          [&](const Implies& n) {
            return make_implies(normalize_rec(n.premise), normalize_rec(n.conclusion), f->span());
          },
          [&](const Exists& n) {
            auto body = normalize_rec(n.body);
            auto bindings = n.bindings;
            if (const auto* inner = body->get_if<Exists>()) {
              bindings.insert(bindings.end(), inner->bindings.begin(), inner->bindings.end());
              body = inner->body;
            }
            return make_exists(std::move(bindings), body, f->span());
          },
          [&](const Forall& n) {
            auto body = normalize_rec(n.body);
            auto bindings = n.bindings;
            if (const auto* inner = body->get_if<Forall>()) {
              bindings.insert(bindings.end(), inner->bindings.begin(), inner->bindings.end());
              body = inner->body;
            }
            return make_forall(std::move(bindings), body, f->span());
          },
      },
      f->node());
}

FormulaPtr scope_rec(const FormulaPtr& f) {
  auto kids = children(*f);
  if (kids.empty()) return f;
  for (auto& k : kids) k = scope_rec(k);

  if (f->is<And>()) {
    std::vector<Binding> lifted;
    std::vector<FormulaPtr> rest;
    for (const auto& k : kids) {
      if (const auto* e = k->get_if<Exists>()) {
        lifted.insert(lifted.end(), e->bindings.begin(), e->bindings.end());
        rest.push_back(e->body);
      } else {
        rest.push_back(k);
      }
    }
    if (lifted.empty()) return with_children(*f, std::move(kids));
    // Bodies of lifted quantifiers may be conjunctions or empty conjunctions.
    auto body = normalize_rec(make_and(std::move(rest), f->span()));
    return make_exists(std::move(lifted), body, f->span());
  }
  if (const auto* e = f->get_if<Exists>()) {
    auto body = kids.front();
    auto bindings = e->bindings;
    if (const auto* inner = body->get_if<Exists>()) {
      bindings.insert(bindings.end(), inner->bindings.begin(), inner->bindings.end());
      body = inner->body;
    }
    return make_exists(std::move(bindings), body, f->span());
  }
  return normalize_rec(with_children(*f, std::move(kids)));
}

}  // namespace

FormulaPtr normalize(const FormulaPtr& f) {
  check_bindings(*f);
  return normalize_rec(f);
}

Query normalize(const Query& q) {
  Query out{q.output, normalize(q.body)};
  const auto free = free_vars(*out.body);
  if (!q.output) {
    if (!free.empty()) {
      throw WellFormednessError("Boolean query has free tuple variable '" + *free.begin() + "'",
                                q.body->span());
    }
    return out;
  }
  const auto& spec = *q.output;
  if (spec.header.empty()) {
    throw WellFormednessError("output header of '" + spec.var + "' is empty; use a Boolean query");
  }
  for (std::size_t i = 0; i < spec.header.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.header.size(); ++j) {
      if (spec.header[i] == spec.header[j]) {
        throw WellFormednessError("duplicate header attribute '" + spec.header[i] + "'");
      }
    }
  }
  for (const auto& v : free) {
    if (v != spec.var) {
      throw WellFormednessError("free tuple variable '" + v + "' besides output variable '" +
                                    spec.var + "'",
                                q.body->span());
    }
  }
  for (const auto& v : bound_vars(*out.body)) {
    if (v == spec.var) {
      throw FreeBoundError("output variable '" + spec.var + "' is also bound", q.body->span());
    }
  }
  std::set<std::string> used;
  std::optional<SourceSpan> stray;
  std::string stray_attr;
  for_each_node(*out.body, [&](const Formula& n) {
    for (const auto& ref : attr_refs(n)) {
      if (ref.var != spec.var) continue;
      used.insert(ref.attr);
      if (std::find(spec.header.begin(), spec.header.end(), ref.attr) == spec.header.end() && !stray) {
        stray = n.span();
        stray_attr = ref.attr;
      }
    }
  });
  if (stray) {
    throw WellFormednessError("attribute '" + stray_attr + "' is not in the header of '" + spec.var + "'",
                              *stray);
  }
  for (const auto& a : spec.header) {
    if (!used.contains(a)) {
      throw WellFormednessError("header attribute '" + a + "' appears in no predicate", q.body->span());
    }
  }
  return out;
}

FormulaPtr maximal_scope(const FormulaPtr& f) { return scope_rec(f); }

Query maximal_scope(const Query& q) { return Query{q.output, maximal_scope(q.body)}; }

bool is_normalized(const Formula& f) {
  bool ok = true;
  for_each_node(f, [&](const Formula& n) {
    if (const auto* no = n.get_if<Not>()) ok = ok && !no->body->is<Not>();
    if (const auto* a = n.get_if<And>()) {
      for (const auto& c : a->children) ok = ok && !c->is<And>();
      ok = ok && a->children.size() != 1;
    }
    if (const auto* o = n.get_if<Or>()) {
      for (const auto& c : o->children) ok = ok && !c->is<Or>();
      ok = ok && o->children.size() >= 2;
    }
    if (const auto* e = n.get_if<Exists>()) ok = ok && !e->body->is<Exists>();
    if (const auto* a = n.get_if<Forall>()) ok = ok && !a->body->is<Forall>();
  });
  return ok;
}

bool is_maximally_scoped(const Formula& f) {
  bool ok = true;
  for_each_node(f, [&](const Formula& n) {
    if (const auto* a = n.get_if<And>()) {
      for (const auto& c : a->children) ok = ok && !c->is<Exists>();
    }
  });
  return ok;
}

}  // namespace trc
