#include "trc/evaluator.hpp"

#include <algorithm>
#include <random>

namespace trc {
namespace {

enum class Kind { Unknown, Int, Str, Mixed };

Kind kind_of(const Constant& c) { return std::holds_alternative<std::int64_t>(c) ? Kind::Int : Kind::Str; }

Kind join_kinds(Kind a, Kind b) {
  if (a == Kind::Unknown) return b;
  if (b == Kind::Unknown || a == b) return a;
  return Kind::Mixed;
}

// Union-find over attribute slots; each class carries the kind of the
// values it must hold.
class KindMap {
 public:
  void unite(const std::string& a, const std::string& b) {
    auto ra = find(a), rb = find(b);
    if (ra == rb) return;
    parent_[ra] = rb;
    kind_[rb] = join_kinds(kind_[ra], kind_[rb]);
  }
  void require(const std::string& slot, Kind k) {
    auto r = find(slot);
    kind_[r] = join_kinds(kind_[r], k);
  }
  Kind kind(const std::string& slot) { return kind_[find(slot)]; }

 private:
  std::string find(const std::string& s) {
    auto it = parent_.find(s);
    if (it == parent_.end()) {
      parent_[s] = s;
      kind_.emplace(s, Kind::Unknown);
      return s;
    }
    if (it->second == s) return s;
    auto root = find(it->second);
    parent_[s] = root;
    return root;
  }

  std::map<std::string, std::string> parent_;
  std::map<std::string, Kind> kind_;
};

std::string var_slot(const std::string& var, const std::string& attr) { return "v " + var + "." + attr; }
std::string column_slot(const std::string& rel, const std::string& attr) { return "c " + rel + "." + attr; }

const std::vector<std::string> kUnarySchema{"$1"};
const std::vector<std::string> kBinarySchema{"$1", "$2"};

// Relation (name, builtin) for each bound variable plus constraints from every predicate.
KindMap infer_kinds(const Query& q, const Database* db) {
  KindMap kinds;
  std::map<std::string, Relation> rel_of;
  for (const auto& b : all_bindings(*q.body)) rel_of.emplace(b.var, b.relation);

  for (const auto& [var, rel] : rel_of) {
    if (const auto* bi = std::get_if<BuiltinRelation>(&rel)) {
      if (bi->unary()) kinds.require(var_slot(var, "$1"), kind_of(*bi->constant));
      else kinds.unite(var_slot(var, "$1"), var_slot(var, "$2"));
    }
  }
  for_each_node(*q.body, [&](const Formula& n) {
    for (const auto& ref : attr_refs(n)) {
      auto it = rel_of.find(ref.var);
      if (it != rel_of.end() && !is_builtin(it->second)) {
        kinds.unite(var_slot(ref.var, ref.attr), column_slot(std::get<std::string>(it->second), ref.attr));
      }
    }
    if (const auto* j = n.get_if<JoinPred>()) {
      kinds.unite(var_slot(j->left.var, j->left.attr), var_slot(j->right.var, j->right.attr));
    }
    if (const auto* s = n.get_if<SelPred>()) kinds.require(var_slot(s->left.var, s->left.attr), kind_of(s->value));
  });
  if (db) {
    for (const auto& [name, table] : *db) {
      for (const auto& t : table.tuples) {
        for (std::size_t i = 0; i < t.size() && i < table.schema.size(); ++i) {
          kinds.require(column_slot(name, table.schema[i]), kind_of(t[i]));
        }
      }
    }
  }
  return kinds;
}

bool admits(Kind k, const Constant& c) {
  if (k == Kind::Unknown || k == Kind::Mixed) return true;
  return kind_of(c) == k;
}

class Evaluator {
 public:
  Evaluator(const Query& q, const Database& db, const Domain& dom)
      : q_(q), db_(db), dom_(dom), kinds_(infer_kinds(q, &db)) {
    check_references();
  }

  ResultSet run() {
    if (!q_.output) return {holds(*q_.body)};
    const auto& header = q_.output->header;
    std::vector<std::vector<Constant>> columns;
    for (const auto& a : header) {
      const Kind k = kinds_.kind(var_slot(q_.output->var, a));
      std::vector<Constant> values;
      for (const auto& d : dom_) {
        if (admits(k, d)) values.push_back(d);
      }
      columns.push_back(std::move(values));
    }
    std::set<Tuple> out;
    Tuple current(header.size());
    enumerate_output(columns, 0, current, out);
    return {std::move(out)};
  }

 private:
  struct Row {
    const std::vector<std::string>* schema;
    const Tuple* values;
  };

  void enumerate_output(const std::vector<std::vector<Constant>>& columns, std::size_t i, Tuple& current,
                        std::set<Tuple>& out) {
    if (i == columns.size()) {
      env_[q_.output->var] = Row{&q_.output->header, &current};
      if (holds(*q_.body)) out.insert(current);
      return;
    }
    for (const auto& v : columns[i]) {
      current[i] = v;
      enumerate_output(columns, i + 1, current, out);
    }
  }

  void check_references() {
    std::map<std::string, Relation> rel_of;
    for (const auto& b : all_bindings(*q_.body)) {
      rel_of.emplace(b.var, b.relation);
      if (const auto* name = std::get_if<std::string>(&b.relation)) {
        auto it = db_.find(*name);
        if (it == db_.end()) throw EvalError(EvalError::Kind::UnknownRelation, "unknown relation '" + *name + "'");
        for (const auto& t : it->second.tuples) {
          if (t.size() != it->second.schema.size()) {
            throw EvalError(EvalError::Kind::ArityMismatch, "tuple of wrong arity in relation '" + *name + "'");
          }
        }
      }
    }
    for_each_node(*q_.body, [&](const Formula& n) {
      for (const auto& ref : attr_refs(n)) {
        auto it = rel_of.find(ref.var);
        if (it == rel_of.end()) continue;
        const auto& schema = schema_of(it->second);
        if (std::find(schema.begin(), schema.end(), ref.attr) != schema.end()) continue;
        if (const auto* bi = std::get_if<BuiltinRelation>(&it->second); bi && bi->unary() && ref.attr == "$2") {
          throw EvalError(EvalError::Kind::ArityMismatch,
                          "unary built-in relation \"" + bi->name() + "\" has no column $2");
        }
        throw EvalError(EvalError::Kind::UnknownAttribute,
                        "relation '" + relation_name(it->second) + "' has no attribute '" + ref.attr + "'");
      }
    });
  }

  const std::vector<std::string>& schema_of(const Relation& rel) const {
    if (const auto* bi = std::get_if<BuiltinRelation>(&rel)) return bi->unary() ? kUnarySchema : kBinarySchema;
    return db_.at(std::get<std::string>(rel)).schema;
  }

  // Tuples a variable ranges over; built-in extensions are materialized once.
  const std::vector<Tuple>& range(const Binding& b) {
    auto it = ranges_.find(b.var);
    if (it != ranges_.end()) return it->second;
    std::vector<Tuple> rows;
    if (const auto* bi = std::get_if<BuiltinRelation>(&b.relation)) {
      const Kind k1 = kinds_.kind(var_slot(b.var, "$1"));
      if (bi->unary()) {
        for (const auto& d : dom_) {
          if (same_kind(d, *bi->constant) && compare(bi->op, d, *bi->constant)) rows.push_back({d});
        }
      } else {
        for (const auto& d1 : dom_) {
          if (!admits(k1, d1)) continue;
          for (const auto& d2 : dom_) {
            if (same_kind(d1, d2) && compare(bi->op, d1, d2)) rows.push_back({d1, d2});
          }
        }
      }
    } else {
      const auto& t = db_.at(std::get<std::string>(b.relation)).tuples;
      rows.assign(t.begin(), t.end());
    }
    return ranges_.emplace(b.var, std::move(rows)).first->second;
  }

  const Constant& value(const AttrRef& ref) const {
    auto it = env_.find(ref.var);
    if (it == env_.end()) {
      throw EvalError(EvalError::Kind::UnknownAttribute, "unbound tuple variable '" + ref.var + "'");
    }
    const auto& schema = *it->second.schema;
    for (std::size_t i = 0; i < schema.size(); ++i) {
      if (schema[i] == ref.attr) return (*it->second.values)[i];
    }
    throw EvalError(EvalError::Kind::UnknownAttribute, "no attribute '" + ref.attr + "' for '" + ref.var + "'");
  }

  bool quantify(const std::vector<Binding>& bindings, std::size_t i, const Formula& body, bool exists) {
    if (i == bindings.size()) return holds(body);
    const auto& b = bindings[i];
    const auto& schema = schema_of(b.relation);
    for (const auto& row : range(b)) {
      env_[b.var] = Row{&schema, &row};
      const bool r = quantify(bindings, i + 1, body, exists);
      if (r == exists) {
        env_.erase(b.var);
        return exists;
      }
    }
    env_.erase(b.var);
    return !exists;
  }

  bool holds(const Formula& f) {
    return std::visit(overloaded{
                          [&](const JoinPred& p) { return compare(p.op, value(p.left), value(p.right)); },
                          [&](const SelPred& p) { return compare(p.op, value(p.left), p.value); },
                          [&](const Not& n) { return !holds(*n.body); },
                          [&](const And& n) {
                            return std::all_of(n.children.begin(), n.children.end(),
                                               [&](const FormulaPtr& c) { return holds(*c); });
                          },
                          [&](const Or& n) {
                            return std::any_of(n.children.begin(), n.children.end(),
                                               [&](const FormulaPtr& c) { return holds(*c); });
                          },
                          [&](const Implies& n) { return !holds(*n.premise) || holds(*n.conclusion); },
                          [&](const Exists& n) { return quantify(n.bindings, 0, *n.body, true); },
                          [&](const Forall& n) { return quantify(n.bindings, 0, *n.body, false); },
                      },
                      f.node());
  }

  const Query& q_;
  const Database& db_;
  const Domain& dom_;
  KindMap kinds_;
  std::map<std::string, Row> env_;
  std::map<std::string, std::vector<Tuple>> ranges_;
};

}  // namespace

std::string ResultSet::to_text() const {
  if (const auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  std::string out = "{";
  bool first = true;
  for (const auto& t : std::get<std::set<Tuple>>(value)) {
    out += first ? "(" : ", (";
    first = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out += ", ";
      out += constant_text(t[i]);
    }
    out += ')';
  }
  return out + "}";
}

ResultSet eval(const Query& q, const Database& db, const Domain& dom) { return Evaluator(q, db, dom).run(); }

EquivResult equiv_on(const Query& a, const Query& b, const std::vector<Instance>& instances) {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto ra = eval(a, instances[i].db, instances[i].dom);
    auto rb = eval(b, instances[i].db, instances[i].dom);
    if (!(ra == rb)) return {false, i, std::move(ra), std::move(rb)};
  }
  return {};
}

std::set<Constant> query_constants(const Formula& f) {
  std::set<Constant> out;
  for_each_node(f, [&](const Formula& n) {
    if (const auto* s = n.get_if<SelPred>()) out.insert(s->value);
    auto collect = [&](const std::vector<Binding>& bs) {
      for (const auto& b : bs) {
        if (const auto* bi = std::get_if<BuiltinRelation>(&b.relation); bi && bi->constant) out.insert(*bi->constant);
      }
    };
    if (const auto* e = n.get_if<Exists>()) collect(e->bindings);
    if (const auto* a = n.get_if<Forall>()) collect(a->bindings);
  });
  return out;
}

Constant fresh_constant(const Domain& dom, const Constant& like) {
  if (std::holds_alternative<std::int64_t>(like)) {
    std::int64_t v = 0;
    for (const auto& d : dom) {
      if (const auto* i = std::get_if<std::int64_t>(&d)) v = std::max(v, *i);
    }
    return Constant{v + 1000};
  }
  std::string s = "fresh";
  while (dom.contains(Constant{s})) s += "'";
  return Constant{s};
}

std::vector<Instance> gen_instances(const std::vector<Query>& queries, std::size_t count, std::uint64_t seed) {
  // Schema: attributes referenced through variables bound to each relation.
  std::map<std::string, std::set<std::string>> schema;
  std::map<std::string, Kind> column_kind;
  std::set<Constant> constants;
  bool want_int = false, want_str = false;
  for (const auto& q : queries) {
    auto kinds = infer_kinds(q, nullptr);
    std::map<std::string, std::string> rel_of;
    for (const auto& b : all_bindings(*q.body)) {
      if (const auto* name = std::get_if<std::string>(&b.relation)) {
        rel_of[b.var] = *name;
        schema[*name];
      }
    }
    for_each_node(*q.body, [&](const Formula& n) {
      for (const auto& ref : attr_refs(n)) {
        auto it = rel_of.find(ref.var);
        if (it == rel_of.end()) continue;
        schema[it->second].insert(ref.attr);
        const auto key = it->second + "." + ref.attr;
        column_kind[key] = join_kinds(column_kind[key], kinds.kind(var_slot(ref.var, ref.attr)));
      }
    });
    if (q.output) {
      for (const auto& a : q.output->header) {
        const Kind k = kinds.kind(var_slot(q.output->var, a));
        (k == Kind::Str ? want_str : want_int) = true;
      }
    }
    auto cs = query_constants(*q.body);
    constants.insert(cs.begin(), cs.end());
  }
  for (const auto& [key, k] : column_kind) (k == Kind::Str ? want_str : want_int) = true;
  for (const auto& c : constants) (kind_of(c) == Kind::Str ? want_str : want_int) = true;

  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (std::size_t n = 0; n < count; ++n) {
    Instance inst;
    inst.dom.insert(constants.begin(), constants.end());
    // Fillers: neighbours of integer constants first, then small integers.
    std::vector<Constant> int_fill, str_fill;
    for (const auto& c : constants) {
      if (const auto* i = std::get_if<std::int64_t>(&c)) {
        int_fill.emplace_back(*i - 1);
        int_fill.emplace_back(*i + 1);
      }
    }
    for (std::int64_t i = 1; i <= 8; ++i) int_fill.emplace_back(i);
    for (const char* s : {"a", "b", "c", "d", "e", "f"}) str_fill.emplace_back(std::string(s));
    std::shuffle(int_fill.begin(), int_fill.end(), rng);
    auto has_kind = [&](Kind k) {
      return std::any_of(inst.dom.begin(), inst.dom.end(), [&](const Constant& c) { return kind_of(c) == k; });
    };
    auto add_from = [&](std::vector<Constant>& pool) {
      while (!pool.empty()) {
        auto c = pool.back();
        pool.pop_back();
        if (inst.dom.insert(c).second) return;
      }
    };
    if (want_int && !has_kind(Kind::Int)) add_from(int_fill);
    if (want_str && !has_kind(Kind::Str)) add_from(str_fill);
    if (!want_int && !want_str && !has_kind(Kind::Int)) add_from(int_fill);
    while (inst.dom.size() < 4) {
      const bool use_str = want_str && (!want_int || std::uniform_int_distribution<int>(0, 1)(rng) == 1);
      add_from(use_str ? str_fill : int_fill);
    }
    std::vector<Constant> ints, strs;
    for (const auto& d : inst.dom) (kind_of(d) == Kind::Str ? strs : ints).push_back(d);

    for (const auto& [rel, attrs] : schema) {
      Table t;
      t.schema.assign(attrs.begin(), attrs.end());
      const int size = t.schema.empty() ? std::uniform_int_distribution<int>(0, 1)(rng)
                                        : std::uniform_int_distribution<int>(0, 3)(rng);
      for (int i = 0; i < size; ++i) {
        Tuple row;
        for (const auto& a : t.schema) {
          const auto& pool = column_kind[rel + "." + a] == Kind::Str ? strs : ints;
          row.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
        }
        t.tuples.insert(std::move(row));
      }
      inst.db.emplace(rel, std::move(t));
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<Instance> gen_instances(const Query& q, std::size_t count, std::uint64_t seed) {
  return gen_instances(std::vector<Query>{q}, count, seed);
}

}  // namespace trc
