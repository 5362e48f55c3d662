#pragma once

// Abstract syntax of Tuple Relational Calculus.
//
// Formulas are immutable trees of shared nodes. Every transformation returns a
// new tree and may share untouched subtrees with its input.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "trc/errors.hpp"

namespace trc {

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

/// Swaps < with > and <= with >=; fixes = and !=. `a op b` iff `b mirror(op) a`.
CmpOp mirror(CmpOp op);
std::string_view op_text(CmpOp op);

using Constant = std::variant<std::int64_t, std::string>;

std::string constant_text(const Constant& c);
bool same_kind(const Constant& a, const Constant& b);

/// Throws EvalError(TypeError) if the constants are of different kinds.
/// Strings order lexicographically by byte (code point for UTF-8).
bool compare(CmpOp op, const Constant& lhs, const Constant& rhs);

/// `var.attr`
struct AttrRef {
  std::string var;
  std::string attr;

  auto operator<=>(const AttrRef&) const = default;
  bool operator==(const AttrRef&) const = default;
};

/// Interpreted relation named after a comparison: unary "θc" when `constant`
/// is set, binary "θ" otherwise. Columns are `$1` (and `$2`).
struct BuiltinRelation {
  CmpOp op = CmpOp::Eq;
  std::optional<Constant> constant;

  bool unary() const { return constant.has_value(); }
  std::size_t arity() const { return unary() ? 1 : 2; }
  std::string name() const;

  auto operator<=>(const BuiltinRelation&) const = default;
  bool operator==(const BuiltinRelation&) const = default;
};

/// Parses a built-in name such as `<4`, `="red"` or `>=`.
std::optional<BuiltinRelation> parse_builtin_name(std::string_view name);

using Relation = std::variant<std::string, BuiltinRelation>;

std::string relation_name(const Relation& rel);
bool is_builtin(const Relation& rel);

struct Binding {
  std::string var;
  Relation relation;

  auto operator<=>(const Binding&) const = default;
  bool operator==(const Binding&) const = default;
};

/// `left op right` over two attribute references.
struct JoinPred {
  AttrRef left;
  CmpOp op = CmpOp::Eq;
  AttrRef right;

  auto operator<=>(const JoinPred&) const = default;
  bool operator==(const JoinPred&) const = default;
};

/// `left op value`.
struct SelPred {
  AttrRef left;
  CmpOp op = CmpOp::Eq;
  Constant value;

  auto operator<=>(const SelPred&) const = default;
  bool operator==(const SelPred&) const = default;
};

using Atom = std::variant<Binding, JoinPred, SelPred>;

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Not {
  FormulaPtr body;
};
struct And {
  std::vector<FormulaPtr> children;  // empty only as the body of `exists ... []`
};
struct Or {
  std::vector<FormulaPtr> children;
};
struct Implies {
  FormulaPtr premise;
  FormulaPtr conclusion;
};
struct Exists {
  std::vector<Binding> bindings;
  FormulaPtr body;
};
struct Forall {
  std::vector<Binding> bindings;
  FormulaPtr body;
};

class Formula {
 public:
  using Node = std::variant<JoinPred, SelPred, Not, And, Or, Implies, Exists, Forall>;

  Formula(Node node, SourceSpan span = {}) : node_(std::move(node)), span_(span) {}

  const Node& node() const { return node_; }
  const SourceSpan& span() const { return span_; }

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node_);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(node_);
  }
  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&node_);
  }

  bool is_predicate() const { return is<JoinPred>() || is<SelPred>(); }

 private:
  Node node_;
  SourceSpan span_;
};

FormulaPtr make(Formula::Node node, SourceSpan span = {});
FormulaPtr make_not(FormulaPtr body, SourceSpan span = {});
FormulaPtr make_and(std::vector<FormulaPtr> children, SourceSpan span = {});
FormulaPtr make_or(std::vector<FormulaPtr> children, SourceSpan span = {});
FormulaPtr make_implies(FormulaPtr premise, FormulaPtr conclusion, SourceSpan span = {});
FormulaPtr make_exists(std::vector<Binding> bindings, FormulaPtr body, SourceSpan span = {});
FormulaPtr make_forall(std::vector<Binding> bindings, FormulaPtr body, SourceSpan span = {});
FormulaPtr make_join(AttrRef left, CmpOp op, AttrRef right, SourceSpan span = {});
FormulaPtr make_sel(AttrRef left, CmpOp op, Constant value, SourceSpan span = {});

/// Children in AST order (quantifier bindings are not formula children).
std::vector<FormulaPtr> children(const Formula& f);

/// Rebuilds `f` with new children, keeping node kind, bindings and span.
FormulaPtr with_children(const Formula& f, std::vector<FormulaPtr> kids);

/// Deep comparison ignoring source spans.
bool structurally_equal(const Formula& a, const Formula& b);
/// Total structural order ignoring spans.
std::strong_ordering structural_compare(const Formula& a, const Formula& b);

struct OutputSpec {
  std::string var;
  std::vector<std::string> header;

  bool operator==(const OutputSpec&) const = default;
};

/// A Boolean query (no output) or `{ var(header) | body }`.
struct Query {
  std::optional<OutputSpec> output;
  FormulaPtr body;

  bool is_boolean() const { return !output.has_value(); }
};

bool structurally_equal(const Query& a, const Query& b);

std::set<std::string> free_vars(const Formula& f);
/// Bound variables in binding order of a pre-order walk; duplicates kept.
std::vector<std::string> bound_vars(const Formula& f);
/// Every (variable, relation) binding in pre-order.
std::vector<Binding> all_bindings(const Formula& f);

/// Visits every formula node in pre-order.
void for_each_node(const Formula& f, const std::function<void(const Formula&)>& fn);

/// Number of formula nodes plus binding atoms.
std::size_t ast_size(const Formula& f);

std::vector<AttrRef> attr_refs(const Formula& pred);

/// Simultaneously renames tuple variables (bindings and references).
FormulaPtr rename_vars(const FormulaPtr& f, const std::map<std::string, std::string>& names);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace trc
