#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "trc/ast.hpp"

namespace trc {

using Tuple = std::vector<Constant>;

struct Table {
  std::vector<std::string> schema;
  std::set<Tuple> tuples;

  bool operator==(const Table&) const = default;
};

using Database = std::map<std::string, Table>;
using Domain = std::set<Constant>;

/// Truth value of a Boolean query or the answer tuples of a non-Boolean one.
struct ResultSet {
  std::variant<bool, std::set<Tuple>> value;

  bool operator==(const ResultSet&) const = default;
  std::string to_text() const;
};

/// Brute-force evaluation over the explicit universe `dom`.
///
/// Built-in relations are interpreted over `dom`: "θc" holds the values d
/// with d θ c, "θ" the pairs (d1, d2) with d1 θ d2, in both cases restricted
/// to constants of one kind. Tuple variables whose attributes are compared
/// only with one kind of value range over that kind only.
///
/// Throws EvalError for unknown relations or attributes, arity mismatches and
/// comparisons between integers and strings.
ResultSet eval(const Query& q, const Database& db, const Domain& dom);

struct Instance {
  Database db;
  Domain dom;

  bool operator==(const Instance&) const = default;
};

struct EquivResult {
  bool equivalent = true;
  std::optional<std::size_t> witness;  // index of the first disagreeing instance
  std::optional<ResultSet> left, right;
};

EquivResult equiv_on(const Query& a, const Query& b, const std::vector<Instance>& instances);

/// `count` random instances for the relations and attributes referenced by
/// `queries`: at most 3 tuples per relation, a domain holding every query
/// constant padded to 4 values. Deterministic in `seed`.
std::vector<Instance> gen_instances(const std::vector<Query>& queries, std::size_t count, std::uint64_t seed);
std::vector<Instance> gen_instances(const Query& q, std::size_t count, std::uint64_t seed);

/// Every constant occurring in the query.
std::set<Constant> query_constants(const Formula& f);

/// A value of the same kind as `like` that is not in `dom`.
Constant fresh_constant(const Domain& dom, const Constant& like);

}  // namespace trc
