#pragma once

#include <string>
#include <vector>

#include "trc/ast.hpp"
#include "trc/evaluator.hpp"

namespace trc::testing {

/// Order-insensitive rendering under the variable names as given: children
/// of and/or and quantifier bindings sorted, joins written with the smaller
/// endpoint first.
std::string sorted_form(const Formula& f);

/// Brute-force alpha equivalence: tries every relation-respecting
/// permutation of the bound variables and compares sorted forms. Only meant
/// for queries with a handful of variables.
bool alpha_equiv_oracle(const Query& a, const Query& b);

struct Fixture {
  std::string name;
  std::string text;
  Query query;
  std::string expected;  // sidecar verdict
};

/// Every `fixtures/*.trc`, sorted by name.
const std::vector<Fixture>& fixtures();
const Fixture& fixture(const std::string& name);

std::string fixture_dir();
std::string read_text(const std::string& path);

/// R = {(1)}, S = {(2)}, one attribute each, universe {1, 2, 3}.
Instance comparison_instance();

}  // namespace trc::testing
