#pragma once

#include "trc/ast.hpp"
#include "trc/diagram.hpp"

namespace trc {

/// Replaces every selection `x.A θ c` by `exists c1 in "θc" [x.A = c1.$1]`
/// and every join that is not an equijoin sharing the scope of one of its
/// (non-output) variables by `exists j1 in "θ" [l = j1.$1 and j1.$2 = r]`,
/// each at the position of the original predicate. The result is normalized
/// and maximally scoped. Negation scopes and disjuncts delimit scopes.
/// Throws FragmentError on forall or ->.
Query to_builtin_form(const Query& q);

/// Diagram with built-in relations only (no shortcuts). Requires a query
/// without forall, -> and or (FragmentError otherwise); applies
/// to_builtin_form first.
Diagram trc_to_diagram(const Query& q);

/// Diagram with shortcuts: disjunctions become fuse boxes, selections become
/// fused attributes or condition boxes, non-equijoins labeled arrows.
/// Requires a query without forall and -> (FragmentError otherwise).
Diagram trc_to_representationB(const Query& q);

struct ReadBackOptions {
  /// Read fuse groups as disjunctions; otherwise expand them into double
  /// negations first and return a query without or.
  bool fuse_as_disjunction = true;
};

/// Reads a diagram back into TRC. Tables are named after the lowercase
/// initial of their relation with an occurrence index (r, r2, s, ...),
/// built-ins c/j likewise, the output variable q. Shortcut hints become the
/// predicates they stand for. Throws InvalidDiagram.
Query diagram_to_trc(const Diagram& d, const ReadBackOptions& options = {});

}  // namespace trc
