#pragma once

#include "trc/ast.hpp"

namespace trc {

/// Canonical representative for comparison: conjuncts, disjuncts and binding
/// lists sorted by structural order; join predicates oriented with the
/// smaller endpoint on the left. Variable names are unchanged.
FormulaPtr canonical_order(const FormulaPtr& f);

/// Equality up to renaming of tuple variables, reordering of conjuncts,
/// disjuncts and bindings, and flipping predicate sides with the operator
/// mirrored. Output variables correspond; headers must match in order.
bool alpha_equiv(const Query& a, const Query& b);

}  // namespace trc
