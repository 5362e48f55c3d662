#pragma once

#include "trc/ast.hpp"

namespace trc {

/// AST normal form: double negations cancelled, nested conjunctions and
/// disjunctions flattened, chains of same-kind quantifiers merged.
///
/// Throws RebindError when a variable is bound twice and FreeBoundError when
/// a variable occurs both free and bound. Atoms are preserved exactly.
FormulaPtr normalize(const FormulaPtr& f);

/// Normalizes the body and checks the query-level formation rules: a Boolean
/// body is closed, a non-Boolean body has only the output variable free, the
/// header is non-empty, duplicate-free, and every header attribute is used.
Query normalize(const Query& q);

/// Pulls existential quantifiers that sit directly under a conjunction up
/// over it. Input must be normalized; output is normalized.
FormulaPtr maximal_scope(const FormulaPtr& f);
Query maximal_scope(const Query& q);

/// True if `f` satisfies every normal-form invariant.
bool is_normalized(const Formula& f);
bool is_maximally_scoped(const Formula& f);

}  // namespace trc
