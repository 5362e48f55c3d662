#pragma once

#include <string_view>

#include "trc/ast.hpp"

namespace trc {

/// Connective fragments, from most to least restrictive: ENC uses only
/// exists, not and and; ENCV also allows or; Full allows forall and ->.
enum class Fragment { ENC, ENCV, Full };

std::string_view fragment_name(Fragment f);

Fragment classify(const Formula& f);
Fragment classify(const Query& q);

/// Number of rule applications performed by a rewrite.
struct RewriteStats {
  std::size_t steps = 0;
};

/// forall b[phi] => not(exists b[not(phi)]) and a -> b => not(a) or b,
/// applied outside-in with double negations cancelled; a negated implication
/// not(a -> b) becomes a and not(b). Atoms are unchanged.
Query remove_forall_implies(const Query& q, RewriteStats* stats = nullptr);

/// phi1 or ... or phik => not(not(phi1) and ... and not(phik)).
/// Throws FragmentError if the query still contains forall or ->.
Query remove_disjunction(const Query& q, RewriteStats* stats = nullptr);

/// phi1 and ... and phik => not(not(phi1) or ... or not(phik)). Not used by
/// the translation pipeline.
Query remove_conjunction(const Query& q, RewriteStats* stats = nullptr);

}  // namespace trc
