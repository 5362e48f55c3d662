#pragma once

#include <map>
#include <string>
#include <vector>

#include "trc/ast.hpp"

namespace trc {

/// Multiset of the leaf atoms of a query (binding atoms included).
///
/// Join predicates are stored oriented so that the smaller endpoint is on the
/// left, which makes the bag independent of how predicates were written and
/// of conjunct/disjunct order. Variable names are kept as they are; use
/// match_up_to_renaming to compare bags of queries with different names.
class AtomBag {
 public:
  AtomBag() = default;
  explicit AtomBag(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  std::size_t count(const Atom& a) const;

  bool operator==(const AtomBag&) const = default;

 private:
  std::vector<Atom> atoms_;  // sorted
};

/// `r.A op s.B` with endpoints ordered; SelPreds and bindings unchanged.
Atom orient(const Atom& a);

AtomBag atoms(const Formula& f);
AtomBag atoms(const Query& q);

/// True if some bijection between the bound variables of `a` and `b`, with
/// related variables over the same relation, maps one bag onto the other.
/// Free variables (the output variable) must be given in `fixed`.
bool match_up_to_renaming(const AtomBag& a, const AtomBag& b,
                          const std::map<std::string, std::string>& fixed = {});

std::string atom_text(const Atom& a);

}  // namespace trc
