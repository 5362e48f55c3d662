#pragma once

// Backtracking search for variable bijections, shared by the atom-bag and
// alpha-equivalence comparisons.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace trc::detail {

struct VarClass {
  std::string name;
  std::string key;  // only variables with equal keys may be paired
};

using Renaming = std::map<std::string, std::string>;

/// Tries every bijection `from` -> `to` that respects keys, extending
/// `fixed`, until `accept` returns true.
inline bool search_bijection(const std::vector<VarClass>& from, const std::vector<VarClass>& to,
                             const Renaming& fixed,
                             const std::function<bool(const Renaming&)>& accept) {
  if (from.size() != to.size()) return false;
  std::multiset<std::string> ka, kb;
  for (const auto& v : from) ka.insert(v.key);
  for (const auto& v : to) kb.insert(v.key);
  if (ka != kb) return false;

  Renaming current = fixed;
  std::vector<bool> used(to.size(), false);
  std::function<bool(std::size_t)> step = [&](std::size_t i) {
    if (i == from.size()) return accept(current);
    for (std::size_t j = 0; j < to.size(); ++j) {
      if (used[j] || to[j].key != from[i].key) continue;
      used[j] = true;
      current[from[i].name] = to[j].name;
      if (step(i + 1)) return true;
      current.erase(from[i].name);
      used[j] = false;
    }
    return false;
  };
  return step(0);
}

}  // namespace trc::detail

namespace trc {
class AtomBag;
namespace detail {
/// One class per bound variable: its relation plus every atom touching it,
/// with other bound names erased. `fixed_view` maps free names to shared labels.
std::vector<VarClass> classify_vars(const AtomBag& bag, const Renaming& fixed_view);
}  // namespace detail
}  // namespace trc
