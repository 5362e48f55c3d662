#pragma once

#include <string>
#include <string_view>

#include "trc/evaluator.hpp"

namespace trc {

/// Reads the plain-text database format (grammar in docs/formats.md):
///
///   R(A,B): (1,2) (3,"x")
///   E():    ()
///   domain: 1 2 3 "x"
///
/// Without a `domain:` entry the domain is the set of constants in the
/// tuples. Throws FormatError with the offending line.
Instance read_database(std::string_view text);

std::string write_database(const Instance& inst);

}  // namespace trc
