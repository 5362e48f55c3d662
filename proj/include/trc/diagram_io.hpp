#pragma once

#include <string>
#include <string_view>

#include "trc/diagram.hpp"

namespace trc {

/// JSON document, `"version": 1`, keys sorted. Schema in docs/formats.md.
std::string write_diagram(const Diagram& d);

/// Throws FormatError on malformed JSON, missing fields or ids that do not
/// resolve. The result may still fail `validate`.
Diagram read_diagram(std::string_view text);

}  // namespace trc
