#pragma once

// Helpers shared by the foreign-format readers.

#include <string>
#include <utility>

#include "fuzzkit/interop.hpp"
#include "fuzzkit/membership.hpp"

namespace fuzzkit::interop {

/// Printable form of an offending byte for error messages.
std::string show_char(unsigned char c);

/// Maps a foreign name onto a valid DSL identifier (invalid characters become
/// '_', words the DSL reserves get a trailing '_'). Records a warning when
/// the name changes.
std::string safe_identifier(const std::string& name, FormatDiagnostics& diag, int line, int col);

/// As safe_identifier, additionally avoiding the words reserved inside
/// variable blocks.
std::string safe_term_name(const std::string& name, FormatDiagnostics& diag, int line, int col);

/// Interval that holds the interesting part of a membership function; used
/// when a file gives no explicit range.
std::pair<double, double> extent(const MembershipFunction& mf);

}  // namespace fuzzkit::interop
