#pragma once

// Readers for IEC 61131-7 Fuzzy Control Language (.fcl) and Matlab Fuzzy
// Logic Toolbox (.fis) files. Both are read-only; use print_system to get the
// canonical DSL text of an imported model.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzkit/system.hpp"

namespace fuzzkit {

enum class SourceFormat { Dsl, Fcl, Fis };

std::string_view to_string(SourceFormat format);

struct Diagnostic {
  int line = 0;    // 1-based; 0 when not tied to a position
  int column = 0;
  std::string message;
};

/// Tolerated deviations found while reading a foreign format.
struct FormatDiagnostics {
  SourceFormat format = SourceFormat::Dsl;
  std::vector<Diagnostic> warnings;
};

struct ParsedModel {
  FuzzySystem system;
  FormatDiagnostics diagnostics;
};

/// Throws ParseError (syntax, unsupported constructs, invalid models).
ParsedModel parse_fcl(std::string_view text);

/// Throws ParseError; the line number of the offending entry is reported.
ParsedModel parse_fis(std::string_view text);

/// By extension: .fzl, .fcl, .fis (case-insensitive).
std::optional<SourceFormat> format_from_path(const std::filesystem::path& path);

ParsedModel parse_model(std::string_view text, SourceFormat format);

/// Reads and parses a model file, dispatching on the extension. Throws Error
/// if the file cannot be read or the extension is unknown, ParseError otherwise.
ParsedModel load_model(const std::filesystem::path& path);

}  // namespace fuzzkit
