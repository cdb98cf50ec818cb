#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rflux/model.hpp"

namespace rflux {

/// A BiGG/COBRA JSON model document, either on disk or already in memory.
class ModelSource {
 public:
  static ModelSource from_file(std::filesystem::path path);
  static ModelSource from_bytes(std::string bytes);

  /// Reads the file if needed. Throws ParseError when it cannot be opened.
  std::string read() const;
  /// Path or "<memory>", for diagnostics.
  std::string describe() const;

 private:
  std::filesystem::path path_;
  std::string bytes_;
  bool in_memory_ = false;
};

struct IngestOptions {
  /// Used when the document carries no (or several) objective coefficients.
  std::string biomass_reaction_id;
};

/// Parses and validates a BiGG JSON model. Only `metabolites`, `reactions`,
/// `genes` and the optional top-level `id` are read; unknown keys are ignored.
/// Throws ParseError, SchemaError or ValidationError.
MetabolicModel parse_model(const ModelSource& source, const IngestOptions& options = {});

/// Parses a `gene_reaction_rule` string: identifiers joined by `and` / `or`
/// (case-insensitive, AND binds tighter) with parentheses. Blank input gives
/// the empty rule. Throws GprSyntaxError.
GprExpression parse_gpr(std::string_view rule);

}  // namespace rflux
