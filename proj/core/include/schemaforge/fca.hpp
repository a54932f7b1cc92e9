#pragma once

#include <string>
#include <vector>

#include "schemaforge/cues.hpp"
#include "schemaforge/rdf.hpp"
#include "schemaforge/schema.hpp"

namespace schemaforge {

/// Boolean etype × property matrix, rows and columns sorted by IRI.
struct FormalContext {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<bool>> cells;

  bool operator==(const FormalContext&) const = default;
};

FormalContext build_context(const SchemaContext& schema);

// All exports are deterministic bytes: UTF-8, LF endings, RFC-4180 quoting.
std::string export_fca_csv(const FormalContext& ctx);
std::string export_triples_csv(const Graph& graph);
std::string export_cue_csv(const CueReport& report);

// Inverse of export_fca_csv, for round-trip checks and matrix re-use.
FormalContext import_fca_csv(const std::string& csv);

}  // namespace schemaforge
