#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schemaforge/schema.hpp"

namespace schemaforge {

/// Cue validity metrics over a formal context.
///
/// cue_p(p,e) answers "given property p, how strongly does it point at
/// etype e": 1/|dom(p)| when e carries p, else 0. The per-etype and
/// schema-level values are sums and ratios of these.

struct CueRow {
  std::string etype;
  double cue_e = 0.0;
  double cue_er = 0.0;
  std::uint32_t n_props = 0;
};

struct CueReport {
  std::vector<CueRow> per_etype;  // sorted by descending cue_e, then IRI
  double cue_k = 0.0;
  std::optional<double> cue_kr;  // empty when every prop(e) is empty
  std::uint32_t n_etypes = 0;
  std::uint32_t n_props_total = 0;
  std::uint32_t n_props_with_domain = 0;
};

double cue_p(const SchemaContext& schema, const std::string& p, const std::string& e);
double cue_e(const SchemaContext& schema, const std::string& e);
double cue_er(const SchemaContext& schema, const std::string& e);
double cue_k(const SchemaContext& schema);
double cue_kr(const SchemaContext& schema);

CueReport cue_report(const SchemaContext& schema);

}  // namespace schemaforge
