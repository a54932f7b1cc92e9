#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schemaforge/rdf.hpp"

namespace schemaforge {

/// Extraction rules mapping RDF statements to the formal context.
/// Defaults follow direct-domain counting: only declared rdfs:domain
/// statements contribute, with owl:unionOf domains expanded.
struct ExtractionConfig {
  std::set<std::string> class_markers{std::string(iri::rdfs_class), std::string(iri::owl_class)};
  std::set<std::string> property_markers{
      std::string(iri::rdf_property), std::string(iri::owl_object_property),
      std::string(iri::owl_datatype_property), std::string(iri::owl_annotation_property)};
  bool use_range_as_association = false;
  bool inherit_via_subclass = false;
  bool union_domain_expansion = true;

  static ExtractionConfig from_json(const std::string& text);
  std::string to_json() const;
  std::string config_hash() const;
};

/// The formal context K: entity types, properties, and their incidence.
/// All three collections are sorted by IRI text and immutable after
/// extraction.
struct SchemaContext {
  std::vector<std::string> etypes;
  std::vector<std::string> properties;
  std::vector<std::pair<std::string, std::string>> incidence;  // (etype, property), sorted
  std::string provenance;

  bool has_etype(const std::string& e) const;
  bool has_property(const std::string& p) const;
  bool incident(const std::string& e, const std::string& p) const;
  std::vector<std::string> dom(const std::string& p) const;
  std::vector<std::string> prop(const std::string& e) const;
};

SchemaContext extract_schema(const Graph& graph, const ExtractionConfig& config = {});

/// Result of a predicate filter. Filtering is lenient: IRIs absent from
/// the schema are reported, not fatal.
struct FilterResult {
  SchemaContext schema;
  std::vector<std::string> unknown;
};

FilterResult filter_predicates(const SchemaContext& schema,
                               const std::vector<std::string>* include,
                               const std::vector<std::string>* exclude);

}  // namespace schemaforge
