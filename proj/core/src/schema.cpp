#include "schemaforge/schema.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "digest.hpp"
#include "schemaforge/errors.hpp"

namespace schemaforge {

namespace {

using IncidencePair = std::pair<std::string, std::string>;

// Walks an rdf:first/rdf:rest list starting at head, collecting IRI members.
std::vector<std::string> list_members(const Graph& graph, const Term& head) {
  std::vector<std::string> members;
  Term node = head;
  std::set<std::string> seen;  // malformed cyclic lists must not hang
  while (node.kind == TermKind::BlankNode && seen.insert(node.value).second) {
    Term next = Term::iri(std::string(iri::rdf_nil));
    for (const Triple& t : graph.triples) {
      if (t.subject != node) continue;
      if (t.predicate.value == iri::rdf_first && t.object.kind == TermKind::IRI) {
        members.push_back(t.object.value);
      } else if (t.predicate.value == iri::rdf_rest) {
        next = t.object;
      }
    }
    node = next;
  }
  return members;
}

// Resolves the object of a domain/range statement to concrete etype IRIs.
std::vector<std::string> resolve_class_expr(const Graph& graph, const Term& object,
                                            const ExtractionConfig& config) {
  if (object.kind == TermKind::IRI) return {object.value};
  if (object.kind == TermKind::BlankNode && config.union_domain_expansion) {
    for (const Triple& t : graph.triples) {
      if (t.subject == object && t.predicate.value == iri::owl_unionof) {
        return list_members(graph, t.object);
      }
    }
  }
  return {};
}

}  // namespace

ExtractionConfig ExtractionConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("extraction config is not valid JSON: ") + e.what());
  }
  ExtractionConfig config;
  if (j.contains("class_markers")) {
    config.class_markers.clear();
    for (const auto& v : j.at("class_markers")) config.class_markers.insert(v.get<std::string>());
  }
  if (j.contains("property_markers")) {
    config.property_markers.clear();
    for (const auto& v : j.at("property_markers")) {
      config.property_markers.insert(v.get<std::string>());
    }
  }
  config.use_range_as_association =
      j.value("use_range_as_association", config.use_range_as_association);
  config.inherit_via_subclass = j.value("inherit_via_subclass", config.inherit_via_subclass);
  config.union_domain_expansion =
      j.value("union_domain_expansion", config.union_domain_expansion);
  if (config.class_markers.empty() || config.property_markers.empty()) {
    throw std::invalid_argument("extraction config marker sets must be non-empty");
  }
  return config;
}

std::string ExtractionConfig::to_json() const {
  nlohmann::json j;
  j["class_markers"] = class_markers;
  j["property_markers"] = property_markers;
  j["use_range_as_association"] = use_range_as_association;
  j["inherit_via_subclass"] = inherit_via_subclass;
  j["union_domain_expansion"] = union_domain_expansion;
  return j.dump(2);
}

std::string ExtractionConfig::config_hash() const {
  return detail::sha256_hex(to_json()).substr(0, 16);
}

bool SchemaContext::has_etype(const std::string& e) const {
  return std::binary_search(etypes.begin(), etypes.end(), e);
}

bool SchemaContext::has_property(const std::string& p) const {
  return std::binary_search(properties.begin(), properties.end(), p);
}

bool SchemaContext::incident(const std::string& e, const std::string& p) const {
  return std::binary_search(incidence.begin(), incidence.end(), IncidencePair{e, p});
}

std::vector<std::string> SchemaContext::dom(const std::string& p) const {
  std::vector<std::string> out;
  for (const auto& [e, q] : incidence) {
    if (q == p) out.push_back(e);
  }
  return out;
}

std::vector<std::string> SchemaContext::prop(const std::string& e) const {
  auto lo = std::lower_bound(incidence.begin(), incidence.end(), IncidencePair{e, ""});
  std::vector<std::string> out;
  for (auto it = lo; it != incidence.end() && it->first == e; ++it) out.push_back(it->second);
  return out;
}

SchemaContext extract_schema(const Graph& graph, const ExtractionConfig& config) {
  std::set<std::string> etypes;
  std::set<std::string> properties;
  std::set<IncidencePair> incidence;

  for (const Triple& t : graph.triples) {
    if (t.predicate.value == iri::rdf_type && t.object.kind == TermKind::IRI) {
      if (t.subject.kind == TermKind::IRI) {
        if (config.class_markers.contains(t.object.value)) etypes.insert(t.subject.value);
        if (config.property_markers.contains(t.object.value)) properties.insert(t.subject.value);
      }
    }
  }

  // rdfs:subClassOf edges, superclass -> direct subclasses, IRIs only.
  std::map<std::string, std::vector<std::string>> subclasses;
  if (config.inherit_via_subclass) {
    for (const Triple& t : graph.triples) {
      if (t.predicate.value == iri::rdfs_subclassof && t.subject.kind == TermKind::IRI &&
          t.object.kind == TermKind::IRI) {
        subclasses[t.object.value].push_back(t.subject.value);
      }
    }
  }

  auto add_pair = [&](const std::string& e, const std::string& p) {
    etypes.insert(e);
    incidence.insert({e, p});
    if (!config.inherit_via_subclass) return;
    std::vector<std::string> stack{e};
    std::set<std::string> visited{e};
    while (!stack.empty()) {
      std::string cur = std::move(stack.back());
      stack.pop_back();
      auto it = subclasses.find(cur);
      if (it == subclasses.end()) continue;
      for (const std::string& sub : it->second) {
        if (!visited.insert(sub).second) continue;
        etypes.insert(sub);
        incidence.insert({sub, p});
        stack.push_back(sub);
      }
    }
  };

  for (const Triple& t : graph.triples) {
    bool is_domain = t.predicate.value == iri::rdfs_domain;
    bool is_range = t.predicate.value == iri::rdfs_range;
    if (!is_domain && !is_range) continue;
    if (t.subject.kind != TermKind::IRI) continue;
    // A range statement marks its subject as a property even when ranges are
    // not treated as associations; only the incidence pairs are gated.
    properties.insert(t.subject.value);
    if (is_range && !config.use_range_as_association) continue;
    for (const std::string& e : resolve_class_expr(graph, t.object, config)) {
      add_pair(e, t.subject.value);
    }
  }

  if (etypes.empty() && properties.empty()) {
    throw EmptySchemaError("no entity types or properties found in graph");
  }

  SchemaContext schema;
  schema.etypes.assign(etypes.begin(), etypes.end());
  schema.properties.assign(properties.begin(), properties.end());
  schema.incidence.assign(incidence.begin(), incidence.end());
  schema.provenance = "triples=" + std::to_string(graph.triples.size()) +
                      ";config=" + config.config_hash();
  return schema;
}

FilterResult filter_predicates(const SchemaContext& schema,
                               const std::vector<std::string>* include,
                               const std::vector<std::string>* exclude) {
  if (include != nullptr && exclude != nullptr) {
    throw std::invalid_argument("include and exclude filters are mutually exclusive");
  }

  std::set<std::string> requested;
  if (include != nullptr) requested.insert(include->begin(), include->end());
  if (exclude != nullptr) requested.insert(exclude->begin(), exclude->end());

  FilterResult result;
  for (const std::string& p : requested) {
    if (!schema.has_property(p)) result.unknown.push_back(p);
  }

  auto keep = [&](const std::string& p) {
    if (include != nullptr) return requested.contains(p);
    if (exclude != nullptr) return !requested.contains(p);
    return true;
  };

  result.schema.etypes = schema.etypes;
  for (const std::string& p : schema.properties) {
    if (keep(p)) result.schema.properties.push_back(p);
  }
  for (const auto& pair : schema.incidence) {
    if (keep(pair.second)) result.schema.incidence.push_back(pair);
  }
  result.schema.provenance = schema.provenance;
  return result;
}

}  // namespace schemaforge
