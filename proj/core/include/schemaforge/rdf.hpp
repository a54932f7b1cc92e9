#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace schemaforge {

namespace iri {
inline constexpr std::string_view rdf_ns = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs_ns = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl_ns = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view xsd_ns = "http://www.w3.org/2001/XMLSchema#";

inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view rdf_property = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
inline constexpr std::string_view rdf_first = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
inline constexpr std::string_view rdf_rest = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
inline constexpr std::string_view rdf_nil = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
inline constexpr std::string_view rdf_lang_string = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view rdfs_class = "http://www.w3.org/2000/01/rdf-schema#Class";
inline constexpr std::string_view rdfs_domain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline constexpr std::string_view rdfs_range = "http://www.w3.org/2000/01/rdf-schema#range";
inline constexpr std::string_view rdfs_subclassof = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view owl_class = "http://www.w3.org/2002/07/owl#Class";
inline constexpr std::string_view owl_unionof = "http://www.w3.org/2002/07/owl#unionOf";
inline constexpr std::string_view owl_object_property = "http://www.w3.org/2002/07/owl#ObjectProperty";
inline constexpr std::string_view owl_datatype_property = "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline constexpr std::string_view owl_annotation_property = "http://www.w3.org/2002/07/owl#AnnotationProperty";
inline constexpr std::string_view xsd_string = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view xsd_integer = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view xsd_decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view xsd_double = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view xsd_boolean = "http://www.w3.org/2001/XMLSchema#boolean";
}  // namespace iri

enum class TermKind { IRI, Literal, BlankNode };

/// One RDF term. `value` holds the absolute IRI text, the literal lexical
/// form, or the blank-node label (without the "_:" sigil). A plain literal
/// stores an empty datatype; "^^xsd:string" is normalized away on
/// construction, and a language-tagged literal's datatype is implicitly
/// rdf:langString.
struct Term {
  TermKind kind = TermKind::IRI;
  std::string value;
  std::string datatype;
  std::string language;

  static Term iri(std::string value);
  static Term literal(std::string lexical, std::string datatype = "", std::string language = "");
  static Term blank(std::string label);

  bool is_iri() const { return kind == TermKind::IRI; }
  bool is_literal() const { return kind == TermKind::Literal; }
  bool is_blank() const { return kind == TermKind::BlankNode; }

  /// rdf:langString for language-tagged literals, xsd:string for plain ones.
  std::string_view effective_datatype() const;

  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Immutable set of triples plus the prefixes recorded while parsing.
/// Triples are stored sorted by their N-Triples text, without duplicates.
struct Graph {
  std::vector<Triple> triples;
  std::map<std::string, std::string> prefixes;

  static Graph from_triples(std::vector<Triple> triples,
                            std::map<std::string, std::string> prefixes = {});

  std::size_t size() const { return triples.size(); }
  bool empty() const { return triples.empty(); }
  bool contains(const Triple& t) const;

  /// Triple-set equality; prefixes are presentation metadata and not compared.
  friend bool operator==(const Graph& a, const Graph& b) { return a.triples == b.triples; }
};

/// N-Triples rendering of one term; also the sort key used everywhere.
std::string term_text(const Term& t);
std::string triple_text(const Triple& t);

/// Orders triples by (subject, predicate, object) N-Triples text.
bool triple_text_less(const Triple& a, const Triple& b);

enum class RdfFormat { turtle, ntriples };

Graph parse_turtle(std::string_view text);
Graph parse_ntriples(std::string_view text);
std::string serialize(const Graph& graph, RdfFormat format);

/// All triples matching the bound components, in graph (sorted) order.
std::vector<Triple> match_pattern(const Graph& graph,
                                  const std::optional<Term>& subject = std::nullopt,
                                  const std::optional<Term>& predicate = std::nullopt,
                                  const std::optional<Term>& object = std::nullopt);

/// True when the graphs contain the same triples up to a bijective renaming
/// of blank-node labels.
bool isomorphic(const Graph& a, const Graph& b);

}  // namespace schemaforge
