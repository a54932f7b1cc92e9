#include "schemaforge/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>

namespace schemaforge {

Term Term::iri(std::string value) {
  Term t;
  t.kind = TermKind::IRI;
  t.value = std::move(value);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype, std::string language) {
  Term t;
  t.kind = TermKind::Literal;
  t.value = std::move(lexical);
  if (datatype == iri::xsd_string) datatype.clear();  // RDF 1.1: simple literal
  t.datatype = std::move(datatype);
  t.language = std::move(language);
  for (auto& c : t.language) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return t;
}

Term Term::blank(std::string label) {
  Term t;
  t.kind = TermKind::BlankNode;
  t.value = std::move(label);
  return t;
}

std::string_view Term::effective_datatype() const {
  if (!language.empty()) return iri::rdf_lang_string;
  if (!datatype.empty()) return datatype;
  return iri::xsd_string;
}

namespace detail {

void append_escaped_literal(std::string& out, std::string_view lexical) {
  for (unsigned char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
}

}  // namespace detail

std::string term_text(const Term& t) {
  std::string out;
  switch (t.kind) {
    case TermKind::IRI:
      out += '<';
      out += t.value;
      out += '>';
      break;
    case TermKind::BlankNode:
      out += "_:";
      out += t.value;
      break;
    case TermKind::Literal:
      out += '"';
      detail::append_escaped_literal(out, t.value);
      out += '"';
      if (!t.language.empty()) {
        out += '@';
        out += t.language;
      } else if (!t.datatype.empty()) {
        out += "^^<";
        out += t.datatype;
        out += '>';
      }
      break;
  }
  return out;
}

std::string triple_text(const Triple& t) {
  return term_text(t.subject) + " " + term_text(t.predicate) + " " + term_text(t.object) + " .";
}

bool triple_text_less(const Triple& a, const Triple& b) {
  if (auto c = term_text(a.subject).compare(term_text(b.subject)); c != 0) return c < 0;
  if (auto c = term_text(a.predicate).compare(term_text(b.predicate)); c != 0) return c < 0;
  return term_text(a.object) < term_text(b.object);
}

Graph Graph::from_triples(std::vector<Triple> triples, std::map<std::string, std::string> prefixes) {
  std::sort(triples.begin(), triples.end(), triple_text_less);
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  Graph g;
  g.triples = std::move(triples);
  g.prefixes = std::move(prefixes);
  return g;
}

bool Graph::contains(const Triple& t) const {
  auto it = std::lower_bound(triples.begin(), triples.end(), t, triple_text_less);
  return it != triples.end() && *it == t;
}

std::vector<Triple> match_pattern(const Graph& graph, const std::optional<Term>& subject,
                                  const std::optional<Term>& predicate,
                                  const std::optional<Term>& object) {
  std::vector<Triple> out;
  for (const auto& t : graph.triples) {
    if (subject && t.subject != *subject) continue;
    if (predicate && t.predicate != *predicate) continue;
    if (object && t.object != *object) continue;
    out.push_back(t);
  }
  return out;
}

namespace {

// Signature of a blank node: its ground neighborhood, with blank neighbors
// wildcarded. Nodes can only map to nodes with an identical signature.
std::multiset<std::string> blank_signature(const Graph& g, const std::string& label) {
  std::multiset<std::string> sig;
  auto part = [](const Term& t) {
    return t.is_blank() ? std::string("_") : term_text(t);
  };
  for (const auto& t : g.triples) {
    bool s = t.subject.is_blank() && t.subject.value == label;
    bool o = t.object.is_blank() && t.object.value == label;
    if (s) sig.insert("S " + term_text(t.predicate) + " " + part(t.object));
    if (o) sig.insert("O " + part(t.subject) + " " + term_text(t.predicate));
  }
  return sig;
}

std::vector<std::string> blank_labels(const Graph& g) {
  std::set<std::string> labels;
  for (const auto& t : g.triples) {
    if (t.subject.is_blank()) labels.insert(t.subject.value);
    if (t.object.is_blank()) labels.insert(t.object.value);
  }
  return {labels.begin(), labels.end()};
}

Graph relabel(const Graph& g, const std::map<std::string, std::string>& mapping) {
  std::vector<Triple> triples = g.triples;
  for (auto& t : triples) {
    if (t.subject.is_blank()) t.subject.value = mapping.at(t.subject.value);
    if (t.object.is_blank()) t.object.value = mapping.at(t.object.value);
  }
  return Graph::from_triples(std::move(triples));
}

bool search_mapping(const Graph& a, const Graph& b, const std::vector<std::string>& la,
                    const std::vector<std::vector<std::string>>& candidates, std::size_t depth,
                    std::map<std::string, std::string>& mapping, std::set<std::string>& used) {
  if (depth == la.size()) return relabel(a, mapping).triples == b.triples;
  for (const auto& cand : candidates[depth]) {
    if (used.count(cand)) continue;
    mapping[la[depth]] = cand;
    used.insert(cand);
    if (search_mapping(a, b, la, candidates, depth + 1, mapping, used)) return true;
    used.erase(cand);
    mapping.erase(la[depth]);
  }
  return false;
}

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.triples.size() != b.triples.size()) return false;
  auto la = blank_labels(a);
  auto lb = blank_labels(b);
  if (la.size() != lb.size()) return false;
  if (la.empty()) return a.triples == b.triples;

  std::map<std::string, std::multiset<std::string>> sig_b;
  for (const auto& l : lb) sig_b[l] = blank_signature(b, l);
  std::vector<std::vector<std::string>> candidates;
  for (const auto& l : la) {
    auto sig = blank_signature(a, l);
    std::vector<std::string> cands;
    for (const auto& [lbl, s] : sig_b) {
      if (s == sig) cands.push_back(lbl);
    }
    if (cands.empty()) return false;
    candidates.push_back(std::move(cands));
  }
  std::map<std::string, std::string> mapping;
  std::set<std::string> used;
  return search_mapping(a, b, la, candidates, 0, mapping, used);
}

}  // namespace schemaforge
