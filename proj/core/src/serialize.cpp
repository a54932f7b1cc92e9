#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "schemaforge/rdf.hpp"

namespace schemaforge {

namespace detail {
void append_escaped_literal(std::string& out, std::string_view lexical);  // rdf_model.cpp
}

namespace {

std::string padded(std::size_t rank) {
  std::string digits = std::to_string(rank);
  return std::string(6 - std::min<std::size_t>(6, digits.size()), '0') + digits;
}

// Emitted blank labels are canonical: derived from the graph structure alone,
// never from the labels the input happened to use. Signatures refine over
// neighbouring blanks until the node partition is stable; leftover ties are
// split one node at a time so symmetric substructures stay consistently
// paired. Re-parsing the output therefore reproduces it byte for byte.
std::vector<Triple> canonical_triples(const Graph& graph) {
  std::vector<Triple> triples = graph.triples;

  std::vector<std::string> blanks;  // discovery order doubles as the tie break
  std::map<std::string, std::size_t> index_of;
  auto note = [&](const Term& t) {
    if (t.kind == TermKind::BlankNode && !index_of.contains(t.value)) {
      index_of[t.value] = blanks.size();
      blanks.push_back(t.value);
    }
  };
  for (const Triple& t : triples) {
    note(t.subject);
    note(t.object);
  }
  if (blanks.empty()) return triples;

  const std::size_t n = blanks.size();
  std::vector<std::string> sig(n, "0");

  // One refinement round: each blank absorbs, per incident triple, the other
  // end's signature (or the concrete term text). Signatures are prefixed with
  // their previous value so classes only ever split, then rank-compressed to
  // keep them short. Returns the number of distinct classes.
  auto refine_round = [&]() {
    std::vector<std::vector<std::string>> lines(n);
    for (const Triple& t : triples) {
      bool bs = t.subject.kind == TermKind::BlankNode;
      bool bo = t.object.kind == TermKind::BlankNode;
      if (bs) {
        lines[index_of.at(t.subject.value)].push_back(
            "S " + t.predicate.value + " " + (bo ? sig[index_of.at(t.object.value)] : term_text(t.object)));
      }
      if (bo) {
        lines[index_of.at(t.object.value)].push_back(
            "O " + (bs ? sig[index_of.at(t.subject.value)] : term_text(t.subject)) + " " + t.predicate.value);
      }
    }
    std::vector<std::string> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(lines[i].begin(), lines[i].end());
      next[i] = sig[i] + "#";
      for (const std::string& l : lines[i]) next[i] += l + "\n";
    }
    std::map<std::string, std::size_t> rank;
    for (const std::string& s : next) rank.emplace(s, 0);
    std::size_t r = 0;
    for (auto& [text, value] : rank) value = r++;
    for (std::size_t i = 0; i < n; ++i) sig[i] = padded(rank.at(next[i]));
    return rank.size();
  };

  auto refine = [&]() {
    std::size_t classes = refine_round();
    for (std::size_t round = 1; round < n; ++round) {
      std::size_t now = refine_round();
      if (now == classes) break;
      classes = now;
    }
  };

  std::vector<bool> assigned(n, false);
  std::vector<std::string> label(n);
  std::size_t next_id = 0;
  refine();
  while (next_id < n) {
    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < n; ++i) {
      if (!assigned[i]) remaining.push_back(i);
    }
    std::stable_sort(remaining.begin(), remaining.end(),
                     [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });
    bool individualized = false;
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
      std::size_t i = remaining[pos];
      bool unique_class = (pos + 1 == remaining.size() || sig[remaining[pos + 1]] != sig[i]) &&
                          (pos == 0 || sig[remaining[pos - 1]] != sig[i]);
      if (!unique_class) {
        // Tied class: fix its first member and re-refine so dependants of the
        // choice separate before anything later is assigned.
        assigned[i] = true;
        label[i] = "b" + std::to_string(next_id);
        sig[i] = "!" + padded(next_id);
        ++next_id;
        individualized = true;
        break;
      }
      assigned[i] = true;
      label[i] = "b" + std::to_string(next_id);
      sig[i] = "!" + padded(next_id);
      ++next_id;
    }
    if (individualized && next_id < n) refine();
  }

  for (Triple& t : triples) {
    if (t.subject.kind == TermKind::BlankNode) t.subject.value = label[index_of.at(t.subject.value)];
    if (t.object.kind == TermKind::BlankNode) t.object.value = label[index_of.at(t.object.value)];
  }
  std::sort(triples.begin(), triples.end(),
            [](const Triple& a, const Triple& b) { return triple_text(a) < triple_text(b); });
  return triples;
}

// Conservative: only locals that re-parse unambiguously get the short form.
bool safe_local_part(std::string_view local) {
  for (char c : local) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return local.empty() || local.back() != '-';
}

// Longest declared namespace wins; falls back to <full-iri>.
std::string turtle_iri(const std::string& value, const std::map<std::string, std::string>& prefixes) {
  const std::string* best_prefix = nullptr;
  std::size_t best_len = 0;
  for (const auto& [prefix, ns] : prefixes) {
    if (ns.size() > best_len && value.starts_with(ns) &&
        safe_local_part(std::string_view(value).substr(ns.size()))) {
      best_prefix = &prefix;
      best_len = ns.size();
    }
  }
  if (best_prefix != nullptr) return *best_prefix + ":" + value.substr(best_len);
  return "<" + value + ">";
}

std::string turtle_term(const Term& t, const std::map<std::string, std::string>& prefixes) {
  switch (t.kind) {
    case TermKind::IRI:
      return turtle_iri(t.value, prefixes);
    case TermKind::BlankNode:
      return "_:" + t.value;
    case TermKind::Literal: {
      std::string out = "\"";
      detail::append_escaped_literal(out, t.value);
      out += '"';
      if (!t.language.empty()) {
        out += '@';
        out += t.language;
      } else if (!t.datatype.empty()) {
        out += "^^";
        out += turtle_iri(t.datatype, prefixes);
      }
      return out;
    }
  }
  return {};
}

std::string serialize_turtle(const Graph& graph, const std::vector<Triple>& triples) {
  std::string out;
  for (const auto& [prefix, ns] : graph.prefixes) {
    out += "@prefix " + prefix + ": <" + ns + "> .\n";
  }
  if (!graph.prefixes.empty() && !triples.empty()) out += '\n';

  const Triple* prev = nullptr;
  for (const Triple& t : triples) {
    bool same_subject = prev != nullptr && prev->subject == t.subject;
    bool same_predicate = same_subject && prev->predicate == t.predicate;
    if (same_predicate) {
      out += " ,\n        " + turtle_term(t.object, graph.prefixes);
    } else if (same_subject) {
      out += " ;\n    ";
      out += t.predicate.value == iri::rdf_type ? "a" : turtle_term(t.predicate, graph.prefixes);
      out += ' ';
      out += turtle_term(t.object, graph.prefixes);
    } else {
      if (prev != nullptr) out += " .\n\n";
      out += turtle_term(t.subject, graph.prefixes);
      out += ' ';
      out += t.predicate.value == iri::rdf_type ? "a" : turtle_term(t.predicate, graph.prefixes);
      out += ' ';
      out += turtle_term(t.object, graph.prefixes);
    }
    prev = &t;
  }
  if (prev != nullptr) out += " .\n";
  return out;
}

std::string serialize_ntriples(const std::vector<Triple>& triples) {
  std::string out;
  for (const Triple& t : triples) {
    out += triple_text(t);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string serialize(const Graph& graph, RdfFormat format) {
  std::vector<Triple> triples = canonical_triples(graph);
  return format == RdfFormat::turtle ? serialize_turtle(graph, triples)
                                     : serialize_ntriples(triples);
}

}  // namespace schemaforge
