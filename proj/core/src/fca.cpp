#include "schemaforge/fca.hpp"

#include <algorithm>
#include <cstdio>

#include "schemaforge/errors.hpp"

namespace schemaforge {

namespace detail {

void append_csv_field(std::string& out, std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Splits one RFC-4180 record; the cursor is left after the record's LF.
std::vector<std::string> read_csv_record(const std::string& text, std::size_t& pos) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          pos += 2;
        } else {
          quoted = false;
          ++pos;
        }
      } else {
        field += c;
        ++pos;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
      ++pos;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      ++pos;
    } else if (c == '\n') {
      ++pos;
      break;
    } else if (c == '\r') {
      ++pos;
    } else {
      field += c;
      ++pos;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace detail

FormalContext build_context(const SchemaContext& schema) {
  FormalContext ctx;
  ctx.row_labels = schema.etypes;
  ctx.col_labels = schema.properties;
  ctx.cells.assign(ctx.row_labels.size(),
                   std::vector<bool>(ctx.col_labels.size(), false));
  for (std::size_t i = 0; i < ctx.row_labels.size(); ++i) {
    for (std::size_t j = 0; j < ctx.col_labels.size(); ++j) {
      ctx.cells[i][j] = schema.incident(ctx.row_labels[i], ctx.col_labels[j]);
    }
  }
  return ctx;
}

std::string export_fca_csv(const FormalContext& ctx) {
  std::string out = "etype";
  for (const std::string& col : ctx.col_labels) {
    out += ',';
    detail::append_csv_field(out, col);
  }
  out += '\n';
  for (std::size_t i = 0; i < ctx.row_labels.size(); ++i) {
    detail::append_csv_field(out, ctx.row_labels[i]);
    for (std::size_t j = 0; j < ctx.col_labels.size(); ++j) {
      out += ctx.cells[i][j] ? ",1" : ",0";
    }
    out += '\n';
  }
  return out;
}

std::string export_triples_csv(const Graph& graph) {
  std::string out = "subject,predicate,object,object_kind,datatype,language\n";
  auto node_text = [](const Term& t) {
    return t.kind == TermKind::BlankNode ? "_:" + t.value : t.value;
  };
  for (const Triple& t : graph.triples) {
    detail::append_csv_field(out, node_text(t.subject));
    out += ',';
    detail::append_csv_field(out, t.predicate.value);
    out += ',';
    detail::append_csv_field(out, node_text(t.object));
    out += ',';
    switch (t.object.kind) {
      case TermKind::IRI: out += "iri"; break;
      case TermKind::Literal: out += "literal"; break;
      case TermKind::BlankNode: out += "blank"; break;
    }
    out += ',';
    detail::append_csv_field(out, t.object.datatype);
    out += ',';
    detail::append_csv_field(out, t.object.language);
    out += '\n';
  }
  return out;
}

std::string export_cue_csv(const CueReport& report) {
  std::string out = "etype,cue_e,cue_er,n_props\n";
  for (const CueRow& row : report.per_etype) {
    detail::append_csv_field(out, row.etype);
    out += ',' + detail::format_fixed4(row.cue_e);
    out += ',' + detail::format_fixed4(row.cue_er);
    out += ',' + std::to_string(row.n_props);
    out += '\n';
  }
  out += "#cue_k=" + detail::format_fixed4(report.cue_k) + '\n';
  out += "#cue_kr=";
  if (report.cue_kr.has_value()) out += detail::format_fixed4(*report.cue_kr);
  out += '\n';
  out += "#n_etypes=" + std::to_string(report.n_etypes) + '\n';
  out += "#n_props=" + std::to_string(report.n_props_total) + '\n';
  return out;
}

FormalContext import_fca_csv(const std::string& csv) {
  FormalContext ctx;
  std::size_t pos = 0;
  if (csv.empty()) throw ValidationError("empty FCA CSV");
  std::vector<std::string> header = detail::read_csv_record(csv, pos);
  if (header.empty() || header[0] != "etype") {
    throw ValidationError("FCA CSV must start with an 'etype' header column");
  }
  ctx.col_labels.assign(header.begin() + 1, header.end());
  while (pos < csv.size()) {
    std::vector<std::string> row = detail::read_csv_record(csv, pos);
    if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
    if (row.size() != header.size()) {
      throw ValidationError("FCA CSV row width mismatch");
    }
    ctx.row_labels.push_back(row[0]);
    std::vector<bool> cells;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] != "0" && row[j] != "1") {
        throw ValidationError("FCA CSV cells must be 0 or 1");
      }
      cells.push_back(row[j] == "1");
    }
    ctx.cells.push_back(std::move(cells));
  }
  return ctx;
}

}  // namespace schemaforge
