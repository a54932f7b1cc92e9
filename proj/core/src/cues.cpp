#include "schemaforge/cues.hpp"

#include <algorithm>
#include <map>

#include "schemaforge/errors.hpp"

namespace schemaforge {

namespace {

// Compensated summation keeps the column-sum law (Σ_e cue_p(p,e) = 1)
// exact for every domain size this tool meets in practice.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

std::map<std::string, std::size_t> domain_sizes(const SchemaContext& schema) {
  std::map<std::string, std::size_t> sizes;
  for (const auto& [e, p] : schema.incidence) ++sizes[p];
  return sizes;
}

void require_etype(const SchemaContext& schema, const std::string& e) {
  if (!schema.has_etype(e)) throw UnknownSymbolError("unknown entity type: " + e);
}

void require_property(const SchemaContext& schema, const std::string& p) {
  if (!schema.has_property(p)) throw UnknownSymbolError("unknown property: " + p);
}

}  // namespace

double cue_p(const SchemaContext& schema, const std::string& p, const std::string& e) {
  require_property(schema, p);
  require_etype(schema, e);
  if (!schema.incident(e, p)) return 0.0;
  std::size_t dom_size = schema.dom(p).size();
  return 1.0 / static_cast<double>(dom_size);
}

double cue_e(const SchemaContext& schema, const std::string& e) {
  require_etype(schema, e);
  auto sizes = domain_sizes(schema);
  KahanSum acc;
  for (const std::string& p : schema.prop(e)) {
    acc.add(1.0 / static_cast<double>(sizes.at(p)));
  }
  return acc.sum;
}

double cue_er(const SchemaContext& schema, const std::string& e) {
  require_etype(schema, e);
  std::size_t n = schema.prop(e).size();
  if (n == 0) return 0.0;
  return cue_e(schema, e) / static_cast<double>(n);
}

double cue_k(const SchemaContext& schema) {
  auto sizes = domain_sizes(schema);
  KahanSum acc;
  for (const std::string& e : schema.etypes) {
    KahanSum row;
    for (const std::string& p : schema.prop(e)) {
      row.add(1.0 / static_cast<double>(sizes.at(p)));
    }
    acc.add(row.sum);
  }
  return acc.sum;
}

double cue_kr(const SchemaContext& schema) {
  if (schema.incidence.empty()) {
    throw DegenerateSchemaError("cue_kr undefined: no etype has any property");
  }
  auto sizes = domain_sizes(schema);
  return static_cast<double>(sizes.size()) / static_cast<double>(schema.incidence.size());
}

CueReport cue_report(const SchemaContext& schema) {
  auto sizes = domain_sizes(schema);

  CueReport report;
  report.n_etypes = static_cast<std::uint32_t>(schema.etypes.size());
  report.n_props_total = static_cast<std::uint32_t>(schema.properties.size());
  report.n_props_with_domain = static_cast<std::uint32_t>(sizes.size());

  KahanSum total;
  for (const std::string& e : schema.etypes) {
    CueRow row;
    row.etype = e;
    KahanSum acc;
    std::size_t n = 0;
    for (const std::string& p : schema.prop(e)) {
      acc.add(1.0 / static_cast<double>(sizes.at(p)));
      ++n;
    }
    row.cue_e = acc.sum;
    row.n_props = static_cast<std::uint32_t>(n);
    row.cue_er = n == 0 ? 0.0 : row.cue_e / static_cast<double>(n);
    total.add(row.cue_e);
    report.per_etype.push_back(std::move(row));
  }
  report.cue_k = total.sum;
  if (!schema.incidence.empty()) {
    report.cue_kr = static_cast<double>(sizes.size()) /
                    static_cast<double>(schema.incidence.size());
  }

  std::stable_sort(report.per_etype.begin(), report.per_etype.end(),
                   [](const CueRow& a, const CueRow& b) {
                     if (a.cue_e != b.cue_e) return a.cue_e > b.cue_e;
                     return a.etype < b.etype;
                   });
  return report;
}

}  // namespace schemaforge
