#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "schemaforge/cues.hpp"
#include "schemaforge/errors.hpp"
#include "schemaforge/rdf.hpp"
#include "schemaforge/schema.hpp"

using namespace schemaforge;
using testutil::read_fixture;

namespace {

const std::string kToy = "http://example.org/toy1#";

SchemaContext toy() { return extract_schema(parse_turtle(read_fixture("toy1.ttl"))); }

// Exact rational number with small denominators, for oracle sums.
struct Frac {
  long long num = 0;
  long long den = 1;

  void add_unit(long long d) {  // += 1/d
    num = num * d + den;
    den *= d;
    long long g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

std::string padded(const char* stem, int i) {
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%s%02d", stem, i);
  return buffer;
}

SchemaContext random_context(std::mt19937_64& rng, int max_etypes, int max_props) {
  int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_etypes - 1));
  int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_props));
  SchemaContext s;
  for (int e = 0; e < n; ++e) s.etypes.push_back(padded("e", e));
  for (int p = 0; p < m; ++p) s.properties.push_back(padded("p", p));
  for (int e = 0; e < n; ++e) {
    for (int p = 0; p < m; ++p) {
      if (rng() % 100 < 35) s.incidence.emplace_back(s.etypes[e], s.properties[p]);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("toy cue values are exact") {
  SchemaContext s = toy();

  CHECK(cue_p(s, kToy + "p1", kToy + "e1") == 1.0);
  CHECK(cue_p(s, kToy + "p2", kToy + "e1") == 0.5);
  CHECK(cue_p(s, kToy + "p2", kToy + "e2") == 0.5);
  CHECK(cue_p(s, kToy + "p1", kToy + "e2") == 0.0);

  CHECK(cue_e(s, kToy + "e1") == 1.5);
  CHECK(cue_e(s, kToy + "e2") == 0.5);
  CHECK(cue_er(s, kToy + "e1") == 0.75);
  CHECK(cue_er(s, kToy + "e2") == 0.5);

  CHECK(cue_k(s) == 2.0);
  CHECK(cue_kr(s) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("cue sums agree with exact rational arithmetic") {
  std::mt19937_64 rng(20260822);
  for (int round = 0; round < 150; ++round) {
    SchemaContext s = random_context(rng, 10, 12);

    Frac total;
    bool any_domain = false;
    for (const std::string& e : s.etypes) {
      Frac expected;
      for (const std::string& p : s.prop(e)) {
        expected.add_unit(static_cast<long long>(s.dom(p).size()));
      }
      CAPTURE(round);
      CAPTURE(e);
      CHECK(cue_e(s, e) == doctest::Approx(expected.value()).epsilon(1e-12));

      std::size_t n = s.prop(e).size();
      double er = n ? expected.value() / static_cast<double>(n) : 0.0;
      CHECK(cue_er(s, e) == doctest::Approx(er).epsilon(1e-12));
    }
    for (const std::string& p : s.properties) {
      std::size_t d = s.dom(p).size();
      if (d) {
        any_domain = true;
        for (std::size_t i = 0; i < d; ++i) total.add_unit(static_cast<long long>(d));
      }
    }
    CHECK(cue_k(s) == doctest::Approx(total.value()).epsilon(1e-12));
    if (!s.incidence.empty()) {
      std::size_t with_domain = 0;
      for (const std::string& p : s.properties) with_domain += !s.dom(p).empty();
      CHECK(cue_kr(s) ==
            static_cast<double>(with_domain) / static_cast<double>(s.incidence.size()));
    }
    (void)any_domain;
  }
}

TEST_CASE("every inhabited property column sums to exactly one") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 60; ++round) {
    SchemaContext s = random_context(rng, 10, 10);
    for (const std::string& p : s.properties) {
      if (s.dom(p).empty()) continue;
      // Compensated summation, independent from the library internals.
      double sum = 0.0, carry = 0.0;
      for (const std::string& e : s.etypes) {
        double y = cue_p(s, p, e) - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
      }
      CAPTURE(round);
      CAPTURE(p);
      CHECK(sum == 1.0);
    }
  }
}

TEST_CASE("schema total equals the number of inhabited properties") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 60; ++round) {
    SchemaContext s = random_context(rng, 10, 10);
    std::size_t with_domain = 0;
    for (const std::string& p : s.properties) with_domain += !s.dom(p).empty();
    CHECK(cue_k(s) == doctest::Approx(static_cast<double>(with_domain)).epsilon(1e-9));
  }
}

TEST_CASE("snapshot cue values match their pinned baselines") {
  SchemaContext schema_org =
      extract_schema(parse_turtle(read_fixture("snapshots/schema_org.ttl")));
  const std::string person = "http://schema.org/Person";
  CHECK(cue_e(schema_org, person) == doctest::Approx(23.0).epsilon(1e-9));
  CHECK(schema_org.prop(person).size() == 40);
  CHECK(cue_er(schema_org, person) == doctest::Approx(0.575).epsilon(1e-9));

  SchemaContext foaf = extract_schema(parse_turtle(read_fixture("snapshots/foaf.ttl")));
  const std::string foaf_person = "http://xmlns.com/foaf/0.1/Person";
  CHECK(cue_e(foaf, foaf_person) == doctest::Approx(13.0).epsilon(1e-12));
  CHECK(cue_er(foaf, foaf_person) == doctest::Approx(1.0).epsilon(1e-12));

  SchemaContext sport = extract_schema(parse_turtle(read_fixture("snapshots/bbc_sport.ttl")));
  const std::string sport_person = "http://www.bbc.co.uk/ontologies/sport/Person";
  CHECK(cue_e(sport, sport_person) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(cue_er(sport, sport_person) == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("degenerate schemas have no defined schema ratio") {
  Graph g = parse_turtle(
      "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
      "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
      "@prefix ex: <http://e/> .\n"
      "ex:C a rdfs:Class .\n"
      "ex:p a rdf:Property .\n");
  SchemaContext s = extract_schema(g);
  REQUIRE(s.incidence.empty());

  CHECK(cue_e(s, "http://e/C") == 0.0);
  CHECK(cue_er(s, "http://e/C") == 0.0);
  CHECK(cue_k(s) == 0.0);
  CHECK_THROWS_AS(cue_kr(s), DegenerateSchemaError);

  CueReport report = cue_report(s);
  CHECK_FALSE(report.cue_kr.has_value());
  CHECK(report.n_props_total == 1);
  CHECK(report.n_props_with_domain == 0);
}

TEST_CASE("metrics reject unknown IRIs") {
  SchemaContext s = toy();
  CHECK_THROWS_AS(cue_e(s, "http://nowhere/x"), UnknownSymbolError);
  CHECK_THROWS_AS(cue_er(s, "http://nowhere/x"), UnknownSymbolError);
  CHECK_THROWS_AS(cue_p(s, "http://nowhere/x", kToy + "e1"), UnknownSymbolError);
  CHECK_THROWS_AS(cue_p(s, kToy + "p1", "http://nowhere/x"), UnknownSymbolError);
}

TEST_CASE("report rows sort by falling score then IRI") {
  SchemaContext s = toy();
  CueReport report = cue_report(s);

  REQUIRE(report.per_etype.size() == 2);
  CHECK(report.per_etype[0].etype == kToy + "e1");
  CHECK(report.per_etype[0].cue_e == 1.5);
  CHECK(report.per_etype[0].n_props == 2);
  CHECK(report.per_etype[1].etype == kToy + "e2");
  CHECK(report.cue_k == 2.0);
  REQUIRE(report.cue_kr.has_value());
  CHECK(*report.cue_kr == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(report.n_etypes == 2);
  CHECK(report.n_props_total == 2);
  CHECK(report.n_props_with_domain == 2);

  // Tie on the score: order falls back to the IRI.
  SchemaContext tie;
  tie.etypes = {"http://e/a", "http://e/b"};
  tie.properties = {"http://e/p", "http://e/q"};
  tie.incidence = {{"http://e/a", "http://e/p"}, {"http://e/b", "http://e/q"}};
  CueReport tied = cue_report(tie);
  CHECK(tied.per_etype[0].etype == "http://e/a");
  CHECK(tied.per_etype[1].etype == "http://e/b");
  CHECK(tied.per_etype[0].cue_e == tied.per_etype[1].cue_e);
}
