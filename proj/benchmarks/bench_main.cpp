#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "schemaforge/cues.hpp"
#include "schemaforge/embedding.hpp"
#include "schemaforge/fca.hpp"
#include "schemaforge/intersections.hpp"
#include "schemaforge/rdf.hpp"
#include "schemaforge/schema.hpp"

using namespace schemaforge;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(SF_FIXTURES_DIR) + "/" + rel, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::string& schema_org_text() {
  static const std::string text = slurp("snapshots/schema_org.ttl");
  return text;
}

const SchemaContext& schema_org_schema() {
  static const SchemaContext schema = extract_schema(parse_turtle(schema_org_text()));
  return schema;
}

}  // namespace

static void BM_ParseTurtle(benchmark::State& state) {
  const std::string& text = schema_org_text();
  for (auto _ : state) {
    Graph g = parse_turtle(text);
    benchmark::DoNotOptimize(g.triples.size());
  }
}
BENCHMARK(BM_ParseTurtle);

static void BM_CueReport(benchmark::State& state) {
  const SchemaContext& schema = schema_org_schema();
  for (auto _ : state) {
    CueReport report = cue_report(schema);
    benchmark::DoNotOptimize(report.cue_k);
  }
}
BENCHMARK(BM_CueReport);

static void BM_ComputeRegions(benchmark::State& state) {
  const SchemaContext& schema = schema_org_schema();
  FormalContext context = build_context(schema);
  std::vector<std::string> selected(schema.etypes.begin(),
                                    schema.etypes.begin() + std::min<std::size_t>(
                                                                8, schema.etypes.size()));
  for (auto _ : state) {
    RegionTable table = compute_regions(context, selected);
    benchmark::DoNotOptimize(table.regions.size());
  }
}
BENCHMARK(BM_ComputeRegions);

static void BM_TrainToy(benchmark::State& state) {
  TripleIndex index =
      prepare_triples(parse_turtle(slurp("toy1.ttl")), TripleMode::schema_incidence);
  TrainOptions options;
  options.dim = 8;
  options.epochs = 20;
  for (auto _ : state) {
    EmbeddingModel model = train(index, options);
    benchmark::DoNotOptimize(model.training_log.back());
  }
}
BENCHMARK(BM_TrainToy);

BENCHMARK_MAIN();
