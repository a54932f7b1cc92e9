#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "schemaforge/embedding.hpp"
#include "schemaforge/errors.hpp"
#include "schemaforge/rdf.hpp"

using namespace schemaforge;
using testutil::read_fixture;

namespace {

const std::string kHasProp = "urn:schemaforge:hasProperty";

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (double& x : v) {
    x = -1.0 + 2.0 * (static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0));
  }
  return v;
}

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

EmbeddingModel toy_model() {
  EmbeddingModel model;
  model.dim = 2;
  model.entities = {"urn:a", "urn:b"};
  model.relations = {"urn:r"};
  model.entity_vectors = {{1.0, 0.0}, {0.0, 0.0}};
  model.relation_vectors = {{0.0, 1.0}};
  return model;
}

}  // namespace

TEST_CASE("triple preparation from the incidence") {
  Graph g = parse_turtle(read_fixture("toy1.ttl"));
  TripleIndex index = prepare_triples(g, TripleMode::schema_incidence);

  CHECK(index.entities ==
        std::vector<std::string>{"http://example.org/toy1#e1", "http://example.org/toy1#e2",
                                 "http://example.org/toy1#p1", "http://example.org/toy1#p2"});
  CHECK(index.relations == std::vector<std::string>{kHasProp});
  CHECK(index.triples == std::vector<std::array<std::size_t, 3>>{
                             {0, 0, 2}, {0, 0, 3}, {1, 0, 3}});
}

TEST_CASE("subclass links ride along in incidence mode") {
  Graph g = parse_turtle(read_fixture("snapshots/foaf.ttl"));
  TripleIndex index = prepare_triples(g, TripleMode::schema_incidence);

  REQUIRE(index.relations.size() == 2);
  CHECK(index.relations[0] == "http://www.w3.org/2000/01/rdf-schema#subClassOf");
  CHECK(index.relations[1] == kHasProp);

  // 36 incidence pairs plus 5 subclass statements.
  CHECK(index.triples.size() == 41);
}

TEST_CASE("raw mode keeps IRI-to-IRI statements only") {
  Graph g = parse_turtle(
      "@prefix ex: <http://e/> .\n"
      "ex:a ex:p ex:b .\n"
      "ex:a ex:q \"literal\" .\n"
      "ex:a ex:q [ ex:r ex:c ] .\n"
      "ex:b ex:p ex:c .\n");
  TripleIndex index = prepare_triples(g, TripleMode::raw_iri_triples);

  // Statements touching a literal or a blank node on either end drop out.
  CHECK(index.entities == std::vector<std::string>{"http://e/a", "http://e/b", "http://e/c"});
  CHECK(index.relations == std::vector<std::string>{"http://e/p"});
  CHECK(index.triples.size() == 2);
}

TEST_CASE("triple preparation refuses empty yields") {
  CHECK_THROWS_AS(prepare_triples(Graph{}, TripleMode::raw_iri_triples), NoTriplesError);
  Graph literals_only = parse_turtle("@prefix ex: <http://e/> . ex:a ex:p \"x\" .");
  CHECK_THROWS_AS(prepare_triples(literals_only, TripleMode::raw_iri_triples), NoTriplesError);
  CHECK_THROWS_AS(prepare_triples(literals_only, TripleMode::schema_incidence), NoTriplesError);
}

TEST_CASE("score is the negated translation distance") {
  EmbeddingModel model = toy_model();
  CHECK(score(model, "urn:a", "urn:r", "urn:b") == doctest::Approx(-std::sqrt(2.0)));
  CHECK(score(model, "urn:b", "urn:r", "urn:b") == doctest::Approx(-1.0));
  CHECK_THROWS_AS(score(model, "urn:zzz", "urn:r", "urn:b"), UnknownSymbolError);
  CHECK_THROWS_AS(score(model, "urn:a", "urn:zzz", "urn:b"), UnknownSymbolError);
}

TEST_CASE("inactive margin yields zero loss and zero gradients") {
  // Positive pair at distance 0, negative far away: margin 1 is inactive.
  std::vector<double> h = {0.0, 0.0}, r = {1.0, 0.0}, t = {1.0, 0.0};
  std::vector<double> nh = {0.0, 0.0}, nt = {9.0, 9.0};
  LossGradient g = margin_loss_grad(h, r, t, nh, nt, 1.0);
  CHECK(g.loss == 0.0);
  for (const auto* grad : {&g.head, &g.relation, &g.tail, &g.neg_head, &g.neg_tail}) {
    for (double x : *grad) CHECK(x == 0.0);
  }
}

TEST_CASE("analytic gradients match central differences") {
  const std::size_t dim = 4;
  const double step = 1e-5;
  const double margin = 1.0;
  std::mt19937_64 rng(4242);

  int verified = 0;
  while (verified < 12) {
    std::vector<double> h = random_vector(rng, dim), r = random_vector(rng, dim),
                        t = random_vector(rng, dim), nh = random_vector(rng, dim),
                        nt = random_vector(rng, dim);
    LossGradient g = margin_loss_grad(h, r, t, nh, nt, margin);
    // Stay away from the hinge kink and from zero-distance cusps.
    if (g.loss < 0.05) continue;
    ++verified;

    struct Slot {
      std::vector<double>* vec;
      const std::vector<double>* grad;
    };
    std::vector<Slot> slots = {{&h, &g.head}, {&r, &g.relation}, {&t, &g.tail},
                               {&nh, &g.neg_head}, {&nt, &g.neg_tail}};
    for (Slot& slot : slots) {
      for (std::size_t i = 0; i < dim; ++i) {
        double saved = (*slot.vec)[i];
        (*slot.vec)[i] = saved + step;
        double up = margin_loss_grad(h, r, t, nh, nt, margin).loss;
        (*slot.vec)[i] = saved - step;
        double down = margin_loss_grad(h, r, t, nh, nt, margin).loss;
        (*slot.vec)[i] = saved;

        double fd = (up - down) / (2.0 * step);
        double analytic = (*slot.grad)[i];
        CHECK(std::fabs(analytic - fd) <= 1e-4 * std::max(1.0, std::fabs(analytic)));
      }
    }
  }
}

TEST_CASE("rank over all candidate tails is a permutation") {
  // For a fixed head and relation, ranking every entity as the candidate
  // tail must assign each rank 1..N exactly once, for any vectors.
  const std::size_t n = 10;
  std::mt19937_64 rng(555);
  for (int round = 0; round < 20; ++round) {
    EmbeddingModel model;
    model.dim = 3;
    for (std::size_t e = 0; e < n; ++e) {
      model.entities.push_back("urn:e" + std::to_string(e));
      model.entity_vectors.push_back(random_vector(rng, model.dim));
    }
    model.relations = {"urn:r"};
    model.relation_vectors = {random_vector(rng, model.dim)};

    std::vector<std::array<std::size_t, 3>> held_out;
    for (std::size_t t = 0; t < n; ++t) held_out.push_back({0, 0, t});
    RankReport report = evaluate_mean_rank(model, held_out);
    CHECK(report.mean_rank == doctest::Approx((n + 1) / 2.0).epsilon(1e-12));
    CHECK(report.hits_at_3 == doctest::Approx(3.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("rank of a random tail is uniform on average") {
  const std::size_t n = 10;
  double total = 0.0;
  int seeds = 300;
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(1000 + s);
    EmbeddingModel model;
    model.dim = 4;
    for (std::size_t e = 0; e < n; ++e) {
      model.entities.push_back("urn:e" + std::to_string(e));
      model.entity_vectors.push_back(random_vector(rng, model.dim));
    }
    model.relations = {"urn:r"};
    model.relation_vectors = {random_vector(rng, model.dim)};
    std::size_t t = rng() % n;
    RankReport report = evaluate_mean_rank(model, {{rng() % n, 0, t}});
    total += report.mean_rank;
  }
  double average = total / seeds;
  double expected = (n + 1) / 2.0;
  CHECK(average > expected * 0.85);
  CHECK(average < expected * 1.15);
}

TEST_CASE("a perfectly placed tail ranks first") {
  EmbeddingModel model;
  model.dim = 2;
  model.entities = {"urn:a", "urn:b", "urn:c"};
  model.entity_vectors = {{0.0, 0.0}, {1.0, 0.0}, {5.0, 5.0}};
  model.relations = {"urn:r"};
  model.relation_vectors = {{1.0, 0.0}};  // a + r lands exactly on b
  RankReport report = evaluate_mean_rank(model, {{0, 0, 1}});
  CHECK(report.mean_rank == 1.0);
  CHECK(report.hits_at_3 == 1.0);
}

TEST_CASE("training is deterministic per seed") {
  TripleIndex index = prepare_triples(parse_turtle(read_fixture("toy1.ttl")),
                                      TripleMode::schema_incidence);
  TrainOptions options;
  options.dim = 8;
  options.epochs = 20;
  options.seed = 123;

  EmbeddingModel a = train(index, options);
  EmbeddingModel b = train(index, options);
  CHECK(export_emb(a) == export_emb(b));
  CHECK(a.training_log == b.training_log);
  CHECK(a.training_log.size() == options.epochs);

  options.seed = 124;
  EmbeddingModel c = train(index, options);
  CHECK(export_emb(a) != export_emb(c));
}

TEST_CASE("entities stay inside the unit ball") {
  TripleIndex index = prepare_triples(parse_turtle(read_fixture("snapshots/bbc_sport.ttl")),
                                      TripleMode::schema_incidence);
  TrainOptions options;
  options.dim = 6;
  options.epochs = 30;
  EmbeddingModel model = train(index, options);
  for (const auto& v : model.entity_vectors) {
    CHECK(vec_norm(v) <= 1.0 + 1e-12);
  }
  for (double loss : model.training_log) CHECK(std::isfinite(loss));
}

TEST_CASE("training rejects bad hyperparameters") {
  TripleIndex index = prepare_triples(parse_turtle(read_fixture("toy1.ttl")),
                                      TripleMode::schema_incidence);
  TrainOptions options;

  options.dim = 0;
  CHECK_THROWS_AS(train(index, options), std::invalid_argument);
  options.dim = 4;
  options.epochs = 0;
  CHECK_THROWS_AS(train(index, options), std::invalid_argument);
  options.epochs = 1;
  options.margin = 0.0;
  CHECK_THROWS_AS(train(index, options), std::invalid_argument);
  options.margin = 1.0;
  options.learning_rate = 0.0;
  CHECK_THROWS_AS(train(index, options), std::invalid_argument);
  options.learning_rate = 0.01;
  options.negatives = 0;
  CHECK_THROWS_AS(train(index, options), std::invalid_argument);

  CHECK_THROWS_AS(train(TripleIndex{}, TrainOptions{}), NoTriplesError);
}

TEST_CASE("a runaway learning rate is reported as divergence") {
  TripleIndex index;
  index.entities = {"urn:a", "urn:b", "urn:c"};
  index.relations = {"urn:r"};
  index.triples = {{0, 0, 1}, {1, 0, 2}};

  TrainOptions options;
  options.dim = 2;
  options.epochs = 3;
  options.margin = 10.0;  // keeps the hinge active from the first step
  options.learning_rate = 1e308;
  CHECK_THROWS_AS(train(index, options), DivergenceError);
}

TEST_CASE("embedding text round trips bit for bit") {
  TripleIndex index = prepare_triples(parse_turtle(read_fixture("toy1.ttl")),
                                      TripleMode::schema_incidence);
  TrainOptions options;
  options.dim = 5;
  options.epochs = 15;
  options.seed = 7;
  EmbeddingModel model = train(index, options);

  std::string text = export_emb(model);
  CHECK(text.starts_with("emb v1 dim=5 entities=4 relations=1 seed=7\n"));

  EmbeddingModel back = import_emb(text);
  CHECK(back.dim == model.dim);
  CHECK(back.entities == model.entities);
  CHECK(back.relations == model.relations);
  CHECK(back.entity_vectors == model.entity_vectors);      // exact doubles
  CHECK(back.relation_vectors == model.relation_vectors);
  CHECK(export_emb(back) == text);

  CHECK(score(back, model.entities[0], model.relations[0], model.entities[2]) ==
        score(model, model.entities[0], model.relations[0], model.entities[2]));
}

TEST_CASE("embedding import rejects corrupt text") {
  CHECK_THROWS_AS(import_emb(""), ValidationError);
  CHECK_THROWS_AS(import_emb("garbage\n"), ValidationError);
  CHECK_THROWS_AS(import_emb("emb v2 dim=2 entities=1 relations=0 seed=0\nE\tu\t1 2\n"),
                  ValidationError);
  CHECK_THROWS_AS(import_emb("emb v1 dim=2 entities=1 relations=0 seed=0\nR\tu\t1 2\n"),
                  ValidationError);  // wrong tag
  CHECK_THROWS_AS(import_emb("emb v1 dim=2 entities=1 relations=0 seed=0\nE\tu\t1\n"),
                  ValidationError);  // width mismatch
  CHECK_THROWS_AS(import_emb("emb v1 dim=2 entities=1 relations=0 seed=0\nE\tu\t1 x\n"),
                  ValidationError);  // non-numeric
  CHECK_THROWS_AS(import_emb("emb v1 dim=2 entities=2 relations=0 seed=0\nE\tu\t1 2\n"),
                  ValidationError);  // truncated
}
