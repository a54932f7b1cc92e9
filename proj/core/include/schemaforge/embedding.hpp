#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "schemaforge/rdf.hpp"

namespace schemaforge {

enum class TripleMode { schema_incidence, raw_iri_triples };

/// Indexed triple list feeding the trainer. Entities and relations are
/// sorted by IRI; triples hold positions into those lists.
struct TripleIndex {
  std::vector<std::string> entities;
  std::vector<std::string> relations;
  std::vector<std::array<std::size_t, 3>> triples;  // (head, relation, tail)
};

TripleIndex prepare_triples(const Graph& graph, TripleMode mode);

struct TrainOptions {
  std::uint32_t dim = 8;
  std::uint32_t epochs = 100;
  double learning_rate = 0.01;
  double margin = 1.0;
  std::uint32_t negatives = 1;  // negative samples per positive
  std::uint64_t seed = 42;
};

/// Translational model: plausibility of (h,r,t) is -|v_h + v_r - v_t|.
struct EmbeddingModel {
  std::uint32_t dim = 0;
  std::vector<std::string> entities;
  std::vector<std::string> relations;
  std::vector<std::vector<double>> entity_vectors;
  std::vector<std::vector<double>> relation_vectors;
  TrainOptions hyperparams;
  std::vector<double> training_log;  // mean margin loss per epoch
};

EmbeddingModel train(const TripleIndex& index, const TrainOptions& options);

double score(const EmbeddingModel& model, const std::string& h, const std::string& r,
             const std::string& t);

struct RankReport {
  double mean_rank = 0.0;
  double hits_at_3 = 0.0;
};

/// Raw tail ranking: for each held-out (h,r,t), rank t among all entities
/// by descending score; ties broken by entity index.
RankReport evaluate_mean_rank(const EmbeddingModel& model,
                              const std::vector<std::array<std::size_t, 3>>& held_out);

std::string export_emb(const EmbeddingModel& model);
EmbeddingModel import_emb(const std::string& text);

/// Margin ranking loss for one positive/negative pair sharing a relation,
/// with analytic gradients per slot. Exposed for gradient verification.
struct LossGradient {
  double loss = 0.0;
  std::vector<double> head, relation, tail, neg_head, neg_tail;
};

LossGradient margin_loss_grad(const std::vector<double>& head,
                              const std::vector<double>& relation,
                              const std::vector<double>& tail,
                              const std::vector<double>& neg_head,
                              const std::vector<double>& neg_tail, double margin);

}  // namespace schemaforge
