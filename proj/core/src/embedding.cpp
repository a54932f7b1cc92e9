#include "schemaforge/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>
#include <string_view>

#include "schemaforge/errors.hpp"
#include "schemaforge/schema.hpp"

namespace schemaforge {

namespace {

constexpr std::string_view kHasProperty = "urn:schemaforge:hasProperty";

std::size_t index_of(const std::vector<std::string>& sorted, const std::string& value) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
  if (it == sorted.end() || *it != value) {
    throw UnknownSymbolError("symbol not indexed: " + value);
  }
  return static_cast<std::size_t>(it - sorted.begin());
}

// Uniform draw in [0,1) from the top 53 bits; avoids distribution objects,
// whose output is not pinned down across standard library versions.
double next_real01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

std::size_t next_index(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TripleIndex prepare_triples(const Graph& graph, TripleMode mode) {
  if (graph.triples.empty()) throw NoTriplesError("input graph is empty");

  std::set<std::string> entities, relations;
  std::set<std::array<std::string, 3>> raw;

  if (mode == TripleMode::raw_iri_triples) {
    for (const Triple& t : graph.triples) {
      if (t.subject.kind != TermKind::IRI || t.object.kind != TermKind::IRI) continue;
      raw.insert({t.subject.value, t.predicate.value, t.object.value});
      entities.insert(t.subject.value);
      entities.insert(t.object.value);
      relations.insert(t.predicate.value);
    }
  } else {
    SchemaContext schema;
    try {
      schema = extract_schema(graph, ExtractionConfig{});
    } catch (const EmptySchemaError&) {
      throw NoTriplesError("graph yields no schema-level triples");
    }
    for (const auto& [e, p] : schema.incidence) {
      raw.insert({e, std::string(kHasProperty), p});
      entities.insert(e);
      entities.insert(p);
      relations.insert(std::string(kHasProperty));
    }
    for (const Triple& t : graph.triples) {
      if (t.predicate.value == iri::rdfs_subclassof && t.subject.kind == TermKind::IRI &&
          t.object.kind == TermKind::IRI) {
        raw.insert({t.subject.value, std::string(iri::rdfs_subclassof), t.object.value});
        entities.insert(t.subject.value);
        entities.insert(t.object.value);
        relations.insert(std::string(iri::rdfs_subclassof));
      }
    }
  }

  if (raw.empty()) throw NoTriplesError("selected mode yields zero triples");

  TripleIndex index;
  index.entities.assign(entities.begin(), entities.end());
  index.relations.assign(relations.begin(), relations.end());
  for (const auto& [h, r, t] : raw) {
    index.triples.push_back(
        {index_of(index.entities, h), index_of(index.relations, r), index_of(index.entities, t)});
  }
  return index;
}

LossGradient margin_loss_grad(const std::vector<double>& head,
                              const std::vector<double>& relation,
                              const std::vector<double>& tail,
                              const std::vector<double>& neg_head,
                              const std::vector<double>& neg_tail, double margin) {
  std::size_t dim = head.size();
  std::vector<double> pos_diff(dim), neg_diff(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    pos_diff[i] = head[i] + relation[i] - tail[i];
    neg_diff[i] = neg_head[i] + relation[i] - neg_tail[i];
  }
  double d_pos = norm(pos_diff);
  double d_neg = norm(neg_diff);

  LossGradient g;
  g.head.assign(dim, 0.0);
  g.relation.assign(dim, 0.0);
  g.tail.assign(dim, 0.0);
  g.neg_head.assign(dim, 0.0);
  g.neg_tail.assign(dim, 0.0);

  double raw = margin + d_pos - d_neg;
  if (raw <= 0.0) return g;  // inactive margin: zero loss, zero gradient
  g.loss = raw;

  if (d_pos > 0.0) {
    for (std::size_t i = 0; i < dim; ++i) {
      double u = pos_diff[i] / d_pos;
      g.head[i] += u;
      g.relation[i] += u;
      g.tail[i] -= u;
    }
  }
  if (d_neg > 0.0) {
    for (std::size_t i = 0; i < dim; ++i) {
      double u = neg_diff[i] / d_neg;
      g.neg_head[i] -= u;
      g.relation[i] -= u;
      g.neg_tail[i] += u;
    }
  }
  return g;
}

EmbeddingModel train(const TripleIndex& index, const TrainOptions& options) {
  if (options.dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (options.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(options.margin > 0.0)) throw std::invalid_argument("margin must be > 0");
  if (!(options.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (options.negatives < 1) throw std::invalid_argument("need >= 1 negative per positive");
  if (index.triples.empty()) throw NoTriplesError("cannot train on an empty triple index");

  std::mt19937_64 rng(options.seed);
  std::size_t dim = options.dim;
  double bound = 6.0 / std::sqrt(static_cast<double>(dim));

  EmbeddingModel model;
  model.dim = options.dim;
  model.entities = index.entities;
  model.relations = index.relations;
  model.hyperparams = options;

  auto init_matrix = [&](std::size_t rows) {
    std::vector<std::vector<double>> m(rows, std::vector<double>(dim));
    for (auto& row : m) {
      for (double& x : row) x = -bound + 2.0 * bound * next_real01(rng);
    }
    return m;
  };
  model.entity_vectors = init_matrix(index.entities.size());
  model.relation_vectors = init_matrix(index.relations.size());

  // Relations are normalized once at initialization; entities are kept in
  // the unit ball throughout.
  for (auto& row : model.relation_vectors) {
    double n = norm(row);
    if (n > 0.0) {
      for (double& x : row) x /= n;
    }
  }
  auto project_entities = [&] {
    for (auto& row : model.entity_vectors) {
      double n = norm(row);
      if (n > 1.0) {
        for (double& x : row) x /= n;
      }
    }
  };
  project_entities();

  std::vector<std::size_t> order(index.triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t n_entities = index.entities.size();

  for (std::uint32_t epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[next_index(rng, i)]);
    }
    double loss_sum = 0.0;
    std::size_t samples = 0;
    for (std::size_t pos : order) {
      auto [h, r, t] = index.triples[pos];
      for (std::uint32_t k = 0; k < options.negatives; ++k) {
        bool corrupt_head = next_index(rng, 2) == 0;
        std::size_t nh = h, nt = t;
        if (corrupt_head) {
          do {
            nh = next_index(rng, n_entities);
          } while (nh == h && n_entities > 1);
        } else {
          do {
            nt = next_index(rng, n_entities);
          } while (nt == t && n_entities > 1);
        }
        LossGradient g =
            margin_loss_grad(model.entity_vectors[h], model.relation_vectors[r],
                             model.entity_vectors[t], model.entity_vectors[nh],
                             model.entity_vectors[nt], options.margin);
        loss_sum += g.loss;
        ++samples;
        if (g.loss > 0.0) {
          double lr = options.learning_rate;
          for (std::size_t d = 0; d < dim; ++d) {
            model.entity_vectors[h][d] -= lr * g.head[d];
            model.relation_vectors[r][d] -= lr * g.relation[d];
            model.entity_vectors[t][d] -= lr * g.tail[d];
            model.entity_vectors[nh][d] -= lr * g.neg_head[d];
            model.entity_vectors[nt][d] -= lr * g.neg_tail[d];
          }
        }
      }
    }
    project_entities();
    double mean = samples == 0 ? 0.0 : loss_sum / static_cast<double>(samples);
    if (!std::isfinite(mean)) throw DivergenceError("training loss became non-finite");
    model.training_log.push_back(mean);
  }
  return model;
}

double score(const EmbeddingModel& model, const std::string& h, const std::string& r,
             const std::string& t) {
  const auto& vh = model.entity_vectors[index_of(model.entities, h)];
  const auto& vr = model.relation_vectors[index_of(model.relations, r)];
  const auto& vt = model.entity_vectors[index_of(model.entities, t)];
  double s = 0.0;
  for (std::size_t i = 0; i < model.dim; ++i) {
    double d = vh[i] + vr[i] - vt[i];
    s += d * d;
  }
  return -std::sqrt(s);
}

RankReport evaluate_mean_rank(const EmbeddingModel& model,
                              const std::vector<std::array<std::size_t, 3>>& held_out) {
  RankReport report;
  if (held_out.empty()) return report;

  double rank_sum = 0.0;
  std::size_t hits = 0;
  for (const auto& [h, r, t] : held_out) {
    std::vector<double> scores(model.entities.size());
    for (std::size_t e = 0; e < model.entities.size(); ++e) {
      double s = 0.0;
      for (std::size_t i = 0; i < model.dim; ++i) {
        double d = model.entity_vectors[h][i] + model.relation_vectors[r][i] -
                   model.entity_vectors[e][i];
        s += d * d;
      }
      scores[e] = -std::sqrt(s);
    }
    std::size_t rank = 1;
    for (std::size_t e = 0; e < scores.size(); ++e) {
      if (scores[e] > scores[t] || (scores[e] == scores[t] && e < t)) ++rank;
    }
    rank_sum += static_cast<double>(rank);
    if (rank <= 3) ++hits;
  }
  report.mean_rank = rank_sum / static_cast<double>(held_out.size());
  report.hits_at_3 = static_cast<double>(hits) / static_cast<double>(held_out.size());
  return report;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

std::string export_emb(const EmbeddingModel& model) {
  std::string out = "emb v1 dim=" + std::to_string(model.dim) +
                    " entities=" + std::to_string(model.entities.size()) +
                    " relations=" + std::to_string(model.relations.size()) +
                    " seed=" + std::to_string(model.hyperparams.seed) + "\n";
  auto rows = [&](char tag, const std::vector<std::string>& names,
                  const std::vector<std::vector<double>>& vectors) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      out += tag;
      out += '\t';
      out += names[i];
      out += '\t';
      for (std::size_t d = 0; d < vectors[i].size(); ++d) {
        if (d > 0) out += ' ';
        append_double(out, vectors[i][d]);
      }
      out += '\n';
    }
  };
  rows('E', model.entities, model.entity_vectors);
  rows('R', model.relations, model.relation_vectors);
  return out;
}

EmbeddingModel import_emb(const std::string& text) {
  EmbeddingModel model;
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string_view {
    if (pos >= text.size()) return {};
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    return line;
  };

  std::string_view header = next_line();
  unsigned long long dim = 0, n_entities = 0, n_relations = 0, seed = 0;
  if (std::sscanf(std::string(header).c_str(), "emb v1 dim=%llu entities=%llu relations=%llu seed=%llu",
                  &dim, &n_entities, &n_relations, &seed) != 4) {
    throw ValidationError("malformed EMB header");
  }
  model.dim = static_cast<std::uint32_t>(dim);
  model.hyperparams.seed = seed;

  auto parse_row = [&](std::string_view line, char expect_tag, std::vector<std::string>& names,
                       std::vector<std::vector<double>>& vectors) {
    if (line.size() < 2 || line[0] != expect_tag || line[1] != '\t') {
      throw ValidationError("malformed EMB row");
    }
    std::size_t iri_end = line.find('\t', 2);
    if (iri_end == std::string_view::npos) throw ValidationError("malformed EMB row");
    names.emplace_back(line.substr(2, iri_end - 2));
    std::vector<double> vec;
    const char* p = line.data() + iri_end + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      double v = 0.0;
      auto [np, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw ValidationError("malformed EMB value");
      vec.push_back(v);
      p = np;
      if (p < end && *p == ' ') ++p;
    }
    if (vec.size() != model.dim) throw ValidationError("EMB row width disagrees with header");
    vectors.push_back(std::move(vec));
  };

  for (unsigned long long i = 0; i < n_entities; ++i) {
    parse_row(next_line(), 'E', model.entities, model.entity_vectors);
  }
  for (unsigned long long i = 0; i < n_relations; ++i) {
    parse_row(next_line(), 'R', model.relations, model.relation_vectors);
  }
  return model;
}

}  // namespace schemaforge
