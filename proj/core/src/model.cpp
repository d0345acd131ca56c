// Copyright 2026 The Ripple Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ripple/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "ripple/error.hpp"

namespace ripple {

namespace {

void check_item(const ModelParams& params, ItemId v) {
  if (v.index() >= params.item_count()) {
    throw DomainError("item id " + std::to_string(v.value) + " out of range");
  }
}

void check_triple(const ModelParams& params, const Triple& t) {
  if (t.head.index() >= params.entity_count() ||
      t.tail.index() >= params.entity_count() ||
      t.relation.index() >= params.relation_count()) {
    throw DomainError("triple references an id outside the parameter tables");
  }
}

void accumulate(std::map<std::uint32_t, Vector>& into, std::uint32_t id,
                const Vector& g) {
  auto [it, inserted] = into.try_emplace(id, g);
  if (!inserted) it->second += g;
}

void accumulate(std::map<std::uint32_t, Matrix>& into, std::uint32_t id,
                const Matrix& g) {
  auto [it, inserted] = into.try_emplace(id, g);
  if (!inserted) it->second += g;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Cross-entropy of a clamped probability.
double cross_entropy(double prob, int label) {
  return label == 1 ? -std::log(prob) : -std::log1p(-prob);
}

// Parameters read by a batch; each is regularized once per batch.
struct TouchedSets {
  std::set<std::uint32_t> entities;
  std::set<std::uint32_t> items;
  std::set<std::uint32_t> relations;

  void add(const Triple& t) {
    entities.insert(t.head.value);
    entities.insert(t.tail.value);
    relations.insert(t.relation.value);
  }
};

void check_batches(std::span<const LabeledExample> interactions,
                   std::span<const LabeledTriple> triples) {
  if (interactions.empty()) throw DomainError("empty interaction batch");
  if (triples.empty()) throw DomainError("empty triple batch");
  for (const auto& ex : interactions) {
    if (ex.ripple == nullptr) throw DomainError("example without ripple sets");
    if (ex.label != 0 && ex.label != 1) throw DomainError("label must be 0 or 1");
  }
  for (const auto& lt : triples) {
    if (lt.indicator != 0 && lt.indicator != 1) {
      throw DomainError("triple indicator must be 0 or 1");
    }
  }
}

// Reverse pass for one interaction; adds into `grad`.
void backprop_example(const LabeledExample& ex, const ForwardTrace& trace,
                      const ModelParams& params, Gradients& grad) {
  const RippleSets& ripple = *ex.ripple;
  const double g_logit_out =
      trace.clamped ? 0.0 : trace.prob - static_cast<double>(ex.label);
  const Vector g_user = g_logit_out * trace.item;
  Vector g_item = g_logit_out * trace.user;
  Vector g_response = g_user;

  for (std::size_t k = trace.hops.size(); k-- > 0;) {
    const auto& hop = trace.hops[k];
    const auto& triples = ripple.hops[k];
    const std::size_t size = triples.size();

    Vector g_probs(static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < size; ++i) {
      const auto tail = params.entity.row(triples[i].tail.index()).transpose();
      g_probs[static_cast<Eigen::Index>(i)] = tail.dot(g_response);
      accumulate(grad.entity, triples[i].tail.value,
                 hop.probs[static_cast<Eigen::Index>(i)] * g_response);
    }
    // softmax Jacobian: dL/dl_i = p_i (dL/dp_i - sum_j p_j dL/dp_j)
    const double mean = hop.probs.dot(g_probs);
    const Vector g_logits =
        hop.probs.cwiseProduct((g_probs.array() - mean).matrix());

    const Vector g_probe = hop.projected * g_logits;
    for (std::size_t i = 0; i < size; ++i) {
      const double gl = g_logits[static_cast<Eigen::Index>(i)];
      const Triple& t = triples[i];
      const auto head = params.entity.row(t.head.index()).transpose();
      accumulate(grad.relation, t.relation.value,
                 (gl * hop.probe) * head.transpose());
      accumulate(grad.entity, t.head.value,
                 gl * (params.relation[t.relation.index()].transpose() * hop.probe));
    }
    if (k > 0) {
      // response k-1 feeds both the user sum and the probe of hop k
      g_response = g_user + g_probe;
    } else {
      g_item += g_probe;
    }
  }
  accumulate(grad.item, ex.item.value, g_item);
}

LossAndGradients evaluate(std::span<const LabeledExample> interactions,
                          std::span<const LabeledTriple> triples,
                          const ModelParams& params, const Hyperparams& hp,
                          bool want_grad) {
  check_batches(interactions, triples);
  LossAndGradients out;
  out.grad.dim = params.dim();
  TouchedSets touched;

  for (const auto& ex : interactions) {
    const ForwardTrace trace = propagate(*ex.ripple, ex.item, params);
    out.loss.ctr += cross_entropy(trace.prob, ex.label);
    touched.items.insert(ex.item.value);
    for (const auto& hop : ex.ripple->hops) {
      for (const auto& t : hop) touched.add(t);
    }
    if (want_grad) backprop_example(ex, trace, params, out.grad);
  }

  for (const auto& lt : triples) {
    const Triple& t = lt.triple;
    check_triple(params, t);
    touched.add(t);
    const auto h = params.entity.row(t.head.index()).transpose();
    const auto tail = params.entity.row(t.tail.index()).transpose();
    const Matrix& rel = params.relation[t.relation.index()];
    const Vector rt = rel * tail;
    const double residual = static_cast<double>(lt.indicator) - h.dot(rt);
    out.loss.kge += 0.5 * hp.kge_weight * residual * residual;
    if (want_grad) {
      const double g = -hp.kge_weight * residual;
      accumulate(out.grad.entity, t.head.value, g * rt);
      accumulate(out.grad.entity, t.tail.value, g * (rel.transpose() * h));
      accumulate(out.grad.relation, t.relation.value, g * (h * tail.transpose()));
    }
  }

  double sq = 0.0;
  for (const auto e : touched.entities) sq += params.entity.row(e).squaredNorm();
  for (const auto v : touched.items) sq += params.item.row(v).squaredNorm();
  for (const auto r : touched.relations) sq += params.relation[r].squaredNorm();
  out.loss.reg = 0.5 * hp.l2_weight * sq;
  if (want_grad && hp.l2_weight != 0.0) {
    for (const auto e : touched.entities) {
      accumulate(out.grad.entity, e, hp.l2_weight * params.entity.row(e).transpose());
    }
    for (const auto v : touched.items) {
      accumulate(out.grad.item, v, hp.l2_weight * params.item.row(v).transpose());
    }
    for (const auto r : touched.relations) {
      accumulate(out.grad.relation, r, hp.l2_weight * params.relation[r]);
    }
  }
  return out;
}

}  // namespace

void Hyperparams::validate() const {
  if (dim < 1) throw DomainError("dim must be >= 1");
  if (hops < 1) throw DomainError("hops must be >= 1");
  if (ripple_size < 1) throw DomainError("ripple_size must be >= 1");
  if (!(l2_weight >= 0.0)) throw DomainError("l2_weight must be >= 0");
  if (!(kge_weight >= 0.0)) throw DomainError("kge_weight must be >= 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw DomainError("lr must be > 0");
  if (batch_size < 1) throw DomainError("batch_size must be set and >= 1");
  if (epochs < 0) throw DomainError("epochs must be set and >= 0");
}

bool ModelParams::all_finite() const {
  if (!entity.allFinite() || !item.allFinite()) return false;
  for (const auto& r : relation) {
    if (!r.allFinite()) return false;
  }
  return true;
}

ModelParams ModelParams::zeros(std::size_t entity_count, std::size_t item_count,
                               std::size_t relation_count, int dim) {
  if (dim < 1) throw DomainError("dim must be >= 1");
  ModelParams p;
  p.entity = RowMatrix::Zero(static_cast<Eigen::Index>(entity_count), dim);
  p.item = RowMatrix::Zero(static_cast<Eigen::Index>(item_count), dim);
  p.relation.assign(relation_count, Matrix::Zero(dim, dim));
  return p;
}

ModelParams ModelParams::initialize(std::size_t entity_count,
                                    std::size_t item_count,
                                    std::size_t relation_count, int dim,
                                    std::uint64_t rng_seed) {
  ModelParams p = zeros(entity_count, item_count, relation_count, dim);
  std::mt19937_64 rng(rng_seed);
  const double emb = 0.5 / dim;
  std::uniform_real_distribution<double> emb_dist(-emb, emb);
  const double glorot = std::sqrt(6.0 / (2.0 * dim));
  std::uniform_real_distribution<double> rel_dist(-glorot, glorot);
  for (Eigen::Index i = 0; i < p.entity.rows(); ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) p.entity(i, j) = emb_dist(rng);
  }
  for (Eigen::Index i = 0; i < p.item.rows(); ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) p.item(i, j) = emb_dist(rng);
  }
  for (auto& r : p.relation) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) r(i, j) = rel_dist(rng);
    }
  }
  return p;
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  if (a.entity.rows() != b.entity.rows() || a.entity.cols() != b.entity.cols() ||
      a.item.rows() != b.item.rows() || a.item.cols() != b.item.cols() ||
      a.relation.size() != b.relation.size()) {
    return false;
  }
  if (a.entity != b.entity || a.item != b.item) return false;
  for (std::size_t r = 0; r < a.relation.size(); ++r) {
    if (a.relation[r] != b.relation[r]) return false;
  }
  return true;
}

Vector softmax(const Vector& logits) {
  if (logits.size() == 0) return logits;
  const double m = logits.maxCoeff();
  Vector e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

double clamped_sigmoid(double z) {
  if (std::isnan(z)) throw NumericError("sigmoid of NaN");
  return std::clamp(sigmoid(z), kProbabilityClamp, 1.0 - kProbabilityClamp);
}

Vector relevance_logits(const Vector& probe, std::span<const Triple> hop,
                        const ModelParams& params) {
  if (!probe.allFinite()) throw NumericError("non-finite relevance probe");
  Vector logits(static_cast<Eigen::Index>(hop.size()));
  for (std::size_t i = 0; i < hop.size(); ++i) {
    check_triple(params, hop[i]);
    const auto head = params.entity.row(hop[i].head.index()).transpose();
    logits[static_cast<Eigen::Index>(i)] =
        probe.dot(params.relation[hop[i].relation.index()] * head);
  }
  return logits;
}

Vector relevance(const Vector& probe, std::span<const Triple> hop,
                 const ModelParams& params) {
  return softmax(relevance_logits(probe, hop, params));
}

ForwardTrace propagate(const RippleSets& ripple, ItemId item,
                       const ModelParams& params) {
  check_item(params, item);
  if (ripple.hops.empty()) throw DomainError("ripple sets have no hops");
  const int d = params.dim();
  ForwardTrace trace;
  trace.item = params.item.row(item.index()).transpose();
  trace.user = Vector::Zero(d);
  trace.hops.reserve(ripple.hops.size());

  Vector probe = trace.item;
  for (const auto& triples : ripple.hops) {
    if (triples.empty()) throw DomainError("empty ripple hop");
    if (!probe.allFinite()) throw NumericError("non-finite relevance probe");
    ForwardTrace::Hop hop;
    const auto size = static_cast<Eigen::Index>(triples.size());
    hop.projected.resize(d, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      const Triple& t = triples[static_cast<std::size_t>(i)];
      check_triple(params, t);
      hop.projected.col(i) = params.relation[t.relation.index()] *
                             params.entity.row(t.head.index()).transpose();
    }
    hop.logits = hop.projected.transpose() * probe;
    hop.probs = softmax(hop.logits);
    hop.response = Vector::Zero(d);
    for (Eigen::Index i = 0; i < size; ++i) {
      hop.response += hop.probs[i] *
          params.entity.row(triples[static_cast<std::size_t>(i)].tail.index()).transpose();
    }
    hop.probe = std::move(probe);
    trace.user += hop.response;
    probe = hop.response;
    trace.hops.push_back(std::move(hop));
  }

  trace.logit = trace.user.dot(trace.item);
  trace.prob = clamped_sigmoid(trace.logit);
  trace.clamped = sigmoid(trace.logit) != trace.prob;
  return trace;
}

double predict(const RippleSets& ripple, ItemId item, const ModelParams& params) {
  return propagate(ripple, item, params).prob;
}

double kge_score(EntityId h, RelationId r, EntityId t, const ModelParams& params) {
  check_triple(params, Triple{h, r, t});
  return params.entity.row(h.index()).dot(
      (params.relation[r.index()] * params.entity.row(t.index()).transpose())
          .transpose());
}

Vector Gradients::entity_row(EntityId e) const {
  auto it = entity.find(e.value);
  return it == entity.end() ? Vector::Zero(dim) : it->second;
}

Vector Gradients::item_row(ItemId v) const {
  auto it = item.find(v.value);
  return it == item.end() ? Vector::Zero(dim) : it->second;
}

Matrix Gradients::relation_matrix(RelationId r) const {
  auto it = relation.find(r.value);
  return it == relation.end() ? Matrix::Zero(dim, dim) : it->second;
}

Gradients& Gradients::operator*=(double s) {
  for (auto& [id, g] : entity) g *= s;
  for (auto& [id, g] : item) g *= s;
  for (auto& [id, g] : relation) g *= s;
  return *this;
}

LossParts loss(std::span<const LabeledExample> interactions,
               std::span<const LabeledTriple> triples,
               const ModelParams& params, const Hyperparams& hp) {
  return evaluate(interactions, triples, params, hp, false).loss;
}

Gradients gradients(std::span<const LabeledExample> interactions,
                    std::span<const LabeledTriple> triples,
                    const ModelParams& params, const Hyperparams& hp) {
  return evaluate(interactions, triples, params, hp, true).grad;
}

LossAndGradients loss_and_gradients(std::span<const LabeledExample> interactions,
                                    std::span<const LabeledTriple> triples,
                                    const ModelParams& params,
                                    const Hyperparams& hp) {
  return evaluate(interactions, triples, params, hp, true);
}

void apply_gradients(ModelParams& params, const Gradients& grad, double step) {
  for (const auto& [id, g] : grad.entity) {
    params.entity.row(id) -= step * g.transpose();
  }
  for (const auto& [id, g] : grad.item) {
    params.item.row(id) -= step * g.transpose();
  }
  for (const auto& [id, g] : grad.relation) params.relation[id] -= step * g;
}

}  // namespace ripple
