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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ripple/ids.hpp"
#include "ripple/kg.hpp"

namespace ripple {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Probabilities are kept inside [kProbabilityClamp, 1 - kProbabilityClamp]
// so the cross-entropy stays finite.
inline constexpr double kProbabilityClamp = 1e-12;

struct Hyperparams {
  int dim = 16;            // d
  int hops = 2;            // H
  int ripple_size = 32;    // S, triples sampled per hop
  double l2_weight = 1e-7; // lambda1
  double kge_weight = 0.01;// lambda2
  double lr = 0.02;        // eta
  int batch_size = 0;      // required, no default
  int epochs = -1;         // required, no default
  std::uint64_t seed = 0;

  // Throws DomainError naming the first invalid field.
  void validate() const;
};

// Entity table (entity_count x d), item table (item_count x d) and one d x d
// matrix per relation.
struct ModelParams {
  RowMatrix entity;
  RowMatrix item;
  std::vector<Matrix> relation;

  int dim() const { return static_cast<int>(entity.cols()); }
  std::size_t entity_count() const { return static_cast<std::size_t>(entity.rows()); }
  std::size_t item_count() const { return static_cast<std::size_t>(item.rows()); }
  std::size_t relation_count() const { return relation.size(); }
  bool all_finite() const;

  static ModelParams zeros(std::size_t entity_count, std::size_t item_count,
                           std::size_t relation_count, int dim);

  // Embeddings uniform in [-0.5/d, 0.5/d]; relation matrices Glorot-uniform,
  // i.e. uniform in [-sqrt(6/(2d)), sqrt(6/(2d))].
  static ModelParams initialize(std::size_t entity_count, std::size_t item_count,
                                std::size_t relation_count, int dim,
                                std::uint64_t rng_seed);
};

bool operator==(const ModelParams& a, const ModelParams& b);

// Everything the backward pass needs from one forward pass.
struct ForwardTrace {
  struct Hop {
    Vector probe;      // item embedding at hop 1, previous response after
    Matrix projected;  // d x S, column i = R_i h_i
    Vector logits;     // probe . R_i h_i
    Vector probs;      // softmax(logits)
    Vector response;   // sum_i p_i t_i
  };
  std::vector<Hop> hops;
  Vector item;
  Vector user;           // sum of responses
  double logit = 0.0;    // user . item
  double prob = 0.5;     // clamped sigmoid(logit)
  bool clamped = false;  // the clamp was active
};

// Max-subtracted softmax. Adding a constant to every logit leaves the result
// bit-identical.
Vector softmax(const Vector& logits);

// Logistic function clamped to [kProbabilityClamp, 1 - kProbabilityClamp].
double clamped_sigmoid(double z);

// Unnormalized relevance logits probe^T R_i h_i over one hop of triples.
// Throws NumericError on a non-finite probe.
Vector relevance_logits(const Vector& probe, std::span<const Triple> hop,
                        const ModelParams& params);

// softmax(relevance_logits(...))
Vector relevance(const Vector& probe, std::span<const Triple> hop,
                 const ModelParams& params);

// Full preference propagation for one (ripple sets, item) pair.
ForwardTrace propagate(const RippleSets& ripple, ItemId item,
                       const ModelParams& params);

inline double predict(const ForwardTrace& trace) { return trace.prob; }

// Convenience: predict(propagate(...)).
double predict(const RippleSets& ripple, ItemId item, const ModelParams& params);

// h^T R_r t
double kge_score(EntityId h, RelationId r, EntityId t, const ModelParams& params);

struct LabeledExample {
  const RippleSets* ripple = nullptr;
  ItemId item;
  int label = 0;
};

struct LabeledTriple {
  Triple triple;
  int indicator = 0;  // 1 for a true triple, 0 for a corrupted one
};

struct LossParts {
  double ctr = 0.0;  // summed cross-entropy
  double kge = 0.0;  // (lambda2/2) sum (I - h^T R t)^2
  double reg = 0.0;  // (lambda1/2) squared norm of touched parameters

  double total() const { return ctr + kge + reg; }
};

// Sparse gradient: only touched rows and matrices are stored; everything
// else is implicitly zero. Ordered maps keep update order reproducible.
struct Gradients {
  int dim = 0;
  std::map<std::uint32_t, Vector> entity;
  std::map<std::uint32_t, Vector> item;
  std::map<std::uint32_t, Matrix> relation;

  Vector entity_row(EntityId e) const;
  Vector item_row(ItemId v) const;
  Matrix relation_matrix(RelationId r) const;
  Gradients& operator*=(double s);
};

struct LossAndGradients {
  LossParts loss;
  Gradients grad;
};

// Joint objective over one interaction minibatch and one triple minibatch.
// Both batches must be non-empty (DomainError otherwise).
LossParts loss(std::span<const LabeledExample> interactions,
               std::span<const LabeledTriple> triples,
               const ModelParams& params, const Hyperparams& hp);

// Exact gradient of loss() by reverse-mode chain rule.
Gradients gradients(std::span<const LabeledExample> interactions,
                    std::span<const LabeledTriple> triples,
                    const ModelParams& params, const Hyperparams& hp);

LossAndGradients loss_and_gradients(std::span<const LabeledExample> interactions,
                                    std::span<const LabeledTriple> triples,
                                    const ModelParams& params,
                                    const Hyperparams& hp);

// params -= step * grad over the touched entries.
void apply_gradients(ModelParams& params, const Gradients& grad, double step);

}  // namespace ripple
