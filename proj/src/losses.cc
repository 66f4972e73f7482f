/*
 * Copyright 2026 The KnowDDI Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "knowddi/losses.h"

#include <map>
#include <random>
#include <utility>

#include "knowddi/errors.h"

namespace knowddi {

Var MulticlassLoss(Var probabilities, const Tensor& labels) {
  if (!probabilities.value().SameShape(labels)) {
    throw ShapeError("MulticlassLoss: label shape mismatch");
  }
  Tape& tape = *probabilities.tape();
  Var log_p = Log(probabilities, kProbabilityFloor);
  return Scale(Sum(Mul(tape.Constant(labels), log_p)), -1.0);
}

Var MultilabelLoss(Var probabilities, const Tensor& labels,
                   std::span<const bool> negative) {
  const Tensor& p = probabilities.value();
  if (!p.SameShape(labels) || negative.size() != p.rows()) {
    throw ShapeError("MultilabelLoss: label shape mismatch");
  }
  Tape& tape = *probabilities.tape();
  Tensor positive_weights = labels;
  Tensor negative_weights(p.rows(), p.cols());
  for (size_t r = 0; r < p.rows(); ++r) {
    for (size_t c = 0; c < p.cols(); ++c) {
      if (negative[r]) {
        positive_weights(r, c) = 0.0;
        negative_weights(r, c) = 1.0;
      }
    }
  }
  Var log_p = Log(probabilities, kProbabilityFloor);
  Var log_not_p = Log(AddScalar(Scale(probabilities, -1.0), 1.0), kProbabilityFloor);
  Var total = Add(Sum(Mul(tape.Constant(std::move(positive_weights)), log_p)),
                  Sum(Mul(tape.Constant(std::move(negative_weights)), log_not_p)));
  return Scale(total, -1.0);
}

std::vector<FactTriplet> SampleNegatives(std::span<const FactTriplet> triples,
                                         std::span<const NodeId> drugs,
                                         const std::set<FactTriplet>& known,
                                         uint64_t seed, size_t* skipped) {
  if (drugs.empty()) throw DataError("negative sampling needs a nonempty drug set");
  std::map<std::pair<NodeId, RelationId>, size_t> covered;
  for (const FactTriplet& t : known) ++covered[{t.head, t.relation}];
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, drugs.size() - 1);
  std::vector<FactTriplet> out;
  out.reserve(triples.size());
  size_t skip_count = 0;
  for (const FactTriplet& t : triples) {
    // Admissible tails: every drug except h and the known (h, r, .) tails.
    const size_t blocked = covered[{t.head, t.relation}] + 1;
    if (blocked >= drugs.size()) {
      ++skip_count;
      continue;
    }
    while (true) {
      const NodeId w = drugs[pick(rng)];
      if (w == t.head || known.count({t.head, t.relation, w})) continue;
      out.push_back({t.head, t.relation, w});
      break;
    }
  }
  if (skipped != nullptr) *skipped = skip_count;
  return out;
}

}  // namespace knowddi
