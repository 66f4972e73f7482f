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

#ifndef KNOWDDI_LOSSES_H_
#define KNOWDDI_LOSSES_H_

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "knowddi/autodiff.h"
#include "knowddi/graph_store.h"

namespace knowddi {

inline constexpr double kProbabilityFloor = 1e-12;

// Sum over rows of -y^T log(y_hat), y_hat clipped below at 1e-12.
Var MulticlassLoss(Var probabilities, const Tensor& labels);

// Positive rows contribute -y^T log(y_hat); rows flagged negative contribute
// -1^T log(1 - y_hat). Both logs are clipped below at 1e-12.
Var MultilabelLoss(Var probabilities, const Tensor& labels,
                   std::span<const bool> negative);

// One corrupted triple (h, r, w) per input triple, w drawn uniformly from
// the drug nodes until (h, r, w) is not a known DDI and w != h. Triples whose
// head has no admissible w are skipped and counted in `skipped`.
std::vector<FactTriplet> SampleNegatives(std::span<const FactTriplet> triples,
                                         std::span<const NodeId> drugs,
                                         const std::set<FactTriplet>& known,
                                         uint64_t seed, size_t* skipped = nullptr);

}  // namespace knowddi

#endif  // KNOWDDI_LOSSES_H_
