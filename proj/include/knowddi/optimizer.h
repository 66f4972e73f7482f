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

#ifndef KNOWDDI_OPTIMIZER_H_
#define KNOWDDI_OPTIMIZER_H_

#include "knowddi/parameters.h"

namespace knowddi {

struct AdamOptions {
  double learning_rate = 5e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Decoupled: p -= lr * weight_decay * p before the moment update.
  double weight_decay = 1e-5;
};

class AdamOptimizer {
 public:
  AdamOptimizer(const ParameterSet& params, AdamOptions options);

  void Step(ParameterSet& params, const ParameterSet& grads);
  long step_count() const { return step_; }

 private:
  AdamOptions options_;
  ParameterSet first_moment_;
  ParameterSet second_moment_;
  long step_ = 0;
};

}  // namespace knowddi

#endif  // KNOWDDI_OPTIMIZER_H_
