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

#include "knowddi/optimizer.h"

#include <cmath>

#include "knowddi/errors.h"

namespace knowddi {

AdamOptimizer::AdamOptimizer(const ParameterSet& params, AdamOptions options)
    : options_(options),
      first_moment_(params.ZerosLike()),
      second_moment_(params.ZerosLike()) {}

void AdamOptimizer::Step(ParameterSet& params, const ParameterSet& grads) {
  if (grads.size() != params.size()) throw ShapeError("Adam: gradient layout mismatch");
  ++step_;
  const double lr = options_.learning_rate;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (size_t k = 0; k < params.size(); ++k) {
    auto p = params.value(k).values();
    const auto g = grads.value(k).values();
    auto m = first_moment_.value(k).values();
    auto v = second_moment_.value(k).values();
    for (size_t i = 0; i < p.size(); ++i) {
      p[i] -= lr * options_.weight_decay * p[i];
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + options_.epsilon);
    }
  }
}

}  // namespace knowddi
