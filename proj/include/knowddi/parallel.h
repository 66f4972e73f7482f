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

#ifndef KNOWDDI_PARALLEL_H_
#define KNOWDDI_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace knowddi {

// Runs fn(0..n-1) on up to `threads` workers. The first exception (lowest
// index) is rethrown after all workers finish.
void ParallelFor(size_t n, int threads, const std::function<void(size_t)>& fn);

}  // namespace knowddi

#endif  // KNOWDDI_PARALLEL_H_
