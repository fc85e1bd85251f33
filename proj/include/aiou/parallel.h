/*
 * Copyright 2026 The aiou Authors.
 *
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

#ifndef AIOU_PARALLEL_H_
#define AIOU_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace aiou {

// Worker count: $AIOU_THREADS when set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
std::size_t WorkerCount();

// Calls fn(i) for i in [0, n) on up to WorkerCount() threads. fn must only
// write to slot i of caller-owned buffers. If any call throws, the
// exception from the lowest failing index is rethrown after all workers
// join, so error reporting does not depend on scheduling.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace aiou

#endif  // AIOU_PARALLEL_H_
