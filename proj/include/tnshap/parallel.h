// Copyright 2026 The tnshap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TNSHAP_PARALLEL_H_
#define TNSHAP_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace tnshap {

// Process-wide worker budget; defaults to the hardware concurrency.
void SetThreadBudget(std::size_t threads);
std::size_t ThreadBudget();

// Runs body(i) for i in [0, count) on up to ThreadBudget() threads. Nested
// calls run serially on the calling thread. The first exception thrown by any
// body is rethrown after all workers finish.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tnshap

#endif  // TNSHAP_PARALLEL_H_
