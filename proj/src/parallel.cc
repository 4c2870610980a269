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

#include "tnshap/parallel.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tnshap {
namespace {

std::atomic<std::size_t>& Budget() {
  static std::atomic<std::size_t> budget{
      std::max<std::size_t>(1, std::thread::hardware_concurrency())};
  return budget;
}

thread_local bool in_parallel_region = false;

}  // namespace

void SetThreadBudget(std::size_t threads) {
  Budget().store(std::max<std::size_t>(1, threads));
}

std::size_t ThreadBudget() { return Budget().load(); }

void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(ThreadBudget(), count);
  if (workers <= 1 || in_parallel_region) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&] {
    in_parallel_region = true;
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
    in_parallel_region = false;
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(run);
  run();
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace tnshap
