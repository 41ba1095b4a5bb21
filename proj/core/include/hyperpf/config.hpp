/*
 * Copyright 2026 The hyperpf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>

namespace hyperpf {

/// Process-wide execution knobs. Read by the library, written by front ends.
/// Results never depend on `threads`.
struct ComputeConfig {
  /// Worker threads for parallel kernels; 0 means hardware concurrency.
  unsigned threads = 0;
  /// Largest number of terms an AlgebraElement (or DP frontier) may hold.
  std::size_t max_terms = 200'000'000;
  /// Largest number of permutation tuples pf_combinatorial will enumerate.
  std::uint64_t max_enumeration = 100'000'000;
};

const ComputeConfig& compute_config();
void set_compute_config(const ComputeConfig& config);

/// Effective worker count: `threads` resolved against the hardware.
unsigned worker_count();

/// RAII override of the global config, restored on scope exit.
class ScopedComputeConfig {
 public:
  explicit ScopedComputeConfig(const ComputeConfig& config)
      : saved_(compute_config()) {
    set_compute_config(config);
  }
  ~ScopedComputeConfig() { set_compute_config(saved_); }
  ScopedComputeConfig(const ScopedComputeConfig&) = delete;
  ScopedComputeConfig& operator=(const ScopedComputeConfig&) = delete;

 private:
  ComputeConfig saved_;
};

}  // namespace hyperpf
