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

#include "hyperpf/config.hpp"

#include <algorithm>
#include <thread>

namespace hyperpf {
namespace {

ComputeConfig& mutable_config() {
  static ComputeConfig config;
  return config;
}

}  // namespace

const ComputeConfig& compute_config() { return mutable_config(); }

void set_compute_config(const ComputeConfig& config) { mutable_config() = config; }

unsigned worker_count() {
  unsigned requested = compute_config().threads;
  if (requested == 0) requested = std::thread::hardware_concurrency();
  return std::max(1u, requested);
}

}  // namespace hyperpf
