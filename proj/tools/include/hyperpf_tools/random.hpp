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

#include <cstdint>
#include <random>

#include "hyperpf/tensor.hpp"

namespace hyperpf::tools {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi]; identical streams on every platform.
std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi);

/// Sparse integer tensor of order m*families and dimension m*blocks. Each
/// block-ascending position is nonzero with probability density_percent/100,
/// drawn from [-range, range] \ {0}. A few extra entries are planted at
/// positions Pf_m never reads.
Tensor random_block_tensor(Rng& rng, int m, int families, int blocks, int density_percent = 60,
                           int range = 3);

/// Dense skew-symmetric integer matrix with entries in [-range, range].
Tensor random_skew_matrix(Rng& rng, int dim, int range = 5);

}  // namespace hyperpf::tools
