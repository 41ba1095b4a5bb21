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

#include "hyperpf_tools/random.hpp"

#include <map>
#include <vector>

#include "hyperpf/combinatorics.hpp"
#include "hyperpf/error.hpp"

namespace hyperpf::tools {

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

Tensor random_block_tensor(Rng& rng, int m, int families, int blocks, int density_percent,
                           int range) {
  const int dim = m * blocks;
  const TensorShape shape{m * families, dim};
  std::vector<std::vector<int>> subsets;
  for_each_combination(dim, m, [&](std::span<const int> c) { subsets.emplace_back(c.begin(), c.end()); });
  if (saturating_pow(subsets.size(), families) > 1'000'000) {
    throw InvalidInput("random_block_tensor: too many block-ascending positions");
  }

  std::map<IndexTuple, ExactScalar> entries;
  std::vector<std::size_t> pick(static_cast<std::size_t>(families), 0);
  while (true) {
    if (uniform(rng, 1, 100) <= density_percent) {
      IndexTuple index;
      for (std::size_t p : pick) index.insert(index.end(), subsets[p].begin(), subsets[p].end());
      std::int64_t v = uniform(rng, 1, range);
      entries[index] = ExactScalar(uniform(rng, 0, 1) ? v : -v);
    }
    std::size_t f = pick.size();
    while (f > 0 && ++pick[f - 1] == subsets.size()) pick[--f] = 0;
    if (f == 0) break;
  }
  // Unread positions: a block with a repeated or descending pair.
  if (m >= 2) {
    for (int extra = 0; extra < 3; ++extra) {
      IndexTuple index(static_cast<std::size_t>(m * families));
      for (auto& i : index) i = static_cast<int>(uniform(rng, 1, dim));
      const auto block = static_cast<std::size_t>(uniform(rng, 0, families - 1)) * static_cast<std::size_t>(m);
      if (index[block] < index[block + 1]) std::swap(index[block], index[block + 1]);
      entries[index] = ExactScalar(uniform(rng, 1, range));
    }
  }
  return Tensor::sparse(shape, std::move(entries));
}

Tensor random_skew_matrix(Rng& rng, int dim, int range) {
  std::vector<ExactScalar> values(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      std::int64_t v = uniform(rng, -range, range);
      values[static_cast<std::size_t>(i * dim + j)] = ExactScalar(v);
      values[static_cast<std::size_t>(j * dim + i)] = ExactScalar(-v);
    }
  }
  return Tensor::dense({2, dim}, std::move(values));
}

}  // namespace hyperpf::tools
