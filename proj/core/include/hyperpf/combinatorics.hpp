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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperpf/exterior.hpp"

namespace hyperpf {

/// Visits every r-subset of {1..n} as an ascending list, in lexicographic
/// order. fn returns void.
template <class Fn>
void for_each_combination(int n, int r, Fn&& fn) {
  if (r < 0 || r > n) return;
  std::vector<int> c(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) c[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    fn(std::span<const int>(c));
    int i = r - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - r + i + 1) --i;
    if (i < 0) return;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) {
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

namespace detail {

template <class Fn>
void block_perm_step(int dim, int m, std::uint64_t used, int parity, std::vector<int>& values,
                     Fn& fn) {
  if (static_cast<int>(values.size()) == dim) {
    fn(std::span<const int>(values), parity ? -1 : 1);
    return;
  }
  // Free values, in ascending order, then every ascending m-subset of them.
  std::vector<int> free;
  for (int v = 1; v <= dim; ++v) {
    if (!((used >> (v - 1)) & 1ULL)) free.push_back(v);
  }
  for_each_combination(static_cast<int>(free.size()), m, [&](std::span<const int> pick) {
    std::uint64_t block = 0;
    for (int p : pick) {
      int v = free[static_cast<std::size_t>(p - 1)];
      block |= 1ULL << (v - 1);
      values.push_back(v);
    }
    block_perm_step(dim, m, used | block, parity ^ crossing_parity(used, block), values, fn);
    values.resize(values.size() - static_cast<std::size_t>(m));
  });
}

}  // namespace detail

/// Visits the permutations of {1..dim} that increase inside every block of m
/// consecutive positions, lexicographically, with their signs. dim <= 64.
template <class Fn>
void for_each_block_ascending_permutation(int dim, int m, Fn&& fn) {
  std::vector<int> values;
  values.reserve(static_cast<std::size_t>(dim));
  detail::block_perm_step(dim, m, 0, 0, values, fn);
}

/// Integer power with saturation at UINT64_MAX.
inline std::uint64_t saturating_pow(std::uint64_t base, int exponent) {
  std::uint64_t r = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

/// C(n, r) with saturation at UINT64_MAX.
inline std::uint64_t saturating_binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  __extension__ using Wide = unsigned __int128;
  Wide b = 1;
  for (int i = 1; i <= r; ++i) {
    b = b * static_cast<unsigned>(n - r + i) / static_cast<unsigned>(i);
    if (b > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(b);
}

}  // namespace hyperpf
