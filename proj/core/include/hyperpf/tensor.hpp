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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpf/exact_scalar.hpp"

namespace hyperpf {

/// Order R (number of indices) and dimension D (range of each index).
struct TensorShape {
  int order = 1;
  int dim = 1;

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

/// Block structure of Pf_m on a tensor of shape (R, D): R = m * families,
/// D = m * blocks.
struct PfParams {
  int m = 1;
  int families = 1;
  int blocks = 1;
};

/// Throws InvalidInput unless m divides both the order and the dimension.
PfParams pf_params(const TensorShape& shape, int m);

/// 1-based index tuple.
using IndexTuple = std::vector<int>;

/// Immutable exact tensor with dense, sparse, procedural or minor-view
/// backing. Copies share storage.
class Tensor {
 public:
  enum class Backing { kDense, kSparse, kAntisymmetricUnit, kMinor };

  /// Entries in row-major order (last index fastest). Refused above
  /// kMaxDenseEntries.
  static Tensor dense(TensorShape shape, std::vector<ExactScalar> values);
  static Tensor zeros(TensorShape shape);
  /// Zero values are dropped.
  static Tensor sparse(TensorShape shape, std::map<IndexTuple, ExactScalar> entries);
  /// The order-D, dimension-D tensor with entry = sign of the index tuple as
  /// a permutation of 1..D, and 0 on any repeated index.
  static Tensor antisymmetric_unit(int dim);

  static constexpr std::size_t kMaxDenseEntries = 10'000'000;

  const TensorShape& shape() const noexcept { return shape_; }
  int order() const noexcept { return shape_.order; }
  int dim() const noexcept { return shape_.dim; }
  Backing backing() const noexcept;

  /// Bounds-checked entry access.
  ExactScalar entry(std::span<const int> index) const;

  /// Calls fn(index, value) for every nonzero entry whose index tuple is
  /// strictly ascending inside each consecutive block of m positions. These
  /// are the only positions Pf_m and Omega_m read. Deterministic order.
  void for_each_block_ascending(
      int m, const std::function<void(std::span<const int>, const ExactScalar&)>& fn) const;

  /// All nonzero entries, lexicographic by index. Procedural tensors are
  /// expanded, subject to kMaxDenseEntries.
  std::map<IndexTuple, ExactScalar> nonzero_entries() const;

  struct Impl;

 private:
  Tensor(TensorShape shape, std::shared_ptr<const Impl> impl);
  ExactScalar entry_unchecked(const int* index) const;

  TensorShape shape_;
  std::shared_ptr<const Impl> impl_;

  friend Tensor hyperminor(const Tensor& tensor, const std::vector<std::vector<int>>& lists);
};

ExactScalar get_entry(const Tensor& tensor, std::span<const int> index);

Tensor antisymmetric_unit(int dim);

/// Restriction of axis j to the ascending list lists[j], re-indexed by
/// position. All lists must have the same length.
Tensor hyperminor(const Tensor& tensor, const std::vector<std::vector<int>>& lists);

/// Hyperminor with sets[s] repeated on the m consecutive axes of family s.
Tensor block_minor(const Tensor& tensor, int m, const std::vector<std::vector<int>>& sets);

/// The composition sub-tensor: the m-blocks of `indices` become the families'
/// index sets, read with inner block size m_prime. Returns nullopt when a
/// block repeats an index (degenerate, contributes 0).
std::optional<Tensor> compose_subtensor(const Tensor& tensor, int m_prime, int m,
                                        std::span<const int> indices);

Tensor tensor_add(const Tensor& a, const Tensor& b);
Tensor tensor_scale(const Tensor& a, const ExactScalar& c);

/// JSON text in the canonical file layout.
std::string tensor_to_json(const Tensor& tensor);
Tensor tensor_from_json(std::string_view text);

Tensor load_tensor(const std::filesystem::path& path);
void save_tensor(const Tensor& tensor, const std::filesystem::path& path);

/// Sign of a sequence of distinct integers viewed as a permutation; 0 if any
/// value repeats.
int sequence_sign(std::span<const int> values);

}  // namespace hyperpf
