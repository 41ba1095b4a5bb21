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
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperpf/exact_scalar.hpp"

namespace hyperpf {

/// Multi-family exterior algebra.
///
/// An algebra has `families` sets of `dim` generators eta^(f)_1..eta^(f)_dim.
/// Generators of one family anticommute, generators of different families
/// commute. In nilpotent-commuting mode every generator commutes with every
/// other one and squares to zero, which turns signed sums into unsigned ones.
///
/// Monomials are kept in canonical form: family 1 indices ascending, then
/// family 2 ascending, and so on. All indices are 1-based.

enum class AlgebraMode { kAnticommuting, kNilpotentCommuting };

inline constexpr int kMaxDim = 64;

/// Subset of {1..dim} for one family, stored as a bitmask (bit i-1 <-> i).
class FamilyMask {
 public:
  FamilyMask(int dim, std::uint64_t bits);
  static FamilyMask from_indices(int dim, std::span<const int> indices);
  static FamilyMask full(int dim);

  int dim() const noexcept { return dim_; }
  std::uint64_t bits() const noexcept { return bits_; }
  int size() const noexcept;
  bool contains(int index) const noexcept;
  std::vector<int> indices() const;

  friend bool operator==(const FamilyMask&, const FamilyMask&) = default;

 private:
  int dim_;
  std::uint64_t bits_;
};

/// Sign of sorting the concatenation a ++ b into ascending order, or 0 when
/// the two sets overlap.
int merge_sign(const FamilyMask& a, const FamilyMask& b);

/// Parity of |{(x, y) : x in a, y in b, x > y}| for raw masks.
int crossing_parity(std::uint64_t a, std::uint64_t b) noexcept;

class MultiMonomial {
 public:
  explicit MultiMonomial(std::vector<FamilyMask> masks);
  static MultiMonomial empty(int families, int dim);
  static MultiMonomial full(int families, int dim);
  /// One index list per family.
  static MultiMonomial from_indices(int dim, const std::vector<std::vector<int>>& sets);

  int families() const noexcept { return static_cast<int>(masks_.size()); }
  int dim() const noexcept { return masks_.front().dim(); }
  const FamilyMask& family(int f) const { return masks_.at(static_cast<std::size_t>(f)); }
  std::span<const FamilyMask> masks() const noexcept { return masks_; }
  int degree() const noexcept;

  /// "1,2;3,4" style: families separated by ';', indices by ','.
  std::string to_string() const;

  friend bool operator==(const MultiMonomial&, const MultiMonomial&) = default;

 private:
  std::vector<FamilyMask> masks_;
};

struct MonoProduct {
  MultiMonomial monomial;
  int sign;  // +1, -1, or 0 when the product vanishes
};

MonoProduct mono_mul(const MultiMonomial& a, const MultiMonomial& b, AlgebraMode mode);

struct AlgebraShape {
  int families = 1;
  int dim = 1;
  AlgebraMode mode = AlgebraMode::kAnticommuting;

  friend bool operator==(const AlgebraShape&, const AlgebraShape&) = default;
};

/// Finitely supported linear combination of monomials with exact
/// coefficients. Immutable; copies share storage.
class AlgebraElement {
 public:
  using Term = std::pair<MultiMonomial, ExactScalar>;

  /// The zero element.
  explicit AlgebraElement(AlgebraShape shape);

  static AlgebraElement unit(AlgebraShape shape);
  static AlgebraElement monomial(AlgebraShape shape, const MultiMonomial& mono,
                                 const ExactScalar& coefficient = ExactScalar(1));
  /// Sums repeated monomials and drops zero coefficients.
  static AlgebraElement from_terms(AlgebraShape shape, std::vector<Term> terms);

  const AlgebraShape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }

  /// Terms in canonical (lexicographic on masks) order.
  std::vector<Term> terms() const;
  ExactScalar coefficient(const MultiMonomial& mono) const;

  /// One term per line: "1,2;3,4  -3/2".
  std::string dump() const;

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

  struct Storage;
  const Storage& storage() const { return *storage_; }
  AlgebraElement(AlgebraShape shape, std::shared_ptr<const Storage> storage);

 private:
  AlgebraShape shape_;
  std::shared_ptr<const Storage> storage_;
};

AlgebraElement elem_add(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement elem_mul(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement elem_scale(const AlgebraElement& x, const ExactScalar& c);
AlgebraElement elem_pow(const AlgebraElement& x, unsigned e);

inline AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  return elem_add(x, y);
}
inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  return elem_mul(x, y);
}

/// Coefficient of the canonical full monomial (every family = {1..dim}).
ExactScalar top_coefficient(const AlgebraElement& x);

/// Partial Berezin integral. `sets[f]` lists the family-f generators to
/// integrate, ascending. The derivations form an operator product in the
/// written order dη^(1)_{sets[0]} ... dη^(k)_{sets[k-1]}, so the last
/// written derivation acts first. Each is a left derivation.
AlgebraElement berezin_partial(const AlgebraElement& x, const std::vector<std::vector<int>>& sets);

/// The constant s with  (full Berezin integral of the canonical top monomial) = s.
int berezin_full_sign(int families, int dim);

/// top_coefficient(x * y) by pairing each term of x with the complementary
/// term of y; never materializes the product.
ExactScalar top_of_product(const AlgebraElement& x, const AlgebraElement& y);

/// top_coefficient(x^e) through x^floor(e/2) and x^ceil(e/2) plus complement
/// pairing.
ExactScalar top_of_power(const AlgebraElement& x, unsigned e);

/// top_coefficient(x^e) / e!.
///
/// Requires every term of x to be even (so terms commute) and to use at least
/// one family-1 generator; throws Unsupported otherwise. Counts each
/// unordered e-term cover of the full monomial once by forcing the t-th factor
/// to contain the smallest family-1 index not yet covered, then closes the
/// last factor by complement lookup.
ExactScalar divided_power_top(const AlgebraElement& x, unsigned e);

}  // namespace hyperpf
