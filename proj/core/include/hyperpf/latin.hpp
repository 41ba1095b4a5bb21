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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hyperpf/exact_scalar.hpp"

namespace hyperpf {

/// An (m,k)-latin quasisquare, stored as k rows of length m*k.
///
/// Row r is a permutation of {1..mk} increasing inside each block of m
/// positions. Column group j (positions j*m .. j*m+m-1) read top to bottom,
/// block after block, is the permutation sigma_j. For m = 1 these are the
/// k x k Latin squares. (The array has k rows, not m: that is the shape that
/// recovers Latin squares and matches the two-row pattern of LQ(m,2).)
struct QuasiSquare {
  int m = 1;
  int k = 1;
  std::vector<std::vector<int>> rows;
  int sign = 1;

  /// sigma_0 .. sigma_{k-1}.
  std::vector<std::vector<int>> column_perms() const;
};

/// Sign of a permutation given as a sequence of distinct values.
int permutation_sign(const std::vector<int>& values);

/// Product of the signs of all rows and all column permutations, recomputed
/// from scratch. Throws InvalidInput if `square` is not a quasisquare.
int lq_sign(const QuasiSquare& square);

/// Visits LQ(m, k) in lexicographic row order. Throws ResourceExhausted once
/// more than max_enumeration squares have been produced.
void enumerate_lq(int m, int k, const std::function<void(const QuasiSquare&)>& visit);

struct LqSummary {
  std::uint64_t count = 0;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  ExactScalar signed_sum;
};

/// Count and signed sum of LQ(m, k) without materializing squares. The
/// search is split across workers at the first row.
LqSummary lq_summary(int m, int k);

std::uint64_t lq_count(int m, int k);

/// Sum of eps(c) over LQ(m, k).
ExactScalar alon_tarsi_sum(int m, int k);

struct LatinCheck {
  ExactScalar sum;
  ExactScalar pf;
  bool equal = false;
};

/// alon_tarsi_sum(m, k) against k! * Pf_m of the antisymmetric unit tensor.
LatinCheck latin_sum_check(int m, int k);

struct ConjectureTerm {
  std::vector<std::vector<int>> I;
  ExactScalar contribution;
  ExactScalar square;
  bool is_square = false;
};

struct ConjectureReport {
  int m = 0;
  int k = 0;
  std::size_t terms_total = 0;
  std::vector<ConjectureTerm> nonzero_terms;
  bool all_squares = true;
  /// Sum of all terms, i.e. Pf_m of the unit tensor.
  ExactScalar total;
  /// k! * total, the signed latin sum implied by the expansion.
  ExactScalar implied_latin_sum;
  bool nonnegative = false;
};

/// Splits Pf_m(A^{mk}) at n' = k/2 and compares every nonzero term with the
/// square of its first factor. Requires k even.
ConjectureReport conjecture_scan(int m, int k);

enum class CellStatus { kComputed, kSkipped };

struct TableCell {
  int m = 0;
  int k = 0;
  CellStatus status = CellStatus::kSkipped;
  ExactScalar value;
  /// Reference value, when there is one.
  std::optional<ExactScalar> reference;
  std::string note;

  bool disagrees() const { return status == CellStatus::kComputed && reference && *reference != value; }
};

struct TableOptions {
  /// Per-cell bound on Omega terms and DP frontier size.
  std::size_t max_terms = 4'000'000;
};

/// Reference value of Pf_m(A^{mk}) for m <= 6, k <= 8, if known.
std::optional<ExactScalar> reference_table_value(int m, int k);

/// Pf_m(A^{mk}) for 1 <= m <= max_m, 1 <= k <= max_k, skipping cells whose
/// computation exceeds the budget.
std::vector<TableCell> value_table(int max_m, int max_k, const TableOptions& options = {});

std::string table_text(const std::vector<TableCell>& cells);
std::string table_json(const std::vector<TableCell>& cells);

}  // namespace hyperpf
