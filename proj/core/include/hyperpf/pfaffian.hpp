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

#include <vector>

#include "hyperpf/exact_scalar.hpp"
#include "hyperpf/exterior.hpp"
#include "hyperpf/tensor.hpp"

namespace hyperpf {

/// A permutation of {1..dim} increasing inside each block of m positions.
struct BlockPermutation {
  std::vector<int> values;
  int m = 1;
  int sign = 1;
};

/// All dim! / (m!)^(dim/m) block-ascending permutations, lexicographic.
std::vector<BlockPermutation> block_ascending_perms(int dim, int m);

/// Pf_m(M) straight from its defining sum over families-tuples of
/// block-ascending permutations, divided by blocks!. This is the reference
/// oracle; it refuses inputs beyond the enumeration budget.
ExactScalar pf_combinatorial(const Tensor& tensor, int m);

/// Same sum with every sign replaced by +1.
ExactScalar hyperhafnian_combinatorial(const Tensor& tensor, int m);

/// Omega_m(M): one term per families-tuple of ascending m-sets with a nonzero
/// entry, coefficient = that entry.
AlgebraElement build_omega(const Tensor& tensor, int m,
                           AlgebraMode mode = AlgebraMode::kAnticommuting);

/// Pf_m(M) as top(Omega^blocks) / blocks!. Requires even total order.
ExactScalar pf_grassmann(const Tensor& tensor, int m);

/// Pf_m(M): Grassmann route for even total order. For odd total order the
/// value is the single entry when there is one block, and 0 otherwise
/// (swapping two blocks in every family flips the sign of each term).
ExactScalar pf(const Tensor& tensor, int m);

/// Cayley hyperdeterminant, Pf_1.
ExactScalar hyperdeterminant(const Tensor& tensor);

/// Single-family hyperpfaffian Pf_k with k = order.
ExactScalar hyperpfaffian(const Tensor& tensor, int k);

/// Unsigned analogue of Pf_m, evaluated with nilpotent commuting variables.
ExactScalar hyperhafnian(const Tensor& tensor, int m);

/// Pf_m of block_minor(M, m, sets); 1 when the sets are empty.
ExactScalar pf_of_block_minor(const Tensor& tensor, int m,
                              const std::vector<std::vector<int>>& sets);

struct LaplaceTerm {
  std::vector<std::vector<int>> I;
  std::vector<std::vector<int>> J;
  long sign_exponent = 0;
  ExactScalar pf_I;
  ExactScalar pf_J;

  int sign() const { return (sign_exponent % 2) ? -1 : 1; }
  /// (-1)^sign_exponent * pf_I * pf_J
  ExactScalar contribution() const;
};

/// Terms of the Laplace-type expansion at split n_prime: every families-tuple
/// of index sets of size n_prime * m with {1..n_prime} inside the first set,
/// paired with the complements.
std::vector<LaplaceTerm> laplace_terms(const Tensor& tensor, int m, int n_prime);

struct ExpansionCheck {
  ExactScalar sum;
  ExactScalar pf;
  bool equal = false;
};

/// Sum of laplace_terms against pf(M, m).
ExpansionCheck laplace_check(const Tensor& tensor, int m, int n_prime);

/// Variant that only pins index 1 into the first set and divides by the
/// resulting overcount C(blocks - 1, n_prime - 1).
ExpansionCheck laplace_check_normalized(const Tensor& tensor, int m, int n_prime);

/// Pf_m(M + N) against the sum over l = 0..blocks of signed products
/// Pf_m(M[I]) Pf_m(N[J]) with |I^(s)| = l * m.
ExpansionCheck sum_expansion_check(const Tensor& m_tensor, const Tensor& n_tensor, int m);

struct CompositionCheck {
  ExactScalar lhs;
  ExactScalar rhs;
  bool equal = false;
};

/// The tensor M' of order (p m') * families on the same dimension whose
/// block-ascending entries are Pf_{m'} of the composition sub-tensors.
Tensor composed_tensor(const Tensor& tensor, int m_prime, int p);

/// Pf_m(M') against (np)! / ((p!)^n n!) * Pf_{m'}(M), where m = p m' and
/// n = dim / m.
CompositionCheck compose_check(const Tensor& tensor, int m_prime, int p);

}  // namespace hyperpf
