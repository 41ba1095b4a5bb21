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

#include "hyperpf/pfaffian.hpp"

#include <numeric>

#include "hyperpf/combinatorics.hpp"
#include "hyperpf/config.hpp"
#include "hyperpf/error.hpp"

namespace hyperpf {
namespace {

// Shared enumeration for the signed and unsigned reference sums.
ExactScalar combinatorial_sum(const Tensor& tensor, int m, bool signed_sum) {
  const PfParams params = pf_params(tensor.shape(), m);
  const std::vector<BlockPermutation> perms = block_ascending_perms(tensor.dim(), m);
  std::uint64_t tuples = saturating_pow(perms.size(), params.families);
  if (tuples > compute_config().max_enumeration) {
    throw ResourceExhausted("pf_combinatorial would enumerate " + std::to_string(tuples) +
                            " permutation tuples (budget " +
                            std::to_string(compute_config().max_enumeration) +
                            "); use pf_grassmann");
  }
  const auto families = static_cast<std::size_t>(params.families);
  std::vector<std::size_t> pick(families, 0);
  std::vector<int> index(static_cast<std::size_t>(tensor.order()));
  ExactScalar total;
  while (true) {
    ExactScalar product(1);
    for (int block = 0; block < params.blocks && !product.is_zero(); ++block) {
      for (std::size_t f = 0; f < families; ++f) {
        const auto& values = perms[pick[f]].values;
        std::copy(values.begin() + block * m, values.begin() + (block + 1) * m,
                  index.begin() + static_cast<std::ptrdiff_t>(f) * m);
      }
      product *= tensor.entry(index);
    }
    if (!product.is_zero()) {
      int sign = 1;
      if (signed_sum) {
        for (std::size_t f = 0; f < families; ++f) sign *= perms[pick[f]].sign;
      }
      if (sign < 0) product.negate();
      total += product;
    }
    std::size_t f = families;
    while (f > 0 && ++pick[f - 1] == perms.size()) pick[--f] = 0;
    if (f == 0) break;
  }
  return total / factorial(static_cast<unsigned>(params.blocks));
}

std::vector<int> complement(const std::vector<int>& set, int dim) {
  std::vector<int> out;
  std::size_t j = 0;
  for (int v = 1; v <= dim; ++v) {
    if (j < set.size() && set[j] == v) {
      ++j;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

long sign_exponent(const std::vector<std::vector<int>>& sets, int size) {
  long e = static_cast<long>(sets.size()) * (static_cast<long>(size) * (size + 1) / 2);
  for (const auto& s : sets) e += std::accumulate(s.begin(), s.end(), 0L);
  return e;
}

std::vector<std::vector<int>> all_subsets(int dim, int size) {
  std::vector<std::vector<int>> out;
  for_each_combination(dim, size, [&](std::span<const int> c) { out.emplace_back(c.begin(), c.end()); });
  return out;
}

// Calls fn(sets) for every tuple (first[i0], rest[i1], ..., rest[i_{k-1}]).
template <class Fn>
void for_each_set_tuple(const std::vector<std::vector<int>>& first,
                        const std::vector<std::vector<int>>& rest, int families, Fn&& fn) {
  std::uint64_t count = first.size() * saturating_pow(rest.size(), families - 1);
  if (count > compute_config().max_enumeration) {
    throw ResourceExhausted("expansion would enumerate " + std::to_string(count) +
                            " set tuples (budget " +
                            std::to_string(compute_config().max_enumeration) + ")");
  }
  if (first.empty() || (families > 1 && rest.empty())) return;
  std::vector<std::size_t> pick(static_cast<std::size_t>(families), 0);
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(families));
  while (true) {
    sets[0] = first[pick[0]];
    for (std::size_t f = 1; f < sets.size(); ++f) sets[f] = rest[pick[f]];
    fn(sets);
    std::size_t f = pick.size();
    while (f > 0) {
      std::size_t limit = (f - 1 == 0) ? first.size() : rest.size();
      if (++pick[f - 1] < limit) break;
      pick[--f] = 0;
    }
    if (f == 0) break;
  }
}

std::vector<std::vector<int>> complements(const std::vector<std::vector<int>>& sets, int dim) {
  std::vector<std::vector<int>> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(complement(s, dim));
  return out;
}

}  // namespace

std::vector<BlockPermutation> block_ascending_perms(int dim, int m) {
  if (dim < 1 || dim > kMaxDim || m < 1 || dim % m != 0) {
    throw InvalidInput("block_ascending_perms: m=" + std::to_string(m) +
                       " must divide dim=" + std::to_string(dim) + " (dim <= 64)");
  }
  std::vector<BlockPermutation> out;
  for_each_block_ascending_permutation(dim, m, [&](std::span<const int> values, int sign) {
    out.push_back({std::vector<int>(values.begin(), values.end()), m, sign});
  });
  return out;
}

ExactScalar pf_combinatorial(const Tensor& tensor, int m) {
  return combinatorial_sum(tensor, m, true);
}

ExactScalar hyperhafnian_combinatorial(const Tensor& tensor, int m) {
  return combinatorial_sum(tensor, m, false);
}

AlgebraElement build_omega(const Tensor& tensor, int m, AlgebraMode mode) {
  const PfParams params = pf_params(tensor.shape(), m);
  const int dim = tensor.dim();
  AlgebraShape shape{params.families, dim, mode};
  std::vector<AlgebraElement::Term> terms;
  tensor.for_each_block_ascending(m, [&](std::span<const int> index, const ExactScalar& value) {
    std::vector<FamilyMask> masks;
    masks.reserve(static_cast<std::size_t>(params.families));
    for (int f = 0; f < params.families; ++f) {
      masks.push_back(FamilyMask::from_indices(dim, index.subspan(static_cast<std::size_t>(f * m),
                                                                  static_cast<std::size_t>(m))));
    }
    terms.emplace_back(MultiMonomial(std::move(masks)), value);
    if (terms.size() > compute_config().max_terms) {
      throw ResourceExhausted("Omega exceeds the term budget");
    }
  });
  return AlgebraElement::from_terms(shape, std::move(terms));
}

ExactScalar pf_grassmann(const Tensor& tensor, int m) {
  const PfParams params = pf_params(tensor.shape(), m);
  if ((params.m * params.families) % 2 != 0) {
    throw Unsupported("pf_grassmann needs even total order (got " +
                      std::to_string(tensor.order()) + "); use pf_combinatorial");
  }
  return divided_power_top(build_omega(tensor, m), static_cast<unsigned>(params.blocks));
}

ExactScalar pf(const Tensor& tensor, int m) {
  const PfParams params = pf_params(tensor.shape(), m);
  if (tensor.order() % 2 == 0) return pf_grassmann(tensor, m);
  if (params.blocks == 1) return pf_combinatorial(tensor, m);
  return ExactScalar(0);
}

ExactScalar hyperdeterminant(const Tensor& tensor) { return pf(tensor, 1); }

ExactScalar hyperpfaffian(const Tensor& tensor, int k) {
  if (k != tensor.order()) {
    throw InvalidInput("hyperpfaffian: k=" + std::to_string(k) + " must equal the tensor order " +
                       std::to_string(tensor.order()));
  }
  return pf(tensor, k);
}

ExactScalar hyperhafnian(const Tensor& tensor, int m) {
  const PfParams params = pf_params(tensor.shape(), m);
  return divided_power_top(build_omega(tensor, m, AlgebraMode::kNilpotentCommuting),
                           static_cast<unsigned>(params.blocks));
}

ExactScalar pf_of_block_minor(const Tensor& tensor, int m,
                              const std::vector<std::vector<int>>& sets) {
  if (sets.empty() || sets.front().empty()) return ExactScalar(1);
  return pf(block_minor(tensor, m, sets), m);
}

ExactScalar LaplaceTerm::contribution() const {
  ExactScalar c = pf_I * pf_J;
  if (sign() < 0) c.negate();
  return c;
}

std::vector<LaplaceTerm> laplace_terms(const Tensor& tensor, int m, int n_prime) {
  const PfParams params = pf_params(tensor.shape(), m);
  if (n_prime <= 0 || n_prime >= params.blocks) {
    throw InvalidInput("laplace: n' must satisfy 0 < n' < " + std::to_string(params.blocks) +
                       " (got " + std::to_string(n_prime) + ")");
  }
  const int size = n_prime * m;
  std::vector<std::vector<int>> rest = all_subsets(tensor.dim(), size);
  std::vector<std::vector<int>> first;
  for (const auto& s : rest) {
    bool pinned = true;
    for (int v = 1; v <= n_prime; ++v) pinned = pinned && std::binary_search(s.begin(), s.end(), v);
    if (pinned) first.push_back(s);
  }
  std::vector<LaplaceTerm> out;
  for_each_set_tuple(first, rest, params.families, [&](const std::vector<std::vector<int>>& sets) {
    LaplaceTerm term;
    term.I = sets;
    term.J = complements(sets, tensor.dim());
    term.sign_exponent = sign_exponent(sets, size);
    term.pf_I = pf_of_block_minor(tensor, m, term.I);
    term.pf_J = term.pf_I.is_zero() ? ExactScalar(0) : pf_of_block_minor(tensor, m, term.J);
    out.push_back(std::move(term));
  });
  return out;
}

ExpansionCheck laplace_check(const Tensor& tensor, int m, int n_prime) {
  ExpansionCheck check;
  for (const auto& term : laplace_terms(tensor, m, n_prime)) check.sum += term.contribution();
  check.pf = pf(tensor, m);
  check.equal = check.sum == check.pf;
  return check;
}

ExpansionCheck laplace_check_normalized(const Tensor& tensor, int m, int n_prime) {
  const PfParams params = pf_params(tensor.shape(), m);
  if (n_prime <= 0 || n_prime >= params.blocks) {
    throw InvalidInput("laplace: n' must satisfy 0 < n' < " + std::to_string(params.blocks));
  }
  const int size = n_prime * m;
  std::vector<std::vector<int>> rest = all_subsets(tensor.dim(), size);
  std::vector<std::vector<int>> first;
  for (const auto& s : rest) {
    if (s.front() == 1) first.push_back(s);
  }
  ExpansionCheck check;
  for_each_set_tuple(first, rest, params.families, [&](const std::vector<std::vector<int>>& sets) {
    ExactScalar a = pf_of_block_minor(tensor, m, sets);
    if (a.is_zero()) return;
    a *= pf_of_block_minor(tensor, m, complements(sets, tensor.dim()));
    if (sign_exponent(sets, size) % 2) a.negate();
    check.sum += a;
  });
  check.sum /= binomial(static_cast<unsigned>(params.blocks - 1),
                        static_cast<unsigned>(n_prime - 1));
  check.pf = pf(tensor, m);
  check.equal = check.sum == check.pf;
  return check;
}

ExpansionCheck sum_expansion_check(const Tensor& m_tensor, const Tensor& n_tensor, int m) {
  if (!(m_tensor.shape() == n_tensor.shape())) {
    throw InvalidInput("sum_expansion_check: tensors have different shapes");
  }
  const PfParams params = pf_params(m_tensor.shape(), m);
  const int dim = m_tensor.dim();
  ExpansionCheck check;
  for (int l = 0; l <= params.blocks; ++l) {
    const int size = l * m;
    std::vector<std::vector<int>> subsets = all_subsets(dim, size);
    for_each_set_tuple(subsets, subsets, params.families,
                       [&](const std::vector<std::vector<int>>& sets) {
                         ExactScalar a = pf_of_block_minor(m_tensor, m, sets);
                         if (a.is_zero()) return;
                         a *= pf_of_block_minor(n_tensor, m, complements(sets, dim));
                         if (sign_exponent(sets, size) % 2) a.negate();
                         check.sum += a;
                       });
  }
  check.pf = pf(tensor_add(m_tensor, n_tensor), m);
  check.equal = check.sum == check.pf;
  return check;
}

Tensor composed_tensor(const Tensor& tensor, int m_prime, int p) {
  const PfParams inner = pf_params(tensor.shape(), m_prime);
  if (p < 1) throw InvalidInput("compose: p must be positive");
  const int m = p * m_prime;
  if (tensor.dim() % m != 0) {
    throw InvalidInput("compose: m = p*m' = " + std::to_string(m) + " must divide dim " +
                       std::to_string(tensor.dim()));
  }
  const TensorShape shape{m * inner.families, tensor.dim()};
  std::vector<std::vector<int>> subsets = all_subsets(tensor.dim(), m);
  std::map<IndexTuple, ExactScalar> entries;
  for_each_set_tuple(subsets, subsets, inner.families,
                     [&](const std::vector<std::vector<int>>& sets) {
                       IndexTuple index;
                       for (const auto& s : sets) index.insert(index.end(), s.begin(), s.end());
                       auto sub = compose_subtensor(tensor, m_prime, m, index);
                       if (!sub) return;
                       ExactScalar v = pf(*sub, m_prime);
                       if (!v.is_zero()) entries.emplace(std::move(index), std::move(v));
                     });
  return Tensor::sparse(shape, std::move(entries));
}

CompositionCheck compose_check(const Tensor& tensor, int m_prime, int p) {
  Tensor composed = composed_tensor(tensor, m_prime, p);
  const int m = p * m_prime;
  const auto n = static_cast<unsigned>(tensor.dim() / m);
  const auto up = static_cast<unsigned>(p);
  ExactScalar factor = factorial(n * up);
  ExactScalar pfact = factorial(up);
  for (unsigned i = 0; i < n; ++i) factor /= pfact;
  factor /= factorial(n);

  CompositionCheck check;
  check.lhs = pf(composed, m);
  check.rhs = factor * pf(tensor, m_prime);
  check.equal = check.lhs == check.rhs;
  return check;
}

}  // namespace hyperpf
