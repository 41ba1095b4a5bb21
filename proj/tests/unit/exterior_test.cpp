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

#include "hyperpf/exterior.hpp"

#include <gtest/gtest.h>

#include <random>

#include "hyperpf/config.hpp"
#include "hyperpf/error.hpp"
#include "support/oracles.hpp"

namespace hyperpf {
namespace {

using Sets = std::vector<std::vector<int>>;

MultiMonomial mono(int dim, const Sets& sets) { return MultiMonomial::from_indices(dim, sets); }

AlgebraElement elem(AlgebraShape shape, const std::vector<std::pair<Sets, int>>& terms) {
  std::vector<AlgebraElement::Term> t;
  for (const auto& [sets, c] : terms) t.emplace_back(mono(shape.dim, sets), ExactScalar(c));
  return AlgebraElement::from_terms(shape, std::move(t));
}

FamilyMask fmask(int dim, std::vector<int> idx) { return FamilyMask::from_indices(dim, idx); }

std::vector<int> random_subset(std::mt19937_64& rng, int dim, int size) {
  std::vector<int> all(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(size));
  std::sort(all.begin(), all.end());
  return all;
}

// Sum of `count` random monomials with per-family degree `deg`.
AlgebraElement random_element(std::mt19937_64& rng, AlgebraShape shape, int count, int deg) {
  std::vector<AlgebraElement::Term> t;
  for (int i = 0; i < count; ++i) {
    Sets sets;
    for (int f = 0; f < shape.families; ++f) sets.push_back(random_subset(rng, shape.dim, deg));
    t.emplace_back(mono(shape.dim, sets), ExactScalar(static_cast<int>(rng() % 7) - 3));
  }
  return AlgebraElement::from_terms(shape, std::move(t));
}

std::vector<std::pair<int, int>> generators(const MultiMonomial& m) {
  std::vector<std::pair<int, int>> g;
  for (int f = 0; f < m.families(); ++f) {
    for (int i : m.family(f).indices()) g.emplace_back(f, i);
  }
  return g;
}

TEST(MergeSign, SpecExamples) {
  EXPECT_EQ(merge_sign(fmask(4, {1, 2}), fmask(4, {3, 4})), 1);
  EXPECT_EQ(merge_sign(fmask(4, {1, 3}), fmask(4, {2, 4})), -1);
  EXPECT_EQ(merge_sign(fmask(4, {1, 2}), fmask(4, {2, 3})), 0);
  EXPECT_THROW(merge_sign(fmask(4, {1}), fmask(5, {2})), InvalidInput);
}

TEST(MergeSign, MatchesReorderingAndIsACocycle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 64);
    std::vector<int> perm = random_subset(rng, dim, dim);
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::size_t cut1 = rng() % (perm.size() + 1);
    const std::size_t cut2 = cut1 + rng() % (perm.size() - cut1 + 1);
    std::vector<int> a(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cut1));
    std::vector<int> b(perm.begin() + static_cast<std::ptrdiff_t>(cut1), perm.begin() + static_cast<std::ptrdiff_t>(cut2));
    std::vector<int> c(perm.begin() + static_cast<std::ptrdiff_t>(cut2), perm.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::sort(c.begin(), c.end());
    std::vector<std::pair<int, int>> g;
    for (int i : a) g.emplace_back(0, i);
    for (int i : b) g.emplace_back(0, i);
    const FamilyMask ma = fmask(dim, a), mb = fmask(dim, b), mc = fmask(dim, c);
    ASSERT_EQ(merge_sign(ma, mb), oracle::reorder_sign(g));
    const FamilyMask ab(dim, ma.bits() | mb.bits()), bc(dim, mb.bits() | mc.bits());
    ASSERT_EQ(merge_sign(ma, mb) * merge_sign(ab, mc), merge_sign(mb, mc) * merge_sign(ma, bc));
  }
}

TEST(MonoMul, SpecExamples) {
  MonoProduct p = mono_mul(mono(2, {{1}, {2}}), mono(2, {{2}, {1}}), AlgebraMode::kAnticommuting);
  EXPECT_EQ(p.monomial, mono(2, {{1, 2}, {1, 2}}));
  // family 1 merges with +1, family 2 with -1; families commute
  EXPECT_EQ(p.sign, -1);
  EXPECT_EQ(mono_mul(mono(3, {{1, 2}}), mono(3, {{1, 3}}), AlgebraMode::kAnticommuting).sign, 0);
  MonoProduct q = mono_mul(mono(3, {{1, 3}}), mono(3, {{2}}), AlgebraMode::kNilpotentCommuting);
  EXPECT_EQ(q.monomial, mono(3, {{1, 2, 3}}));
  EXPECT_EQ(q.sign, 1);
  EXPECT_EQ(mono_mul(mono(3, {{1, 3}}), mono(3, {{2}}), AlgebraMode::kAnticommuting).sign, -1);
  EXPECT_THROW(mono_mul(mono(3, {{1}}), mono(3, {{1}, {2}}), AlgebraMode::kAnticommuting), InvalidInput);
}

TEST(MonoMul, MatchesGeneratorReordering) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const int families = 1 + static_cast<int>(rng() % 4);
    const int dim = 1 + static_cast<int>(rng() % 9);
    Sets sa, sb;
    for (int f = 0; f < families; ++f) {
      sa.push_back(random_subset(rng, dim, static_cast<int>(rng() % (dim + 1))));
      sb.push_back(random_subset(rng, dim, static_cast<int>(rng() % (dim + 1))));
    }
    const MultiMonomial a = mono(dim, sa), b = mono(dim, sb);
    auto g = generators(a);
    auto gb = generators(b);
    g.insert(g.end(), gb.begin(), gb.end());
    for (AlgebraMode mode : {AlgebraMode::kAnticommuting, AlgebraMode::kNilpotentCommuting}) {
      ASSERT_EQ(mono_mul(a, b, mode).sign,
                oracle::reorder_sign(g, mode == AlgebraMode::kAnticommuting));
    }
  }
}

TEST(AlgebraElement, AdditionExamples) {
  const AlgebraShape s{2, 3, AlgebraMode::kAnticommuting};
  const AlgebraElement x = elem(s, {{{{1}, {2}}, 3}, {{{2}, {1, 3}}, -1}});
  EXPECT_EQ(x + AlgebraElement(s), x);
  EXPECT_TRUE((elem(s, {{{{1}, {2}}, 3}}) + elem(s, {{{{1}, {2}}, -3}})).empty());
  const AlgebraElement y = elem(s, {{{{1}, {2}}, 1}}) + elem(s, {{{{3}, {}}, 2}});
  EXPECT_EQ(y.size(), 2U);
  EXPECT_EQ(y.coefficient(mono(3, {{3}, {}})), ExactScalar(2));
  EXPECT_THROW(x + AlgebraElement(AlgebraShape{2, 4, AlgebraMode::kAnticommuting}), InvalidInput);
}

TEST(AlgebraElement, FromTermsMergesAndDump) {
  const AlgebraShape s{1, 3, AlgebraMode::kAnticommuting};
  const AlgebraElement x = elem(s, {{{{1, 2}}, 2}, {{{1, 2}}, 3}, {{{3}}, 0}});
  EXPECT_EQ(x.size(), 1U);
  EXPECT_EQ(x.dump(), "1,2  5\n");
}

TEST(AlgebraElement, MultiplicationAnticommutes) {
  const AlgebraShape s{1, 2, AlgebraMode::kAnticommuting};
  const AlgebraElement e1 = elem(s, {{{{1}}, 1}});
  const AlgebraElement e2 = elem(s, {{{{2}}, 1}});
  EXPECT_TRUE((e1 * e2 + e2 * e1).empty());
  EXPECT_TRUE((e1 * e1).empty());
  EXPECT_TRUE((e1 * AlgebraElement(s)).empty());
  const AlgebraShape n{1, 2, AlgebraMode::kNilpotentCommuting};
  const AlgebraElement n1 = elem(n, {{{{1}}, 1}});
  const AlgebraElement n2 = elem(n, {{{{2}}, 1}});
  EXPECT_EQ(n1 * n2, n2 * n1);
  EXPECT_TRUE((n1 * n1).empty());
}

TEST(AlgebraElement, RingLaws) {
  std::mt19937_64 rng(13);
  for (AlgebraMode mode : {AlgebraMode::kAnticommuting, AlgebraMode::kNilpotentCommuting}) {
    for (int trial = 0; trial < 30; ++trial) {
      const AlgebraShape s{2, 5, mode};
      const AlgebraElement x = random_element(rng, s, 6, 1);
      const AlgebraElement y = random_element(rng, s, 6, 1 + static_cast<int>(rng() % 2));
      const AlgebraElement z = random_element(rng, s, 6, 1);
      ASSERT_EQ((x * y) * z, x * (y * z));
      ASSERT_EQ(x * (y + z), x * y + x * z);
      ASSERT_EQ(x * AlgebraElement::unit(s), x);
      ASSERT_EQ(elem_scale(x, ExactScalar(2)), x + x);
    }
  }
}

TEST(AlgebraElement, PowersAndTop) {
  const AlgebraShape s{1, 4, AlgebraMode::kAnticommuting};
  // Omega of the skew matrix with M12=a, M13=b, M14=c, M23=d, M24=e, M34=f
  const int a = 2, b = -3, c = 5, d = 7, e = 11, f = -13;
  const AlgebraElement omega = elem(s, {{{{1, 2}}, a}, {{{1, 3}}, b}, {{{1, 4}}, c},
                                        {{{2, 3}}, d}, {{{2, 4}}, e}, {{{3, 4}}, f}});
  EXPECT_EQ(elem_pow(omega, 1), omega);
  EXPECT_EQ(elem_pow(omega, 0), AlgebraElement::unit(s));
  const AlgebraElement sq = elem_pow(omega, 2);
  ASSERT_EQ(sq.size(), 1U);
  const ExactScalar pf = ExactScalar(a * f - b * e + c * d);
  EXPECT_EQ(top_coefficient(sq), ExactScalar(2) * pf);
  EXPECT_TRUE(elem_pow(omega, 3).empty());

  EXPECT_EQ(top_coefficient(AlgebraElement(s)), ExactScalar(0));
  EXPECT_EQ(top_coefficient(elem(s, {{{{1, 2, 3, 4}}, 7}})), ExactScalar(7));
}

TEST(Berezin, SpecExamples) {
  const AlgebraShape s{1, 2, AlgebraMode::kAnticommuting};
  EXPECT_EQ(berezin_partial(elem(s, {{{{1}}, 1}}), {{1}}), AlgebraElement::unit(s));
  // eta2 eta1 = -eta1 eta2, and d/d eta1 removes the leading eta1
  EXPECT_EQ(berezin_partial(elem(s, {{{{1, 2}}, -1}}), {{1}}), elem(s, {{{{2}}, -1}}));
  EXPECT_TRUE(berezin_partial(elem(s, {{{{2}}, 1}}), {{1}}).empty());
  EXPECT_THROW(berezin_partial(elem(s, {{{{2}}, 1}}), {{2, 1}}), InvalidInput);
}

// Applies the derivations of `sets`, last written first, to one monomial
// given as its generator list; returns the resulting sign or 0.
int derivation_oracle(std::vector<std::pair<int, int>> gens, const Sets& sets) {
  std::vector<std::pair<int, int>> ops;
  for (std::size_t f = 0; f < sets.size(); ++f) {
    for (int i : sets[f]) ops.emplace_back(static_cast<int>(f), i);
  }
  int sign = 1;
  for (auto op = ops.rbegin(); op != ops.rend(); ++op) {
    auto it = std::find(gens.begin(), gens.end(), *op);
    if (it == gens.end()) return 0;
    for (auto jt = gens.begin(); jt != it; ++jt) {
      if (jt->first == op->first) sign = -sign;
    }
    gens.erase(it);
  }
  return sign;
}

TEST(Berezin, FullIntegralSign) {
  for (int k = 1; k <= 4; ++k) {
    for (int dim = 1; dim <= 7; ++dim) {
      const MultiMonomial full = MultiMonomial::full(k, dim);
      Sets all(static_cast<std::size_t>(k), std::vector<int>());
      for (auto& s : all) {
        for (int i = 1; i <= dim; ++i) s.push_back(i);
      }
      const int expected = derivation_oracle(generators(full), all);
      EXPECT_EQ(berezin_full_sign(k, dim), expected) << k << " " << dim;
      EXPECT_EQ(expected, (k * (dim * (dim - 1) / 2)) % 2 ? -1 : 1);
      const AlgebraShape s{k, dim, AlgebraMode::kAnticommuting};
      EXPECT_EQ(berezin_partial(AlgebraElement::monomial(s, full), all),
                elem_scale(AlgebraElement::unit(s), ExactScalar(expected)));
    }
  }
}

TEST(Berezin, PartialMatchesDerivationOracle) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const int dim = 2 + static_cast<int>(rng() % 5);
    const AlgebraShape s{k, dim, AlgebraMode::kAnticommuting};
    Sets msets, dsets;
    for (int f = 0; f < k; ++f) {
      msets.push_back(random_subset(rng, dim, static_cast<int>(rng() % (dim + 1))));
      dsets.push_back(random_subset(rng, dim, static_cast<int>(rng() % 3)));
    }
    const MultiMonomial m = mono(dim, msets);
    const AlgebraElement got = berezin_partial(AlgebraElement::monomial(s, m), dsets);
    const int sign = derivation_oracle(generators(m), dsets);
    if (sign == 0) {
      ASSERT_TRUE(got.empty());
      continue;
    }
    Sets rest = msets;
    for (int f = 0; f < k; ++f) {
      auto& r = rest[static_cast<std::size_t>(f)];
      for (int i : dsets[static_cast<std::size_t>(f)]) r.erase(std::find(r.begin(), r.end(), i));
    }
    ASSERT_EQ(got, elem(s, {{rest, sign}}));
  }
}

TEST(TopOfPower, AgreesWithExplicitPowers) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    // Terms of degree (1, 1): the top of x^3 lives at D = 3.
    const AlgebraShape s{2, 3, AlgebraMode::kAnticommuting};
    const AlgebraElement x = random_element(rng, s, 7, 1);
    const ExactScalar direct = top_coefficient(elem_pow(x, 3));
    ASSERT_EQ(top_of_power(x, 3), direct);
    ASSERT_EQ(divided_power_top(x, 3) * factorial(3), direct);
    ASSERT_EQ(top_of_product(elem_pow(x, 2), x), direct);
  }
  for (int trial = 0; trial < 40; ++trial) {
    // Odd terms in one family: powers do not commute, top_of_power still applies.
    const AlgebraShape s{1, 3, AlgebraMode::kAnticommuting};
    const AlgebraElement x = random_element(rng, s, 3, 1) + random_element(rng, s, 2, 2);
    ASSERT_EQ(top_of_power(x, 3), top_coefficient(elem_pow(x, 3)));
    ASSERT_EQ(top_of_power(x, 2), top_coefficient(elem_pow(x, 2)));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const AlgebraShape s{2, 4, AlgebraMode::kNilpotentCommuting};
    const AlgebraElement x = random_element(rng, s, 10, 1);
    const ExactScalar direct = top_coefficient(elem_pow(x, 4));
    ASSERT_EQ(top_of_power(x, 4), direct);
    ASSERT_EQ(divided_power_top(x, 4) * factorial(4), direct);
  }
}

TEST(TopOfPower, DividedPowerPreconditions) {
  const AlgebraShape s{1, 3, AlgebraMode::kAnticommuting};
  EXPECT_THROW(divided_power_top(elem(s, {{{{1}}, 1}, {{{2}}, 1}, {{{3}}, 1}}), 3), Unsupported);
  const AlgebraShape t{2, 2, AlgebraMode::kAnticommuting};
  EXPECT_THROW(divided_power_top(elem(t, {{{{}, {1, 2}}, 1}, {{{1}, {1}}, 1}}), 2), Unsupported);
  EXPECT_EQ(divided_power_top(AlgebraElement(t), 2), ExactScalar(0));
}

TEST(Engine, ResultsIndependentOfWorkerCount) {
  std::mt19937_64 rng(16);
  const AlgebraShape s{2, 6, AlgebraMode::kAnticommuting};
  const AlgebraElement x = random_element(rng, s, 40, 1);
  std::string reference;
  ExactScalar ref_top;
  for (unsigned threads : {1U, 2U, 4U, 8U}) {
    ComputeConfig cfg = compute_config();
    cfg.threads = threads;
    ScopedComputeConfig scope(cfg);
    const std::string dump = elem_pow(x, 3).dump();
    const ExactScalar top = divided_power_top(x, 6);
    if (reference.empty()) {
      reference = dump;
      ref_top = top;
    }
    ASSERT_EQ(dump, reference) << threads;
    ASSERT_EQ(top, ref_top) << threads;
  }
}

TEST(Engine, TermBudgetAndShapeLimits) {
  std::mt19937_64 rng(17);
  const AlgebraShape s{2, 8, AlgebraMode::kAnticommuting};
  const AlgebraElement x = random_element(rng, s, 60, 1);
  ComputeConfig cfg = compute_config();
  cfg.max_terms = 100;
  {
    ScopedComputeConfig scope(cfg);
    EXPECT_THROW(elem_pow(x, 3), ResourceExhausted);
  }
  EXPECT_NO_THROW(elem_pow(x, 2));
  EXPECT_THROW(FamilyMask::from_indices(65, std::vector<int>{1}), InvalidInput);
  EXPECT_THROW(FamilyMask::from_indices(4, std::vector<int>{5}), InvalidInput);
  EXPECT_THROW(FamilyMask::from_indices(4, std::vector<int>{2, 2}), InvalidInput);
  EXPECT_THROW(AlgebraElement(AlgebraShape{9, 64, AlgebraMode::kAnticommuting}), Unsupported);
  EXPECT_NO_THROW(AlgebraElement(AlgebraShape{8, 64, AlgebraMode::kAnticommuting}));
}

TEST(MultiMonomial, TextForm) {
  EXPECT_EQ(mono(4, {{1, 2}, {3, 4}}).to_string(), "1,2;3,4");
  EXPECT_EQ(MultiMonomial::full(2, 2).degree(), 4);
  EXPECT_EQ(MultiMonomial::empty(3, 5).degree(), 0);
}

}  // namespace
}  // namespace hyperpf
