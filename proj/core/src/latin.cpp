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

#include "hyperpf/latin.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "hyperpf/config.hpp"
#include "hyperpf/error.hpp"
#include "hyperpf/exterior.hpp"
#include "hyperpf/pfaffian.hpp"
#include "hyperpf/tensor.hpp"
#include "json.hpp"

namespace hyperpf {
namespace {

void check_lq_params(int m, int k) {
  if (m < 1 || k < 1 || m * k > kMaxDim) {
    throw InvalidInput("latin quasisquares need m >= 1, k >= 1 and m*k <= 64 (got m=" +
                       std::to_string(m) + ", k=" + std::to_string(k) + ")");
  }
}

// Ascending m-subsets of `cand`, smallest first element first.
template <class F>
void for_each_subset(std::uint64_t cand, int need, std::uint64_t acc, F& f) {
  if (need == 0) {
    f(acc);
    return;
  }
  while (std::popcount(cand) >= need) {
    std::uint64_t low = cand & (~cand + 1);
    cand ^= low;
    for_each_subset(cand, need - 1, acc | low, f);
  }
}

struct Search {
  int m;
  int k;
  std::uint64_t full;
  std::vector<std::uint64_t> col_used;
  // blocks[r * k + j]: block placed at row r, group j
  std::vector<std::uint64_t> blocks;
};

// Places the block for (row r, group j). `leaf(parity)` fires per square.
template <class Leaf>
void place(Search& s, int r, int j, std::uint64_t row_used, int parity, Leaf& leaf) {
  if (j == s.k) {
    if (r + 1 == s.k) {
      leaf(parity);
      return;
    }
    place(s, r + 1, 0, 0, parity, leaf);
    return;
  }
  const auto gj = static_cast<std::size_t>(j);
  const std::uint64_t cand = s.full & ~row_used & ~s.col_used[gj];
  if (std::popcount(cand) < s.m) return;
  auto choose = [&](std::uint64_t block) {
    const std::uint64_t next_row = row_used | block;
    for (int g = j + 1; g < s.k; ++g) {
      if (std::popcount(s.full & ~next_row & ~s.col_used[static_cast<std::size_t>(g)]) < s.m) {
        return;
      }
    }
    const int p = parity ^ crossing_parity(row_used, block) ^ crossing_parity(s.col_used[gj], block);
    s.blocks[static_cast<std::size_t>(r * s.k + j)] = block;
    s.col_used[gj] |= block;
    place(s, r, j + 1, next_row, p, leaf);
    s.col_used[gj] &= ~block;
  };
  for_each_subset(cand, s.m, 0, choose);
}

std::vector<int> mask_values(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  return out;
}

Search make_search(int m, int k) {
  const int dim = m * k;
  Search s{m, k, dim == 64 ? ~0ULL : ((1ULL << dim) - 1),
           std::vector<std::uint64_t>(static_cast<std::size_t>(k), 0),
           std::vector<std::uint64_t>(static_cast<std::size_t>(k * k), 0)};
  return s;
}

[[noreturn]] void enumeration_exhausted() {
  throw ResourceExhausted("latin quasisquare enumeration exceeds the budget of " +
                          std::to_string(compute_config().max_enumeration) + " squares");
}

}  // namespace

std::vector<std::vector<int>> QuasiSquare::column_perms() const {
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(k));
  for (const auto& row : rows) {
    for (int j = 0; j < k; ++j) {
      auto first = row.begin() + j * m;
      perms[static_cast<std::size_t>(j)].insert(perms[static_cast<std::size_t>(j)].end(), first,
                                                first + m);
    }
  }
  return perms;
}

int permutation_sign(const std::vector<int>& values) {
  int parity = 0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) parity ^= values[a] > values[b];
  }
  return parity ? -1 : 1;
}

int lq_sign(const QuasiSquare& square) {
  check_lq_params(square.m, square.k);
  const int dim = square.m * square.k;
  auto is_perm = [dim](const std::vector<int>& v) {
    std::vector<int> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
      if (sorted[static_cast<std::size_t>(i)] != i + 1) return false;
    }
    return static_cast<int>(v.size()) == dim;
  };
  if (static_cast<int>(square.rows.size()) != square.k) {
    throw InvalidInput("quasisquare must have k rows");
  }
  int sign = 1;
  for (const auto& row : square.rows) {
    if (!is_perm(row)) throw InvalidInput("quasisquare row is not a permutation of 1..mk");
    for (int b = 0; b < square.k; ++b) {
      if (!std::is_sorted(row.begin() + b * square.m, row.begin() + (b + 1) * square.m)) {
        throw InvalidInput("quasisquare row is not block-ascending");
      }
    }
    sign *= permutation_sign(row);
  }
  for (const auto& sigma : square.column_perms()) {
    if (!is_perm(sigma)) throw InvalidInput("quasisquare column group is not a permutation");
    sign *= permutation_sign(sigma);
  }
  return sign;
}

void enumerate_lq(int m, int k, const std::function<void(const QuasiSquare&)>& visit) {
  check_lq_params(m, k);
  Search s = make_search(m, k);
  const std::uint64_t budget = compute_config().max_enumeration;
  std::uint64_t produced = 0;
  QuasiSquare square;
  square.m = m;
  square.k = k;
  square.rows.assign(static_cast<std::size_t>(k), {});
  auto leaf = [&](int parity) {
    if (++produced > budget) enumeration_exhausted();
    for (int r = 0; r < k; ++r) {
      auto& row = square.rows[static_cast<std::size_t>(r)];
      row.clear();
      for (int j = 0; j < k; ++j) {
        for (int v : mask_values(s.blocks[static_cast<std::size_t>(r * k + j)])) row.push_back(v);
      }
    }
    square.sign = parity ? -1 : 1;
    visit(square);
  };
  place(s, 0, 0, 0, 0, leaf);
}

LqSummary lq_summary(int m, int k) {
  check_lq_params(m, k);
  // First rows: every block-ascending permutation, with its partial state.
  struct Seed {
    std::vector<std::uint64_t> blocks;
    int parity;
  };
  std::vector<Seed> seeds;
  {
    const std::uint64_t full = make_search(m, k).full;
    std::vector<std::uint64_t> cur(static_cast<std::size_t>(k), 0);
    std::function<void(int, std::uint64_t, int)> rec = [&](int j, std::uint64_t used, int parity) {
      if (j == k) {
        seeds.push_back({cur, parity});
        return;
      }
      auto choose = [&](std::uint64_t block) {
        cur[static_cast<std::size_t>(j)] = block;
        rec(j + 1, used | block, parity ^ crossing_parity(used, block));
      };
      for_each_subset(full & ~used, m, 0, choose);
    };
    rec(0, 0, 0);
  }

  const std::uint64_t budget = compute_config().max_enumeration;
  const unsigned workers = std::max(1U, std::min<unsigned>(worker_count(), static_cast<unsigned>(seeds.size())));
  std::vector<std::uint64_t> pos(workers, 0), neg(workers, 0);
  std::atomic<std::uint64_t> total{0};
  std::atomic<bool> stop{false};
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](unsigned w) {
    try {
      Search s = make_search(m, k);
      std::uint64_t local = 0;
      auto leaf = [&](int parity) {
        (parity ? neg[w] : pos[w])++;
        if (++local == 4096) {
          if (total.fetch_add(local) + local > budget || stop.load()) {
            stop = true;
            enumeration_exhausted();
          }
          local = 0;
        }
      };
      for (std::size_t i = w; i < seeds.size(); i += workers) {
        const Seed& seed = seeds[i];
        for (int j = 0; j < k; ++j) s.col_used[static_cast<std::size_t>(j)] = seed.blocks[static_cast<std::size_t>(j)];
        if (k == 1) {
          leaf(seed.parity);
        } else {
          place(s, 1, 0, 0, seed.parity, leaf);
        }
      }
      if (total.fetch_add(local) + local > budget) enumeration_exhausted();
    } catch (...) {
      stop = true;
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  LqSummary out;
  for (unsigned w = 0; w < workers; ++w) {
    out.positive += pos[w];
    out.negative += neg[w];
  }
  out.count = out.positive + out.negative;
  out.signed_sum = ExactScalar(mpz_class(std::to_string(out.positive))) -
                   ExactScalar(mpz_class(std::to_string(out.negative)));
  return out;
}

std::uint64_t lq_count(int m, int k) { return lq_summary(m, k).count; }

ExactScalar alon_tarsi_sum(int m, int k) { return lq_summary(m, k).signed_sum; }

LatinCheck latin_sum_check(int m, int k) {
  LatinCheck check;
  check.sum = alon_tarsi_sum(m, k);
  check.pf = pf(Tensor::antisymmetric_unit(m * k), m);
  check.equal = check.sum == factorial(static_cast<unsigned>(k)) * check.pf;
  return check;
}

ConjectureReport conjecture_scan(int m, int k) {
  check_lq_params(m, k);
  if (k % 2 != 0) {
    throw InvalidInput("conjecture_scan needs an even number of families (got k=" +
                       std::to_string(k) + ")");
  }
  ConjectureReport report;
  report.m = m;
  report.k = k;
  const Tensor unit = Tensor::antisymmetric_unit(m * k);
  if (k == 0) return report;
  std::vector<LaplaceTerm> terms = laplace_terms(unit, m, k / 2);
  report.terms_total = terms.size();
  for (const auto& term : terms) {
    ExactScalar c = term.contribution();
    if (c.is_zero()) continue;
    ConjectureTerm t;
    t.I = term.I;
    t.square = term.pf_I * term.pf_I;
    t.is_square = c == t.square;
    t.contribution = c;
    report.all_squares = report.all_squares && t.is_square;
    report.total += c;
    report.nonzero_terms.push_back(std::move(t));
  }
  report.implied_latin_sum = factorial(static_cast<unsigned>(k)) * report.total;
  report.nonnegative = report.implied_latin_sum.sign() >= 0;
  return report;
}

std::optional<ExactScalar> reference_table_value(int m, int k) {
  // Rows m = 1..6, columns k = 1..8; empty strings are unknown cells.
  static const char* const kTable[6][8] = {
      {"1", "1", "0", "4", "0", "2304", "0", "6210846720"},
      {"1", "3", "90", "204120", "", "", "", ""},
      {"0", "10", "0", "", "0", "", "0", ""},
      {"1", "35", "519750", "", "", "", "", ""},
      {"0", "126", "0", "", "0", "", "0", ""},
      {"1", "462", "", "", "", "", "", ""},
  };
  if (m < 1 || m > 6 || k < 1 || k > 8) return std::nullopt;
  const char* text = kTable[m - 1][k - 1];
  if (*text == '\0') return std::nullopt;
  return ExactScalar::parse(text);
}

std::vector<TableCell> value_table(int max_m, int max_k, const TableOptions& options) {
  if (max_m < 1 || max_k < 1) throw InvalidInput("table needs maxM >= 1 and maxK >= 1");
  std::vector<TableCell> cells;
  for (int m = 1; m <= max_m; ++m) {
    for (int k = 1; k <= max_k; ++k) {
      TableCell cell;
      cell.m = m;
      cell.k = k;
      cell.reference = reference_table_value(m, k);
      const int dim = m * k;
      if (dim > kMaxDim) {
        cell.note = "dimension above 64";
      } else if (k >= 2 && dim % 2 != 0) {
        cell.status = CellStatus::kComputed;
        cell.value = ExactScalar(0);
      } else {
        // Omega has dim! / (m!)^k terms.
        ExactScalar terms = factorial(static_cast<unsigned>(dim));
        ExactScalar mf = factorial(static_cast<unsigned>(m));
        for (int i = 0; i < k; ++i) terms /= mf;
        if (terms > ExactScalar(static_cast<long>(options.max_terms))) {
          cell.note = "Omega has " + terms.to_string() + " terms";
        } else {
          ComputeConfig cfg = compute_config();
          cfg.max_terms = options.max_terms;
          ScopedComputeConfig scope(cfg);
          try {
            cell.value = pf(Tensor::antisymmetric_unit(dim), m);
            cell.status = CellStatus::kComputed;
          } catch (const ResourceExhausted&) {
            cell.note = "frontier exceeds " + std::to_string(options.max_terms) + " terms";
          }
        }
      }
      if (cell.disagrees()) cell.note = "reference value " + cell.reference->to_string();
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string table_text(const std::vector<TableCell>& cells) {
  int max_m = 0;
  int max_k = 0;
  for (const auto& c : cells) {
    max_m = std::max(max_m, c.m);
    max_k = std::max(max_k, c.k);
  }
  auto label = [](const TableCell& c) {
    if (c.status == CellStatus::kSkipped) return std::string("-");
    return c.value.to_string() + (c.disagrees() ? "*" : "");
  };
  std::vector<std::size_t> width(static_cast<std::size_t>(max_k) + 1, 1);
  width[0] = 3;
  for (int k = 1; k <= max_k; ++k) width[static_cast<std::size_t>(k)] = std::to_string(k).size();
  for (const auto& c : cells) {
    auto& w = width[static_cast<std::size_t>(c.k)];
    w = std::max(w, label(c).size());
  }
  std::ostringstream out;
  out << std::setw(static_cast<int>(width[0])) << "m\\k";
  for (int k = 1; k <= max_k; ++k) {
    out << "  " << std::setw(static_cast<int>(width[static_cast<std::size_t>(k)])) << k;
  }
  out << '\n';
  for (int m = 1; m <= max_m; ++m) {
    out << std::setw(static_cast<int>(width[0])) << m;
    for (int k = 1; k <= max_k; ++k) {
      auto it = std::find_if(cells.begin(), cells.end(),
                             [&](const TableCell& c) { return c.m == m && c.k == k; });
      std::string text = it == cells.end() ? "" : label(*it);
      out << "  " << std::setw(static_cast<int>(width[static_cast<std::size_t>(k)])) << text;
    }
    out << '\n';
  }
  for (const auto& c : cells) {
    if (c.disagrees()) {
      out << "* (" << c.m << "," << c.k << "): computed " << c.value.to_string()
          << ", reference " << c.reference->to_string() << '\n';
    }
  }
  return out.str();
}

std::string table_json(const std::vector<TableCell>& cells) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json row;
    row["m"] = c.m;
    row["k"] = c.k;
    row["value"] = c.status == CellStatus::kComputed ? nlohmann::ordered_json(c.value.to_string())
                                                     : nlohmann::ordered_json(nullptr);
    row["status"] = c.status == CellStatus::kComputed ? "computed" : "skipped";
    if (c.reference) row["reference"] = c.reference->to_string();
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

}  // namespace hyperpf
