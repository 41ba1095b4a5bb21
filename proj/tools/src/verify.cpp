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

#include "hyperpf_tools/verify.hpp"

#include <functional>
#include <sstream>

#include "hyperpf/exact_scalar.hpp"
#include "hyperpf/latin.hpp"
#include "hyperpf/pfaffian.hpp"
#include "hyperpf_tools/random.hpp"
#include "json.hpp"

namespace hyperpf::tools {
namespace {

struct Config {
  int m;
  int families;
  int blocks;
};

std::string config_name(const Config& c) {
  return "(m,k,n)=(" + std::to_string(c.m) + "," + std::to_string(c.families) + "," +
         std::to_string(c.blocks) + ")";
}

class Suite {
 public:
  explicit Suite(std::uint64_t seed) : rng_(seed) {}

  Rng& rng() { return rng_; }

  // Runs `trial` `count` times; a trial returns an empty string on success
  // or a description of the mismatch.
  void run(const std::string& group, const std::string& name, int count,
           const std::function<std::string(int)>& trial) {
    CheckResult r{group, name, 0, count, {}};
    for (int i = 0; i < count; ++i) {
      std::string failure = trial(i);
      if (failure.empty()) {
        ++r.passed;
      } else if (r.detail.empty()) {
        r.detail = "first failure at instance " + std::to_string(i) + ": " + failure;
      }
    }
    results_.push_back(std::move(r));
  }

  // Remembers a value for the integrality tally.
  const ExactScalar& note(const ExactScalar& v) {
    ++integral_total_;
    if (v.is_integer()) ++integral_passed_;
    return v;
  }

  void finish_integrality() {
    results_.push_back({"integrality", "denominator 1 on every integer-tensor result",
                        integral_passed_, integral_total_, {}});
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  Rng rng_;
  std::vector<CheckResult> results_;
  int integral_passed_ = 0;
  int integral_total_ = 0;
};

std::string mismatch(const ExactScalar& a, const ExactScalar& b, const char* la, const char* lb) {
  if (a == b) return {};
  return std::string(la) + " " + a.to_string() + ", " + lb + " " + b.to_string();
}

Tensor all_ones_matrix(int dim) {
  return Tensor::dense({2, dim}, std::vector<ExactScalar>(static_cast<std::size_t>(dim * dim), ExactScalar(1)));
}

}  // namespace

std::vector<CheckResult> verify_all(const VerifyOptions& options) {
  Suite suite(options.seed);

  const std::vector<Config> oracle_configs = {{1, 2, 2}, {1, 2, 3}, {1, 4, 2}, {2, 1, 2},
                                              {2, 1, 3}, {2, 2, 2}, {4, 1, 2}};
  for (const Config& c : oracle_configs) {
    suite.run("oracle", "pf_grassmann = pf_combinatorial " + config_name(c), options.oracle_instances,
              [&](int) {
                Tensor t = random_block_tensor(suite.rng(), c.m, c.families, c.blocks);
                return mismatch(suite.note(pf_grassmann(t, c.m)), suite.note(pf_combinatorial(t, c.m)),
                                "grassmann", "combinatorial");
              });
  }
  for (const Config& c : oracle_configs) {
    suite.run("hafnian", "nilpotent engine = unsigned sum " + config_name(c), options.oracle_instances,
              [&](int) {
                Tensor t = random_block_tensor(suite.rng(), c.m, c.families, c.blocks);
                return mismatch(suite.note(hyperhafnian(t, c.m)),
                                suite.note(hyperhafnian_combinatorial(t, c.m)), "engine", "oracle");
              });
  }
  suite.run("hafnian", "all-ones 2n x 2n matrix gives (2n-1)!!, n = 1..5", 5, [&](int i) {
    const int n = i + 1;
    ExactScalar expected(1);
    for (int j = 1; j < 2 * n; j += 2) expected *= ExactScalar(j);
    return mismatch(suite.note(hyperhafnian(all_ones_matrix(2 * n), 2)), expected, "hafnian",
                    "expected");
  });

  const std::vector<Config> laplace_configs = {{1, 2, 2}, {1, 2, 3}, {1, 2, 4}, {1, 4, 2}, {2, 1, 2},
                                               {2, 1, 3}, {2, 2, 2}, {2, 2, 3}, {3, 2, 2}};
  for (const Config& c : laplace_configs) {
    for (int np = 1; np < c.blocks; ++np) {
      suite.run("laplace", "expansion " + config_name(c) + " n'=" + std::to_string(np),
                options.instances, [&](int) {
                  Tensor t = random_block_tensor(suite.rng(), c.m, c.families, c.blocks);
                  ExpansionCheck check = laplace_check(t, c.m, np);
                  return mismatch(suite.note(check.sum), suite.note(check.pf), "sum", "pf");
                });
    }
  }
  for (const Config& c : laplace_configs) {
    for (int np = 1; np < c.blocks; ++np) {
      suite.run("laplace", "normalized expansion " + config_name(c) + " n'=" + std::to_string(np),
                options.instances, [&](int) {
                  Tensor t = random_block_tensor(suite.rng(), c.m, c.families, c.blocks);
                  ExpansionCheck check = laplace_check_normalized(t, c.m, np);
                  return mismatch(suite.note(check.sum), suite.note(check.pf), "sum", "pf");
                });
    }
  }

  const std::vector<Config> sum_configs = {{1, 2, 2}, {1, 2, 3}, {1, 4, 2},
                                           {2, 1, 2}, {2, 1, 3}, {2, 2, 2}};
  for (const Config& c : sum_configs) {
    suite.run("sum", "Pf(M+N) expansion " + config_name(c), options.instances, [&](int) {
      Tensor a = random_block_tensor(suite.rng(), c.m, c.families, c.blocks);
      Tensor b = random_block_tensor(suite.rng(), c.m, c.families, c.blocks);
      ExpansionCheck check = sum_expansion_check(a, b, c.m);
      return mismatch(suite.note(check.sum), suite.note(check.pf), "sum", "pf");
    });
  }

  struct ComposeCase {
    int m_prime;
    int p;
    int families;
    int dim;
  };
  for (const ComposeCase& c : std::vector<ComposeCase>{{1, 2, 2, 4}, {2, 2, 2, 8}, {1, 3, 2, 6}}) {
    const std::string name = "(m',p)=(" + std::to_string(c.m_prime) + "," + std::to_string(c.p) +
                             ") order " + std::to_string(c.m_prime * c.families) + " dim " +
                             std::to_string(c.dim);
    suite.run("compose", name, options.instances, [&](int) {
      Tensor t = random_block_tensor(suite.rng(), c.m_prime, c.families, c.dim / c.m_prime);
      CompositionCheck check = compose_check(t, c.m_prime, c.p);
      return mismatch(suite.note(check.lhs), suite.note(check.rhs), "lhs", "rhs");
    });
  }

  for (int dim : {2, 4, 6}) {
    suite.run("skew", "hyperpfaffian^2 = determinant, dim " + std::to_string(dim), options.instances,
              [&](int) {
                Tensor a = random_skew_matrix(suite.rng(), dim);
                ExactScalar p = suite.note(hyperpfaffian(a, 2));
                return mismatch(p * p, suite.note(hyperdeterminant(a)), "pf^2", "det");
              });
  }

  for (const Config& c : std::vector<Config>{{1, 3, 2}, {1, 3, 3}, {3, 1, 2}, {1, 5, 2}}) {
    suite.run("odd", "odd total order vanishes " + config_name(c), options.instances, [&](int) {
      Tensor t = random_block_tensor(suite.rng(), c.m, c.families, c.blocks);
      std::string a = mismatch(suite.note(pf_combinatorial(t, c.m)), ExactScalar(0), "combinatorial", "expected");
      return a.empty() ? mismatch(suite.note(pf(t, c.m)), ExactScalar(0), "pf", "expected") : a;
    });
  }
  suite.finish_integrality();

  std::vector<std::pair<int, int>> cells = {{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 1}, {2, 2},
                                            {2, 3}, {3, 2}, {4, 2}, {5, 2}, {6, 2}};
  if (options.stretch) {
    cells.insert(cells.end(), {{1, 6}, {2, 4}, {4, 3}});
  }
  for (auto [m, k] : cells) {
    suite.run("table", "Pf_" + std::to_string(m) + "(A^" + std::to_string(m * k) + ") vs reference",
              1, [&](int) {
                return mismatch(pf(Tensor::antisymmetric_unit(m * k), m),
                                *reference_table_value(m, k), "computed", "reference");
              });
  }

  for (auto [m, k] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {1, 4}, {2, 2}, {2, 3}, {3, 2}}) {
    suite.run("latin", "signed LQ(" + std::to_string(m) + "," + std::to_string(k) + ") sum = k! Pf",
              1, [&](int) {
                LatinCheck check = latin_sum_check(m, k);
                return mismatch(check.sum, factorial(static_cast<unsigned>(k)) * check.pf, "sum",
                                "k!*pf");
              });
  }
  suite.run("latin", "|LQ(m,2)| = C(2m,m), all signs +1, m = 1..5", 5, [&](int i) {
    const int m = i + 1;
    LqSummary s = lq_summary(m, 2);
    const ExactScalar expected = binomial(static_cast<unsigned>(2 * m), static_cast<unsigned>(m));
    std::string r = mismatch(ExactScalar(static_cast<std::int64_t>(s.count)), expected, "count", "C(2m,m)");
    if (r.empty() && s.negative != 0) r = std::to_string(s.negative) + " negative squares";
    return r;
  });

  for (auto [m, k] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {1, 4}}) {
    suite.run("conjecture",
              "nonzero split terms are squares, (m,k)=(" + std::to_string(m) + "," + std::to_string(k) + ")",
              1, [&](int) {
                ConjectureReport report = conjecture_scan(m, k);
                if (!report.all_squares) return std::string("a nonzero term is not a square");
                if (!report.nonnegative) return "signed latin sum " + report.implied_latin_sum.to_string();
                return std::string();
              });
  }
  return suite.take();
}

std::string verify_report_text(const VerifyOptions& options, const std::vector<CheckResult>& results) {
  std::ostringstream out;
  out << "verify-all seed=" << options.seed << " stretch=" << (options.stretch ? "on" : "off") << '\n';
  int ok = 0;
  for (const auto& r : results) {
    ok += r.ok();
    out << (r.ok() ? "PASS" : "FAIL") << "  [" << r.group << "] " << r.name << "  " << r.passed << '/'
        << r.total;
    if (!r.detail.empty()) out << "  (" << r.detail << ')';
    out << '\n';
  }
  out << "summary: " << ok << '/' << results.size() << " checks passed\n";
  return out.str();
}

std::string verify_report_json(const VerifyOptions& options, const std::vector<CheckResult>& results) {
  nlohmann::ordered_json doc;
  doc["seed"] = options.seed;
  doc["stretch"] = options.stretch;
  doc["checks"] = nlohmann::ordered_json::array();
  int ok = 0;
  for (const auto& r : results) {
    ok += r.ok();
    nlohmann::ordered_json c;
    c["group"] = r.group;
    c["name"] = r.name;
    c["passed"] = r.passed;
    c["total"] = r.total;
    c["status"] = r.ok() ? "pass" : "fail";
    if (!r.detail.empty()) c["detail"] = r.detail;
    doc["checks"].push_back(std::move(c));
  }
  doc["passed"] = ok;
  doc["failed"] = static_cast<int>(results.size()) - ok;
  return doc.dump(2) + "\n";
}

}  // namespace hyperpf::tools
