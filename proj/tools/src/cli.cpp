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

#include "hyperpf_tools/cli.hpp"

#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"
#include "hyperpf/config.hpp"
#include "hyperpf/error.hpp"
#include "hyperpf/latin.hpp"
#include "hyperpf/pfaffian.hpp"
#include "hyperpf/tensor.hpp"
#include "hyperpf_tools/verify.hpp"
#include "json.hpp"

namespace hyperpf::tools {
namespace {

using Json = nlohmann::ordered_json;

struct Options {
  int m = 0;
  int k = 0;
  int n_prime = 0;
  int m_prime = 0;
  int p = 0;
  int antisymmetric = 0;
  std::vector<std::string> tensors;
  std::string format = "text";
  unsigned threads = 0;
  std::size_t budget_terms = 0;
  std::uint64_t seed = 42;
  bool stretch = false;
  bool count = false;
  bool normalized = false;

  std::map<std::string, const CLI::Option*> given;

  bool has(const std::string& name) const { return given.at(name)->count() > 0; }
  bool json() const { return format == "json"; }
};

int need(const Options& o, const std::string& name, int value, const std::string& verb) {
  if (!o.has(name)) throw InvalidInput(verb + " needs --" + name);
  return value;
}

std::vector<Tensor> tensor_sources(const Options& o) {
  std::vector<Tensor> out;
  if (o.has("antisymmetric")) out.push_back(Tensor::antisymmetric_unit(o.antisymmetric));
  for (const auto& path : o.tensors) out.push_back(load_tensor(path));
  return out;
}

Tensor single_tensor(const Options& o, const std::string& verb) {
  std::vector<Tensor> t = tensor_sources(o);
  if (t.size() != 1) {
    throw InvalidInput(verb + " needs exactly one tensor source (--tensor <path> or --antisymmetric <D>)");
  }
  return t.front();
}

std::string sets_text(const std::vector<std::vector<int>>& sets) {
  std::string s;
  for (std::size_t f = 0; f < sets.size(); ++f) {
    if (f) s += ';';
    for (std::size_t i = 0; i < sets[f].size(); ++i) {
      if (i) s += ',';
      s += std::to_string(sets[f][i]);
    }
  }
  return s;
}

int emit_value(const Options& o, std::ostream& out, const std::string& verb, const ExactScalar& v) {
  if (o.json()) {
    Json doc;
    doc["verb"] = verb;
    doc["value"] = v.to_string();
    out << doc.dump() << '\n';
  } else {
    out << v << '\n';
  }
  return kExitOk;
}

int emit_check(const Options& o, std::ostream& out, const std::string& verb, const char* la,
               const ExactScalar& a, const char* lb, const ExactScalar& b, bool equal) {
  if (o.json()) {
    Json doc;
    doc["verb"] = verb;
    doc[la] = a.to_string();
    doc[lb] = b.to_string();
    doc["equal"] = equal;
    out << doc.dump() << '\n';
  } else {
    out << la << ' ' << a << '\n' << lb << ' ' << b << '\n'
        << (equal ? "identity holds" : "identity fails") << '\n';
  }
  return equal ? kExitOk : kExitIdentityFailed;
}

int cmd_latin(const Options& o, std::ostream& out) {
  const int m = need(o, "m", o.m, "latin");
  const int k = need(o, "k", o.k, "latin");
  if (o.count) {
    const std::uint64_t n = lq_count(m, k);
    return emit_value(o, out, "latin", ExactScalar(mpz_class(std::to_string(n))));
  }
  LqSummary s = lq_summary(m, k);
  const ExactScalar pf_value = pf(Tensor::antisymmetric_unit(m * k), m);
  const ExactScalar rhs = factorial(static_cast<unsigned>(k)) * pf_value;
  const bool equal = s.signed_sum == rhs;
  if (o.json()) {
    Json doc;
    doc["verb"] = "latin";
    doc["m"] = m;
    doc["k"] = k;
    doc["count"] = s.count;
    doc["positive"] = s.positive;
    doc["negative"] = s.negative;
    doc["signed_sum"] = s.signed_sum.to_string();
    doc["pf"] = pf_value.to_string();
    doc["k_factorial_pf"] = rhs.to_string();
    doc["equal"] = equal;
    out << doc.dump() << '\n';
  } else {
    out << "count " << s.count << " (" << s.positive << " even, " << s.negative << " odd)\n"
        << "signed_sum " << s.signed_sum << '\n'
        << "k!*pf " << rhs << '\n'
        << (equal ? "identity holds" : "identity fails") << '\n';
  }
  return equal ? kExitOk : kExitIdentityFailed;
}

int cmd_table(const Options& o, std::ostream& out) {
  TableOptions options;
  if (o.has("budget-terms")) options.max_terms = o.budget_terms;
  auto cells = value_table(o.has("m") ? o.m : 6, o.has("k") ? o.k : 8, options);
  out << (o.json() ? table_json(cells) : table_text(cells));
  return kExitOk;
}

int cmd_conjecture(const Options& o, std::ostream& out) {
  ConjectureReport r = conjecture_scan(need(o, "m", o.m, "conjecture-scan"), need(o, "k", o.k, "conjecture-scan"));
  if (o.json()) {
    Json doc;
    doc["verb"] = "conjecture-scan";
    doc["m"] = r.m;
    doc["k"] = r.k;
    doc["n_prime"] = r.k / 2;
    doc["terms"] = r.terms_total;
    doc["nonzero"] = Json::array();
    for (const auto& t : r.nonzero_terms) {
      doc["nonzero"].push_back(Json{{"I", sets_text(t.I)},
                                    {"contribution", t.contribution.to_string()},
                                    {"square", t.square.to_string()},
                                    {"is_square", t.is_square}});
    }
    doc["total"] = r.total.to_string();
    doc["implied_latin_sum"] = r.implied_latin_sum.to_string();
    doc["all_squares"] = r.all_squares;
    doc["nonnegative"] = r.nonnegative;
    out << doc.dump() << '\n';
  } else {
    out << "(m,k)=(" << r.m << "," << r.k << ") split n'=" << r.k / 2 << ": " << r.terms_total
        << " terms, " << r.nonzero_terms.size() << " nonzero\n";
    for (const auto& t : r.nonzero_terms) {
      out << "  I=" << sets_text(t.I) << "  term " << t.contribution << "  square " << t.square
          << (t.is_square ? "  ok" : "  differs") << '\n';
    }
    out << "total " << r.total << '\n'
        << "implied signed latin sum " << r.implied_latin_sum
        << (r.nonnegative ? " (nonnegative)" : " (negative)") << '\n'
        << (r.all_squares ? "every nonzero term is a square" : "some nonzero term is not a square")
        << '\n';
  }
  return r.all_squares && r.nonnegative ? kExitOk : kExitIdentityFailed;
}

int cmd_verify(const Options& o, std::ostream& out) {
  VerifyOptions options;
  options.seed = o.seed;
  options.stretch = o.stretch;
  auto results = verify_all(options);
  out << (o.json() ? verify_report_json(options, results) : verify_report_text(options, results));
  for (const auto& r : results) {
    if (!r.ok()) return kExitIdentityFailed;
  }
  return kExitOk;
}

int dispatch(const std::string& verb, const Options& o, std::ostream& out) {
  if (verb == "pf") return emit_value(o, out, verb, pf(single_tensor(o, verb), need(o, "m", o.m, verb)));
  if (verb == "det") return emit_value(o, out, verb, hyperdeterminant(single_tensor(o, verb)));
  if (verb == "hpf") {
    Tensor t = single_tensor(o, verb);
    return emit_value(o, out, verb, hyperpfaffian(t, o.has("k") ? o.k : t.order()));
  }
  if (verb == "hf") return emit_value(o, out, verb, hyperhafnian(single_tensor(o, verb), need(o, "m", o.m, verb)));
  if (verb == "laplace") {
    Tensor t = single_tensor(o, verb);
    const int m = need(o, "m", o.m, verb);
    const int np = need(o, "n-prime", o.n_prime, verb);
    ExpansionCheck c = o.normalized ? laplace_check_normalized(t, m, np) : laplace_check(t, m, np);
    return emit_check(o, out, verb, "sum", c.sum, "pf", c.pf, c.equal);
  }
  if (verb == "sum-check") {
    std::vector<Tensor> t = tensor_sources(o);
    if (t.size() != 2) throw InvalidInput("sum-check needs two tensor sources (M then N)");
    ExpansionCheck c = sum_expansion_check(t[0], t[1], need(o, "m", o.m, verb));
    return emit_check(o, out, verb, "sum", c.sum, "pf", c.pf, c.equal);
  }
  if (verb == "compose-check") {
    CompositionCheck c = compose_check(single_tensor(o, verb), need(o, "m-prime", o.m_prime, verb),
                                       need(o, "p", o.p, verb));
    return emit_check(o, out, verb, "lhs", c.lhs, "rhs", c.rhs, c.equal);
  }
  if (verb == "latin") return cmd_latin(o, out);
  if (verb == "table") return cmd_table(o, out);
  if (verb == "conjecture-scan") return cmd_conjecture(o, out);
  return cmd_verify(o, out);
}

unsigned threads_from_env() {
  const char* text = std::getenv("HYPERPF_THREADS");
  if (text == nullptr || *text == '\0') return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(text, &end, 10);
  if (*end != '\0' || v > 4096) throw InvalidInput("HYPERPF_THREADS must be a thread count");
  return static_cast<unsigned>(v);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact generalized hyperpfaffians, hyperdeterminants and their identities", "hyperpf"};
  app.require_subcommand(1, 1);
  Options o;
  auto add = [&](const std::string& name, auto& target, const std::string& help) {
    o.given[name] = app.add_option("--" + name, target, help);
  };
  add("m", o.m, "block size m");
  add("k", o.k, "number of families (latin, conjecture-scan, table maximum)");
  add("n-prime", o.n_prime, "split point n' for laplace");
  add("m-prime", o.m_prime, "inner block size m' for compose-check");
  add("p", o.p, "composition factor p (m = p m')");
  add("antisymmetric", o.antisymmetric, "use the antisymmetric unit tensor of dimension D");
  add("tensor", o.tensors, "tensor file (repeatable)");
  add("threads", o.threads, "worker threads (default: HYPERPF_THREADS or all cores)");
  add("budget-terms", o.budget_terms, "budget for algebra terms and enumerated tuples (per cell for table)");
  add("seed", o.seed, "seed for verify-all");
  o.given["format"] = app.add_option("--format", o.format, "output format")
                          ->check(CLI::IsMember({"text", "json"}));
  o.given["stretch"] = app.add_flag("--stretch", o.stretch, "verify-all: include the stretch cells");
  o.given["count"] = app.add_flag("--count", o.count, "latin: print only the number of quasisquares");
  o.given["normalized"] = app.add_flag("--normalized", o.normalized,
                                       "laplace: pin only index 1 and divide out the overcount");

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"pf", "Pf_m of a tensor"},
      {"det", "Cayley hyperdeterminant (Pf_1)"},
      {"hpf", "hyperpfaffian (Pf_k, k = order)"},
      {"hf", "hyperhafnian (unsigned Pf_m)"},
      {"laplace", "check the Laplace-type expansion at n'"},
      {"sum-check", "check the expansion of Pf_m(M + N)"},
      {"compose-check", "check the composition formula"},
      {"latin", "enumerate (m,k)-latin quasisquares"},
      {"table", "values of Pf_m on antisymmetric unit tensors"},
      {"conjecture-scan", "test the squared-term pattern of the split expansion"},
      {"verify-all", "run the randomized identity suite and the table cells"},
  };
  for (const auto& [name, help] : verbs) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  const std::string verb = app.get_subcommands().front()->get_name();

  try {
    ComputeConfig config = compute_config();
    config.threads = o.has("threads") ? o.threads : threads_from_env();
    if (o.has("budget-terms") && verb != "table") {
      config.max_terms = o.budget_terms;
      config.max_enumeration = o.budget_terms;
    }
    ScopedComputeConfig scope(config);
    return dispatch(verb, o, out);
  } catch (const InvalidInput& e) {
    err << "hyperpf: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ResourceExhausted& e) {
    err << "hyperpf: " << e.what() << '\n';
    return kExitResource;
  } catch (const Unsupported& e) {
    err << "hyperpf: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "hyperpf: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace hyperpf::tools
