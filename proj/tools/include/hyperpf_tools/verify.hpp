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
#include <string>
#include <vector>

namespace hyperpf::tools {

struct VerifyOptions {
  std::uint64_t seed = 42;
  bool stretch = false;
  /// Random instances per identity configuration.
  int instances = 50;
  /// Random tensors per oracle-equivalence configuration.
  int oracle_instances = 30;
};

struct CheckResult {
  std::string group;
  std::string name;
  int passed = 0;
  int total = 0;
  std::string detail;

  bool ok() const { return passed == total; }
};

/// Randomized identity suite plus the reference table cells. Output depends only
/// on the options, never on the worker count.
std::vector<CheckResult> verify_all(const VerifyOptions& options);

std::string verify_report_text(const VerifyOptions& options, const std::vector<CheckResult>& results);
std::string verify_report_json(const VerifyOptions& options, const std::vector<CheckResult>& results);

}  // namespace hyperpf::tools
