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

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

namespace hyperpf {

/// Exact rational number in lowest terms.
///
/// Integers that fit in 64 bits are held inline; everything else lives in a
/// heap-allocated GMP rational. The representation is canonical: a value is
/// stored inline if and only if it is an integer in int64 range, so two equal
/// values always have the same representation.
class ExactScalar {
 public:
  ExactScalar() noexcept = default;
  ExactScalar(std::int64_t value) noexcept : small_(value) {}  // NOLINT
  ExactScalar(int value) noexcept : small_(value) {}           // NOLINT
  explicit ExactScalar(const mpz_class& value);
  explicit ExactScalar(const mpq_class& value);
  ExactScalar(std::int64_t numerator, std::int64_t denominator);

  ExactScalar(const ExactScalar& other);
  ExactScalar(ExactScalar&& other) noexcept = default;
  ExactScalar& operator=(const ExactScalar& other);
  ExactScalar& operator=(ExactScalar&& other) noexcept = default;
  ~ExactScalar() = default;

  /// Parses "-12", "3/4", "+5", "-6/8" (reduced). Rejects floats, blanks,
  /// zero denominators and trailing garbage.
  static ExactScalar parse(std::string_view text);

  bool is_zero() const noexcept { return !big_ && small_ == 0; }
  bool is_integer() const;
  bool is_small() const noexcept { return !big_; }
  int sign() const;

  mpz_class numerator() const;
  mpz_class denominator() const;
  mpq_class to_mpq() const;

  /// "p" when the denominator is 1, otherwise "p/q".
  std::string to_string() const;

  ExactScalar& operator+=(const ExactScalar& rhs);
  ExactScalar& operator-=(const ExactScalar& rhs);
  ExactScalar& operator*=(const ExactScalar& rhs);
  ExactScalar& operator/=(const ExactScalar& rhs);

  /// this += a * b without materializing the product when both are small.
  void add_product(const ExactScalar& a, const ExactScalar& b);
  void negate();

  friend ExactScalar operator+(ExactScalar lhs, const ExactScalar& rhs) { return lhs += rhs; }
  friend ExactScalar operator-(ExactScalar lhs, const ExactScalar& rhs) { return lhs -= rhs; }
  friend ExactScalar operator*(ExactScalar lhs, const ExactScalar& rhs) { return lhs *= rhs; }
  friend ExactScalar operator/(ExactScalar lhs, const ExactScalar& rhs) { return lhs /= rhs; }
  friend ExactScalar operator-(ExactScalar value) {
    value.negate();
    return value;
  }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b);
  friend std::strong_ordering operator<=>(const ExactScalar& a, const ExactScalar& b);

  friend std::ostream& operator<<(std::ostream& os, const ExactScalar& value) {
    return os << value.to_string();
  }

 private:
  void assign(mpq_class&& value);

  std::int64_t small_ = 0;
  std::unique_ptr<mpq_class> big_;
};

ExactScalar factorial(unsigned n);
ExactScalar binomial(unsigned n, unsigned k);

}  // namespace hyperpf
