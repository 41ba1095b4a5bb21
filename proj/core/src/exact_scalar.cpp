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

#include "hyperpf/exact_scalar.hpp"

#include <cctype>
#include <limits>

#include "hyperpf/error.hpp"

namespace hyperpf {
namespace {

bool fits_int64(const mpz_class& z) {
  // mpz_fits_slong_p is exact on LP64 targets, where long is 64 bits.
  static_assert(sizeof(long) == sizeof(std::int64_t));
  return mpz_fits_slong_p(z.get_mpz_t()) != 0;
}

mpz_class to_mpz(std::int64_t v) {
  static_assert(sizeof(long) == sizeof(std::int64_t));
  return mpz_class(static_cast<long>(v));
}

bool parse_integer(std::string_view text, mpz_class& out) {
  if (text.empty()) return false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') pos = 1;
  if (pos == text.size()) return false;
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return out.set_str(digits, 10) == 0;
}

}  // namespace

ExactScalar::ExactScalar(const mpz_class& value) { assign(mpq_class(value)); }

ExactScalar::ExactScalar(const mpq_class& value) {
  mpq_class copy(value);
  copy.canonicalize();
  assign(std::move(copy));
}

ExactScalar::ExactScalar(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw InvalidInput("ExactScalar: zero denominator");
  mpq_class q(to_mpz(numerator), to_mpz(denominator));
  q.canonicalize();
  assign(std::move(q));
}

ExactScalar::ExactScalar(const ExactScalar& other)
    : small_(other.small_),
      big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

ExactScalar& ExactScalar::operator=(const ExactScalar& other) {
  if (this != &other) {
    small_ = other.small_;
    big_ = other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr;
  }
  return *this;
}

void ExactScalar::assign(mpq_class&& value) {
  if (value.get_den() == 1 && fits_int64(value.get_num())) {
    small_ = value.get_num().get_si();
    big_.reset();
  } else {
    small_ = 0;
    if (big_) {
      *big_ = std::move(value);
    } else {
      big_ = std::make_unique<mpq_class>(std::move(value));
    }
  }
}

ExactScalar ExactScalar::parse(std::string_view text) {
  auto slash = text.find('/');
  mpz_class num;
  if (slash == std::string_view::npos) {
    if (!parse_integer(text, num)) {
      throw InvalidInput("not an exact integer or p/q rational: '" + std::string(text) + "'");
    }
    return ExactScalar(num);
  }
  mpz_class den;
  std::string_view den_text = text.substr(slash + 1);
  if (!parse_integer(text.substr(0, slash), num) || den_text.empty() ||
      den_text[0] == '+' || den_text[0] == '-' || !parse_integer(den_text, den)) {
    throw InvalidInput("not an exact integer or p/q rational: '" + std::string(text) + "'");
  }
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  mpq_class q(num, den);
  q.canonicalize();
  return ExactScalar(q);
}

bool ExactScalar::is_integer() const { return !big_ || big_->get_den() == 1; }

int ExactScalar::sign() const {
  if (!big_) return (small_ > 0) - (small_ < 0);
  return sgn(*big_);
}

mpz_class ExactScalar::numerator() const { return big_ ? big_->get_num() : to_mpz(small_); }

mpz_class ExactScalar::denominator() const { return big_ ? big_->get_den() : mpz_class(1); }

mpq_class ExactScalar::to_mpq() const { return big_ ? *big_ : mpq_class(to_mpz(small_)); }

std::string ExactScalar::to_string() const {
  if (!big_) return std::to_string(small_);
  return big_->get_str(10);
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& rhs) {
  std::int64_t r;
  if (!big_ && !rhs.big_ && !__builtin_add_overflow(small_, rhs.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpq() + rhs.to_mpq());
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& rhs) {
  std::int64_t r;
  if (!big_ && !rhs.big_ && !__builtin_sub_overflow(small_, rhs.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpq() - rhs.to_mpq());
  return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& rhs) {
  std::int64_t r;
  if (!big_ && !rhs.big_ && !__builtin_mul_overflow(small_, rhs.small_, &r)) {
    small_ = r;
    return *this;
  }
  assign(to_mpq() * rhs.to_mpq());
  return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& rhs) {
  if (rhs.is_zero()) throw InvalidInput("ExactScalar: division by zero");
  if (!big_ && !rhs.big_ && rhs.small_ != -1 && small_ % rhs.small_ == 0) {
    small_ /= rhs.small_;
    return *this;
  }
  assign(to_mpq() / rhs.to_mpq());
  return *this;
}

void ExactScalar::add_product(const ExactScalar& a, const ExactScalar& b) {
  std::int64_t p, r;
  if (!big_ && !a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &p) &&
      !__builtin_add_overflow(small_, p, &r)) {
    small_ = r;
    return;
  }
  assign(to_mpq() + a.to_mpq() * b.to_mpq());
}

void ExactScalar::negate() {
  if (!big_) {
    if (small_ != std::numeric_limits<std::int64_t>::min()) {
      small_ = -small_;
      return;
    }
    assign(-to_mpq());
    return;
  }
  mpq_class v = -*big_;
  assign(std::move(v));
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (!a.big_ || !b.big_) return false;  // canonical representation
  return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const ExactScalar& a, const ExactScalar& b) {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

ExactScalar factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return ExactScalar(f);
}

ExactScalar binomial(unsigned n, unsigned k) {
  if (k > n) return ExactScalar(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return ExactScalar(b);
}

}  // namespace hyperpf
