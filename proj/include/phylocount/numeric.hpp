// Copyright 2026 The phylocount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHYLOCOUNT_NUMERIC_HPP_
#define PHYLOCOUNT_NUMERIC_HPP_

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace phylocount {

using BigInt = mpz_class;
using Rational = mpq_class;

// Raised for arguments outside an operation's documented domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

std::string to_string(const BigInt& value);
// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);
Rational parse_rational(const std::string& text);

// Round-to-nearest conversion of an exact rational to double.
double to_double(const Rational& value);
double to_double(const BigInt& value);

// Natural log of a positive integer of any size, via mantissa/exponent
// splitting so that values far beyond the double range are fine.
double log_of(const BigInt& value);

BigInt factorial(unsigned long n);

// -1, 0 or +1.
inline int sign_of(const BigInt& value) { return sgn(value); }
inline int sign_of(const Rational& value) { return sgn(value); }

}  // namespace phylocount

#endif  // PHYLOCOUNT_NUMERIC_HPP_
