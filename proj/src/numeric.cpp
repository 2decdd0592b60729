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

#include "phylocount/numeric.hpp"

#include <mpfr.h>

#include <cmath>

namespace phylocount {

std::string to_string(const BigInt& value) { return value.get_str(10); }

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str(10);
  return value.get_num().get_str(10) + "/" + value.get_den().get_str(10);
}

Rational parse_rational(const std::string& text) {
  Rational out;
  if (out.set_str(text, 10) != 0) {
    throw DomainError("not a rational number: '" + text + "'");
  }
  if (out.get_den() == 0) throw DomainError("zero denominator: '" + text + "'");
  out.canonicalize();
  return out;
}

double to_double(const Rational& value) {
  mpfr_t tmp;
  mpfr_init2(tmp, 53);
  mpfr_set_q(tmp, value.get_mpq_t(), MPFR_RNDN);
  const double out = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

double to_double(const BigInt& value) {
  mpfr_t tmp;
  mpfr_init2(tmp, 53);
  mpfr_set_z(tmp, value.get_mpz_t(), MPFR_RNDN);
  const double out = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

double log_of(const BigInt& value) {
  if (sgn(value) <= 0) throw DomainError("log_of: argument must be positive");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

BigInt factorial(unsigned long n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

}  // namespace phylocount
