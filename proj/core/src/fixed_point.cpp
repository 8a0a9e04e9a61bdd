/*
 * Copyright 2026 The fairmpc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fairmpc/fixed_point.hpp"

#include <cmath>
#include <sstream>

#include "fairmpc/error.hpp"

namespace fairmpc {

Ring encode_raw(double v, int frac_bits, int int_bits) {
  if (!std::isfinite(v) || std::fabs(v) >= fixed_range(int_bits)) {
    std::ostringstream msg;
    msg << "value " << v << " outside the fixed-point range (+-"
        << fixed_range(int_bits) << ")";
    throw Error(ErrorCode::kOverflow, msg.str());
  }
  // llround rounds half away from zero; the scaled value fits in 63 bits.
  return as_ring(std::llround(std::ldexp(v, frac_bits)));
}

FixedPoint encode(double v, int frac_bits, int int_bits) {
  return FixedPoint{encode_raw(v, frac_bits, int_bits), frac_bits};
}

double decode_raw(Ring raw, int frac_bits) {
  return std::ldexp(static_cast<double>(as_signed(raw)), -frac_bits);
}

double decode(FixedPoint x) { return decode_raw(x.raw, x.frac_bits); }

bool in_range(Ring raw, int frac_bits, int int_bits) {
  return std::fabs(decode_raw(raw, frac_bits)) < fixed_range(int_bits);
}

}  // namespace fairmpc
