/*
   Copyright 2026 The opercalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPERCALC_HALF_INTEGER_HPP
#define OPERCALC_HALF_INTEGER_HPP

#include <string>

#include "rational.hpp"

namespace opercalc {

/// Tensor weight in (1/2)Z, bookkept as twice its value. Density lines K^{m/2}
/// are tracked only through these exponents; no square root is ever taken.
struct HalfInteger {
    long twice = 0;

    HalfInteger() = default;
    explicit HalfInteger(long twice_value) : twice(twice_value) {}

    static HalfInteger whole(long v) { return HalfInteger(2 * v); }
    static HalfInteger halves(long twice_value) { return HalfInteger(twice_value); }

    bool is_integer() const { return twice % 2 == 0; }
    Rational value() const { return Rational(twice, 2); }

    friend HalfInteger operator+(HalfInteger a, HalfInteger b) { return HalfInteger(a.twice + b.twice); }
    friend HalfInteger operator-(HalfInteger a, HalfInteger b) { return HalfInteger(a.twice - b.twice); }
    friend bool operator==(HalfInteger a, HalfInteger b) { return a.twice == b.twice; }
    friend bool operator!=(HalfInteger a, HalfInteger b) { return a.twice != b.twice; }

    std::string str() const {
        if (twice % 2 == 0) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }
};

} // namespace opercalc

#endif
