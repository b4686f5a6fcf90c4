// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace mans {

// Deterministic random source.  Uniform and normal deviates are derived
// from mt19937_64 raw draws with fixed formulas instead of the standard
// <random> distributions, whose output is implementation defined; every
// stream here is reproducible from its seed on any toolchain.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    auto raw() -> std::uint64_t { return gen_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    auto uniform01() -> double
    {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    auto uniform(double lo, double hi) -> double
    {
        return lo + (hi - lo) * uniform01();
    }

    // Box-Muller with a cached spare deviate.
    auto normal(double mean = 0.0, double stdev = 1.0) -> double;

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mans
