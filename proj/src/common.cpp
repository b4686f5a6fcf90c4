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

#include "mans/common.hpp"
#include "mans/rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace mans {

auto format_double(double x) -> std::string
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

auto parse_double(const std::string& text) -> double
{
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) { throw InvalidArgument("not a number: '" + text + "'"); }
    return v;
}

auto inf_norm(std::span<const double> v) -> double
{
    double m = 0.0;
    for (const double x : v) { m = std::max(m, std::fabs(x)); }
    return m;
}

auto two_norm(std::span<const double> v) -> double
{
    double s = 0.0;
    for (const double x : v) { s += x * x; }
    return std::sqrt(s);
}

auto dot(std::span<const double> a, std::span<const double> b) -> double
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) { s += a[i] * b[i]; }
    return s;
}

auto Rng::normal(double mean, double stdev) -> double
{
    if (has_spare_) {
        has_spare_ = false;
        return mean + stdev * spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + stdev * radius * std::cos(angle);
}

} // namespace mans
