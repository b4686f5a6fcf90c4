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

// Shared test oracles: central finite differences and a Laplace-expansion
// determinant, implemented independently of the library under test.

#include "mans/autodiff.hpp"

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace testing_oracles {

using PointFn = std::function<double(std::span<const double>)>;

inline auto fd_gradient(const PointFn& f, std::vector<double> x, double h = 1e-4)
    -> std::vector<double>
{
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double fp = f(x);
        x[i] = keep - h;
        const double fm = f(x);
        x[i] = keep;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Dense row-major Hessian by second-order central differences.
inline auto fd_hessian(const PointFn& f, std::vector<double> x, double h = 1e-3)
    -> std::vector<double>
{
    const std::size_t n = x.size();
    std::vector<double> hess(n * n);
    const double f0 = f(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double fp = f(x);
        x[i] = keep - h;
        const double fm = f(x);
        x[i] = keep;
        hess[i * n + i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double ki = x[i];
            const double kj = x[j];
            x[i] = ki + h;
            x[j] = kj + h;
            const double fpp = f(x);
            x[j] = kj - h;
            const double fpm = f(x);
            x[i] = ki - h;
            const double fmm = f(x);
            x[j] = kj + h;
            const double fmp = f(x);
            x[i] = ki;
            x[j] = kj;
            hess[i * n + j] = hess[j * n + i] = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    }
    return hess;
}

// Relative disagreement with an absolute floor of 1.
inline auto rel_err(double a, double b) -> double
{
    const double denom = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::fabs(a - b) / denom;
}

// Laplace cofactor expansion, O(n!), fine for n <= 6.
inline auto laplace_determinant(const std::vector<double>& a, int n) -> double
{
    if (n == 1) { return a[0]; }
    double det = 0.0;
    double sign = 1.0;
    for (int col = 0; col < n; ++col) {
        std::vector<double> minor;
        minor.reserve(static_cast<std::size_t>(n - 1) * (n - 1));
        for (int i = 1; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j == col) { continue; }
                minor.push_back(a[static_cast<std::size_t>(i) * n + j]);
            }
        }
        det += sign * a[static_cast<std::size_t>(col)] * laplace_determinant(minor, n - 1);
        sign = -sign;
    }
    return det;
}

} // namespace testing_oracles
