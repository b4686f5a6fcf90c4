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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "mans/problems.hpp"
#include "mans/rng.hpp"

#include <cmath>

using namespace mans;
using testing_oracles::rel_err;

namespace {

// Hand-differentiated source for the asymmetric problem:
// u = 0.7 exp(phi) + x^2 - 1/2 with phi = (x - 1/2)^2 / 2 + y^2.
auto asym_source_oracle(double x, double y) -> double
{
    const double s = x - 0.5;
    const double e = 0.7 * std::exp(0.5 * s * s + y * y);
    const double uxx = e * (s * s + 1.0) + 2.0;
    const double uyy = e * (4.0 * y * y + 2.0);
    const double uxy = e * s * 2.0 * y;
    return uxx * uyy - uxy * uxy;
}

// Closed-form source for u = exp(|x|^2/2) in dimension n, by the rank-one
// determinant identity det(I + x x^T) = 1 + |x|^2.
auto radial_source_oracle(std::span<const double> x) -> double
{
    double r2 = 0.0;
    for (double c : x) { r2 += c * c; }
    return (1.0 + r2) * std::exp(0.5 * r2 * static_cast<double>(x.size()));
}

} // namespace

TEST_CASE("catalog contents")
{
    const auto names = problem_names();
    CHECK(names.size() == 8);
    for (const auto& name : names) {
        const auto p = catalog(name);
        CHECK(p.name == name);
        REQUIRE(p.domain != nullptr);
        REQUIRE(p.exact != nullptr);
        REQUIRE(p.source != nullptr);
        REQUIRE(p.boundary != nullptr);
        CHECK(p.exact->dimension() == p.domain->dimension());
        CHECK(p.source->dimension() == p.domain->dimension());
    }
    CHECK(catalog("radial5d").domain->dimension() == 5);
    CHECK_THROWS_AS(catalog("no_such_problem"), const InvalidArgument&);
}

TEST_CASE("plug-in source values")
{
    const auto radial = catalog("radial2d");
    const double origin[] = {0.0, 0.0};
    CHECK(radial.source->value(origin) == 1.0);
    CHECK(radial.exact->value(origin) == 1.0);
    const double one_one[] = {1.0, 1.0};
    CHECK(rel_err(radial.source->value(one_one), 3.0 * std::exp(2.0)) < 1e-15);

    const auto sphere = catalog("sphere");
    CHECK(sphere.source->value(origin) == 0.5);
    CHECK(sphere.exact->value(origin) == -std::sqrt(2.0));

    const auto blowup = catalog("blowup");
    const double half[] = {0.5, 0.0};
    CHECK(rel_err(blowup.source->value(half), 2.0) < 1e-15);

    const auto discont = catalog("discont");
    const double inside[] = {0.3, 0.4};
    const double outside[] = {0.72, 0.96};
    CHECK(discont.source->value(inside) == 0.0);
    CHECK(discont.source->value(outside) == 4.0);
    CHECK(discont.exact->value(inside) == 0.0);
}

TEST_CASE("derived sources match the closed forms")
{
    // Problems 1-4 have closed-form sources; the Hessian-determinant route
    // must reproduce them at random interior points.
    Rng rng(314);
    for (const char* name : {"radial2d", "blowup", "sphere"}) {
        const auto p = catalog(name);
        for (int probe = 0; probe < 1000; ++probe) {
            const double x[] = {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)};
            const double derived = derived_source(*p.exact, x);
            CHECK(rel_err(derived, p.source->value(x)) < 1e-9);
        }
    }
    // The flat-then-curved solution has a Hessian jump across r = 1; stay
    // a little away from it.
    const auto discont = catalog("discont");
    for (int probe = 0; probe < 1000; ++probe) {
        const double x[] = {rng.uniform(0.01, 1.49), rng.uniform(0.01, 1.49)};
        const double r = std::hypot(x[0], x[1]);
        if (std::abs(r - 1.0) < 1e-2) { continue; }
        const double derived = derived_source(*discont.exact, x);
        const double expected = discont.source->value(x);
        if (expected == 0.0) {
            CHECK(std::abs(derived) < 1e-12);
        } else {
            CHECK(rel_err(derived, expected) < 1e-8);
        }
    }
}

TEST_CASE("asymmetric problem source against the hand derivative")
{
    const auto p = catalog("asym");
    const double probe[] = {0.3, 0.4};
    CHECK(rel_err(p.source->value(probe), asym_source_oracle(0.3, 0.4)) < 1e-10);
    const auto pts = p.domain->sample_interior(200, 11);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto x = pts[i];
        CHECK(rel_err(p.source->value(x), asym_source_oracle(x[0], x[1])) < 1e-10);
    }
}

TEST_CASE("higher-dimensional radial sources")
{
    for (int n : {3, 4, 5}) {
        const auto p = catalog("radial" + std::to_string(n) + "d");
        const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
        CHECK(rel_err(p.source->value(origin), 1.0) < 1e-12);
        const auto pts = p.domain->sample_interior(100, 21);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(rel_err(p.source->value(pts[i]), radial_source_oracle(pts[i])) < 1e-9);
        }
    }
}

TEST_CASE("sources are nonnegative on interior probes")
{
    for (const auto& name : problem_names()) {
        const auto p = catalog(name);
        const auto pts = p.domain->sample_interior(10000, 99);
        for (std::size_t i = 0; i < pts.size(); ++i) { CHECK(p.source->value(pts[i]) >= 0.0); }
    }
}

TEST_CASE("boundary data agrees with the exact solution on the boundary")
{
    for (const auto& name : problem_names()) {
        const auto p = catalog(name);
        const auto pts = p.domain->sample_boundary(200, 5);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(std::abs(p.boundary->value(pts[i]) - p.exact->value(pts[i])) <= 1e-12);
        }
    }
}

TEST_CASE("piecewise radial profile is continuously differentiable at the circle")
{
    // Inside the circle the solution vanishes identically.
    CHECK(discont_radial_profile(0.5) == std::pair{0.0, 0.0});
    CHECK(discont_radial_profile(1.0) == std::pair{0.0, 0.0});
    // The outside branch evaluated at r = 1 also gives (0, 0) exactly:
    // 1*sqrt(0) - log(1 + 0) = 0 and 2 sqrt(0) = 0.
    CHECK(1.0 * std::sqrt(0.0) - std::log(1.0) == 0.0);
    // Values shrink monotonically toward the junction from the right.
    double prev_u = std::numeric_limits<double>::infinity();
    double prev_du = std::numeric_limits<double>::infinity();
    for (double h : {1e-2, 1e-4, 1e-6, 1e-9}) {
        const auto [u, du] = discont_radial_profile(1.0 + h);
        CHECK(u < prev_u);
        CHECK(du < prev_du);
        prev_u = u;
        prev_du = du;
    }
    CHECK(prev_u <= 1e-12);

    const auto [u, du] = discont_radial_profile(std::sqrt(2.0));
    CHECK(rel_err(u, std::sqrt(2.0) - std::log(std::sqrt(2.0) + 1.0)) < 1e-15);
    CHECK(rel_err(du, 2.0) < 1e-15);

    CHECK_THROWS_AS(discont_radial_profile(-0.1), const InvalidArgument&);
}

TEST_CASE("singular segments of the catalog")
{
    const auto blowup = catalog("blowup");
    REQUIRE(blowup.singular_segments.size() == 2);
    CHECK(blowup.singular_segments[0].count == 20);
    CHECK(blowup.singular_segments[0].p1 == std::vector<double>{0.04, 0.0});
    CHECK(blowup.singular_segments[1].p1 == std::vector<double>{0.0, 0.04});

    const auto sphere = catalog("sphere");
    REQUIRE(sphere.singular_segments.size() == 2);
    CHECK(sphere.singular_segments[0].p0 == std::vector<double>{0.95, 1.0});
    CHECK(sphere.singular_segments[1].p0 == std::vector<double>{1.0, 0.95});

    CHECK(catalog("radial2d").singular_segments.empty());
    CHECK(catalog("asym").singular_segments.empty());
}

TEST_CASE("frozen source noise")
{
    const auto p = catalog("radial2d");
    const auto pts = p.domain->sample_interior(3000, 1);

    const NoisySource clean(*p.source, 0.0, 9, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(clean.value_at(i) == p.source->value(pts[i]));
    }

    const NoisySource noisy(*p.source, 1.0, 9, pts);
    const NoisySource noisy_again(*p.source, 1.0, 9, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(noisy.value_at(i) == noisy_again.value_at(i));
        CHECK(noisy.value_at(i) == noisy.value_at(i));
    }

    CHECK_THROWS_AS((void)noisy.value_at(pts.size()), const InvalidArgument&);
    CHECK_THROWS_AS(NoisySource(*p.source, -0.5, 9, pts), const InvalidArgument&);

    // Statistical spread of the perturbations over a large frozen set.
    const auto many = p.domain->sample_interior(100000, 2);
    const NoisySource wide(*p.source, 0.1, 33, many);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < many.size(); ++i) {
        const double eps = wide.value_at(i) - p.source->value(many[i]);
        sum += eps;
        sum_sq += eps * eps;
    }
    const double n = static_cast<double>(many.size());
    const double mean = sum / n;
    const double stdev = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::abs(stdev - 0.1) / 0.1 < 0.02);
    CHECK(std::abs(mean) < 0.002);
}
