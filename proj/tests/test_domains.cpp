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
#include "mans/domains.hpp"
#include "mans/rng.hpp"

#include <cmath>
#include <filesystem>

using namespace mans;

namespace {

// Area of {x>0, y>0, x^2+y^2<1, y>x-1/2} by integrating the vertical slice
// height with Simpson's rule on a fine grid, used as an independent check
// of the membership predicate.
auto region_area_quadrature() -> double
{
    const double cx = (1.0 + std::sqrt(7.0)) / 4.0;
    auto height = [&](double x) {
        if (x <= 0.0 || x >= cx) { return x == cx ? 0.0 : (x <= 0.0 ? 1.0 : 0.0); }
        const double top = std::sqrt(1.0 - x * x);
        const double bottom = std::max(0.0, x - 0.5);
        return top - bottom;
    };
    const int panels = 200000;
    const double h = cx / panels;
    double sum = height(0.0) + height(cx);
    for (int i = 1; i < panels; ++i) { sum += (i % 2 == 0 ? 2.0 : 4.0) * height(i * h); }
    return sum * h / 3.0;
}

auto on_asym_boundary(std::span<const double> p) -> double
{
    const double x = p[0];
    const double y = p[1];
    const double defects[] = {std::abs(x), std::abs(y), std::abs(x * x + y * y - 1.0),
                              std::abs(y - x + 0.5)};
    return *std::min_element(std::begin(defects), std::end(defects));
}

} // namespace

TEST_CASE("largest-remainder allocation")
{
    {
        const double w[] = {3.0, 3.0, 1.0, 1.0};
        const auto c = allocate_proportional(w, 10);
        CHECK(c == std::vector<int>{4, 4, 1, 1});
    }
    {
        const double w[] = {1.0, 1.0, 1.0};
        const auto c = allocate_proportional(w, 10);
        CHECK(c == std::vector<int>{4, 3, 3});
    }
    {
        // Every count within one of the exact share, any weights.
        Rng rng(5);
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> w(4);
            for (auto& v : w) { v = rng.uniform(0.1, 3.0); }
            const double sum = w[0] + w[1] + w[2] + w[3];
            const int total = 1 + static_cast<int>(rng.uniform(0.0, 500.0));
            const auto c = allocate_proportional(w, total);
            int assigned = 0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                CHECK(std::abs(c[i] - total * w[i] / sum) <= 1.0);
                assigned += c[i];
            }
            CHECK(assigned == total);
        }
    }
}

TEST_CASE("rectangle interior sampling")
{
    const RectDomain unit({0.0, 0.0}, {1.0, 1.0});
    const auto pts = unit.sample_interior(3000, 42);
    REQUIRE(pts.size() == 3000);
    for (std::size_t i = 0; i < pts.size(); ++i) { CHECK(unit.strictly_inside(pts[i])); }

    const auto again = unit.sample_interior(3000, 42);
    CHECK(pts.coords == again.coords);
    const auto other = unit.sample_interior(3000, 43);
    CHECK(pts.coords != other.coords);

    const RectDomain cube({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
    const auto pts3 = cube.sample_interior(4000, 1);
    REQUIRE(pts3.size() == 4000);
    for (std::size_t i = 0; i < pts3.size(); ++i) { CHECK(cube.strictly_inside(pts3[i])); }
}

TEST_CASE("rectangle boundary sampling")
{
    const RectDomain unit({0.0, 0.0}, {1.0, 1.0});
    const auto pts = unit.sample_boundary(400, 7);
    REQUIRE(pts.size() == 400);
    int side[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto p = pts[i];
        CHECK(unit.contains(p));
        const bool on_x = p[0] == 0.0 || p[0] == 1.0;
        const bool on_y = p[1] == 0.0 || p[1] == 1.0;
        CHECK((on_x || on_y));
        if (p[0] == 0.0) { side[0] += 1; }
        if (p[0] == 1.0) { side[1] += 1; }
        if (p[1] == 0.0) { side[2] += 1; }
        if (p[1] == 1.0) { side[3] += 1; }
    }
    for (int s : side) { CHECK(std::abs(s - 100) <= 1); }

    // Uneven box: faces weighted 3,3,1,1 out of 10.
    const RectDomain tall({0.0, 0.0}, {1.0, 3.0});
    const auto tp = tall.sample_boundary(10, 9);
    int counts[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < tp.size(); ++i) {
        const auto p = tp[i];
        if (p[0] == 0.0) { counts[0] += 1; }
        else if (p[0] == 1.0) { counts[1] += 1; }
        else if (p[1] == 0.0) { counts[2] += 1; }
        else { counts[3] += 1; }
    }
    CHECK(counts[0] == 4);
    CHECK(counts[1] == 4);
    CHECK(counts[2] == 1);
    CHECK(counts[3] == 1);

    // Cube: 1200 over six equal faces.
    const RectDomain cube({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
    const auto cp = cube.sample_boundary(1200, 3);
    REQUIRE(cp.size() == 1200);
    int on_face = 0;
    for (std::size_t i = 0; i < cp.size(); ++i) {
        const auto p = cp[i];
        for (int d = 0; d < 3; ++d) {
            if (p[static_cast<std::size_t>(d)] == 0.0 || p[static_cast<std::size_t>(d)] == 1.0) {
                on_face += 1;
                break;
            }
        }
    }
    CHECK(on_face == 1200);

    // An interval's boundary is its two endpoints.
    const RectDomain interval({0.0}, {1.0});
    const auto ip = interval.sample_boundary(2, 11);
    REQUIRE(ip.size() == 2);
    CHECK(ip[0][0] == 0.0);
    CHECK(ip[1][0] == 1.0);
}

TEST_CASE("distance to the rectangle boundary")
{
    const RectDomain unit({0.0, 0.0}, {1.0, 1.0});
    const double c[] = {0.5, 0.5};
    CHECK(unit.distance_to_boundary(c) == 0.5);
    const double e[] = {0.1, 0.7};
    CHECK(unit.distance_to_boundary(e) == doctest::Approx(0.1).epsilon(1e-14));
    const RectDomain wide({0.0, 0.0}, {1.5, 1.5});
    const double w[] = {0.2, 1.0};
    CHECK(wide.distance_to_boundary(w) == doctest::Approx(0.2).epsilon(1e-14));

    const AsymDomain asym;
    const double p[] = {0.2, 0.2};
    CHECK_THROWS_AS((void)asym.distance_to_boundary(p), const InvalidArgument&);
}

TEST_CASE("membership in the curved region")
{
    const AsymDomain dom;
    const double in1[] = {0.1, 0.1};
    const double in2[] = {0.1, 0.95};
    const double out_line[] = {0.8, 0.2};   // below y = x - 1/2
    const double out_circle[] = {0.9, 0.5}; // outside the arc
    const double out_x[] = {-0.1, 0.5};
    CHECK(dom.strictly_inside(in1));
    CHECK(dom.strictly_inside(in2));
    CHECK(!dom.strictly_inside(out_line));
    CHECK(!dom.strictly_inside(out_circle));
    CHECK(!dom.strictly_inside(out_x));
    // Closure includes the boundary.
    const double corner[] = {0.0, 0.0};
    const double top[] = {0.0, 1.0};
    CHECK(dom.contains(corner));
    CHECK(dom.contains(top));
    CHECK(!dom.contains(out_circle));
}

TEST_CASE("curved region area against quadrature")
{
    const AsymDomain dom;
    const double exact = region_area_quadrature();
    // Monte Carlo estimate over the bounding box using the membership test.
    Rng rng(2024);
    const auto [lo, hi] = dom.bounding_box();
    int inside = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const double p[] = {rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1])};
        if (dom.strictly_inside(p)) { inside += 1; }
    }
    const double box_area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
    const double estimate = box_area * inside / n;
    CHECK(std::abs(estimate - exact) / exact < 0.02);

    // Every interior sample respects the strict inequalities.
    const auto pts = dom.sample_interior(10000, 5);
    REQUIRE(pts.size() == 10000);
    for (std::size_t i = 0; i < pts.size(); ++i) { CHECK(dom.strictly_inside(pts[i])); }
    const auto again = dom.sample_interior(10000, 5);
    CHECK(pts.coords == again.coords);
}

TEST_CASE("curved region boundary sampling")
{
    const AsymDomain dom;
    const auto lengths = AsymDomain::segment_lengths();
    const double perimeter = lengths[0] + lengths[1] + lengths[2] + lengths[3];
    const int k = 400;
    const auto pts = dom.sample_boundary(k, 31);
    REQUIRE(pts.size() == static_cast<std::size_t>(k));

    int seg_counts[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto p = pts[i];
        CHECK(on_asym_boundary(p) <= 1e-12);
        CHECK(dom.contains(p));
        if (p[0] == 0.0) { seg_counts[0] += 1; }
        else if (p[1] == 0.0) { seg_counts[3] += 1; }
        else if (std::abs(p[0] * p[0] + p[1] * p[1] - 1.0) <= 1e-12) { seg_counts[1] += 1; }
        else { seg_counts[2] += 1; }
    }
    for (int s = 0; s < 4; ++s) {
        CHECK(std::abs(seg_counts[s] - k * lengths[static_cast<std::size_t>(s)] / perimeter) <=
              1.0);
    }
}

TEST_CASE("equidistant segments")
{
    const double a[] = {0.0, 0.0};
    const double b[] = {0.04, 0.0};
    const auto pts = sample_segment(a, b, 20);
    REQUIRE(pts.size() == 20);
    CHECK(pts[0][0] == 0.0);
    CHECK(pts[0][1] == 0.0);
    CHECK(pts[19][0] == 0.04);
    const double spacing = 0.04 / 19.0;
    for (std::size_t i = 1; i < 20; ++i) {
        CHECK(pts[i][0] - pts[i - 1][0] == doctest::Approx(spacing).epsilon(1e-12));
        CHECK(pts[i][1] == 0.0);
    }

    const double c[] = {0.95, 1.0};
    const double d[] = {1.0, 1.0};
    const auto pts2 = sample_segment(c, d, 20);
    CHECK(pts2[0][0] == 0.95);
    CHECK(pts2[19][0] == 1.0);

    const double e[] = {0.0, 0.0};
    const double f[] = {1.0, 0.0};
    const auto pts3 = sample_segment(e, f, 2);
    REQUIRE(pts3.size() == 2);
    CHECK(pts3[0][0] == 0.0);
    CHECK(pts3[1][0] == 1.0);

    CHECK_THROWS_AS(sample_segment(a, a, 5), const InvalidArgument&);
    CHECK_THROWS_AS(sample_segment(a, b, 1), const InvalidArgument&);
}

TEST_CASE("collocation assembly and serialization")
{
    const RectDomain unit({0.0, 0.0}, {1.0, 1.0});
    auto set = sample_collocation(unit, 300, 40, 77);
    CHECK(set.interior.size() == 300);
    CHECK(set.boundary.size() == 40);
    CHECK(set.singular.size() == 0);
    CHECK(set.seed == 77);

    const double a0[] = {0.0, 0.0};
    const double a1[] = {0.04, 0.0};
    const double b0[] = {0.0, 0.0};
    const double b1[] = {0.0, 0.04};
    add_singular_segment(set, a0, a1, 20);
    add_singular_segment(set, b0, b1, 20);
    CHECK(set.singular.size() == 40);

    const auto dir = std::filesystem::temp_directory_path() / "mans_colloc";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "set.txt").string();
    save_collocation(path, set);
    const auto loaded = load_collocation(path);
    CHECK(loaded.seed == set.seed);
    CHECK(loaded.interior.coords == set.interior.coords);
    CHECK(loaded.boundary.coords == set.boundary.coords);
    CHECK(loaded.singular.coords == set.singular.coords);
    std::filesystem::remove_all(dir);
}
