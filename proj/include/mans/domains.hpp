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

// Solver geometry: the regions the equation is posed on and every
// collocation-point sampler.  Two concrete regions are supported, an
// axis-aligned box in any dimension and one curved convex 2d region bounded
// by x > 0, y > 0, x^2 + y^2 < 1 and y > x - 1/2.

#include "mans/common.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mans {

// Flat row-major point storage.
struct PointSet {
    int dim = 0;
    std::vector<double> coords;

    PointSet() = default;
    explicit PointSet(int d) : dim(d) {}
    [[nodiscard]] auto size() const -> std::size_t
    {
        return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0;
    }
    [[nodiscard]] auto operator[](std::size_t i) const -> std::span<const double>
    {
        return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    void push(std::span<const double> p) { coords.insert(coords.end(), p.begin(), p.end()); }
};

class Domain {
  public:
    virtual ~Domain() = default;
    [[nodiscard]] virtual auto dimension() const -> int = 0;
    // Membership in the closure, with a 1e-12 slack for grid roundoff.
    [[nodiscard]] virtual auto contains(std::span<const double> x) const -> bool = 0;
    [[nodiscard]] virtual auto strictly_inside(std::span<const double> x) const -> bool = 0;
    [[nodiscard]] virtual auto bounding_box() const
        -> std::pair<std::vector<double>, std::vector<double>> = 0;
    // m i.i.d. uniform points in the open region; identical per seed.
    [[nodiscard]] virtual auto sample_interior(int m, std::uint64_t seed) const -> PointSet = 0;
    // k points on the boundary, allocated to faces/segments proportionally
    // to their measure (largest remainder) and uniform within each.
    [[nodiscard]] virtual auto sample_boundary(int k, std::uint64_t seed) const -> PointSet = 0;
    // Exact distance to the boundary; only rectangles support it.
    [[nodiscard]] virtual auto distance_to_boundary(std::span<const double> x) const -> double;
};

class RectDomain final : public Domain {
  public:
    RectDomain(std::vector<double> lo, std::vector<double> hi);

    [[nodiscard]] auto dimension() const -> int override;
    [[nodiscard]] auto contains(std::span<const double> x) const -> bool override;
    [[nodiscard]] auto strictly_inside(std::span<const double> x) const -> bool override;
    [[nodiscard]] auto bounding_box() const
        -> std::pair<std::vector<double>, std::vector<double>> override;
    [[nodiscard]] auto sample_interior(int m, std::uint64_t seed) const -> PointSet override;
    [[nodiscard]] auto sample_boundary(int k, std::uint64_t seed) const -> PointSet override;
    [[nodiscard]] auto distance_to_boundary(std::span<const double> x) const -> double override;

  private:
    std::vector<double> lo_;
    std::vector<double> hi_;
};

// The convex region {x > 0, y > 0, x^2 + y^2 < 1, y > x - 1/2}.  Its
// boundary splits into four pieces walked counterclockwise from the origin:
// the y axis up to (0,1), the unit-circle arc to the line intersection at
// x = (1 + sqrt 7)/4, the oblique line down to (1/2, 0), and the x axis
// back to the origin.
class AsymDomain final : public Domain {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    [[nodiscard]] auto contains(std::span<const double> x) const -> bool override;
    [[nodiscard]] auto strictly_inside(std::span<const double> x) const -> bool override;
    [[nodiscard]] auto bounding_box() const
        -> std::pair<std::vector<double>, std::vector<double>> override;
    [[nodiscard]] auto sample_interior(int m, std::uint64_t seed) const -> PointSet override;
    [[nodiscard]] auto sample_boundary(int k, std::uint64_t seed) const -> PointSet override;

    // Corner of the arc and the oblique line.
    static auto arc_corner() -> std::pair<double, double>;
    // Analytic lengths of the four boundary pieces, in walk order.
    static auto segment_lengths() -> std::vector<double>;
};

// `count` equidistant points from p0 to p1, both endpoints included.
auto sample_segment(std::span<const double> p0, std::span<const double> p1, int count) -> PointSet;

// Largest-remainder rounding of total * w_i / sum(w): each count is within
// one of exact proportionality and the counts add up to total.
auto allocate_proportional(std::span<const double> weights, int total) -> std::vector<int>;

struct CollocationSet {
    PointSet interior;
    PointSet boundary;
    PointSet singular;
    std::uint64_t seed = 0;
};

// Interior points use the seed directly; boundary points use seed + 1 so
// the two streams never overlap.
auto sample_collocation(const Domain& domain, int m, int k, std::uint64_t seed) -> CollocationSet;

void add_singular_segment(CollocationSet& set, std::span<const double> p0,
                          std::span<const double> p1, int count);

// One point per row with a leading role column; round-trips bit-exactly.
void save_collocation(const std::string& path, const CollocationSet& set);
auto load_collocation(const std::string& path) -> CollocationSet;

} // namespace mans
