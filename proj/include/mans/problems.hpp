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

// The benchmark catalog: determinant equations with known convex solutions,
// their source terms and boundary data, plus frozen source perturbations
// for the noise study.

#include "mans/autodiff.hpp"
#include "mans/domains.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace mans {

struct SegmentSpec {
    std::vector<double> p0;
    std::vector<double> p1;
    int count = 0;
};

struct Problem {
    std::string name;
    std::shared_ptr<const Domain> domain;
    std::shared_ptr<const ScalarField> exact;    // known solution u
    std::shared_ptr<const ScalarField> source;   // right-hand side f
    std::shared_ptr<const ScalarField> boundary; // boundary data g = u on the boundary
    std::vector<SegmentSpec> singular_segments;  // extra boundary refinement
};

auto problem_names() -> std::vector<std::string>;

// Known names: radial2d, blowup, sphere, discont, asym, radial3d, radial4d,
// radial5d.  Unknown names throw InvalidArgument.
auto catalog(const std::string& name) -> Problem;

// det of the Hessian of `exact` at x; the catalog builds the sources of the
// asym and higher-dimensional problems this way rather than from
// transcribed formulas.
auto derived_source(const ScalarField& exact, std::span<const double> x) -> double;

// The piecewise radial solution that is flat inside the unit circle, and
// its radial derivative.  Used to confirm the C1 match at r = 1.
auto discont_radial_profile(double r) -> std::pair<double, double>;

// Source values at a frozen point list with frozen per-index perturbations:
// value_at(i) = base(x_i) + e_i, e_i ~ Normal(0, stdev^2) drawn once.
class NoisySource {
  public:
    NoisySource(const ScalarField& base, double stdev, std::uint64_t seed, const PointSet& points);

    [[nodiscard]] auto value_at(std::size_t index) const -> double;
    [[nodiscard]] auto size() const -> std::size_t { return values_.size(); }
    [[nodiscard]] auto stdev() const -> double { return stdev_; }
    [[nodiscard]] auto seed() const -> std::uint64_t { return seed_; }

  private:
    double stdev_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<double> values_;
};

} // namespace mans
