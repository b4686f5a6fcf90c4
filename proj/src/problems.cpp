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

#include "mans/problems.hpp"

#include "mans/rng.hpp"

#include <cmath>

namespace mans {

namespace {

template <class S> auto radius_sq(std::span<const S> x) -> S
{
    S s = sq(x[0]);
    for (std::size_t i = 1; i < x.size(); ++i) { s = s + sq(x[i]); }
    return s;
}

// u = exp(|x|^2 / 2), any dimension.
class RadialExact final : public FieldImpl<RadialExact> {
  public:
    explicit RadialExact(int dim) : dim_(dim) {}
    [[nodiscard]] auto dimension() const -> int override { return dim_; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        using std::exp;
        return exp(0.5 * radius_sq(x));
    }

  private:
    int dim_;
};

// f = (1 + x^2 + y^2) exp(x^2 + y^2), the source matching RadialExact in 2d.
class Radial2dSource final : public FieldImpl<Radial2dSource> {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        using std::exp;
        const S s = radius_sq(x);
        return (1.0 + s) * exp(s);
    }
};

// u = (2 sqrt 2 / 3) (x^2 + y^2)^(3/4); gradient blows up at the origin.
class BlowupExact final : public FieldImpl<BlowupExact> {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        return (2.0 * std::sqrt(2.0) / 3.0) * pow_c(radius_sq(x), 0.75);
    }
};

// f = (x^2 + y^2)^(-1/2).
class BlowupSource final : public FieldImpl<BlowupSource> {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        return pow_c(radius_sq(x), -0.5);
    }
};

// u = -sqrt(2 - x^2 - y^2), the lower hemisphere of radius sqrt 2.
class SphereExact final : public FieldImpl<SphereExact> {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        using std::sqrt;
        return -1.0 * sqrt(2.0 - radius_sq(x));
    }
};

// f = 2 / (2 - x^2 - y^2)^2; not integrable near the corner (1,1).
class SphereSource final : public FieldImpl<SphereSource> {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        return 2.0 / sq(2.0 - radius_sq(x));
    }
};

// u = 0 inside the unit circle, r sqrt(r^2-1) - log(r + sqrt(r^2-1)) outside.
class DiscontExact final : public FieldImpl<DiscontExact> {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        using std::log;
        using std::sqrt;
        const S s = radius_sq(x);
        if (value_of(s) <= 1.0) { return S{}; }
        const S r = sqrt(s);
        const S w = sqrt(s - 1.0);
        return r * w - log(r + w);
    }
};

// The matching source: 0 inside the unit circle, 4 outside.
class DiscontSource final : public FieldImpl<DiscontSource> {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        return value_of(radius_sq(x)) <= 1.0 ? S{} : S{4.0};
    }
};

// u = (7/10) exp((x - 1/2)^2 / 2 + y^2) + x^2 - 1/2 on the curved region.
class AsymExact final : public FieldImpl<AsymExact> {
  public:
    [[nodiscard]] auto dimension() const -> int override { return 2; }
    template <class S> [[nodiscard]] auto eval(std::span<const S> x) const -> S
    {
        using std::exp;
        const S shifted = x[0] - 0.5;
        return 0.7 * exp(0.5 * sq(shifted) + sq(x[1])) + sq(x[0]) - 0.5;
    }
};

// Right-hand side produced from an exact solution's Hessian determinant.
class DerivedSource final : public ScalarField {
  public:
    explicit DerivedSource(std::shared_ptr<const ScalarField> exact) : exact_(std::move(exact)) {}
    [[nodiscard]] auto dimension() const -> int override { return exact_->dimension(); }
    [[nodiscard]] auto value(std::span<const double> x) const -> double override
    {
        return derived_source(*exact_, x);
    }

  private:
    std::shared_ptr<const ScalarField> exact_;
};

auto unit_square() -> std::shared_ptr<const Domain>
{
    return std::make_shared<RectDomain>(std::vector<double>{0.0, 0.0},
                                        std::vector<double>{1.0, 1.0});
}

auto make_problem(std::string name, std::shared_ptr<const Domain> domain,
                  std::shared_ptr<const ScalarField> exact,
                  std::shared_ptr<const ScalarField> source,
                  std::vector<SegmentSpec> segments = {}) -> Problem
{
    Problem p;
    p.name = std::move(name);
    p.domain = std::move(domain);
    p.exact = std::move(exact);
    p.source = std::move(source);
    p.boundary = p.exact;
    p.singular_segments = std::move(segments);
    return p;
}

} // namespace

auto problem_names() -> std::vector<std::string>
{
    return {"radial2d", "blowup", "sphere", "discont", "asym", "radial3d", "radial4d", "radial5d"};
}

auto catalog(const std::string& name) -> Problem
{
    if (name == "radial2d") {
        return make_problem(name, unit_square(), std::make_shared<RadialExact>(2),
                            std::make_shared<Radial2dSource>());
    }
    if (name == "blowup") {
        // The gradient singularity sits at the origin corner; refine the two
        // touching boundary pieces.
        std::vector<SegmentSpec> segments = {{{0.0, 0.0}, {0.04, 0.0}, 20},
                                             {{0.0, 0.0}, {0.0, 0.04}, 20}};
        return make_problem(name, unit_square(), std::make_shared<BlowupExact>(),
                            std::make_shared<BlowupSource>(), std::move(segments));
    }
    if (name == "sphere") {
        // Here the singular corner is (1,1).
        std::vector<SegmentSpec> segments = {{{0.95, 1.0}, {1.0, 1.0}, 20},
                                             {{1.0, 0.95}, {1.0, 1.0}, 20}};
        return make_problem(name, unit_square(), std::make_shared<SphereExact>(),
                            std::make_shared<SphereSource>(), std::move(segments));
    }
    if (name == "discont") {
        auto domain = std::make_shared<RectDomain>(std::vector<double>{0.0, 0.0},
                                                   std::vector<double>{1.5, 1.5});
        return make_problem(name, std::move(domain), std::make_shared<DiscontExact>(),
                            std::make_shared<DiscontSource>());
    }
    if (name == "asym") {
        auto exact = std::make_shared<AsymExact>();
        auto source = std::make_shared<DerivedSource>(exact);
        return make_problem(name, std::make_shared<AsymDomain>(), std::move(exact),
                            std::move(source));
    }
    for (int n : {3, 4, 5}) {
        if (name == "radial" + std::to_string(n) + "d") {
            auto domain = std::make_shared<RectDomain>(std::vector<double>(n, 0.0),
                                                       std::vector<double>(n, 1.0));
            auto exact = std::make_shared<RadialExact>(n);
            auto source = std::make_shared<DerivedSource>(exact);
            return make_problem(name, std::move(domain), std::move(exact), std::move(source));
        }
    }
    throw InvalidArgument("unknown problem: " + name);
}

auto derived_source(const ScalarField& exact, std::span<const double> x) -> double
{
    return hessian_determinant(eval_jet(exact, x));
}

auto discont_radial_profile(double r) -> std::pair<double, double>
{
    if (r < 0.0) { throw InvalidArgument("radius must be nonnegative"); }
    if (r <= 1.0) { return {0.0, 0.0}; }
    const double w = std::sqrt(r * r - 1.0);
    return {r * w - std::log(r + w), 2.0 * w};
}

NoisySource::NoisySource(const ScalarField& base, double stdev, std::uint64_t seed,
                         const PointSet& points)
    : stdev_(stdev), seed_(seed)
{
    if (stdev < 0.0) { throw InvalidArgument("noise stdev must be nonnegative"); }
    Rng rng(seed);
    values_.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        values_.push_back(base.value(points[i]) + rng.normal(0.0, stdev));
    }
}

auto NoisySource::value_at(std::size_t index) const -> double
{
    if (index >= values_.size()) { throw InvalidArgument("collocation index out of range"); }
    return values_[index];
}

} // namespace mans
