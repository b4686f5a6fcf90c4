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

#include "mans/losses.hpp"

namespace mans {

auto equation_loss(const ScalarField& u, const PointSet& points, std::span<const double> f_values,
                   bool positive_det) -> double
{
    if (points.size() == 0) { throw InvalidArgument("equation loss needs at least one point"); }
    if (points.size() != f_values.size()) {
        throw InvalidArgument("one source value per collocation point required");
    }
    if (positive_det && points.dim != 2) {
        throw InvalidArgument("the positive-part determinant is only defined in 2d");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const auto jet = eval_jet(u, points[j]);
        const double det = positive_det
                               ? det_2x2_positive(jet.hess(0, 0), jet.hess(0, 1), jet.hess(1, 1))
                               : hessian_determinant(jet);
        const double r = det - f_values[j];
        sum += r * r;
    }
    return sum / static_cast<double>(points.size());
}

auto convexity_penalty(const ScalarField& u, const PointSet& points) -> double
{
    if (points.size() == 0) { throw InvalidArgument("convexity penalty needs at least one point"); }
    if (points.dim != 2) { throw InvalidArgument("the convexity penalty is only defined in 2d"); }
    double sum = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const auto jet = eval_jet(u, points[j]);
        sum += nonconvexity_2x2(jet.hess(0, 0), jet.hess(1, 1));
    }
    return sum / static_cast<double>(points.size());
}

auto boundary_loss(const ScalarField& u, const PointSet& points, std::span<const double> g_values)
    -> double
{
    if (points.size() == 0) { throw InvalidArgument("boundary loss needs at least one point"); }
    if (points.size() != g_values.size()) {
        throw InvalidArgument("one boundary value per boundary point required");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double r = u.value(points[k]) - g_values[k];
        sum += r * r;
    }
    return sum / static_cast<double>(points.size());
}

auto field_values(const ScalarField& field, const PointSet& points) -> std::vector<double>
{
    std::vector<double> values;
    values.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) { values.push_back(field.value(points[i])); }
    return values;
}

auto assemble(const ScalarField& u, const CollocationSet& collocation, const Problem& problem,
              const LossSpec& spec) -> LossBreakdown
{
    LossBreakdown out;
    if (spec.use_equation) {
        if (spec.include_boundary_points_in_equation) {
            PointSet merged = collocation.interior;
            merged.coords.insert(merged.coords.end(), collocation.boundary.coords.begin(),
                                 collocation.boundary.coords.end());
            out.equation = equation_loss(u, merged, field_values(*problem.source, merged),
                                         spec.equation_uses_positive_det);
        } else {
            out.equation =
                equation_loss(u, collocation.interior,
                              field_values(*problem.source, collocation.interior),
                              spec.equation_uses_positive_det);
        }
    }
    if (spec.convexity_weight > 0.0) {
        out.convexity = convexity_penalty(u, collocation.interior);
    }
    if (spec.boundary_weight > 0.0) {
        out.boundary = boundary_loss(u, collocation.boundary,
                                     field_values(*problem.boundary, collocation.boundary));
    }
    if (spec.singular_weight > 0.0) {
        out.singular = boundary_loss(u, collocation.singular,
                                     field_values(*problem.boundary, collocation.singular));
    }
    out.total = out.equation + spec.convexity_weight * out.convexity +
                spec.boundary_weight * out.boundary + spec.singular_weight * out.singular;
    return out;
}

} // namespace mans
