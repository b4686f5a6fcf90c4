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

// Training losses.  Every term is a mean over its point set, so the weights
// keep their meaning when point counts change:
//
//   equation   mean (det D2u(x_j) - f_j)^2             interior residual
//   convexity  mean min(0,u_xx)^2 + min(0,u_yy)^2      2d nonconvexity penalty
//   boundary   mean (u(y_k) - g_k)^2                   Dirichlet mismatch
//   singular   the boundary term on the refinement points near a singularity
//
//   total = equation + C_c * convexity + C * boundary + K * singular

#include "mans/autodiff.hpp"
#include "mans/domains.hpp"
#include "mans/problems.hpp"

#include <span>
#include <vector>

namespace mans {

struct LossSpec {
    bool use_equation = true;
    // det H+ = max(0,u_xx) max(0,u_yy) - u_xy^2 instead of the plain
    // determinant; 2d only, off by default (no accuracy gain observed).
    bool equation_uses_positive_det = false;
    // Average the equation residual over interior and boundary points both.
    bool include_boundary_points_in_equation = false;
    double convexity_weight = 0.0;
    double boundary_weight = 0.0;
    double singular_weight = 0.0;
};

struct LossBreakdown {
    double equation = 0.0;
    double convexity = 0.0;
    double boundary = 0.0;
    double singular = 0.0;
    double total = 0.0;
};

// Determinant kernels shared by the reference losses and the taped
// training objectives.
template <class T> auto det_2x2(const T& h11, const T& h12, const T& h22) -> T
{
    return h11 * h22 - sq(h12);
}
template <class T> auto det_2x2_positive(const T& h11, const T& h12, const T& h22) -> T
{
    return vmax0(h11) * vmax0(h22) - sq(h12);
}
template <class T> auto nonconvexity_2x2(const T& h11, const T& h22) -> T
{
    return sq(vmin0(h11)) + sq(vmin0(h22));
}

auto equation_loss(const ScalarField& u, const PointSet& points, std::span<const double> f_values,
                   bool positive_det) -> double;

auto convexity_penalty(const ScalarField& u, const PointSet& points) -> double;

auto boundary_loss(const ScalarField& u, const PointSet& points, std::span<const double> g_values)
    -> double;

// Evaluate a field at every point of a set, in order.
auto field_values(const ScalarField& field, const PointSet& points) -> std::vector<double>;

// The full weighted loss of a candidate field on a collocation set.
// Terms with zero weight are skipped and reported as zero; an active term
// whose point list is empty is a usage error.
auto assemble(const ScalarField& u, const CollocationSet& collocation, const Problem& problem,
              const LossSpec& spec) -> LossBreakdown;

} // namespace mans
