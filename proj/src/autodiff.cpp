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

#include "mans/autodiff.hpp"

#include <algorithm>
#include <cmath>

namespace mans {

auto Tape::replay_values() const -> std::vector<double>
{
    std::vector<double> out(vals_.begin(), vals_.begin() + n_leaves_);
    out.reserve(vals_.size());
    auto val = [&out](std::int32_t idx) { return out[static_cast<std::size_t>(idx)]; };
    for (const TapeEntry& e : entries_) {
        const double va = val(e.a);
        double r = 0.0;
        switch (e.op) {
        case Op::Add: r = va + val(e.b); break;
        case Op::Sub: r = va - val(e.b); break;
        case Op::Mul: r = va * val(e.b); break;
        case Op::Div: r = va / val(e.b); break;
        case Op::Mac: r = va * val(e.b) + val(e.c); break;
        case Op::AddC: r = va + e.db; break;
        case Op::RSubC: r = e.db - va; break;
        case Op::MulC: r = va * e.db; break;
        case Op::DivC: r = va / e.db; break;
        case Op::RDivC: r = e.db / va; break;
        case Op::PowC: r = std::pow(va, e.db); break;
        case Op::MinC: r = va < e.db ? va : e.db; break;
        case Op::MaxC: r = va > e.db ? va : e.db; break;
        case Op::Exp: r = std::exp(va); break;
        case Op::Log: r = std::log(va); break;
        case Op::Log1p: r = std::log1p(va); break;
        case Op::Sqrt: r = std::sqrt(va); break;
        case Op::Sq: r = va * va; break;
        case Op::Abs: r = std::fabs(va); break;
        case Op::Tanh: r = std::tanh(va); break;
        }
        out.push_back(r);
    }
    return out;
}

auto ScalarField::value(std::span<const Dual2<double>>) const -> Dual2<double>
{
    throw NumericError("scalar field does not support directional differentiation");
}

auto ScalarField::value(std::span<const HyperDual<double>>) const -> HyperDual<double>
{
    throw NumericError("scalar field does not support directional differentiation");
}

namespace {

// Row-packed upper triangle offset for i <= j.
auto upper_index(int i, int j, int n) -> std::size_t
{
    return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i - 1) / 2
         + static_cast<std::size_t>(j - i);
}

} // namespace

auto SecondOrderJet::hess(int i, int j) const -> double
{
    const int n = dim();
    if (i > j) { std::swap(i, j); }
    return hessian_upper[upper_index(i, j, n)];
}

auto SecondOrderJet::hessian_dense() const -> std::vector<double>
{
    const int n = dim();
    std::vector<double> dense(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            dense[static_cast<std::size_t>(i) * n + j] = hess(i, j);
        }
    }
    return dense;
}

auto eval_jet(const ScalarField& field, std::span<const double> x) -> SecondOrderJet
{
    const int n = field.dimension();
    if (static_cast<int>(x.size()) != n) {
        throw InvalidArgument("eval_jet: point dimension mismatch");
    }
    SecondOrderJet jet;
    jet.gradient.assign(static_cast<std::size_t>(n), 0.0);
    jet.hessian_upper.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);

    std::vector<Dual2<double>> axis(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            axis[static_cast<std::size_t>(k)] = {x[static_cast<std::size_t>(k)],
                                                 k == i ? 1.0 : 0.0, 0.0};
        }
        const Dual2<double> r = field.value(std::span<const Dual2<double>>(axis));
        if (i == 0) { jet.value = r.v; }
        jet.gradient[static_cast<std::size_t>(i)] = r.d;
        jet.hessian_upper[upper_index(i, i, n)] = r.dd;
    }

    std::vector<HyperDual<double>> pair(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                pair[static_cast<std::size_t>(k)] = {x[static_cast<std::size_t>(k)],
                                                     k == i ? 1.0 : 0.0, k == j ? 1.0 : 0.0, 0.0};
            }
            const HyperDual<double> r = field.value(std::span<const HyperDual<double>>(pair));
            jet.hessian_upper[upper_index(i, j, n)] = r.d12;
        }
    }
    return jet;
}

auto hessian_determinant(const SecondOrderJet& jet) -> double
{
    const int n = jet.dim();
    std::vector<double> dense = jet.hessian_dense();
    return determinant_inplace(dense.data(), n);
}

auto eigenvalues_2x2(double h11, double h12, double h22) -> std::pair<double, double>
{
    const double tr = h11 + h22;
    const double gap = std::sqrt(sq(h11 - h22) + 4.0 * sq(h12));
    return {0.5 * (tr - gap), 0.5 * (tr + gap)};
}

auto loss_and_param_gradient(const ParamLossFn& loss, std::span<const double> params)
    -> ValueAndGradient
{
    Tape tape;
    tape.reserve(params.size(), 4096);
    TapeScope scope(tape);

    std::vector<Var> leaves;
    leaves.reserve(params.size());
    for (const double p : params) { leaves.push_back(tape.leaf(p)); }

    const Var out = loss(leaves);
    if (!std::isfinite(out.val)) {
        throw NumericError("loss evaluated to a non-finite value (" + format_double(out.val)
                           + ") over " + std::to_string(params.size()) + " parameters");
    }

    ValueAndGradient result;
    result.value = out.val;
    result.gradient.assign(params.size(), 0.0);
    if (!out.active()) { return result; } // loss independent of all parameters
    std::vector<double> adj(tape.var_count(), 0.0);
    tape.reverse(out.idx, 1.0, 0, adj);
    std::copy(adj.begin(), adj.begin() + static_cast<std::ptrdiff_t>(params.size()),
              result.gradient.begin());
    return result;
}

} // namespace mans
