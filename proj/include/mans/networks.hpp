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

// Fully connected scalar-output networks in two flavours:
//
//  * Standard: z1 = W1 x + b1, z(l) = Wl act(z(l-1)) + bl, identity output.
//  * InputConvex: z1 = act(L0 x + b0),
//    z(j+1) = act(Wj zj + Lj x + bj), output = W z + L x + b (identity),
//    where every W block is kept elementwise nonnegative by storing raw
//    values v and using w = v^2.  With a convex nondecreasing activation
//    (softplus; the only one accepted) the map x -> u(x) is convex by
//    construction.
//
// The forward pass is one template, generic over the point scalar S
// (double, Dual2, HyperDual, or their Var-based versions) and the weight
// scalar (double or Var), so plain evaluation, directional derivatives and
// taped training all run the identical arithmetic.

#include "mans/autodiff.hpp"
#include "mans/common.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mans {

enum class Family { Standard, InputConvex };
enum class Activation { Tanh, Sigmoid, Softplus };

auto family_name(Family f) -> std::string;
auto family_from_name(const std::string& name) -> Family;
auto activation_name(Activation a) -> std::string;
auto activation_from_name(const std::string& name) -> Activation;

struct NetworkSpec {
    Family family = Family::Standard;
    int input_dim = 0;
    std::vector<int> hidden; // widths of the hidden layers
    Activation activation = Activation::Tanh;
    double init_stdev = 0.5;

    void validate() const; // throws InvalidArgument
    [[nodiscard]] auto operator==(const NetworkSpec&) const -> bool = default;
};

auto param_count(const NetworkSpec& spec) -> std::size_t;

// Independent draws from Normal(0, init_stdev^2); identical for equal seeds.
auto init_params(const NetworkSpec& spec, std::uint64_t seed) -> std::vector<double>;

// Calls fn(offset, count) for every raw-parameter block that is squared on
// materialization (the InputConvex W blocks).  No calls for Standard nets.
template <class Fn> void for_each_convex_block(const NetworkSpec& spec, Fn&& fn)
{
    if (spec.family != Family::InputConvex) { return; }
    const std::size_t n = static_cast<std::size_t>(spec.input_dim);
    const std::size_t layers = spec.hidden.size();
    std::size_t off = static_cast<std::size_t>(spec.hidden[0]) * (n + 1); // L0 + b0
    for (std::size_t j = 1; j < layers; ++j) {
        const auto rows = static_cast<std::size_t>(spec.hidden[j]);
        const auto cols = static_cast<std::size_t>(spec.hidden[j - 1]);
        fn(off, rows * cols);
        off += rows * (cols + n + 1);
    }
    fn(off, static_cast<std::size_t>(spec.hidden[layers - 1]));
}

// Weights as used by the forward pass: raw values with the convex blocks
// squared.  Recording this under Var leaves makes d(loss)/d(raw) come out
// as 2 v d(loss)/d(w) automatically.
template <class T>
void materialize_params(const NetworkSpec& spec, std::span<const T> raw, std::vector<T>& out)
{
    out.assign(raw.begin(), raw.end());
    for_each_convex_block(spec, [&](std::size_t off, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) { out[off + i] = sq(raw[off + i]); }
    });
}

namespace detail {

template <class S, class T> auto lift(const T& t) -> S
{
    if constexpr (std::same_as<S, T>) {
        return t;
    } else {
        return S{t};
    }
}

template <class S> auto apply_activation(Activation act, const S& v) -> S
{
    using std::tanh;
    switch (act) {
    case Activation::Tanh: return tanh(v);
    case Activation::Sigmoid: return sigmoid(v);
    case Activation::Softplus: return softplus(v);
    }
    throw InvalidArgument("unknown activation");
}

} // namespace detail

// Evaluate the network at point x with materialized weights w.  za/zb are
// scratch buffers reused across calls.  S is the point scalar, T the weight
// scalar; mixing S = Dual2<Var> with T = Var records the directional pass
// on the active tape.
template <class S, class T>
auto net_forward(const NetworkSpec& spec, std::span<const T> w, const S* x, std::vector<S>& za,
                 std::vector<S>& zb) -> S
{
    const int n = spec.input_dim;
    const std::size_t layers = spec.hidden.size();
    const T* p = w.data();

    auto affine = [&](const S* input, int in_w, int out_w, bool skip_x, std::vector<S>& out) {
        const T* wp = p;
        const T* lp = wp + static_cast<std::size_t>(out_w) * in_w;
        const T* bp = lp + (skip_x ? static_cast<std::size_t>(out_w) * n : 0);
        out.resize(static_cast<std::size_t>(out_w));
        for (int r = 0; r < out_w; ++r) {
            S acc = detail::lift<S>(bp[r]);
            const T* row = wp + static_cast<std::size_t>(r) * in_w;
            for (int c = 0; c < in_w; ++c) { acc = mac(row[c], input[c], acc); }
            if (skip_x) {
                const T* xrow = lp + static_cast<std::size_t>(r) * n;
                for (int c = 0; c < n; ++c) { acc = mac(xrow[c], x[c], acc); }
            }
            out[static_cast<std::size_t>(r)] = acc;
        }
        p = bp + out_w;
    };

    if (spec.family == Family::Standard) {
        affine(x, n, spec.hidden[0], false, za);
        std::vector<S>* cur = &za;
        std::vector<S>* nxt = &zb;
        for (std::size_t l = 1; l <= layers; ++l) {
            for (auto& v : *cur) { v = detail::apply_activation(spec.activation, v); }
            const int out_w = l < layers ? spec.hidden[l] : 1;
            affine(cur->data(), spec.hidden[l - 1], out_w, false, *nxt);
            std::swap(cur, nxt);
        }
        return (*cur)[0];
    }

    // InputConvex: x feeds every layer past the first; z blocks use squared
    // weights.
    affine(x, n, spec.hidden[0], false, za);
    std::vector<S>* cur = &za;
    std::vector<S>* nxt = &zb;
    for (auto& v : *cur) { v = detail::apply_activation(spec.activation, v); }
    for (std::size_t j = 1; j < layers; ++j) {
        affine(cur->data(), spec.hidden[j - 1], spec.hidden[j], true, *nxt);
        std::swap(cur, nxt);
        for (auto& v : *cur) { v = detail::apply_activation(spec.activation, v); }
    }
    affine(cur->data(), spec.hidden[layers - 1], 1, true, *nxt);
    return (*nxt)[0];
}

// A trained (or initialized) network as a scalar field.
class NetworkField final : public ScalarField {
  public:
    NetworkField(NetworkSpec spec, std::vector<double> raw_params);

    [[nodiscard]] auto dimension() const -> int override { return spec_.input_dim; }
    [[nodiscard]] auto value(std::span<const double> x) const -> double override;
    [[nodiscard]] auto value(std::span<const Dual2<double>> x) const -> Dual2<double> override;
    [[nodiscard]] auto value(std::span<const HyperDual<double>> x) const -> HyperDual<double> override;

    [[nodiscard]] auto spec() const -> const NetworkSpec& { return spec_; }
    [[nodiscard]] auto raw_params() const -> std::span<const double> { return raw_; }
    [[nodiscard]] auto materialized() const -> std::span<const double> { return mat_; }

  private:
    NetworkSpec spec_;
    std::vector<double> raw_;
    std::vector<double> mat_;
    // Scratch reused across evaluations; fields are single-threaded objects.
    mutable std::vector<double> a0_, b0_;
    mutable std::vector<Dual2<double>> a2_, b2_;
    mutable std::vector<HyperDual<double>> a4_, b4_;
};

// Largest convexity defect f(t x + (1-t) y) - t f(x) - (1-t) f(y) found over
// random triples in [-box, box]^n with t uniform in [0, 1].  Negative means
// every probe looked convex.
auto max_convexity_violation(const ScalarField& field, int trials, std::uint64_t seed,
                             double box = 2.0) -> double;

// Same probe, but restricted to the family that guarantees convexity.
auto convexity_probe(const NetworkSpec& spec, std::span<const double> raw_params, int trials,
                     std::uint64_t seed) -> double;

// Plain-text checkpoint: spec header plus one 17-digit decimal per
// parameter; round-trips bit-exactly.
void save_network(const std::string& path, const NetworkSpec& spec, std::span<const double> params);
auto load_network(const std::string& path) -> std::pair<NetworkSpec, std::vector<double>>;

} // namespace mans
