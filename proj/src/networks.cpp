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

#include "mans/networks.hpp"

#include "mans/rng.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace mans {

auto family_name(Family f) -> std::string
{
    return f == Family::Standard ? "standard" : "input_convex";
}

auto family_from_name(const std::string& name) -> Family
{
    if (name == "standard") { return Family::Standard; }
    if (name == "input_convex") { return Family::InputConvex; }
    throw InvalidArgument("unknown network family: " + name);
}

auto activation_name(Activation a) -> std::string
{
    switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Softplus: return "softplus";
    }
    throw InvalidArgument("unknown activation");
}

auto activation_from_name(const std::string& name) -> Activation
{
    if (name == "tanh") { return Activation::Tanh; }
    if (name == "sigmoid") { return Activation::Sigmoid; }
    if (name == "softplus") { return Activation::Softplus; }
    throw InvalidArgument("unknown activation: " + name);
}

void NetworkSpec::validate() const
{
    if (input_dim < 1) { throw InvalidArgument("network input_dim must be at least 1"); }
    if (hidden.empty()) { throw InvalidArgument("network needs at least one hidden layer"); }
    for (int w : hidden) {
        if (w < 1) { throw InvalidArgument("hidden layer widths must be at least 1"); }
    }
    if (family == Family::InputConvex && activation != Activation::Softplus) {
        // Convexity of the composed map needs a convex nondecreasing
        // activation; tanh and sigmoid are not convex.
        throw InvalidArgument("input-convex networks require the softplus activation");
    }
    if (!(init_stdev > 0.0)) { throw InvalidArgument("init_stdev must be positive"); }
}

auto param_count(const NetworkSpec& spec) -> std::size_t
{
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.input_dim);
    const std::size_t skip = spec.family == Family::InputConvex ? n : 0;
    std::size_t count = static_cast<std::size_t>(spec.hidden[0]) * (n + 1);
    for (std::size_t j = 1; j < spec.hidden.size(); ++j) {
        count += static_cast<std::size_t>(spec.hidden[j]) *
                 (static_cast<std::size_t>(spec.hidden[j - 1]) + skip + 1);
    }
    count += static_cast<std::size_t>(spec.hidden.back()) + skip + 1;
    return count;
}

auto init_params(const NetworkSpec& spec, std::uint64_t seed) -> std::vector<double>
{
    const std::size_t count = param_count(spec);
    Rng rng(seed);
    std::vector<double> params(count);
    for (auto& p : params) { p = rng.normal(0.0, spec.init_stdev); }
    return params;
}

NetworkField::NetworkField(NetworkSpec spec, std::vector<double> raw_params)
    : spec_(std::move(spec)), raw_(std::move(raw_params))
{
    spec_.validate();
    if (raw_.size() != param_count(spec_)) {
        throw InvalidArgument("parameter vector does not match the network shape");
    }
    materialize_params<double>(spec_, raw_, mat_);
}

namespace {

template <class S>
auto field_eval(const NetworkSpec& spec, std::span<const double> w, std::span<const S> x,
                std::vector<S>& a, std::vector<S>& b) -> S
{
    if (x.size() != static_cast<std::size_t>(spec.input_dim)) {
        throw InvalidArgument("point dimension does not match the network input");
    }
    return net_forward<S, double>(spec, w, x.data(), a, b);
}

} // namespace

auto NetworkField::value(std::span<const double> x) const -> double
{
    return field_eval<double>(spec_, mat_, x, a0_, b0_);
}

auto NetworkField::value(std::span<const Dual2<double>> x) const -> Dual2<double>
{
    return field_eval<Dual2<double>>(spec_, mat_, x, a2_, b2_);
}

auto NetworkField::value(std::span<const HyperDual<double>> x) const -> HyperDual<double>
{
    return field_eval<HyperDual<double>>(spec_, mat_, x, a4_, b4_);
}

auto max_convexity_violation(const ScalarField& field, int trials, std::uint64_t seed,
                             double box) -> double
{
    const int n = field.dimension();
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> y(static_cast<std::size_t>(n));
    std::vector<double> mid(static_cast<std::size_t>(n));
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] = rng.uniform(-box, box);
            y[static_cast<std::size_t>(i)] = rng.uniform(-box, box);
        }
        const double t = rng.uniform01();
        for (int i = 0; i < n; ++i) {
            mid[static_cast<std::size_t>(i)] = t * x[static_cast<std::size_t>(i)] +
                                               (1.0 - t) * y[static_cast<std::size_t>(i)];
        }
        const double defect =
            field.value(std::span<const double>(mid)) -
            t * field.value(std::span<const double>(x)) -
            (1.0 - t) * field.value(std::span<const double>(y));
        worst = std::max(worst, defect);
    }
    return worst;
}

auto convexity_probe(const NetworkSpec& spec, std::span<const double> raw_params, int trials,
                     std::uint64_t seed) -> double
{
    if (spec.family != Family::InputConvex) {
        throw InvalidArgument("convexity probe only applies to input-convex networks");
    }
    const NetworkField field(spec, std::vector<double>(raw_params.begin(), raw_params.end()));
    return max_convexity_violation(field, trials, seed);
}

void save_network(const std::string& path, const NetworkSpec& spec, std::span<const double> params)
{
    spec.validate();
    if (params.size() != param_count(spec)) {
        throw InvalidArgument("parameter vector does not match the network shape");
    }
    std::ofstream out(path);
    if (!out) { throw IoError("cannot open for writing: " + path); }
    out << "mansolve network 1\n";
    out << "family " << family_name(spec.family) << '\n';
    out << "input_dim " << spec.input_dim << '\n';
    out << "hidden";
    for (int w : spec.hidden) { out << ' ' << w; }
    out << '\n';
    out << "activation " << activation_name(spec.activation) << '\n';
    out << "init_stdev " << format_double(spec.init_stdev) << '\n';
    out << "params " << params.size() << '\n';
    for (double p : params) { out << format_double(p) << '\n'; }
    if (!out) { throw IoError("write failed: " + path); }
}

namespace {

auto expect_line(std::ifstream& in, const std::string& path) -> std::string
{
    std::string line;
    if (!std::getline(in, line)) { throw IoError("truncated network checkpoint: " + path); }
    return line;
}

auto keyed_value(const std::string& line, const std::string& key, const std::string& path)
    -> std::string
{
    if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
        line[key.size()] != ' ') {
        throw IoError("malformed network checkpoint (" + path + "): expected '" + key + "'");
    }
    return line.substr(key.size() + 1);
}

} // namespace

auto load_network(const std::string& path) -> std::pair<NetworkSpec, std::vector<double>>
{
    std::ifstream in(path);
    if (!in) { throw IoError("cannot open: " + path); }
    if (expect_line(in, path) != "mansolve network 1") {
        throw IoError("not a network checkpoint: " + path);
    }
    NetworkSpec spec;
    spec.family = family_from_name(keyed_value(expect_line(in, path), "family", path));
    spec.input_dim = std::stoi(keyed_value(expect_line(in, path), "input_dim", path));
    {
        std::istringstream widths(keyed_value(expect_line(in, path), "hidden", path));
        int w = 0;
        spec.hidden.clear();
        while (widths >> w) { spec.hidden.push_back(w); }
    }
    spec.activation = activation_from_name(keyed_value(expect_line(in, path), "activation", path));
    spec.init_stdev = parse_double(keyed_value(expect_line(in, path), "init_stdev", path));
    spec.validate();
    const auto declared = static_cast<std::size_t>(
        std::stoull(keyed_value(expect_line(in, path), "params", path)));
    if (declared != param_count(spec)) {
        throw IoError("parameter count does not match the network shape: " + path);
    }
    std::vector<double> params(declared);
    for (auto& p : params) { p = parse_double(expect_line(in, path)); }
    return {std::move(spec), std::move(params)};
}

} // namespace mans
