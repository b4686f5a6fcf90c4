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

#include "mans/domains.hpp"

#include "mans/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace mans {

namespace {

constexpr double membership_slack = 1e-12;
constexpr int rejection_cap = 1000000;

} // namespace

auto Domain::distance_to_boundary(std::span<const double>) const -> double
{
    throw InvalidArgument("the exact boundary distance is only available on rectangles");
}

RectDomain::RectDomain(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi))
{
    if (lo_.empty() || lo_.size() != hi_.size()) {
        throw InvalidArgument("rectangle needs matching nonempty corner vectors");
    }
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (!(lo_[i] < hi_[i])) { throw InvalidArgument("rectangle corners must satisfy lo < hi"); }
    }
}

auto RectDomain::dimension() const -> int { return static_cast<int>(lo_.size()); }

auto RectDomain::contains(std::span<const double> x) const -> bool
{
    if (x.size() != lo_.size()) { return false; }
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (x[i] < lo_[i] - membership_slack || x[i] > hi_[i] + membership_slack) { return false; }
    }
    return true;
}

auto RectDomain::strictly_inside(std::span<const double> x) const -> bool
{
    if (x.size() != lo_.size()) { return false; }
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (!(x[i] > lo_[i] && x[i] < hi_[i])) { return false; }
    }
    return true;
}

auto RectDomain::bounding_box() const -> std::pair<std::vector<double>, std::vector<double>>
{
    return {lo_, hi_};
}

auto RectDomain::sample_interior(int m, std::uint64_t seed) const -> PointSet
{
    if (m < 1) { throw InvalidArgument("interior sample count must be at least 1"); }
    Rng rng(seed);
    PointSet points(dimension());
    points.coords.reserve(static_cast<std::size_t>(m) * lo_.size());
    for (int p = 0; p < m; ++p) {
        for (std::size_t i = 0; i < lo_.size(); ++i) {
            points.coords.push_back(rng.uniform(lo_[i], hi_[i]));
        }
    }
    return points;
}

auto RectDomain::sample_boundary(int k, std::uint64_t seed) const -> PointSet
{
    if (k < 1) { throw InvalidArgument("boundary sample count must be at least 1"); }
    const std::size_t n = lo_.size();
    // Face order: axis 0 low, axis 0 high, axis 1 low, ...  Face measure is
    // the product of the other extents (1 for the endpoints of an interval).
    std::vector<double> weights(2 * n);
    for (std::size_t a = 0; a < n; ++a) {
        double measure = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != a) { measure *= hi_[i] - lo_[i]; }
        }
        weights[2 * a] = measure;
        weights[2 * a + 1] = measure;
    }
    const auto counts = allocate_proportional(weights, k);
    Rng rng(seed);
    PointSet points(dimension());
    points.coords.reserve(static_cast<std::size_t>(k) * n);
    std::vector<double> x(n);
    for (std::size_t face = 0; face < 2 * n; ++face) {
        const std::size_t a = face / 2;
        for (int p = 0; p < counts[face]; ++p) {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = i == a ? (face % 2 == 0 ? lo_[a] : hi_[a]) : rng.uniform(lo_[i], hi_[i]);
            }
            points.push(x);
        }
    }
    return points;
}

auto RectDomain::distance_to_boundary(std::span<const double> x) const -> double
{
    if (x.size() != lo_.size()) { throw InvalidArgument("point dimension mismatch"); }
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        dist = std::min(dist, std::min(x[i] - lo_[i], hi_[i] - x[i]));
    }
    return dist;
}

auto AsymDomain::arc_corner() -> std::pair<double, double>
{
    // Intersection of x^2 + y^2 = 1 with y = x - 1/2: 2x^2 - x - 3/4 = 0.
    const double x = (1.0 + std::sqrt(7.0)) / 4.0;
    return {x, x - 0.5};
}

auto AsymDomain::segment_lengths() -> std::vector<double>
{
    const auto [cx, cy] = arc_corner();
    const double theta = std::atan2(cy, cx);
    const double pi = std::acos(-1.0);
    return {1.0, pi / 2.0 - theta, std::hypot(cx - 0.5, cy), 0.5};
}

auto AsymDomain::contains(std::span<const double> x) const -> bool
{
    if (x.size() != 2) { return false; }
    return x[0] >= -membership_slack && x[1] >= -membership_slack &&
           x[0] * x[0] + x[1] * x[1] <= 1.0 + membership_slack &&
           x[1] >= x[0] - 0.5 - membership_slack;
}

auto AsymDomain::strictly_inside(std::span<const double> x) const -> bool
{
    if (x.size() != 2) { return false; }
    return x[0] > 0.0 && x[1] > 0.0 && x[0] * x[0] + x[1] * x[1] < 1.0 && x[1] > x[0] - 0.5;
}

auto AsymDomain::bounding_box() const -> std::pair<std::vector<double>, std::vector<double>>
{
    return {{0.0, -0.5}, {1.0, 1.0}};
}

auto AsymDomain::sample_interior(int m, std::uint64_t seed) const -> PointSet
{
    if (m < 1) { throw InvalidArgument("interior sample count must be at least 1"); }
    Rng rng(seed);
    PointSet points(2);
    points.coords.reserve(static_cast<std::size_t>(m) * 2);
    for (int p = 0; p < m; ++p) {
        bool accepted = false;
        for (int attempt = 0; attempt < rejection_cap; ++attempt) {
            const double x[] = {rng.uniform(0.0, 1.0), rng.uniform(-0.5, 1.0)};
            if (strictly_inside(x)) {
                points.push(x);
                accepted = true;
                break;
            }
        }
        if (!accepted) { throw NumericError("rejection sampling failed to hit the region"); }
    }
    return points;
}

auto AsymDomain::sample_boundary(int k, std::uint64_t seed) const -> PointSet
{
    if (k < 1) { throw InvalidArgument("boundary sample count must be at least 1"); }
    const auto lengths = segment_lengths();
    const auto counts = allocate_proportional(lengths, k);
    const auto [cx, cy] = arc_corner();
    const double theta = std::atan2(cy, cx);
    const double pi = std::acos(-1.0);
    Rng rng(seed);
    PointSet points(2);
    points.coords.reserve(static_cast<std::size_t>(k) * 2);
    // Piece 1: x = 0, y in (0, 1).
    for (int p = 0; p < counts[0]; ++p) {
        const double pt[] = {0.0, rng.uniform01()};
        points.push(pt);
    }
    // Piece 2: the arc from (0, 1) to the corner.
    for (int p = 0; p < counts[1]; ++p) {
        const double t = theta + rng.uniform01() * (pi / 2.0 - theta);
        const double pt[] = {std::cos(t), std::sin(t)};
        points.push(pt);
    }
    // Piece 3: the line y = x - 1/2 from the corner down to (1/2, 0).
    for (int p = 0; p < counts[2]; ++p) {
        const double t = rng.uniform01();
        const double x = cx + t * (0.5 - cx);
        const double pt[] = {x, x - 0.5};
        points.push(pt);
    }
    // Piece 4: y = 0, x in (0, 1/2).
    for (int p = 0; p < counts[3]; ++p) {
        const double pt[] = {0.5 * rng.uniform01(), 0.0};
        points.push(pt);
    }
    return points;
}

auto sample_segment(std::span<const double> p0, std::span<const double> p1, int count) -> PointSet
{
    if (p0.size() != p1.size() || p0.empty()) { throw InvalidArgument("endpoint dimension mismatch"); }
    if (count < 2) { throw InvalidArgument("a segment needs at least 2 points"); }
    if (std::equal(p0.begin(), p0.end(), p1.begin())) {
        throw InvalidArgument("segment endpoints coincide");
    }
    PointSet points(static_cast<int>(p0.size()));
    points.coords.reserve(static_cast<std::size_t>(count) * p0.size());
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        for (std::size_t d = 0; d < p0.size(); ++d) {
            points.coords.push_back(p0[d] + t * (p1[d] - p0[d]));
        }
    }
    return points;
}

auto allocate_proportional(std::span<const double> weights, int total) -> std::vector<int>
{
    if (weights.empty()) { throw InvalidArgument("allocation needs at least one weight"); }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0)) { throw InvalidArgument("allocation weights must have a positive sum"); }
    std::vector<int> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> remainders(weights.size());
    int assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double share = static_cast<double>(total) * weights[i] / sum;
        counts[i] = static_cast<int>(std::floor(share));
        assigned += counts[i];
        remainders[i] = {share - std::floor(share), i};
    }
    // Ties broken by index so the result never depends on sort internals.
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (int extra = 0; extra < total - assigned; ++extra) {
        counts[remainders[static_cast<std::size_t>(extra) % remainders.size()].second] += 1;
    }
    return counts;
}

auto sample_collocation(const Domain& domain, int m, int k, std::uint64_t seed) -> CollocationSet
{
    CollocationSet set;
    set.seed = seed;
    set.interior = domain.sample_interior(m, seed);
    set.boundary = domain.sample_boundary(k, seed + 1);
    set.singular = PointSet(domain.dimension());
    return set;
}

void add_singular_segment(CollocationSet& set, std::span<const double> p0,
                          std::span<const double> p1, int count)
{
    const auto points = sample_segment(p0, p1, count);
    if (set.singular.dim == 0) { set.singular.dim = points.dim; }
    if (set.singular.dim != points.dim) { throw InvalidArgument("segment dimension mismatch"); }
    set.singular.coords.insert(set.singular.coords.end(), points.coords.begin(),
                               points.coords.end());
}

namespace {

void write_points(std::ofstream& out, const char* role, const PointSet& points)
{
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << role;
        for (double c : points[i]) { out << ' ' << format_double(c); }
        out << '\n';
    }
}

} // namespace

void save_collocation(const std::string& path, const CollocationSet& set)
{
    std::ofstream out(path);
    if (!out) { throw IoError("cannot open for writing: " + path); }
    const int dim = set.interior.dim;
    out << "collocation seed " << set.seed << " dim " << dim << '\n';
    write_points(out, "interior", set.interior);
    write_points(out, "boundary", set.boundary);
    write_points(out, "singular", set.singular);
    if (!out) { throw IoError("write failed: " + path); }
}

auto load_collocation(const std::string& path) -> CollocationSet
{
    std::ifstream in(path);
    if (!in) { throw IoError("cannot open: " + path); }
    std::string header;
    if (!std::getline(in, header)) { throw IoError("empty collocation file: " + path); }
    std::istringstream hs(header);
    std::string word;
    std::string seedword;
    CollocationSet set;
    int dim = 0;
    std::string dimword;
    if (!(hs >> word >> seedword >> set.seed >> dimword >> dim) || word != "collocation" ||
        seedword != "seed" || dimword != "dim" || dim < 1) {
        throw IoError("malformed collocation header: " + path);
    }
    set.interior = PointSet(dim);
    set.boundary = PointSet(dim);
    set.singular = PointSet(dim);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) { continue; }
        std::istringstream ls(line);
        std::string role;
        ls >> role;
        PointSet* target = role == "interior"   ? &set.interior
                           : role == "boundary" ? &set.boundary
                           : role == "singular" ? &set.singular
                                                : nullptr;
        if (target == nullptr) { throw IoError("unknown point role '" + role + "' in " + path); }
        std::string token;
        std::vector<double> point;
        while (ls >> token) { point.push_back(parse_double(token)); }
        if (point.size() != static_cast<std::size_t>(dim)) {
            throw IoError("point dimension mismatch in " + path);
        }
        target->push(point);
    }
    return set;
}

} // namespace mans
