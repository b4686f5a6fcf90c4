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

// Two cooperating differentiation mechanisms, both in 64-bit floats:
//
//  * Forward mode: small fixed-size duals carrying directional derivative
//    components.  Dual2 carries (value, d, dd) along one direction and
//    serves the diagonal Hessian entries; HyperDual carries
//    (value, d1, d2, d12) along a direction pair and serves the mixed
//    entries.  A full gradient+Hessian of an n-variable field therefore
//    costs n(n+1)/2 forward passes.
//
//  * Reverse mode: a scalar tape of primitive operations.  Var wraps a
//    double plus a tape index; arithmetic on active Vars records entries
//    holding parents and local partials, and a reverse sweep accumulates
//    exact adjoints.  Running forward mode *over* Var (Dual2<Var>,
//    HyperDual<Var>) records the entire second-order computation on the
//    tape, which is how losses built from network Hessians get exact
//    parameter gradients.
//
// Vars with idx < 0 are passive constants: they propagate values but
// record nothing, so constants and zero seed components cost no tape
// space.  Tapes are single-threaded; one TapeScope per thread at a time.

#include "mans/common.hpp"

#include <cassert>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace mans {

enum class Op : std::uint32_t {
    Add,
    Sub,
    Mul,
    Div,
    Mac, // a*b + c, the dot-product workhorse
    AddC,
    RSubC, // c - x
    MulC,
    DivC,  // x / c
    RDivC, // c / x
    PowC,
    MinC, // min(c, x)
    MaxC, // max(c, x)
    Exp,
    Log,
    Log1p,
    Sqrt,
    Sq,
    Abs,
    Tanh,
};

struct TapeEntry {
    std::int32_t a = -1;
    std::int32_t b = -1;
    std::int32_t c = -1; // Mac only; partial is implicitly 1
    Op op = Op::Add;
    double da = 0.0; // d(out)/d(a)
    double db = 0.0; // d(out)/d(b), or the constant for the *C ops
};
static_assert(sizeof(TapeEntry) == 32);

struct Var {
    double val = 0.0;
    std::int32_t idx = -1;

    Var() = default;
    Var(double v) : val(v) {} // NOLINT: implicit passive constant
    Var(double v, std::int32_t i) : val(v), idx(i) {}
    [[nodiscard]] auto active() const -> bool { return idx >= 0; }
};

class Tape {
  public:
    Tape() = default;

    void reserve(std::size_t leaves, std::size_t entries)
    {
        vals_.reserve(leaves + entries);
        entries_.reserve(entries);
    }

    auto leaf(double value) -> Var
    {
        if (!entries_.empty()) {
            throw InvalidArgument("tape leaves must be created before any operation is recorded");
        }
        vals_.push_back(value);
        ++n_leaves_;
        return {value, n_leaves_ - 1};
    }

    [[nodiscard]] auto n_leaves() const -> std::int32_t { return n_leaves_; }
    [[nodiscard]] auto entry_count() const -> std::size_t { return entries_.size(); }
    [[nodiscard]] auto var_count() const -> std::size_t { return vals_.size(); }
    [[nodiscard]] auto value(std::int32_t var) const -> double { return vals_[var]; }
    [[nodiscard]] auto entries() const -> std::span<const TapeEntry> { return entries_; }

    // Drop every entry recorded after `mark` (a previous entry_count()).
    void truncate(std::size_t mark)
    {
        entries_.resize(mark);
        vals_.resize(static_cast<std::size_t>(n_leaves_) + mark);
    }

    void clear()
    {
        entries_.clear();
        vals_.clear();
        n_leaves_ = 0;
    }

    // Accumulate d(root)/d(var) * seed into adj for every var at or below
    // `root`, walking entries down to (and excluding) entry index `stop`.
    // adj must span var_count() and be zero on every entry-output slot in
    // the walked range; those slots are zeroed again on the way down, so
    // repeated sweeps over a shared prefix compose without clearing.
    void reverse(std::int32_t root, double seed, std::size_t stop, std::span<double> adj) const
    {
        if (root < 0) { return; }
        adj[static_cast<std::size_t>(root)] += seed;
        if (root < n_leaves_) { return; }
        const auto root_entry = static_cast<std::size_t>(root - n_leaves_);
        const auto base = static_cast<std::size_t>(n_leaves_);
        for (std::size_t k = root_entry + 1; k-- > stop;) {
            const double w = adj[base + k];
            if (w == 0.0) { continue; }
            adj[base + k] = 0.0;
            const TapeEntry& e = entries_[k];
            adj[static_cast<std::size_t>(e.a)] += e.da * w;
            if (e.b >= 0) { adj[static_cast<std::size_t>(e.b)] += e.db * w; }
            if (e.c >= 0) { adj[static_cast<std::size_t>(e.c)] += w; }
        }
    }

    // Recompute all forward values from the leaves and the recorded ops.
    [[nodiscard]] auto replay_values() const -> std::vector<double>;

    // --- recording primitives (hot path) ---

    auto record1(Op op, double val, std::int32_t a, double da) -> Var
    {
        entries_.push_back(TapeEntry{a, -1, -1, op, da, 0.0});
        vals_.push_back(val);
        return {val, static_cast<std::int32_t>(vals_.size() - 1)};
    }

    auto record_c(Op op, double val, std::int32_t a, double da, double constant) -> Var
    {
        entries_.push_back(TapeEntry{a, -1, -1, op, da, constant});
        vals_.push_back(val);
        return {val, static_cast<std::int32_t>(vals_.size() - 1)};
    }

    auto record2(Op op, double val, std::int32_t a, std::int32_t b, double da, double db) -> Var
    {
        entries_.push_back(TapeEntry{a, b, -1, op, da, db});
        vals_.push_back(val);
        return {val, static_cast<std::int32_t>(vals_.size() - 1)};
    }

    auto record3(double val, std::int32_t a, std::int32_t b, std::int32_t c, double da, double db)
        -> Var
    {
        entries_.push_back(TapeEntry{a, b, c, Op::Mac, da, db});
        vals_.push_back(val);
        return {val, static_cast<std::int32_t>(vals_.size() - 1)};
    }

  private:
    std::vector<TapeEntry> entries_;
    std::vector<double> vals_; // leaves first, then one value per entry
    std::int32_t n_leaves_ = 0;
};

namespace detail {
inline thread_local Tape* g_active_tape = nullptr;
} // namespace detail

// Makes `tape` the recording target for active-Var arithmetic on this
// thread for the scope's lifetime.
class TapeScope {
  public:
    explicit TapeScope(Tape& tape) : prev_(detail::g_active_tape)
    {
        detail::g_active_tape = &tape;
    }
    ~TapeScope() { detail::g_active_tape = prev_; }
    TapeScope(const TapeScope&) = delete;
    auto operator=(const TapeScope&) -> TapeScope& = delete;

  private:
    Tape* prev_;
};

namespace detail {

inline auto tape() -> Tape&
{
    assert(g_active_tape != nullptr);
    return *g_active_tape;
}

inline auto add_const(Var x, double c) -> Var
{
    if (c == 0.0) { return x; }
    return tape().record_c(Op::AddC, x.val + c, x.idx, 1.0, c);
}

inline auto mul_const(Var x, double c) -> Var
{
    if (c == 1.0) { return x; }
    if (c == 0.0) { return {0.0}; }
    return tape().record_c(Op::MulC, x.val * c, x.idx, c, c);
}

} // namespace detail

inline auto operator+(Var a, Var b) -> Var
{
    if (a.idx >= 0) {
        if (b.idx >= 0) { return detail::tape().record2(Op::Add, a.val + b.val, a.idx, b.idx, 1.0, 1.0); }
        return detail::add_const(a, b.val);
    }
    if (b.idx >= 0) { return detail::add_const(b, a.val); }
    return {a.val + b.val};
}

inline auto operator-(Var a, Var b) -> Var
{
    if (a.idx >= 0) {
        if (b.idx >= 0) { return detail::tape().record2(Op::Sub, a.val - b.val, a.idx, b.idx, 1.0, -1.0); }
        return detail::add_const(a, -b.val);
    }
    if (b.idx >= 0) { return detail::tape().record_c(Op::RSubC, a.val - b.val, b.idx, -1.0, a.val); }
    return {a.val - b.val};
}

inline auto operator-(Var a) -> Var
{
    if (a.idx < 0) { return {-a.val}; }
    return detail::tape().record_c(Op::MulC, -a.val, a.idx, -1.0, -1.0);
}

inline auto operator*(Var a, Var b) -> Var
{
    if (a.idx >= 0) {
        if (b.idx >= 0) { return detail::tape().record2(Op::Mul, a.val * b.val, a.idx, b.idx, b.val, a.val); }
        return detail::mul_const(a, b.val);
    }
    if (b.idx >= 0) { return detail::mul_const(b, a.val); }
    return {a.val * b.val};
}

inline auto operator/(Var a, Var b) -> Var
{
    if (b.idx < 0) {
        if (a.idx < 0) { return {a.val / b.val}; }
        if (b.val == 1.0) { return a; }
        return detail::tape().record_c(Op::DivC, a.val / b.val, a.idx, 1.0 / b.val, b.val);
    }
    if (a.idx < 0) {
        const double v = a.val / b.val;
        return detail::tape().record_c(Op::RDivC, v, b.idx, -v / b.val, a.val);
    }
    const double v = a.val / b.val;
    return detail::tape().record2(Op::Div, v, a.idx, b.idx, 1.0 / b.val, -v / b.val);
}

inline auto operator+=(Var& a, Var b) -> Var& { return a = a + b; }
inline auto operator-=(Var& a, Var b) -> Var& { return a = a - b; }
inline auto operator*=(Var& a, Var b) -> Var& { return a = a * b; }
inline auto operator/=(Var& a, Var b) -> Var& { return a = a / b; }

// Fused multiply-accumulate a*b + c: one tape entry when fully active.
inline auto mac(Var a, Var b, Var c) -> Var
{
    if (a.idx >= 0 && b.idx >= 0 && c.idx >= 0) {
        return detail::tape().record3(a.val * b.val + c.val, a.idx, b.idx, c.idx, b.val, a.val);
    }
    return a * b + c;
}
inline auto mac(double a, double b, double c) -> double { return a * b + c; }

inline auto exp(Var x) -> Var
{
    const double e = std::exp(x.val);
    if (x.idx < 0) { return {e}; }
    return detail::tape().record1(Op::Exp, e, x.idx, e);
}

inline auto log(Var x) -> Var
{
    if (x.idx < 0) { return {std::log(x.val)}; }
    return detail::tape().record1(Op::Log, std::log(x.val), x.idx, 1.0 / x.val);
}

inline auto log1p(Var x) -> Var
{
    if (x.idx < 0) { return {std::log1p(x.val)}; }
    return detail::tape().record1(Op::Log1p, std::log1p(x.val), x.idx, 1.0 / (1.0 + x.val));
}

inline auto sqrt(Var x) -> Var
{
    const double s = std::sqrt(x.val);
    if (x.idx < 0) { return {s}; }
    return detail::tape().record1(Op::Sqrt, s, x.idx, 0.5 / s);
}

inline auto sq(Var x) -> Var
{
    if (x.idx < 0) { return {x.val * x.val}; }
    return detail::tape().record1(Op::Sq, x.val * x.val, x.idx, 2.0 * x.val);
}
inline auto sq(double x) -> double { return x * x; }

inline auto abs(Var x) -> Var
{
    if (x.idx < 0) { return {std::fabs(x.val)}; }
    const double sign = x.val > 0.0 ? 1.0 : (x.val < 0.0 ? -1.0 : 0.0);
    return detail::tape().record1(Op::Abs, std::fabs(x.val), x.idx, sign);
}

inline auto tanh(Var x) -> Var
{
    const double t = std::tanh(x.val);
    if (x.idx < 0) { return {t}; }
    return detail::tape().record1(Op::Tanh, t, x.idx, 1.0 - t * t);
}

inline auto pow_c(Var x, double c) -> Var
{
    const double v = std::pow(x.val, c);
    if (x.idx < 0) { return {v}; }
    return detail::tape().record_c(Op::PowC, v, x.idx, c * std::pow(x.val, c - 1.0), c);
}
inline auto pow_c(double x, double c) -> double { return std::pow(x, c); }

// min(0, x); the subderivative at x == 0 is 0 (limit from the side where
// the clamp is inactive for convexity purposes).
inline auto vmin0(Var x) -> Var
{
    if (x.idx < 0) { return {x.val < 0.0 ? x.val : 0.0}; }
    const double partial = x.val < 0.0 ? 1.0 : 0.0;
    return detail::tape().record_c(Op::MinC, x.val < 0.0 ? x.val : 0.0, x.idx, partial, 0.0);
}
inline auto vmin0(double x) -> double { return x < 0.0 ? x : 0.0; }

// max(0, x); at x == 0 the derivative is 1, matching max(0,x) = x + min(0,-x).
inline auto vmax0(Var x) -> Var
{
    if (x.idx < 0) { return {x.val > 0.0 ? x.val : 0.0}; }
    const double partial = x.val >= 0.0 ? 1.0 : 0.0;
    return detail::tape().record_c(Op::MaxC, x.val > 0.0 ? x.val : 0.0, x.idx, partial, 0.0);
}
inline auto vmax0(double x) -> double { return x > 0.0 ? x : 0.0; }

inline auto value_of(double x) -> double { return x; }
inline auto value_of(Var x) -> double { return x.val; }

// ---------------------------------------------------------------------------
// Forward-mode directional duals, generic over the base scalar T (double or
// Var).  Dual2 tracks one direction (value, d, dd); HyperDual tracks a pair
// (value, d1, d2, d12) whose cross term yields mixed second derivatives.
// ---------------------------------------------------------------------------

template <class T> struct Dual2 {
    T v{};
    T d{};
    T dd{};
};

template <class T> struct HyperDual {
    T v{};
    T d1{};
    T d2{};
    T d12{};
};

template <class T, class S>
concept ScalarOf = std::same_as<S, T> || std::same_as<S, double>;

// --- Dual2 arithmetic ---

template <class T> auto operator+(const Dual2<T>& a, const Dual2<T>& b) -> Dual2<T>
{
    return {a.v + b.v, a.d + b.d, a.dd + b.dd};
}

template <class T> auto operator-(const Dual2<T>& a, const Dual2<T>& b) -> Dual2<T>
{
    return {a.v - b.v, a.d - b.d, a.dd - b.dd};
}

template <class T> auto operator-(const Dual2<T>& a) -> Dual2<T> { return {-a.v, -a.d, -a.dd}; }

template <class T> auto operator*(const Dual2<T>& a, const Dual2<T>& b) -> Dual2<T>
{
    const T cross = a.d * b.d;
    return {a.v * b.v, mac(a.d, b.v, a.v * b.d), mac(a.dd, b.v, mac(a.v, b.dd, cross + cross))};
}

template <class T> auto operator/(const Dual2<T>& a, const Dual2<T>& b) -> Dual2<T>
{
    const T q = a.v / b.v;
    const T d = (a.d - q * b.d) / b.v;
    const T two_d = d + d;
    return {q, d, (a.dd - q * b.dd - two_d * b.d) / b.v};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator+(const Dual2<T>& a, const S& s) -> Dual2<T> { return {a.v + s, a.d, a.dd}; }

template <class T, class S>
    requires ScalarOf<T, S>
auto operator+(const S& s, const Dual2<T>& a) -> Dual2<T> { return {s + a.v, a.d, a.dd}; }

template <class T, class S>
    requires ScalarOf<T, S>
auto operator-(const Dual2<T>& a, const S& s) -> Dual2<T> { return {a.v - s, a.d, a.dd}; }

template <class T, class S>
    requires ScalarOf<T, S>
auto operator-(const S& s, const Dual2<T>& a) -> Dual2<T> { return {s - a.v, -a.d, -a.dd}; }

template <class T, class S>
    requires ScalarOf<T, S>
auto operator*(const Dual2<T>& a, const S& s) -> Dual2<T> { return {a.v * s, a.d * s, a.dd * s}; }

template <class T, class S>
    requires ScalarOf<T, S>
auto operator*(const S& s, const Dual2<T>& a) -> Dual2<T> { return {s * a.v, s * a.d, s * a.dd}; }

template <class T, class S>
    requires ScalarOf<T, S>
auto operator/(const Dual2<T>& a, const S& s) -> Dual2<T> { return {a.v / s, a.d / s, a.dd / s}; }

template <class T, class S>
    requires ScalarOf<T, S>
auto operator/(const S& s, const Dual2<T>& a) -> Dual2<T>
{
    const T q = s / a.v;
    const T d = -q * a.d / a.v; // d(s/x) = -s/x^2 * dx
    const T two_d = d + d;
    return {q, d, (-q * a.dd - two_d * a.d) / a.v};
}

// Scalar-times-dual accumulate: w*z + acc with one fused entry per component.
template <class T>
auto mac(const T& w, const Dual2<T>& z, const Dual2<T>& acc) -> Dual2<T>
{
    return {mac(w, z.v, acc.v), mac(w, z.d, acc.d), mac(w, z.dd, acc.dd)};
}

// Chain rule through a scalar function given (f, f', f'') at x.v.
template <class T>
auto chain(const Dual2<T>& x, const T& f, const T& fp, const T& fpp) -> Dual2<T>
{
    return {f, x.d * fp, mac(x.dd, fp, (x.d * x.d) * fpp)};
}

// --- HyperDual arithmetic ---

template <class T> auto operator+(const HyperDual<T>& a, const HyperDual<T>& b) -> HyperDual<T>
{
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d12 + b.d12};
}

template <class T> auto operator-(const HyperDual<T>& a, const HyperDual<T>& b) -> HyperDual<T>
{
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d12 - b.d12};
}

template <class T> auto operator-(const HyperDual<T>& a) -> HyperDual<T>
{
    return {-a.v, -a.d1, -a.d2, -a.d12};
}

template <class T> auto operator*(const HyperDual<T>& a, const HyperDual<T>& b) -> HyperDual<T>
{
    return {a.v * b.v,
            mac(a.d1, b.v, a.v * b.d1),
            mac(a.d2, b.v, a.v * b.d2),
            mac(a.d12, b.v, mac(a.d1, b.d2, mac(a.d2, b.d1, a.v * b.d12)))};
}

template <class T> auto operator/(const HyperDual<T>& a, const HyperDual<T>& b) -> HyperDual<T>
{
    const T q = a.v / b.v;
    const T d1 = (a.d1 - q * b.d1) / b.v;
    const T d2 = (a.d2 - q * b.d2) / b.v;
    return {q, d1, d2, (a.d12 - q * b.d12 - d1 * b.d2 - d2 * b.d1) / b.v};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator+(const HyperDual<T>& a, const S& s) -> HyperDual<T>
{
    return {a.v + s, a.d1, a.d2, a.d12};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator+(const S& s, const HyperDual<T>& a) -> HyperDual<T>
{
    return {s + a.v, a.d1, a.d2, a.d12};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator-(const HyperDual<T>& a, const S& s) -> HyperDual<T>
{
    return {a.v - s, a.d1, a.d2, a.d12};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator-(const S& s, const HyperDual<T>& a) -> HyperDual<T>
{
    return {s - a.v, -a.d1, -a.d2, -a.d12};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator*(const HyperDual<T>& a, const S& s) -> HyperDual<T>
{
    return {a.v * s, a.d1 * s, a.d2 * s, a.d12 * s};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator*(const S& s, const HyperDual<T>& a) -> HyperDual<T>
{
    return {s * a.v, s * a.d1, s * a.d2, s * a.d12};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator/(const HyperDual<T>& a, const S& s) -> HyperDual<T>
{
    return {a.v / s, a.d1 / s, a.d2 / s, a.d12 / s};
}

template <class T, class S>
    requires ScalarOf<T, S>
auto operator/(const S& s, const HyperDual<T>& a) -> HyperDual<T>
{
    const T q = s / a.v;
    const T d1 = -q * a.d1 / a.v;
    const T d2 = -q * a.d2 / a.v;
    return {q, d1, d2, (-q * a.d12 - d1 * a.d2 - d2 * a.d1) / a.v};
}

template <class T>
auto mac(const T& w, const HyperDual<T>& z, const HyperDual<T>& acc) -> HyperDual<T>
{
    return {mac(w, z.v, acc.v), mac(w, z.d1, acc.d1), mac(w, z.d2, acc.d2), mac(w, z.d12, acc.d12)};
}

template <class T>
auto chain(const HyperDual<T>& x, const T& f, const T& fp, const T& fpp) -> HyperDual<T>
{
    return {f, x.d1 * fp, x.d2 * fp, mac(x.d12, fp, (x.d1 * x.d2) * fpp)};
}

// --- scalar function kernels shared by both dual orders ---

// Overflow-safe softplus: ln(1 + exp(x)) computed as
// max(x, 0) + ln(1 + exp(-|x|)), realised as a value branch so that the
// derivative is exact everywhere (including x == 0).
template <class T> auto softplus(const T& x) -> T
{
    using std::exp;
    using std::log1p;
    if (value_of(x) > 0.0) { return x + log1p(exp(-x)); }
    return log1p(exp(x));
}

template <class T> void softplus_fps(const T& x, T& f, T& fp, T& fpp)
{
    using std::exp;
    using std::log1p;
    if (value_of(x) > 0.0) {
        const T e = exp(-x);
        const T denom = 1.0 + e;
        f = x + log1p(e);
        fp = 1.0 / denom;
    } else {
        const T e = exp(x);
        const T denom = 1.0 + e;
        f = log1p(e);
        fp = e / denom;
    }
    fpp = fp * (1.0 - fp);
}

template <class T> auto sigmoid(const T& x) -> T
{
    using std::exp;
    if (value_of(x) > 0.0) { return 1.0 / (1.0 + exp(-x)); }
    const T e = exp(x);
    return e / (1.0 + e);
}

template <class T> void sigmoid_fps(const T& x, T& f, T& fp, T& fpp)
{
    f = sigmoid(x);
    fp = f * (1.0 - f);
    fpp = fp * (1.0 - (f + f));
}

template <class T> void tanh_fps(const T& x, T& f, T& fp, T& fpp)
{
    using std::tanh;
    f = tanh(x);
    fp = 1.0 - f * f;
    fpp = -2.0 * (f * fp);
}

template <class T> auto exp(const Dual2<T>& x) -> Dual2<T>
{
    using std::exp;
    const T e = exp(x.v);
    return chain(x, e, e, e);
}

template <class T> auto exp(const HyperDual<T>& x) -> HyperDual<T>
{
    using std::exp;
    const T e = exp(x.v);
    return chain(x, e, e, e);
}

template <class T> auto log(const Dual2<T>& x) -> Dual2<T>
{
    using std::log;
    const T inv = 1.0 / x.v;
    return chain(x, log(x.v), inv, -(inv * inv));
}

template <class T> auto log(const HyperDual<T>& x) -> HyperDual<T>
{
    using std::log;
    const T inv = 1.0 / x.v;
    return chain(x, log(x.v), inv, -(inv * inv));
}

template <class T> auto sqrt(const Dual2<T>& x) -> Dual2<T>
{
    using std::sqrt;
    const T s = sqrt(x.v);
    const T fp = 0.5 / s;
    return chain(x, s, fp, -0.5 * (fp / x.v));
}

template <class T> auto sqrt(const HyperDual<T>& x) -> HyperDual<T>
{
    using std::sqrt;
    const T s = sqrt(x.v);
    const T fp = 0.5 / s;
    return chain(x, s, fp, -0.5 * (fp / x.v));
}

template <class T> auto tanh(const Dual2<T>& x) -> Dual2<T>
{
    T f, fp, fpp;
    tanh_fps(x.v, f, fp, fpp);
    return chain(x, f, fp, fpp);
}

template <class T> auto tanh(const HyperDual<T>& x) -> HyperDual<T>
{
    T f, fp, fpp;
    tanh_fps(x.v, f, fp, fpp);
    return chain(x, f, fp, fpp);
}

template <class T> auto sigmoid(const Dual2<T>& x) -> Dual2<T>
{
    T f, fp, fpp;
    sigmoid_fps(x.v, f, fp, fpp);
    return chain(x, f, fp, fpp);
}

template <class T> auto sigmoid(const HyperDual<T>& x) -> HyperDual<T>
{
    T f, fp, fpp;
    sigmoid_fps(x.v, f, fp, fpp);
    return chain(x, f, fp, fpp);
}

template <class T> auto softplus(const Dual2<T>& x) -> Dual2<T>
{
    T f, fp, fpp;
    softplus_fps(x.v, f, fp, fpp);
    return chain(x, f, fp, fpp);
}

template <class T> auto softplus(const HyperDual<T>& x) -> HyperDual<T>
{
    T f, fp, fpp;
    softplus_fps(x.v, f, fp, fpp);
    return chain(x, f, fp, fpp);
}

template <class T> auto pow_c(const Dual2<T>& x, double c) -> Dual2<T>
{
    const T f = pow_c(x.v, c);
    const T fp = c * pow_c(x.v, c - 1.0);
    const T fpp = (c * (c - 1.0)) * pow_c(x.v, c - 2.0);
    return chain(x, f, fp, fpp);
}

template <class T> auto pow_c(const HyperDual<T>& x, double c) -> HyperDual<T>
{
    const T f = pow_c(x.v, c);
    const T fp = c * pow_c(x.v, c - 1.0);
    const T fpp = (c * (c - 1.0)) * pow_c(x.v, c - 2.0);
    return chain(x, f, fp, fpp);
}

template <class T> auto sq(const Dual2<T>& x) -> Dual2<T> { return x * x; }
template <class T> auto sq(const HyperDual<T>& x) -> HyperDual<T> { return x * x; }

template <class T> auto value_of(const Dual2<T>& x) -> double { return value_of(x.v); }
template <class T> auto value_of(const HyperDual<T>& x) -> double { return value_of(x.v); }

// Lift a double-based dual into Var-land as passive constants.
inline auto to_vars(const Dual2<double>& x) -> Dual2<Var> { return {x.v, x.d, x.dd}; }
inline auto to_vars(const HyperDual<double>& x) -> HyperDual<Var>
{
    return {x.v, x.d1, x.d2, x.d12};
}

// ---------------------------------------------------------------------------
// Scalar fields and their second-order jets.
// ---------------------------------------------------------------------------

struct SecondOrderJet {
    double value = 0.0;
    std::vector<double> gradient;      // n entries
    std::vector<double> hessian_upper; // n(n+1)/2 entries, row-packed upper triangle

    [[nodiscard]] auto dim() const -> int { return static_cast<int>(gradient.size()); }
    [[nodiscard]] auto hess(int i, int j) const -> double;
    [[nodiscard]] auto hessian_dense() const -> std::vector<double>; // row-major n*n
};

// A real-valued function on R^n evaluable at plain points and, when built
// from tape primitives, at directional dual points.
class ScalarField {
  public:
    virtual ~ScalarField() = default;
    [[nodiscard]] virtual auto dimension() const -> int = 0;
    [[nodiscard]] virtual auto value(std::span<const double> x) const -> double = 0;
    [[nodiscard]] virtual auto value(std::span<const Dual2<double>> x) const -> Dual2<double>;
    [[nodiscard]] virtual auto value(std::span<const HyperDual<double>> x) const
        -> HyperDual<double>;
};

// CRTP adapter: Derived supplies `template <class S> S eval(span<const S>) const`
// and gets all three evaluation overloads.
template <class Derived> class FieldImpl : public ScalarField {
  public:
    [[nodiscard]] auto value(std::span<const double> x) const -> double override
    {
        return self().template eval<double>(x);
    }
    [[nodiscard]] auto value(std::span<const Dual2<double>> x) const -> Dual2<double> override
    {
        return self().template eval<Dual2<double>>(x);
    }
    [[nodiscard]] auto value(std::span<const HyperDual<double>> x) const -> HyperDual<double> override
    {
        return self().template eval<HyperDual<double>>(x);
    }

  private:
    [[nodiscard]] auto self() const -> const Derived& { return static_cast<const Derived&>(*this); }
};

// Value, gradient and full symmetric Hessian via n(n+1)/2 forward passes:
// Dual2 along each axis for the diagonal, HyperDual per axis pair for the
// mixed entries.  The Hessian is symmetric by construction.
auto eval_jet(const ScalarField& field, std::span<const double> x) -> SecondOrderJet;

// Determinant of a dense row-major matrix, destroying `a`.  Direct formulas
// up to 3x3, LU with partial pivoting above; generic over tape scalars so
// the same kernel serves plain evaluation and recorded training losses.
template <class T> auto determinant_inplace(T* a, int n) -> T
{
    if (n == 1) { return a[0]; }
    if (n == 2) { return a[0] * a[3] - a[1] * a[2]; }
    if (n == 3) {
        return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
             + a[2] * (a[3] * a[7] - a[4] * a[6]);
    }
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::fabs(value_of(a[k * n + k]));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::fabs(value_of(a[i * n + k]));
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best == 0.0) { return T(0.0); }
        if (pivot != k) {
            for (int j = 0; j < n; ++j) { std::swap(a[k * n + j], a[pivot * n + j]); }
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            const T m = a[i * n + k] / a[k * n + k];
            for (int j = k + 1; j < n; ++j) { a[i * n + j] = a[i * n + j] - m * a[k * n + j]; }
        }
    }
    T det = a[0];
    for (int k = 1; k < n; ++k) { det = det * a[k * n + k]; }
    return sign < 0.0 ? -det : det;
}

auto hessian_determinant(const SecondOrderJet& jet) -> double;

// Ordered eigenvalues (min, max) of the symmetric 2x2 matrix
// [[h11, h12], [h12, h22]]: (tr -/+ sqrt((h11-h22)^2 + 4 h12^2)) / 2.
auto eigenvalues_2x2(double h11, double h12, double h22) -> std::pair<double, double>;

struct ValueAndGradient {
    double value = 0.0;
    std::vector<double> gradient;
};

using ParamLossFn = std::function<Var(std::span<const Var>)>;

// Record `loss(params)` on a fresh tape and reverse it: exact value and
// d(loss)/d(params).  Parameters the loss never touches get exactly 0.
// Throws NumericError if the loss evaluates non-finite.
auto loss_and_param_gradient(const ParamLossFn& loss, std::span<const double> params)
    -> ValueAndGradient;

} // namespace mans
