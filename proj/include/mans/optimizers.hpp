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

// Deterministic minimizers over a flat parameter vector: full-memory BFGS
// with a strong-Wolfe line search, single-batch Adam, the alternation
// protocol that escapes BFGS precision loss with a burst of tiny Adam
// steps, and the four-stage schedule used for the high-dimensional runs.

#include "mans/autodiff.hpp"
#include "mans/common.hpp"

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mans {

class Objective {
  public:
    virtual ~Objective() = default;
    [[nodiscard]] virtual auto dim() const -> std::size_t = 0;
    // Fills grad (size dim) and returns the loss at x.
    virtual auto value_and_gradient(std::span<const double> x, std::span<double> grad)
        -> double = 0;
};

// An objective that can restrict itself to its boundary term, for the
// boundary-first stage of the high-dimensional schedule.
class StagedObjective : public Objective {
  public:
    virtual void set_boundary_only(bool on) = 0;
};

// Adapter for quick fits and tests: differentiates a taped function of the
// parameters on every call.
class FunctionObjective final : public Objective {
  public:
    FunctionObjective(std::size_t dim, ParamLossFn fn) : dim_(dim), fn_(std::move(fn)) {}
    [[nodiscard]] auto dim() const -> std::size_t override { return dim_; }
    auto value_and_gradient(std::span<const double> x, std::span<double> grad) -> double override;

  private:
    std::size_t dim_;
    ParamLossFn fn_;
};

struct AdamOptions {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AlternationOptions {
    int adam_epochs = 300;   // escape burst length
    double adam_lr = 1e-7;   // escape learning rate
    int max_rounds = 10;
};

struct OptimizerOptions {
    int max_iterations = 60000;
    double gradient_tolerance = 1e-8; // on the max-norm of the gradient
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    AdamOptions adam;
    AlternationOptions alternation;

    void validate() const;
};

enum class Termination { Converged, PrecisionLoss, MaxIterations };

auto termination_name(Termination t) -> std::string;

struct TrainReport {
    int iterations = 0;
    double final_loss = 0.0;
    Termination termination = Termination::Converged;
    // Loss and gradient max-norm per iterate; always iterations + 1 long.
    std::vector<double> loss_trace;
    std::vector<double> gradient_trace;
    // (first iterate index, tag) per optimizer segment.
    std::vector<std::pair<int, std::string>> stages;
    int curvature_skips = 0;
    int alternations = 0;
    // Informational only; everything else is reproducible bit for bit.
    double wall_time = 0.0;
};

// One row per iterate: iteration, loss, gradient norm, stage tag.
void save_trace(const std::string& path, const TrainReport& report);

// Resumable BFGS, so callers can run in chunks while keeping the inverse
// Hessian approximation.
class BfgsOptimizer {
  public:
    enum class Status { Running, Converged, PrecisionLoss, MaxIterations };

    BfgsOptimizer(Objective& objective, std::span<const double> x0, OptimizerOptions opts);
    ~BfgsOptimizer();
    BfgsOptimizer(const BfgsOptimizer&) = delete;
    auto operator=(const BfgsOptimizer&) -> BfgsOptimizer& = delete;

    // Runs at most max_new_iterations more iterations (and never past the
    // overall max_iterations), returning the resulting state.
    auto step(int max_new_iterations) -> Status;
    // Continue from a new point (after an escape burst): re-evaluates and
    // drops the built-up curvature model.
    void restart_from(std::span<const double> x);

    [[nodiscard]] auto status() const -> Status;
    [[nodiscard]] auto x() const -> std::span<const double>;
    [[nodiscard]] auto loss() const -> double;
    [[nodiscard]] auto gradient_inf_norm() const -> double;
    [[nodiscard]] auto iterations() const -> int;
    [[nodiscard]] auto loss_trace() const -> const std::vector<double>&;
    [[nodiscard]] auto gradient_trace() const -> const std::vector<double>&;
    [[nodiscard]] auto curvature_skips() const -> int;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// The minimizers update x in place, so stages compose naturally.
auto bfgs_minimize(Objective& objective, std::span<double> x, const OptimizerOptions& opts)
    -> TrainReport;

auto adam_minimize(Objective& objective, std::span<double> x, int epochs,
                   const OptimizerOptions& opts) -> TrainReport;

// BFGS until it converges or loses precision; on precision loss, a burst of
// Adam epochs at a tiny learning rate, then BFGS resumes.  At most
// alternation.max_rounds bursts.
auto alternating_minimize(Objective& objective, std::span<double> x,
                          const OptimizerOptions& opts) -> TrainReport;

struct ScheduleOptions {
    int boundary_epochs = 1000; // stage 1: Adam on the boundary term alone
    int full_epochs = 3000;     // stage 2: Adam on the full loss
};

// Stage 1: Adam, boundary term only.  Stage 2: Adam, full loss.  Stages 3
// and 4: BFGS with the alternation protocol.
auto staged_schedule(StagedObjective& objective, std::span<double> x,
                     const OptimizerOptions& opts, const ScheduleOptions& schedule) -> TrainReport;

// Appends a follow-on segment to an accumulated report: the segment's first
// trace entry (the shared starting iterate) is dropped, stage marks shift by
// the accumulated iteration count, and counters add up.  `tag` names the
// segment when it carries no stage marks of its own.
void append_trace(TrainReport& total, const TrainReport& segment, const std::string& tag);

} // namespace mans
