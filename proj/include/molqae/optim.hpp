// Copyright 2026 The molqae Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Adam with cosine-annealed learning rate, gradient clipping and
 * patience-based early stopping around the batch gradient engines.
 */
#pragma once

#include "molqae/circuit.hpp"
#include "molqae/grad.hpp"
#include "molqae/objective.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace molqae {

struct TrainConfig {
    unsigned max_epochs = 100;
    unsigned patience = 10;
    double base_lr = 3e-4;
    double lambda_weight = 0.01;
    std::size_t batch_size = 1024;
    double clip_max_norm = 1.0;
    std::uint64_t seed = 42;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    GradientEngine engine = GradientEngine::Adjoint;

    void validate() const;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

struct EpochRecord {
    unsigned epoch = 0; ///< 0-based
    double avg_loss = 0.0;
    double avg_fidelity = 0.0;
    double avg_ancilla_dev = 0.0;
    double lr = 0.0;
    double wall_time_s = 0.0;
};

/// eta0 * (1 + cos(pi t / T)) / 2 for 0 <= t <= T.
[[nodiscard]] double cosine_lr(unsigned t, unsigned total, double eta0);

/// Rescales `g` in place to `max_norm` when its L2 norm exceeds it. Non-finite
/// entries throw NumericalError naming the parameter when a layout is given.
void clip_gradient(std::span<double> g, double max_norm,
                   const ParamLayout *layout = nullptr);

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<double> params, std::span<const double> g,
               AdamState &state, double lr, const TrainConfig &cfg);

/// Best-loss tracking with patience: strict improvement resets the counter,
/// `patience` consecutive non-improving epochs stop training.
class EarlyStopper {
  public:
    explicit EarlyStopper(unsigned patience) : patience_(patience) {}

    struct Verdict {
        bool improved;
        bool stop;
    };

    Verdict observe(double avg_loss);
    [[nodiscard]] double best_loss() const noexcept { return best_; }

  private:
    unsigned patience_;
    unsigned counter_ = 0;
    double best_ = std::numeric_limits<double>::infinity();
};

struct TrainResult {
    ParamVector best_params;
    double best_loss = 0.0;
    unsigned best_epoch = 0;
    std::vector<EpochRecord> history;
    bool early_stopped = false;
    std::uint64_t steps = 0; ///< optimizer updates taken
};

using EpochCallback = std::function<void(const EpochRecord &)>;

/**
 * Trains from init_params(arch, cfg.seed) on prepared input states.
 *
 * Epoch t uses cosine_lr(t, max_epochs, base_lr) for all of its batches;
 * batch order is reshuffled per epoch from (seed, epoch) and the last
 * partial batch is kept. An epoch's avg values are means over its batch
 * values. The best parameters are the end-of-epoch parameters with the
 * strictly lowest avg_loss.
 */
[[nodiscard]] TrainResult train(std::span<const StateVector> dataset,
                                const ArchConfig &arch, const TrainConfig &cfg,
                                const EpochCallback &on_epoch = {});

/// As above but from explicit initial parameters.
[[nodiscard]] TrainResult train_from(std::span<const StateVector> dataset,
                                     const ArchConfig &arch, ParamVector params,
                                     const TrainConfig &cfg,
                                     const EpochCallback &on_epoch = {});

} // namespace molqae
