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
#include "molqae/optim.hpp"

#include "molqae/data.hpp"
#include "molqae/error.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace molqae {

void TrainConfig::validate() const {
    if (max_epochs < 1) {
        throw ConfigError("max_epochs must be at least 1");
    }
    if (patience < 1 || patience > max_epochs) {
        throw ConfigError("patience must be in [1, max_epochs]");
    }
    if (!(base_lr > 0.0) || !std::isfinite(base_lr)) {
        throw ConfigError("learning rate must be positive");
    }
    if (!(lambda_weight >= 0.0) || !std::isfinite(lambda_weight)) {
        throw ConfigError("lambda must be non-negative");
    }
    if (batch_size < 1) {
        throw ConfigError("batch size must be at least 1");
    }
    if (!(clip_max_norm > 0.0)) {
        throw ConfigError("clip_max_norm must be positive");
    }
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
        !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_eps > 0.0)) {
        throw ConfigError("Adam betas must be in [0, 1) and epsilon positive");
    }
}

double cosine_lr(unsigned t, unsigned total, double eta0) {
    if (total < 1 || t > total) {
        throw ArgumentError("cosine schedule needs 0 <= t <= T and T >= 1");
    }
    return eta0 * 0.5 *
           (1.0 + std::cos(std::numbers::pi * static_cast<double>(t) /
                           static_cast<double>(total)));
}

void clip_gradient(std::span<double> g, double max_norm, const ParamLayout *layout) {
    if (!(max_norm > 0.0)) {
        throw ArgumentError("max_norm must be positive");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::isfinite(g[k])) {
            const std::string who = layout && k < layout->total()
                                        ? layout->name(k)
                                        : "#" + std::to_string(k);
            throw NumericalError("non-finite gradient for parameter " + who);
        }
        sq += g[k] * g[k];
    }
    const double norm = std::sqrt(sq);
    if (norm > max_norm) {
        const double scale = max_norm / norm;
        for (double &x : g) {
            x *= scale;
        }
    }
}

void adam_step(std::span<double> params, std::span<const double> g,
               AdamState &state, double lr, const TrainConfig &cfg) {
    if (params.size() != g.size() || state.m.size() != g.size() ||
        state.v.size() != g.size()) {
        throw ArgumentError("Adam step with inconsistent lengths");
    }
    state.t += 1;
    const auto t = static_cast<double>(state.t);
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
    for (std::size_t k = 0; k < g.size(); ++k) {
        state.m[k] = cfg.adam_beta1 * state.m[k] + (1.0 - cfg.adam_beta1) * g[k];
        state.v[k] = cfg.adam_beta2 * state.v[k] + (1.0 - cfg.adam_beta2) * g[k] * g[k];
        const double m_hat = state.m[k] / bc1;
        const double v_hat = state.v[k] / bc2;
        const double next = params[k] - lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
        if (!std::isfinite(next)) {
            throw NumericalError("non-finite Adam update for parameter #" +
                                 std::to_string(k));
        }
        params[k] = next;
    }
}

EarlyStopper::Verdict EarlyStopper::observe(double avg_loss) {
    if (avg_loss < best_) {
        best_ = avg_loss;
        counter_ = 0;
        return {true, false};
    }
    ++counter_;
    return {false, counter_ >= patience_};
}

TrainResult train(std::span<const StateVector> dataset, const ArchConfig &arch,
                  const TrainConfig &cfg, const EpochCallback &on_epoch) {
    return train_from(dataset, arch, init_params(arch, cfg.seed), cfg, on_epoch);
}

TrainResult train_from(std::span<const StateVector> dataset, const ArchConfig &arch,
                       ParamVector params, const TrainConfig &cfg,
                       const EpochCallback &on_epoch) {
    cfg.validate();
    if (dataset.empty()) {
        throw ConfigError("training dataset is empty");
    }
    const Circuit circuit = build_circuit(arch);
    const ParamLayout layout(arch);
    if (params.size() != circuit.n_params) {
        throw ArgumentError("initial parameters do not match the architecture");
    }
    const ObjectiveConfig objective{cfg.lambda_weight};

    TrainResult result;
    result.best_params = params;
    result.best_loss = std::numeric_limits<double>::infinity();
    AdamState adam(params.size());
    EarlyStopper stopper(cfg.patience);
    std::vector<StateVector> batch_states;

    for (unsigned epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const auto started = std::chrono::steady_clock::now();
        const double lr = cosine_lr(epoch, cfg.max_epochs, cfg.base_lr);
        const auto plan = batch_indices(dataset.size(), cfg.batch_size, cfg.seed, epoch);

        std::vector<double> losses;
        std::vector<double> fids;
        std::vector<double> devs;
        for (std::size_t b = 0; b < plan.size(); ++b) {
            batch_states.clear();
            for (const std::size_t i : plan[b]) {
                batch_states.push_back(dataset[i]);
            }
            GradientResult step =
                compute_gradient(cfg.engine, circuit, batch_states, params, objective);
            if (!std::isfinite(step.metrics.mean_loss)) {
                std::ostringstream msg;
                msg << "non-finite loss at epoch " << epoch << ", batch " << b
                    << " (fidelity " << step.metrics.mean_fidelity
                    << ", ancilla deviation " << step.metrics.mean_ancilla_dev << ")";
                throw NumericalError(msg.str());
            }
            clip_gradient(step.grad, cfg.clip_max_norm, &layout);
            adam_step(params, step.grad, adam, lr, cfg);
            losses.push_back(step.metrics.mean_loss);
            fids.push_back(step.metrics.mean_fidelity);
            devs.push_back(step.metrics.mean_ancilla_dev);
        }

        const auto nb = static_cast<double>(plan.size());
        EpochRecord rec;
        rec.epoch = epoch;
        rec.avg_loss = pairwise_sum(losses) / nb;
        rec.avg_fidelity = pairwise_sum(fids) / nb;
        rec.avg_ancilla_dev = pairwise_sum(devs) / nb;
        rec.lr = lr;
        rec.wall_time_s = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - started)
                              .count();
        result.history.push_back(rec);
        if (on_epoch) {
            on_epoch(rec);
        }

        const auto verdict = stopper.observe(rec.avg_loss);
        if (verdict.improved) {
            result.best_loss = rec.avg_loss;
            result.best_params = params;
            result.best_epoch = epoch;
        } else if (verdict.stop) {
            result.early_stopped = true;
            break;
        }
    }
    result.steps = adam.t;
    return result;
}

} // namespace molqae
