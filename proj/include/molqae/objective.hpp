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
 * Reconstruction fidelity, trash-state deviation and the combined loss
 *
 *     L = (1 - F) + lambda * D,   F = |<in|out>|^2,
 *     D = 1 - P(ancilla qubits all |0> in the mid state).
 *
 * Batch evaluation comes in two flavours with identical results: the
 * OpenMP kernel used in training and a serial reference kept for tests
 * and benchmarking. Per-sample values are reduced with pairwise
 * summation in sample order, so the means do not depend on thread count.
 */
#pragma once

#include "molqae/circuit.hpp"
#include "molqae/smiles.hpp"

#include <span>
#include <vector>

namespace molqae {

struct ObjectiveConfig {
    double lambda_weight = 0.01;
    void validate() const;
};

struct SampleMetrics {
    double fidelity = 0.0;
    double ancilla_dev = 0.0;
};

struct BatchMetrics {
    double mean_loss = 0.0;
    double mean_fidelity = 0.0;
    double mean_ancilla_dev = 0.0;
    std::size_t n_samples = 0;
};

/// |<a|b>|^2 clamped into [0, 1]; excursions beyond 1e-9 are InternalError.
[[nodiscard]] double fidelity(const StateVector &input, const StateVector &output);

/// 1 - prob_all_zero(mid, {n_keep, ..., N-1}).
[[nodiscard]] double ancilla_deviation(const StateVector &mid, unsigned n_keep);
[[nodiscard]] double ancilla_deviation(const StateVector &mid, const ArchConfig &arch);

[[nodiscard]] double loss(double fidelity, double ancilla_dev,
                          const ObjectiveConfig &cfg);

/// Recursive pairwise sum; the association order depends only on the size.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

/// Means of F and D, then mean_loss = (1 - mean F) + lambda * mean D.
[[nodiscard]] BatchMetrics reduce_metrics(std::span<const SampleMetrics> samples,
                                          const ObjectiveConfig &cfg);

/// F and D of one input through the full circuit.
[[nodiscard]] SampleMetrics evaluate_sample(const Circuit &circuit,
                                            const StateVector &input,
                                            std::span<const double> params);

/// OpenMP over samples. Throws ArgumentError on an empty batch.
[[nodiscard]] BatchMetrics batch_objective(const Circuit &circuit,
                                           std::span<const StateVector> inputs,
                                           std::span<const double> params,
                                           const ObjectiveConfig &cfg);

/// Prepares each molecular state and evaluates it.
[[nodiscard]] BatchMetrics batch_objective(std::span<const FeatureVector> features,
                                           std::span<const double> params,
                                           const ArchConfig &arch,
                                           const ObjectiveConfig &cfg);

[[nodiscard]] std::vector<StateVector>
prepare_states(std::span<const FeatureVector> features);

namespace reference {
/// Serial twin of molqae::batch_objective.
[[nodiscard]] BatchMetrics batch_objective(const Circuit &circuit,
                                           std::span<const StateVector> inputs,
                                           std::span<const double> params,
                                           const ObjectiveConfig &cfg);
} // namespace reference

} // namespace molqae
