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
#include "molqae/objective.hpp"

#include "molqae/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

namespace molqae {
namespace {

constexpr double kClampTol = 1e-9;

double clamp_unit(double x, const char *what) {
    if (!(x >= -kClampTol && x <= 1.0 + kClampTol)) {
        throw InternalError(std::string(what) + " outside [0, 1]: " +
                            std::to_string(x));
    }
    return std::clamp(x, 0.0, 1.0);
}

void check_batch(const Circuit &circuit, std::span<const StateVector> inputs,
                 std::span<const double> params) {
    if (inputs.empty()) {
        throw ArgumentError("batch is empty");
    }
    if (params.size() != circuit.n_params) {
        throw ArgumentError("parameter vector has length " +
                            std::to_string(params.size()) + ", circuit expects " +
                            std::to_string(circuit.n_params));
    }
}

} // namespace

void ObjectiveConfig::validate() const {
    if (!(lambda_weight >= 0.0) || !std::isfinite(lambda_weight)) {
        throw ConfigError("lambda must be a finite non-negative number");
    }
}

double fidelity(const StateVector &input, const StateVector &output) {
    return clamp_unit(std::norm(inner_product(input, output)), "fidelity");
}

double ancilla_deviation(const StateVector &mid, unsigned n_keep) {
    std::vector<unsigned> ancilla;
    for (unsigned q = n_keep; q < mid.n_qubits(); ++q) {
        ancilla.push_back(q);
    }
    return clamp_unit(1.0 - prob_all_zero(mid, ancilla), "ancilla deviation");
}

double ancilla_deviation(const StateVector &mid, const ArchConfig &arch) {
    arch.validate();
    if (mid.n_qubits() != arch.n_qubits) {
        throw ArgumentError("mid state does not match the architecture");
    }
    return ancilla_deviation(mid, arch.n_latent);
}

double loss(double fidelity, double ancilla_dev, const ObjectiveConfig &cfg) {
    return (1.0 - fidelity) + cfg.lambda_weight * ancilla_dev;
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kBlock = 8;
    if (values.size() <= kBlock) {
        return std::accumulate(values.begin(), values.end(), 0.0);
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

BatchMetrics reduce_metrics(std::span<const SampleMetrics> samples,
                            const ObjectiveConfig &cfg) {
    if (samples.empty()) {
        throw ArgumentError("batch is empty");
    }
    std::vector<double> f(samples.size());
    std::vector<double> d(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        f[i] = samples[i].fidelity;
        d[i] = samples[i].ancilla_dev;
    }
    const auto n = static_cast<double>(samples.size());
    BatchMetrics m;
    m.n_samples = samples.size();
    m.mean_fidelity = pairwise_sum(f) / n;
    m.mean_ancilla_dev = pairwise_sum(d) / n;
    m.mean_loss = loss(m.mean_fidelity, m.mean_ancilla_dev, cfg);
    return m;
}

SampleMetrics evaluate_sample(const Circuit &circuit, const StateVector &input,
                              std::span<const double> params) {
    StateVector state = input;
    const std::span<const GateOp> ops(circuit.ops);
    run_ops(state, ops.first(circuit.mid_end), params);
    SampleMetrics m;
    m.ancilla_dev = ancilla_deviation(state, circuit.n_keep);
    run_ops(state, ops.subspan(circuit.mid_end), params);
    m.fidelity = fidelity(input, state);
    return m;
}

BatchMetrics batch_objective(const Circuit &circuit,
                             std::span<const StateVector> inputs,
                             std::span<const double> params,
                             const ObjectiveConfig &cfg) {
    check_batch(circuit, inputs, params);
    std::vector<SampleMetrics> per(inputs.size());
    const auto n = static_cast<std::ptrdiff_t>(inputs.size());
    // exceptions must not escape the parallel region
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            per[i] = evaluate_sample(circuit, inputs[i], params);
        } catch (...) {
#pragma omp critical
            failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return reduce_metrics(per, cfg);
}

std::vector<StateVector> prepare_states(std::span<const FeatureVector> features) {
    std::vector<StateVector> states(features.size(), StateVector(kMolQubits));
    const auto n = static_cast<std::ptrdiff_t>(features.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        states[i] = prepare_state(prep_params(features[i]));
    }
    return states;
}

BatchMetrics batch_objective(std::span<const FeatureVector> features,
                             std::span<const double> params,
                             const ArchConfig &arch, const ObjectiveConfig &cfg) {
    if (arch.n_qubits != kMolQubits) {
        throw ConfigError("molecular states need an 8-qubit architecture");
    }
    const auto states = prepare_states(features);
    return batch_objective(build_circuit(arch), states, params, cfg);
}

namespace reference {

BatchMetrics batch_objective(const Circuit &circuit,
                             std::span<const StateVector> inputs,
                             std::span<const double> params,
                             const ObjectiveConfig &cfg) {
    check_batch(circuit, inputs, params);
    std::vector<SampleMetrics> per;
    per.reserve(inputs.size());
    for (const StateVector &in : inputs) {
        per.push_back(evaluate_sample(circuit, in, params));
    }
    return reduce_metrics(per, cfg);
}

} // namespace reference
} // namespace molqae
