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
 * Gradients of the batch loss with respect to every circuit parameter.
 *
 * Three engines:
 *  - adjoint: one forward pass plus a reverse sweep per sample; exact.
 *  - parameter shift: 0.5 [L(t + pi/2) - L(t - pi/2)] per parameter. Exact
 *    for U3 and RZ angles. CRZ angles have generator eigenvalues {0, +-1/2},
 *    so the loss carries frequencies 1/2 and 1 in them and the two-term
 *    rule is biased; ShiftRule::Generalized switches those parameters to
 *    the four-term rule
 *        c+ [L(t + pi/2) - L(t - pi/2)] - c- [L(t + 3pi/2) - L(t - 3pi/2)],
 *        c+- = (sqrt2 +- 1) / (4 sqrt2).
 *  - central finite differences, kept as an independent check.
 */
#pragma once

#include "molqae/circuit.hpp"
#include "molqae/objective.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace molqae {

enum class GradientEngine { Adjoint, ParameterShift, FiniteDiff };
enum class ShiftRule { TwoTerm, Generalized };

[[nodiscard]] GradientEngine parse_gradient_engine(std::string_view name);
[[nodiscard]] std::string_view to_string(GradientEngine engine);

inline constexpr double kDefaultFiniteDiffStep = 1e-5;

struct GradientResult {
    BatchMetrics metrics;
    std::vector<double> grad;
};

/// Adjoint sweep for a single input; adds dL/dparams into `grad`.
SampleMetrics adjoint_sample(const Circuit &circuit, const StateVector &input,
                             std::span<const double> params, double lambda_weight,
                             std::span<double> grad);

/// OpenMP over samples; per-sample gradients reduced pairwise in order.
[[nodiscard]] GradientResult grad_adjoint(const Circuit &circuit,
                                          std::span<const StateVector> inputs,
                                          std::span<const double> params,
                                          const ObjectiveConfig &cfg);

/// OpenMP over the shifted evaluations.
[[nodiscard]] std::vector<double>
grad_parameter_shift(const Circuit &circuit, std::span<const StateVector> inputs,
                     std::span<const double> params, const ObjectiveConfig &cfg,
                     ShiftRule rule = ShiftRule::TwoTerm);

/// Central differences with step `epsilon` in [1e-8, 1e-2].
[[nodiscard]] std::vector<double>
grad_finite_diff(const Circuit &circuit, std::span<const StateVector> inputs,
                 std::span<const double> params, const ObjectiveConfig &cfg,
                 double epsilon = kDefaultFiniteDiffStep);

/// Loss metrics plus the gradient from the selected engine.
[[nodiscard]] GradientResult compute_gradient(GradientEngine engine,
                                              const Circuit &circuit,
                                              std::span<const StateVector> inputs,
                                              std::span<const double> params,
                                              const ObjectiveConfig &cfg);

/// Largest |shift - adjoint| per parameter family.
struct ShiftDiscrepancy {
    double max_single_qubit = 0.0;  ///< U3 and RZ, two-term rule
    double max_crz_two_term = 0.0;  ///< CRZ, two-term rule
    double max_crz_four_term = 0.0; ///< CRZ, four-term rule
};

[[nodiscard]] ShiftDiscrepancy
measure_shift_discrepancy(const Circuit &circuit, std::span<const StateVector> inputs,
                          std::span<const double> params, const ObjectiveConfig &cfg);

namespace reference {
[[nodiscard]] GradientResult grad_adjoint(const Circuit &circuit,
                                          std::span<const StateVector> inputs,
                                          std::span<const double> params,
                                          const ObjectiveConfig &cfg);
[[nodiscard]] std::vector<double>
grad_parameter_shift(const Circuit &circuit, std::span<const StateVector> inputs,
                     std::span<const double> params, const ObjectiveConfig &cfg,
                     ShiftRule rule = ShiftRule::TwoTerm);
} // namespace reference

} // namespace molqae
