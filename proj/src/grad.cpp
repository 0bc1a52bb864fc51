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
#include "molqae/grad.hpp"

#include "molqae/error.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <string>

namespace molqae {
namespace {

inline cplx cmul(cplx a, cplx b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

/// conj(a) * b
inline cplx cdot(cplx a, cplx b) noexcept {
    return {a.real() * b.real() + a.imag() * b.imag(),
            a.real() * b.imag() - a.imag() * b.real()};
}

inline std::size_t insert_zero_bit(std::size_t i, unsigned pos) noexcept {
    const std::size_t low = i & ((std::size_t{1} << pos) - 1);
    return ((i >> pos) << (pos + 1)) | low;
}

/// S[a][b] = sum over pairs of conj(bra_a) ket_b on qubit q, row-major.
Mat2 reduced_overlap(const StateVector &bra, const StateVector &ket, unsigned q) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t half = bra.dim() / 2;
    Mat2 s{};
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = insert_zero_bit(i, q);
        const std::size_t i1 = i0 | stride;
        s[0] += cdot(bra[i0], ket[i0]);
        s[1] += cdot(bra[i0], ket[i1]);
        s[2] += cdot(bra[i1], ket[i0]);
        s[3] += cdot(bra[i1], ket[i1]);
    }
    return s;
}

/// Diagonal overlaps split by the target bit, over indices where all
/// bits in `control_mask` are set.
std::pair<cplx, cplx> diagonal_overlap(const StateVector &bra,
                                       const StateVector &ket, unsigned target,
                                       std::size_t control_mask) {
    const std::size_t tmask = std::size_t{1} << target;
    cplx s0{};
    cplx s1{};
    for (std::size_t k = 0; k < bra.dim(); ++k) {
        if ((k & control_mask) != control_mask) {
            continue;
        }
        if (k & tmask) {
            s1 += cdot(bra[k], ket[k]);
        } else {
            s0 += cdot(bra[k], ket[k]);
        }
    }
    return {s0, s1};
}

inline double contract(const Mat2 &d, const Mat2 &s) noexcept {
    cplx acc{};
    for (int i = 0; i < 4; ++i) {
        acc += cmul(d[i], s[i]);
    }
    return acc.real();
}

/// d/d(angle) of diag(e^{-ia/2}, e^{ia/2}) contracted with (s0, s1).
inline double rz_derivative(double angle, cplx s0, cplx s1) noexcept {
    const cplx d0 = cmul({0.0, -0.5}, std::polar(1.0, -angle / 2));
    const cplx d1 = cmul({0.0, 0.5}, std::polar(1.0, angle / 2));
    return (cmul(d0, s0) + cmul(d1, s1)).real();
}

void check_inputs(const Circuit &circuit, std::span<const StateVector> inputs,
                  std::span<const double> params) {
    if (inputs.empty()) {
        throw ArgumentError("batch is empty");
    }
    if (params.size() != circuit.n_params) {
        throw ArgumentError("parameter vector has length " +
                            std::to_string(params.size()) + ", circuit expects " +
                            std::to_string(circuit.n_params));
    }
    for (const StateVector &s : inputs) {
        if (s.n_qubits() != circuit.n_qubits) {
            throw ArgumentError("input state does not match the circuit width");
        }
    }
}

double batch_loss(const Circuit &circuit, std::span<const StateVector> inputs,
                  std::span<const double> params, const ObjectiveConfig &cfg) {
    return reference::batch_objective(circuit, inputs, params, cfg).mean_loss;
}

/// Mean over samples of a row-major (samples x params) matrix, pairwise per column.
std::vector<double> column_means(const std::vector<double> &rows,
                                 std::size_t n_rows, std::size_t n_cols) {
    std::vector<double> out(n_cols);
    std::vector<double> column(n_rows);
    for (std::size_t k = 0; k < n_cols; ++k) {
        for (std::size_t r = 0; r < n_rows; ++r) {
            column[r] = rows[r * n_cols + k];
        }
        out[k] = pairwise_sum(column) / static_cast<double>(n_rows);
    }
    return out;
}

struct ShiftPlan {
    std::size_t param;
    double offset;
};

/// All shifted evaluations needed for the rule, in a fixed order.
std::vector<ShiftPlan> shift_plan(const Circuit &circuit, ShiftRule rule) {
    constexpr double h = std::numbers::pi / 2;
    std::vector<ShiftPlan> plan;
    plan.reserve(2 * circuit.n_params);
    for (const GateOp &op : circuit.ops) {
        for (unsigned a = 0; a < angle_count(op.kind); ++a) {
            const std::size_t k = op.param + a;
            plan.push_back({k, h});
            plan.push_back({k, -h});
            if (rule == ShiftRule::Generalized && op.kind == GateKind::CRZ) {
                plan.push_back({k, 3 * h});
                plan.push_back({k, -3 * h});
            }
        }
    }
    return plan;
}

std::vector<double> combine_shifts(const Circuit &circuit, ShiftRule rule,
                                   const std::vector<ShiftPlan> &plan,
                                   const std::vector<double> &values) {
    const double c_plus = (std::numbers::sqrt2 + 1) / (4 * std::numbers::sqrt2);
    const double c_minus = (std::numbers::sqrt2 - 1) / (4 * std::numbers::sqrt2);
    std::vector<double> grad(circuit.n_params, 0.0);
    std::size_t i = 0;
    while (i < plan.size()) {
        const std::size_t k = plan[i].param;
        const bool four = rule == ShiftRule::Generalized &&
                          i + 2 < plan.size() && plan[i + 2].param == k;
        if (four) {
            grad[k] = c_plus * (values[i] - values[i + 1]) -
                      c_minus * (values[i + 2] - values[i + 3]);
            i += 4;
        } else {
            grad[k] = 0.5 * (values[i] - values[i + 1]);
            i += 2;
        }
    }
    return grad;
}

double shifted_loss(const Circuit &circuit, std::span<const StateVector> inputs,
                    std::span<const double> params, const ObjectiveConfig &cfg,
                    const ShiftPlan &shift) {
    std::vector<double> p(params.begin(), params.end());
    p[shift.param] += shift.offset;
    return batch_loss(circuit, inputs, p, cfg);
}

template <typename Body>
void parallel_for(std::size_t n, Body &&body) {
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace

GradientEngine parse_gradient_engine(std::string_view name) {
    if (name == "adjoint") {
        return GradientEngine::Adjoint;
    }
    if (name == "parameter-shift" || name == "parameter_shift") {
        return GradientEngine::ParameterShift;
    }
    if (name == "finite-diff" || name == "finite_diff") {
        return GradientEngine::FiniteDiff;
    }
    throw ConfigError("unknown gradient engine '" + std::string(name) +
                      "' (expected adjoint, parameter-shift or finite-diff)");
}

std::string_view to_string(GradientEngine engine) {
    switch (engine) {
    case GradientEngine::Adjoint:
        return "adjoint";
    case GradientEngine::ParameterShift:
        return "parameter-shift";
    case GradientEngine::FiniteDiff:
        return "finite-diff";
    }
    return "unknown";
}

SampleMetrics adjoint_sample(const Circuit &circuit, const StateVector &input,
                             std::span<const double> params, double lambda_weight,
                             std::span<double> grad) {
    const std::span<const GateOp> ops(circuit.ops);

    StateVector phi = input;
    run_ops(phi, ops.first(circuit.mid_end), params);
    SampleMetrics m;
    m.ancilla_dev = ancilla_deviation(phi, circuit.n_keep);
    const StateVector mid = phi;
    run_ops(phi, ops.subspan(circuit.mid_end), params);
    const cplx overlap = inner_product(input, phi);
    m.fidelity = fidelity(input, phi);

    // dL = -2 Re <chi| dU_k |phi_{k-1}> where chi starts as <in|out> |in>
    // and picks up lambda * P|mid> once the sweep reaches the mid point.
    StateVector chi = input;
    for (cplx &a : chi.amps()) {
        a = cmul(overlap, a);
    }
    const std::size_t keep_dim = std::size_t{1} << circuit.n_keep;

    for (std::size_t g = ops.size(); g-- > 0;) {
        if (g + 1 == circuit.mid_end && lambda_weight != 0.0) {
            for (std::size_t k = 0; k < keep_dim; ++k) {
                chi[k] += lambda_weight * mid[k];
            }
        }
        const GateOp &op = ops[g];
        apply_gate(phi, op, params, /*inverse=*/true);
        switch (op.kind) {
        case GateKind::U3: {
            const Mat2 s = reduced_overlap(chi, phi, op.q0);
            const double th = params[op.param];
            const double ph = params[op.param + 1];
            const double la = params[op.param + 2];
            const double c = std::cos(th / 2);
            const double sn = std::sin(th / 2);
            const cplx el = std::polar(1.0, la);
            const cplx ep = std::polar(1.0, ph);
            const cplx epl = std::polar(1.0, ph + la);
            const cplx i{0.0, 1.0};
            const Mat2 d_theta{cplx{-sn / 2, 0.0}, -el * (c / 2), ep * (c / 2),
                               -epl * (sn / 2)};
            const Mat2 d_phi{cplx{}, cplx{}, i * ep * sn, i * epl * c};
            const Mat2 d_lambda{cplx{}, -i * el * sn, cplx{}, i * epl * c};
            grad[op.param] += -2.0 * contract(d_theta, s);
            grad[op.param + 1] += -2.0 * contract(d_phi, s);
            grad[op.param + 2] += -2.0 * contract(d_lambda, s);
            break;
        }
        case GateKind::RZ: {
            const auto [s0, s1] = diagonal_overlap(chi, phi, op.q0, 0);
            grad[op.param] += -2.0 * rz_derivative(params[op.param], s0, s1);
            break;
        }
        case GateKind::CRZ: {
            const auto [s0, s1] =
                diagonal_overlap(chi, phi, op.q1, std::size_t{1} << op.q0);
            grad[op.param] += -2.0 * rz_derivative(params[op.param], s0, s1);
            break;
        }
        case GateKind::CNOT:
            break;
        }
        apply_gate(chi, op, params, /*inverse=*/true);
    }
    return m;
}

GradientResult grad_adjoint(const Circuit &circuit,
                            std::span<const StateVector> inputs,
                            std::span<const double> params,
                            const ObjectiveConfig &cfg) {
    check_inputs(circuit, inputs, params);
    const std::size_t n = inputs.size();
    const std::size_t p = circuit.n_params;
    std::vector<double> rows(n * p, 0.0);
    std::vector<SampleMetrics> per(n);
    parallel_for(n, [&](std::size_t i) {
        per[i] = adjoint_sample(circuit, inputs[i], params, cfg.lambda_weight,
                                std::span(rows).subspan(i * p, p));
    });
    return {reduce_metrics(per, cfg), column_means(rows, n, p)};
}

std::vector<double> grad_parameter_shift(const Circuit &circuit,
                                         std::span<const StateVector> inputs,
                                         std::span<const double> params,
                                         const ObjectiveConfig &cfg,
                                         ShiftRule rule) {
    check_inputs(circuit, inputs, params);
    const auto plan = shift_plan(circuit, rule);
    std::vector<double> values(plan.size());
    parallel_for(plan.size(), [&](std::size_t i) {
        values[i] = shifted_loss(circuit, inputs, params, cfg, plan[i]);
    });
    return combine_shifts(circuit, rule, plan, values);
}

std::vector<double> grad_finite_diff(const Circuit &circuit,
                                     std::span<const StateVector> inputs,
                                     std::span<const double> params,
                                     const ObjectiveConfig &cfg, double epsilon) {
    check_inputs(circuit, inputs, params);
    if (!(epsilon >= 1e-8 && epsilon <= 1e-2)) {
        throw ConfigError("finite-difference step must be in [1e-8, 1e-2]");
    }
    std::vector<double> grad(circuit.n_params);
    parallel_for(circuit.n_params, [&](std::size_t k) {
        const double up = shifted_loss(circuit, inputs, params, cfg, {k, epsilon});
        const double down = shifted_loss(circuit, inputs, params, cfg, {k, -epsilon});
        grad[k] = (up - down) / (2 * epsilon);
    });
    return grad;
}

GradientResult compute_gradient(GradientEngine engine, const Circuit &circuit,
                                std::span<const StateVector> inputs,
                                std::span<const double> params,
                                const ObjectiveConfig &cfg) {
    switch (engine) {
    case GradientEngine::Adjoint:
        return grad_adjoint(circuit, inputs, params, cfg);
    case GradientEngine::ParameterShift:
        return {batch_objective(circuit, inputs, params, cfg),
                grad_parameter_shift(circuit, inputs, params, cfg)};
    case GradientEngine::FiniteDiff:
        return {batch_objective(circuit, inputs, params, cfg),
                grad_finite_diff(circuit, inputs, params, cfg)};
    }
    throw InternalError("unhandled gradient engine");
}

ShiftDiscrepancy measure_shift_discrepancy(const Circuit &circuit,
                                           std::span<const StateVector> inputs,
                                           std::span<const double> params,
                                           const ObjectiveConfig &cfg) {
    const auto exact = grad_adjoint(circuit, inputs, params, cfg).grad;
    const auto two = grad_parameter_shift(circuit, inputs, params, cfg,
                                          ShiftRule::TwoTerm);
    const auto four = grad_parameter_shift(circuit, inputs, params, cfg,
                                           ShiftRule::Generalized);
    ShiftDiscrepancy out;
    for (const GateOp &op : circuit.ops) {
        for (unsigned a = 0; a < angle_count(op.kind); ++a) {
            const std::size_t k = op.param + a;
            if (op.kind == GateKind::CRZ) {
                out.max_crz_two_term =
                    std::max(out.max_crz_two_term, std::abs(two[k] - exact[k]));
                out.max_crz_four_term =
                    std::max(out.max_crz_four_term, std::abs(four[k] - exact[k]));
            } else {
                out.max_single_qubit =
                    std::max(out.max_single_qubit, std::abs(two[k] - exact[k]));
            }
        }
    }
    return out;
}

namespace reference {

GradientResult grad_adjoint(const Circuit &circuit,
                            std::span<const StateVector> inputs,
                            std::span<const double> params,
                            const ObjectiveConfig &cfg) {
    check_inputs(circuit, inputs, params);
    const std::size_t n = inputs.size();
    const std::size_t p = circuit.n_params;
    std::vector<double> rows(n * p, 0.0);
    std::vector<SampleMetrics> per;
    per.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        per.push_back(adjoint_sample(circuit, inputs[i], params, cfg.lambda_weight,
                                     std::span(rows).subspan(i * p, p)));
    }
    return {reduce_metrics(per, cfg), column_means(rows, n, p)};
}

std::vector<double> grad_parameter_shift(const Circuit &circuit,
                                         std::span<const StateVector> inputs,
                                         std::span<const double> params,
                                         const ObjectiveConfig &cfg,
                                         ShiftRule rule) {
    check_inputs(circuit, inputs, params);
    const auto plan = shift_plan(circuit, rule);
    std::vector<double> values;
    values.reserve(plan.size());
    for (const ShiftPlan &shift : plan) {
        values.push_back(shifted_loss(circuit, inputs, params, cfg, shift));
    }
    return combine_shifts(circuit, rule, plan, values);
}

} // namespace reference
} // namespace molqae
