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
#include "molqae/circuit.hpp"
#include "molqae/error.hpp"
#include "molqae/grad.hpp"
#include "molqae/objective.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <omp.h>

using namespace molqae;
using namespace molqae::testing;

namespace {
constexpr double pi = std::numbers::pi;

Circuit single_gate(GateKind kind) {
    Circuit c;
    c.n_qubits = 1;
    c.n_keep = 1;
    c.ops = {{kind, 0, 0, 0}};
    c.mid_end = 1;
    c.n_params = angle_count(kind);
    return c;
}

struct Problem {
    Circuit circuit;
    std::vector<StateVector> inputs;
    std::vector<double> params;
};

Problem random_problem(const ArchConfig &arch, std::size_t batch, SplitMix64 &rng) {
    Problem p{build_circuit(arch), {}, {}};
    for (std::size_t i = 0; i < batch; ++i) {
        p.inputs.push_back(random_state(arch.n_qubits, rng));
    }
    p.params = random_params(p.circuit.n_params, rng);
    return p;
}

double max_fd_violation(const std::vector<double> &exact, const std::vector<double> &fd) {
    double worst = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k) {
        const double tol = std::max(1e-6, 1e-4 * std::abs(exact[k]));
        worst = std::max(worst, std::abs(exact[k] - fd[k]) / tol);
    }
    return worst; // <= 1 means every entry is within tolerance
}
} // namespace

TEST_CASE("engine names") {
    CHECK(parse_gradient_engine("adjoint") == GradientEngine::Adjoint);
    CHECK(parse_gradient_engine("parameter-shift") == GradientEngine::ParameterShift);
    CHECK(parse_gradient_engine("parameter_shift") == GradientEngine::ParameterShift);
    CHECK(parse_gradient_engine("finite-diff") == GradientEngine::FiniteDiff);
    CHECK(to_string(GradientEngine::ParameterShift) == "parameter-shift");
    CHECK_THROWS_AS((void)parse_gradient_engine("spsa"), ConfigError);
}

TEST_CASE("single-qubit toy loss sin^2(theta/2)") {
    const auto c = single_gate(GateKind::U3);
    const std::vector<StateVector> in{new_zero_state(1)};
    const std::vector<double> p{pi / 2, 0.0, 0.0};
    const ObjectiveConfig cfg{};
    const auto m = batch_objective(c, in, p, cfg);
    CHECK(std::abs(m.mean_loss - 0.5) < 1e-15);
    const auto ps = grad_parameter_shift(c, in, p, cfg);
    CHECK(std::abs(ps[0] - 0.5) < 1e-15);
    const auto adj = grad_adjoint(c, in, p, cfg);
    CHECK(std::abs(adj.grad[0] - 0.5) < 1e-15);
    CHECK(std::abs(adj.metrics.mean_loss - 0.5) < 1e-15);
    const auto fd = grad_finite_diff(c, in, p, cfg);
    CHECK(std::abs(fd[0] - 0.5) < 1e-9);
    // at lambda = 0 on |0> input, phi only phases the |1> part
    CHECK(std::abs(adj.grad[1]) < 1e-15);
    CHECK(std::abs(adj.grad[2]) < 1e-15);
}

TEST_CASE("a pure global phase has zero gradient") {
    const auto c = single_gate(GateKind::RZ);
    const std::vector<StateVector> in{new_zero_state(1)};
    const std::vector<double> p{0.83};
    const ObjectiveConfig cfg{};
    CHECK(std::abs(grad_parameter_shift(c, in, p, cfg)[0]) < 1e-15);
    CHECK(std::abs(grad_adjoint(c, in, p, cfg).grad[0]) < 1e-15);
}

TEST_CASE("finite differences vanish at the identity plateau") {
    const ArchConfig arch{3, 1, 1};
    SplitMix64 rng(1);
    const auto c = build_circuit(arch);
    const std::vector<StateVector> in{random_state(3, rng), random_state(3, rng)};
    const std::vector<double> zero(c.n_params, 0.0);
    for (double g : grad_finite_diff(c, in, zero, ObjectiveConfig{0.0})) {
        CHECK(std::abs(g) < 1e-8);
    }
    CHECK_THROWS_AS((void)grad_finite_diff(c, in, zero, ObjectiveConfig{}, 1e-9), ConfigError);
    CHECK_THROWS_AS((void)grad_finite_diff(c, in, zero, ObjectiveConfig{}, 0.1), ConfigError);
}

TEST_CASE("adjoint agrees with finite differences") {
    SplitMix64 rng(2);
    const ArchConfig archs[] = {{2, 1, 1}, {3, 2, 2}, {4, 1, 1}, {5, 3, 1}, {8, 4, 1}};
    for (const auto &arch : archs) {
        for (double lambda : {0.0, 0.01, 0.8}) {
            const auto pr = random_problem(arch, 3, rng);
            const ObjectiveConfig cfg{lambda};
            const auto adj = grad_adjoint(pr.circuit, pr.inputs, pr.params, cfg);
            const auto fd = grad_finite_diff(pr.circuit, pr.inputs, pr.params, cfg);
            CHECK(max_fd_violation(adj.grad, fd) <= 1.0);
            const auto m = batch_objective(pr.circuit, pr.inputs, pr.params, cfg);
            CHECK(adj.metrics.mean_loss == m.mean_loss);
        }
    }
}

TEST_CASE("finite-difference error shrinks quadratically") {
    SplitMix64 rng(3);
    const auto pr = random_problem(ArchConfig{3, 1, 1}, 2, rng);
    const ObjectiveConfig cfg{0.3};
    const auto exact = grad_adjoint(pr.circuit, pr.inputs, pr.params, cfg).grad;
    auto err = [&](double eps) {
        const auto fd = grad_finite_diff(pr.circuit, pr.inputs, pr.params, cfg, eps);
        double worst = 0.0;
        for (std::size_t k = 0; k < fd.size(); ++k) {
            worst = std::max(worst, std::abs(fd[k] - exact[k]));
        }
        return worst;
    };
    const double e1 = err(1e-2);
    const double e2 = err(5e-3);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("two-term shift is exact for U3 and RZ angles only") {
    SplitMix64 rng(4);
    for (const ArchConfig &arch : {ArchConfig{3, 1, 1}, ArchConfig{4, 2, 2}}) {
        const auto pr = random_problem(arch, 2, rng);
        const ObjectiveConfig cfg{0.25};
        const auto d = measure_shift_discrepancy(pr.circuit, pr.inputs, pr.params, cfg);
        CHECK(d.max_single_qubit < 1e-9);
        CHECK(d.max_crz_four_term < 1e-9);
        CHECK(d.max_crz_two_term > 1e-6);
    }
}

TEST_CASE("four-term rule on a lone CRZ") {
    // CRZ on |+>|+>: loss has both frequencies, the two-term rule is off
    Circuit c;
    c.n_qubits = 2;
    c.n_keep = 2;
    c.ops = {{GateKind::CRZ, 0, 1, 0}};
    c.mid_end = 1;
    c.n_params = 1;
    const std::vector<StateVector> in{
        StateVector::from_amplitudes({0.5, 0.5, 0.5, 0.5})};
    const ObjectiveConfig cfg{};
    for (double g : {0.3, 1.1, -2.4}) {
        const std::vector<double> p{g};
        // F = |1/2 + e^{-ig/2}/4 + e^{ig/2}/4|^2 = (1/2 + cos(g/2)/2)^2
        const double f = std::pow(0.5 + 0.5 * std::cos(g / 2), 2);
        const double df = -2 * (0.5 + 0.5 * std::cos(g / 2)) * 0.25 * std::sin(g / 2);
        CHECK(std::abs(batch_objective(c, in, p, cfg).mean_fidelity - f) < 1e-14);
        CHECK(std::abs(grad_adjoint(c, in, p, cfg).grad[0] + df) < 1e-14);
        CHECK(std::abs(grad_parameter_shift(c, in, p, cfg, ShiftRule::Generalized)[0] + df) <
              1e-14);
        CHECK(std::abs(grad_parameter_shift(c, in, p, cfg, ShiftRule::TwoTerm)[0] + df) > 1e-3);
    }
}

TEST_CASE("loss and gradient are periodic") {
    SplitMix64 rng(5);
    const ArchConfig arch{4, 2, 1};
    const auto pr = random_problem(arch, 2, rng);
    const ObjectiveConfig cfg{0.5};
    const auto base = grad_adjoint(pr.circuit, pr.inputs, pr.params, cfg);
    bool crz_2pi_differs = false;
    for (std::size_t k = 0; k < pr.params.size(); ++k) {
        const bool crz = pr.circuit.param_gate(k) == GateKind::CRZ;
        auto p = pr.params;
        // CRZ(g + 2pi) = CRZ(g) * Z on the control, which is not a global
        // phase, so CRZ angles only repeat after 4pi
        p[k] += crz ? 4 * pi : 2 * pi;
        const auto moved = grad_adjoint(pr.circuit, pr.inputs, p, cfg);
        CHECK(std::abs(moved.metrics.mean_loss - base.metrics.mean_loss) < 1e-12);
        for (std::size_t j = 0; j < p.size(); ++j) {
            CHECK(std::abs(moved.grad[j] - base.grad[j]) < 1e-11);
        }
        if (crz) {
            auto q = pr.params;
            q[k] += 2 * pi;
            const double l2 = batch_objective(pr.circuit, pr.inputs, q, cfg).mean_loss;
            crz_2pi_differs = crz_2pi_differs || std::abs(l2 - base.metrics.mean_loss) > 1e-6;
        }
    }
    CHECK(crz_2pi_differs);
}

TEST_CASE("decoder gradients ignore the ancilla term") {
    SplitMix64 rng(6);
    const ArchConfig arch{8, 4, 1};
    const ParamLayout layout(arch);
    const auto pr = random_problem(arch, 2, rng);
    const auto g0 = grad_adjoint(pr.circuit, pr.inputs, pr.params, ObjectiveConfig{0.0}).grad;
    const auto g1 = grad_adjoint(pr.circuit, pr.inputs, pr.params, ObjectiveConfig{1.0}).grad;
    const std::size_t first_dec = layout.segment("special.crz").begin;
    for (std::size_t k = first_dec; k < g0.size(); ++k) {
        CHECK(g0[k] == g1[k]);
    }
    double encoder_shift = 0.0;
    for (std::size_t k = 0; k < first_dec; ++k) {
        encoder_shift = std::max(encoder_shift, std::abs(g1[k] - g0[k]));
    }
    CHECK(encoder_shift > 1e-6);
}

TEST_CASE("parallel gradients match the serial reference bitwise") {
    SplitMix64 rng(7);
    const auto big = random_problem(ArchConfig{8, 4, 2}, 13, rng);
    const auto small = random_problem(ArchConfig{3, 1, 1}, 3, rng);
    const ObjectiveConfig cfg{};
    const auto ref = reference::grad_adjoint(big.circuit, big.inputs, big.params, cfg);
    const auto ref_ps = reference::grad_parameter_shift(small.circuit, small.inputs,
                                                        small.params, cfg,
                                                        ShiftRule::Generalized);
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        const auto par = grad_adjoint(big.circuit, big.inputs, big.params, cfg);
        CHECK(par.grad == ref.grad);
        CHECK(par.metrics.mean_loss == ref.metrics.mean_loss);
        CHECK(grad_parameter_shift(small.circuit, small.inputs, small.params, cfg,
                                   ShiftRule::Generalized) == ref_ps);
    }
    omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("engines are deterministic and dispatch correctly") {
    SplitMix64 rng(8);
    const auto pr = random_problem(ArchConfig{3, 2, 1}, 2, rng);
    const ObjectiveConfig cfg{};
    for (auto e : {GradientEngine::Adjoint, GradientEngine::ParameterShift,
                   GradientEngine::FiniteDiff}) {
        const auto a = compute_gradient(e, pr.circuit, pr.inputs, pr.params, cfg);
        const auto b = compute_gradient(e, pr.circuit, pr.inputs, pr.params, cfg);
        CHECK(a.grad == b.grad);
        CHECK(a.metrics.mean_loss == b.metrics.mean_loss);
        CHECK(a.grad.size() == pr.params.size());
    }
    const std::vector<StateVector> none;
    CHECK_THROWS_AS((void)grad_adjoint(pr.circuit, none, pr.params, cfg), ArgumentError);
}
