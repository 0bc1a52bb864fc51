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
// Serial reference vs OpenMP kernels for the batch objective and the
// adjoint gradient.
//
//   bench_kernels [--batch N] [--reps R] [--layers 5,15]

#include "molqae/circuit.hpp"
#include "molqae/grad.hpp"
#include "molqae/objective.hpp"
#include "molqae/rng.hpp"
#include "molqae/smiles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <omp.h>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

double best_of(int reps, const std::function<void()> &fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

std::vector<molqae::FeatureVector> features(std::size_t n, std::uint64_t seed) {
    molqae::SplitMix64 rng(seed);
    std::vector<molqae::FeatureVector> out(n);
    for (auto &xi : out) {
        for (double &x : xi) {
            x = static_cast<double>(rng.next_below(24)) / 24.0;
        }
    }
    return out;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"benchmark serial and OpenMP kernels"};
    std::size_t batch = 256;
    int reps = 3;
    std::vector<unsigned> layers{5, 15};
    app.add_option("--batch", batch)->check(CLI::PositiveNumber);
    app.add_option("--reps", reps)->check(CLI::PositiveNumber);
    app.add_option("--layers", layers)->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const auto states = molqae::prepare_states(features(batch, 42));
    const molqae::ObjectiveConfig cfg{};
    std::printf("threads %d, batch %zu, best of %d\n", omp_get_max_threads(), batch, reps);
    std::printf("%-10s %6s %12s %12s %8s %s\n", "kernel", "L", "serial_s", "openmp_s",
                "speedup", "identical");

    for (const unsigned l : layers) {
        const molqae::ArchConfig arch{8, 4, l};
        const auto circuit = molqae::build_circuit(arch);
        const auto params = molqae::init_params(arch, 42);

        molqae::BatchMetrics ref_m;
        molqae::BatchMetrics par_m;
        const double t_ref = best_of(reps, [&] {
            ref_m = molqae::reference::batch_objective(circuit, states, params, cfg);
        });
        const double t_par = best_of(reps, [&] {
            par_m = molqae::batch_objective(circuit, states, params, cfg);
        });
        std::printf("%-10s %6u %12.4f %12.4f %8.2f %s\n", "objective", l, t_ref, t_par,
                    t_ref / t_par, ref_m.mean_loss == par_m.mean_loss ? "yes" : "NO");

        molqae::GradientResult ref_g;
        molqae::GradientResult par_g;
        const double g_ref = best_of(reps, [&] {
            ref_g = molqae::reference::grad_adjoint(circuit, states, params, cfg);
        });
        const double g_par = best_of(reps, [&] {
            par_g = molqae::grad_adjoint(circuit, states, params, cfg);
        });
        std::printf("%-10s %6u %12.4f %12.4f %8.2f %s\n", "adjoint", l, g_ref, g_par,
                    g_ref / g_par, ref_g.grad == par_g.grad ? "yes" : "NO");
    }
    return 0;
}
