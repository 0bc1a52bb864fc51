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
#include "molqae/qsim.hpp"

#include "molqae/error.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace molqae {
namespace {

// Plain complex product; avoids the NaN/Inf recovery path of operator*.
inline cplx cmul(cplx a, cplx b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

void check_qubit(const StateVector &s, unsigned q) {
    if (q >= s.n_qubits()) {
        throw IndexError("qubit index " + std::to_string(q) +
                         " out of range for " + std::to_string(s.n_qubits()) +
                         "-qubit state");
    }
}

void check_pair(const StateVector &s, unsigned control, unsigned target) {
    check_qubit(s, control);
    check_qubit(s, target);
    if (control == target) {
        throw ArgumentError("control and target must differ (both " +
                            std::to_string(control) + ")");
    }
}

/// Inserts a zero bit at position `pos` of `i`.
inline std::size_t insert_zero_bit(std::size_t i, unsigned pos) noexcept {
    const std::size_t low = i & ((std::size_t{1} << pos) - 1);
    return ((i >> pos) << (pos + 1)) | low;
}

} // namespace

StateVector::StateVector(unsigned n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count must be in [1, " +
                          std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n_qubits));
    }
    n_qubits_ = n_qubits;
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
    const std::size_t n = amps.size();
    if (n < 2 || !std::has_single_bit(n) ||
        std::countr_zero(n) > static_cast<int>(kMaxQubits)) {
        throw ArgumentError("amplitude count must be 2^n with 1 <= n <= 16");
    }
    StateVector s;
    s.n_qubits_ = static_cast<unsigned>(std::countr_zero(n));
    s.amps_ = std::move(amps);
    return s;
}

double StateVector::norm_squared() const noexcept {
    double acc = 0.0;
    for (const cplx &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

StateVector new_zero_state(unsigned n_qubits) { return StateVector(n_qubits); }

Mat2 u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const cplx el = std::polar(1.0, lambda);
    const cplx ep = std::polar(1.0, phi);
    const cplx epl = std::polar(1.0, phi + lambda);
    return {cplx{c, 0.0}, -el * s, ep * s, epl * c};
}

Mat2 rz_matrix(double alpha) {
    return {std::polar(1.0, -alpha / 2), cplx{0.0, 0.0}, cplx{0.0, 0.0},
            std::polar(1.0, alpha / 2)};
}

Mat2 adjoint(const Mat2 &m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

void apply_1q(StateVector &state, unsigned q, const Mat2 &m) {
    check_qubit(state, q);
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t half = state.dim() / 2;
    cplx *a = state.amps().data();
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = insert_zero_bit(i, q);
        const std::size_t i1 = i0 | stride;
        const cplx v0 = a[i0];
        const cplx v1 = a[i1];
        a[i0] = cmul(m[0], v0) + cmul(m[1], v1);
        a[i1] = cmul(m[2], v0) + cmul(m[3], v1);
    }
}

void apply_u3(StateVector &state, unsigned q, double theta, double phi,
              double lambda) {
    apply_1q(state, q, u3_matrix(theta, phi, lambda));
}

void apply_rz(StateVector &state, unsigned q, double alpha) {
    check_qubit(state, q);
    const cplx p0 = std::polar(1.0, -alpha / 2);
    const cplx p1 = std::polar(1.0, alpha / 2);
    const std::size_t mask = std::size_t{1} << q;
    cplx *a = state.amps().data();
    for (std::size_t i = 0; i < state.dim(); ++i) {
        a[i] = cmul(a[i], (i & mask) ? p1 : p0);
    }
}

void apply_cnot(StateVector &state, unsigned control, unsigned target) {
    check_pair(state, control, target);
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    cplx *a = state.amps().data();
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(a[i], a[i | tmask]);
        }
    }
}

void apply_crz(StateVector &state, unsigned control, unsigned target,
               double gamma) {
    check_pair(state, control, target);
    const cplx p0 = std::polar(1.0, -gamma / 2);
    const cplx p1 = std::polar(1.0, gamma / 2);
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    cplx *a = state.amps().data();
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & cmask) {
            a[i] = cmul(a[i], (i & tmask) ? p1 : p0);
        }
    }
}

cplx inner_product(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw ArgumentError("inner product of states with dimensions " +
                            std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
        const cplx x = a[k];
        const cplx y = b[k];
        re += x.real() * y.real() + x.imag() * y.imag();
        im += x.real() * y.imag() - x.imag() * y.real();
    }
    return {re, im};
}

double prob_all_zero(const StateVector &state,
                     std::span<const unsigned> qubits) {
    std::size_t mask = 0;
    for (const unsigned q : qubits) {
        check_qubit(state, q);
        mask |= std::size_t{1} << q;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < state.dim(); ++k) {
        if ((k & mask) == 0) {
            acc += std::norm(state[k]);
        }
    }
    return acc;
}

} // namespace molqae
