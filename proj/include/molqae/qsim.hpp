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
 * Dense statevector simulation for small registers.
 *
 * Basis indices are little-endian: qubit 0 is the least-significant bit.
 * Gates act in place with strided pair iteration, so a gate on an n-qubit
 * register costs O(2^n) and never materializes a 2^n x 2^n matrix.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace molqae {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

inline constexpr unsigned kMaxQubits = 16;

class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits; throws ConfigError outside [1, 16].
    explicit StateVector(unsigned n_qubits);

    /// Wraps explicit amplitudes; the length must be a power of two.
    static StateVector from_amplitudes(std::vector<cplx> amps);

    [[nodiscard]] unsigned n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<cplx> amps() noexcept { return amps_; }
    [[nodiscard]] std::span<const cplx> amps() const noexcept { return amps_; }
    cplx &operator[](std::size_t i) noexcept { return amps_[i]; }
    const cplx &operator[](std::size_t i) const noexcept { return amps_[i]; }

    [[nodiscard]] double norm_squared() const noexcept;

    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    StateVector() = default;
    unsigned n_qubits_ = 0;
    std::vector<cplx> amps_;
};

[[nodiscard]] StateVector new_zero_state(unsigned n_qubits);

[[nodiscard]] Mat2 u3_matrix(double theta, double phi, double lambda);
/// RZ(a) = diag(e^{-ia/2}, e^{+ia/2}).
[[nodiscard]] Mat2 rz_matrix(double alpha);
[[nodiscard]] Mat2 adjoint(const Mat2 &m);

/// Applies an arbitrary 2x2 matrix to qubit `q`.
void apply_1q(StateVector &state, unsigned q, const Mat2 &m);
void apply_u3(StateVector &state, unsigned q, double theta, double phi,
              double lambda);
void apply_rz(StateVector &state, unsigned q, double alpha);
void apply_cnot(StateVector &state, unsigned control, unsigned target);
/// RZ(gamma) on `target` restricted to the control = 1 subspace.
void apply_crz(StateVector &state, unsigned control, unsigned target,
               double gamma);

/// Sum_k conj(a_k) b_k.
[[nodiscard]] cplx inner_product(const StateVector &a, const StateVector &b);

/// Probability mass on basis states whose bits at `qubits` are all zero.
[[nodiscard]] double prob_all_zero(const StateVector &state,
                                   std::span<const unsigned> qubits);

} // namespace molqae
