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
 * The autoencoder circuit: architecture config, flat parameter layout and
 * the gate tape that encode/decode/forward execute.
 *
 * Gate order (tape order):
 *   encoder layer l = 1..L : U3 on qubits 0..N-1, then CRZ(i, j) for all
 *                            pairs i < j in lexicographic order (i controls)
 *   latent refinement      : RZ on qubits 0..n_latent-1
 *   ancilla compression    : U3 on qubits n_latent..N-1
 *   -- mid state --
 *   special layer          : CRZ(i, i+1) for i = 0..N-2
 *   decoder layer l = 1..L : same structure as the encoder layers
 */
#pragma once

#include "molqae/qsim.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace molqae {

struct ArchConfig {
    unsigned n_qubits = 8;
    unsigned n_latent = 4;
    unsigned n_layers = 5;

    [[nodiscard]] unsigned n_ancilla() const noexcept { return n_qubits - n_latent; }
    /// Throws ConfigError unless 2 <= N <= 16, 1 <= n_latent < N, L >= 1.
    void validate() const;

    friend bool operator==(const ArchConfig &, const ArchConfig &) = default;
};

enum class GateKind : std::uint8_t { U3, RZ, CNOT, CRZ };

/// Number of angles a gate of this kind consumes.
[[nodiscard]] constexpr unsigned angle_count(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::U3:
        return 3;
    case GateKind::RZ:
    case GateKind::CRZ:
        return 1;
    case GateKind::CNOT:
        break;
    }
    return 0;
}

/// One tape entry. `param` is the flat index of the first angle.
struct GateOp {
    GateKind kind;
    std::uint8_t q0; ///< target for 1-qubit gates, control for 2-qubit gates
    std::uint8_t q1; ///< target for 2-qubit gates
    std::uint32_t param;
};

/**
 * A parameterized gate sequence with a marked mid point.
 *
 * ops[0, mid_end) map the input to the mid state; the rest reconstruct.
 * Qubits n_keep..N-1 are the ones expected to end the first part in |0>.
 */
struct Circuit {
    unsigned n_qubits = 0;
    unsigned n_keep = 0;
    std::vector<GateOp> ops;
    std::size_t mid_end = 0;
    std::size_t n_params = 0;

    /// Kind of the gate that owns parameter `k`.
    [[nodiscard]] GateKind param_gate(std::size_t k) const;
    /// Throws ArgumentError on bad qubits, missing or overlapping params.
    void validate() const;
};

struct ParamSegment {
    std::string name; ///< e.g. "enc.L3.crz"
    std::size_t begin;
    std::size_t end;
};

/// Deterministic map from flat parameter index to gate role.
class ParamLayout {
  public:
    explicit ParamLayout(const ArchConfig &arch);

    [[nodiscard]] const ArchConfig &arch() const noexcept { return arch_; }
    [[nodiscard]] std::size_t total() const noexcept { return names_.size(); }
    [[nodiscard]] const std::vector<ParamSegment> &segments() const noexcept {
        return segments_;
    }
    /// Human-readable name, e.g. "enc.L2.crz.3-7" or "anc.u3.q5.phi".
    [[nodiscard]] const std::string &name(std::size_t k) const;
    /// Segment by name; throws ArgumentError when absent.
    [[nodiscard]] const ParamSegment &segment(std::string_view name) const;

  private:
    ArchConfig arch_;
    std::vector<ParamSegment> segments_;
    std::vector<std::string> names_;
};

/// Closed form 2L(3N + N(N-1)/2) + n_latent + 3 n_ancilla + (N - 1),
/// i.e. 104 L + 31 - 2 n_latent at N = 8. Cross-checked against the tape.
[[nodiscard]] std::size_t param_count(const ArchConfig &arch);

[[nodiscard]] Circuit build_circuit(const ArchConfig &arch);

using ParamVector = std::vector<double>;

/// Uniform draws in (-pi, pi) from SplitMix64(seed).
[[nodiscard]] ParamVector init_params(const ArchConfig &arch, std::uint64_t seed);

/// Applies a single tape entry, or its inverse.
void apply_gate(StateVector &state, const GateOp &op,
                std::span<const double> params, bool inverse = false);

void run_ops(StateVector &state, std::span<const GateOp> ops,
             std::span<const double> params);

/// Input -> mid state (encoder, latent RZ, ancilla U3).
[[nodiscard]] StateVector encode(const Circuit &circuit, StateVector state,
                                 std::span<const double> params);
/// Mid -> output state (special CRZ layer, decoder).
[[nodiscard]] StateVector decode(const Circuit &circuit, StateVector mid,
                                 std::span<const double> params);
/// Returns {mid, out}.
[[nodiscard]] std::pair<StateVector, StateVector>
forward(const Circuit &circuit, const StateVector &input,
        std::span<const double> params);

[[nodiscard]] StateVector encode(const ArchConfig &arch, StateVector state,
                                 std::span<const double> params);
[[nodiscard]] StateVector decode(const ArchConfig &arch, StateVector mid,
                                 std::span<const double> params);
[[nodiscard]] std::pair<StateVector, StateVector>
forward(const ArchConfig &arch, const StateVector &input,
        std::span<const double> params);

} // namespace molqae
