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
#include "molqae/rng.hpp"

#include <numbers>
#include <string_view>

namespace molqae {
namespace {

constexpr std::string_view kU3Angles[3] = {"theta", "phi", "lambda"};

std::string pair_name(unsigned i, unsigned j) {
    return std::to_string(i) + "-" + std::to_string(j);
}

std::uint8_t qb(unsigned q) { return static_cast<std::uint8_t>(q); }

void check_params(const Circuit &circuit, std::span<const double> params) {
    if (params.size() != circuit.n_params) {
        throw ArgumentError("parameter vector has length " +
                            std::to_string(params.size()) + ", circuit expects " +
                            std::to_string(circuit.n_params));
    }
}

void check_state(const Circuit &circuit, const StateVector &state) {
    if (state.n_qubits() != circuit.n_qubits) {
        throw ArgumentError("state has " + std::to_string(state.n_qubits()) +
                            " qubits, circuit acts on " +
                            std::to_string(circuit.n_qubits));
    }
}

} // namespace

void ArchConfig::validate() const {
    if (n_qubits < 2 || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [2, 16], got " +
                          std::to_string(n_qubits));
    }
    if (n_latent < 1 || n_latent >= n_qubits) {
        throw ConfigError("n_latent must be in [1, " +
                          std::to_string(n_qubits - 1) + "], got " +
                          std::to_string(n_latent));
    }
    if (n_layers < 1) {
        throw ConfigError("n_layers must be at least 1");
    }
}

GateKind Circuit::param_gate(std::size_t k) const {
    for (const GateOp &op : ops) {
        const unsigned n = angle_count(op.kind);
        if (n > 0 && k >= op.param && k < op.param + n) {
            return op.kind;
        }
    }
    throw IndexError("parameter " + std::to_string(k) + " is not used by any gate");
}

void Circuit::validate() const {
    if (mid_end > ops.size()) {
        throw ArgumentError("mid point beyond the end of the tape");
    }
    if (n_keep > n_qubits) {
        throw ArgumentError("n_keep exceeds the register size");
    }
    std::vector<bool> used(n_params, false);
    for (const GateOp &op : ops) {
        const bool two = op.kind == GateKind::CNOT || op.kind == GateKind::CRZ;
        if (op.q0 >= n_qubits || (two && (op.q1 >= n_qubits || op.q1 == op.q0))) {
            throw ArgumentError("gate addresses an invalid qubit");
        }
        for (unsigned a = 0; a < angle_count(op.kind); ++a) {
            const std::size_t k = op.param + a;
            if (k >= n_params || used[k]) {
                throw ArgumentError("parameter " + std::to_string(k) +
                                    " is out of range or shared");
            }
            used[k] = true;
        }
    }
}

ParamLayout::ParamLayout(const ArchConfig &arch) : arch_(arch) {
    arch_.validate();
    const unsigned n = arch_.n_qubits;

    auto open = [this](std::string name) {
        segments_.push_back({std::move(name), names_.size(), names_.size()});
    };
    auto close = [this] { segments_.back().end = names_.size(); };
    auto add_u3 = [this](const std::string &prefix, unsigned q) {
        for (const auto angle : kU3Angles) {
            names_.push_back(prefix + ".q" + std::to_string(q) + "." +
                             std::string(angle));
        }
    };
    auto add_layer = [&](const std::string &prefix) {
        open(prefix + ".u3");
        for (unsigned q = 0; q < n; ++q) {
            add_u3(prefix + ".u3", q);
        }
        close();
        open(prefix + ".crz");
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = i + 1; j < n; ++j) {
                names_.push_back(prefix + ".crz." + pair_name(i, j));
            }
        }
        close();
    };

    for (unsigned l = 1; l <= arch_.n_layers; ++l) {
        add_layer("enc.L" + std::to_string(l));
    }
    open("latent.rz");
    for (unsigned q = 0; q < arch_.n_latent; ++q) {
        names_.push_back("latent.rz.q" + std::to_string(q));
    }
    close();
    open("anc.u3");
    for (unsigned q = arch_.n_latent; q < n; ++q) {
        add_u3("anc.u3", q);
    }
    close();
    open("special.crz");
    for (unsigned i = 0; i + 1 < n; ++i) {
        names_.push_back("special.crz." + pair_name(i, i + 1));
    }
    close();
    for (unsigned l = 1; l <= arch_.n_layers; ++l) {
        add_layer("dec.L" + std::to_string(l));
    }
}

const std::string &ParamLayout::name(std::size_t k) const {
    if (k >= names_.size()) {
        throw IndexError("parameter index " + std::to_string(k) +
                         " out of range (total " + std::to_string(total()) + ")");
    }
    return names_[k];
}

const ParamSegment &ParamLayout::segment(std::string_view name) const {
    for (const ParamSegment &s : segments_) {
        if (s.name == name) {
            return s;
        }
    }
    throw ArgumentError("no parameter segment named '" + std::string(name) + "'");
}

Circuit build_circuit(const ArchConfig &arch) {
    const ParamLayout layout(arch);
    const unsigned n = arch.n_qubits;
    Circuit c;
    c.n_qubits = n;
    c.n_keep = arch.n_latent;
    c.n_params = layout.total();

    auto emit_layer = [&](const std::string &prefix) {
        auto k = static_cast<std::uint32_t>(layout.segment(prefix + ".u3").begin);
        for (unsigned q = 0; q < n; ++q, k += 3) {
            c.ops.push_back({GateKind::U3, qb(q), 0, k});
        }
        k = static_cast<std::uint32_t>(layout.segment(prefix + ".crz").begin);
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = i + 1; j < n; ++j) {
                c.ops.push_back({GateKind::CRZ, qb(i), qb(j), k++});
            }
        }
    };

    for (unsigned l = 1; l <= arch.n_layers; ++l) {
        emit_layer("enc.L" + std::to_string(l));
    }
    auto k = static_cast<std::uint32_t>(layout.segment("latent.rz").begin);
    for (unsigned q = 0; q < arch.n_latent; ++q) {
        c.ops.push_back({GateKind::RZ, qb(q), 0, k++});
    }
    k = static_cast<std::uint32_t>(layout.segment("anc.u3").begin);
    for (unsigned q = arch.n_latent; q < n; ++q, k += 3) {
        c.ops.push_back({GateKind::U3, qb(q), 0, k});
    }
    c.mid_end = c.ops.size();
    k = static_cast<std::uint32_t>(layout.segment("special.crz").begin);
    for (unsigned i = 0; i + 1 < n; ++i) {
        c.ops.push_back({GateKind::CRZ, qb(i), qb(i + 1), k++});
    }
    for (unsigned l = 1; l <= arch.n_layers; ++l) {
        emit_layer("dec.L" + std::to_string(l));
    }
    c.validate();
    return c;
}

std::size_t param_count(const ArchConfig &arch) {
    arch.validate();
    const std::size_t n = arch.n_qubits;
    const std::size_t per_layer = 3 * n + n * (n - 1) / 2;
    const std::size_t closed = 2 * arch.n_layers * per_layer + arch.n_latent +
                               3 * arch.n_ancilla() + (n - 1);

    std::size_t enumerated = 0;
    for (const GateOp &op : build_circuit(arch).ops) {
        enumerated += angle_count(op.kind);
    }
    if (enumerated != closed) {
        throw InternalError("parameter count mismatch: closed form " +
                            std::to_string(closed) + ", tape " +
                            std::to_string(enumerated));
    }
    return closed;
}

ParamVector init_params(const ArchConfig &arch, std::uint64_t seed) {
    const ParamLayout layout(arch);
    SplitMix64 rng(seed);
    ParamVector params(layout.total());
    for (double &p : params) {
        p = std::numbers::pi * (2.0 * rng.next_open01() - 1.0);
    }
    return params;
}

void apply_gate(StateVector &state, const GateOp &op,
                std::span<const double> params, bool inverse) {
    const double sign = inverse ? -1.0 : 1.0;
    switch (op.kind) {
    case GateKind::U3: {
        const Mat2 m = u3_matrix(params[op.param], params[op.param + 1],
                                 params[op.param + 2]);
        apply_1q(state, op.q0, inverse ? adjoint(m) : m);
        break;
    }
    case GateKind::RZ:
        apply_rz(state, op.q0, sign * params[op.param]);
        break;
    case GateKind::CNOT:
        apply_cnot(state, op.q0, op.q1);
        break;
    case GateKind::CRZ:
        apply_crz(state, op.q0, op.q1, sign * params[op.param]);
        break;
    }
}

void run_ops(StateVector &state, std::span<const GateOp> ops,
             std::span<const double> params) {
    for (const GateOp &op : ops) {
        apply_gate(state, op, params);
    }
}

StateVector encode(const Circuit &circuit, StateVector state,
                   std::span<const double> params) {
    check_state(circuit, state);
    check_params(circuit, params);
    run_ops(state, std::span(circuit.ops).first(circuit.mid_end), params);
    return state;
}

StateVector decode(const Circuit &circuit, StateVector mid,
                   std::span<const double> params) {
    check_state(circuit, mid);
    check_params(circuit, params);
    run_ops(mid, std::span(circuit.ops).subspan(circuit.mid_end), params);
    return mid;
}

std::pair<StateVector, StateVector> forward(const Circuit &circuit,
                                            const StateVector &input,
                                            std::span<const double> params) {
    StateVector mid = encode(circuit, input, params);
    StateVector out = decode(circuit, mid, params);
    return {std::move(mid), std::move(out)};
}

StateVector encode(const ArchConfig &arch, StateVector state,
                   std::span<const double> params) {
    return encode(build_circuit(arch), std::move(state), params);
}

StateVector decode(const ArchConfig &arch, StateVector mid,
                   std::span<const double> params) {
    return decode(build_circuit(arch), std::move(mid), params);
}

std::pair<StateVector, StateVector> forward(const ArchConfig &arch,
                                            const StateVector &input,
                                            std::span<const double> params) {
    return forward(build_circuit(arch), input, params);
}

} // namespace molqae
