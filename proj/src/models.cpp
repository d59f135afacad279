// Copyright 2026 The qganlab Authors
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
#include "qgan/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qgan/error.hpp"

namespace qgan {

namespace {

std::vector<std::pair<std::size_t, std::size_t>> entangling_pairs(std::size_t n, Topology t) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        pairs.emplace_back(i, i + 1);
    }
    if (t == Topology::kRing && n > 2) {
        pairs.emplace_back(n - 1, 0);
    }
    return pairs;
}

void check_registers(std::size_t n, std::span<const std::size_t> reg_a,
                     std::span<const std::size_t> reg_b, std::optional<std::size_t> ancilla) {
    if (reg_a.size() != reg_b.size() || reg_a.empty()) {
        throw InvalidArgument("swap test: registers must be non-empty and of equal width");
    }
    std::vector<bool> used(n, false);
    auto claim = [&](std::size_t q) {
        if (q >= n) {
            throw InvalidArgument("swap test: qubit " + std::to_string(q) + " out of range");
        }
        if (used[q]) {
            throw InvalidArgument("swap test: qubit " + std::to_string(q) +
                                  " appears in more than one register");
        }
        used[q] = true;
    };
    for (std::size_t q : reg_a) {
        claim(q);
    }
    for (std::size_t q : reg_b) {
        claim(q);
    }
    if (ancilla) {
        claim(*ancilla);
    }
}

std::vector<std::size_t> iota_from(std::size_t first, std::size_t count) {
    std::vector<std::size_t> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = first + i;
    }
    return out;
}

} // namespace

const char *topology_name(Topology t) { return t == Topology::kRing ? "ring" : "chain"; }

Topology parse_topology(const std::string &name) {
    if (name == "chain") {
        return Topology::kChain;
    }
    if (name == "ring") {
        return Topology::kRing;
    }
    throw InvalidArgument("unknown topology '" + name + "' (expected chain or ring)");
}

Circuit build_qvc(std::size_t n_qubits, std::size_t depth, Topology topology) {
    if (n_qubits < 2) {
        throw InvalidArgument("build_qvc: need at least 2 qubits, got " + std::to_string(n_qubits));
    }
    if (depth < 1) {
        throw InvalidArgument("build_qvc: depth must be >= 1");
    }
    const auto pairs = entangling_pairs(n_qubits, topology);
    Circuit c(n_qubits);
    for (std::size_t d = 0; d < depth; ++d) {
        for (std::size_t q = 0; q < n_qubits; ++q) {
            c.ry(q, ParamRef{c.add_param(), 1.0});
        }
        for (const auto &[a, b] : pairs) {
            c.ryy(a, b, ParamRef{c.add_param(), 1.0});
        }
        for (const auto &[a, b] : pairs) {
            c.cry(a, b, c.add_param());
        }
    }
    return c;
}

std::size_t qvc_param_count(std::size_t n_qubits, std::size_t depth, Topology topology) {
    return depth * (n_qubits + 2 * entangling_pairs(n_qubits, topology).size());
}

double swap_test(const StateVector &full_state, std::span<const std::size_t> reg_a,
                 std::span<const std::size_t> reg_b, std::size_t ancilla) {
    const std::size_t n = full_state.n_qubits();
    check_registers(n, reg_a, reg_b, ancilla);
    Circuit c(n);
    c.h(ancilla);
    for (std::size_t k = 0; k < reg_a.size(); ++k) {
        c.cswap(ancilla, reg_a[k], reg_b[k]);
    }
    c.h(ancilla);
    const StateVector out = run(c, {}, full_state);
    return 1.0 - prob_one(out, ancilla);
}

double destructive_swap_test(const StateVector &full_state, std::span<const std::size_t> reg_a,
                             std::span<const std::size_t> reg_b) {
    const std::size_t n = full_state.n_qubits();
    check_registers(n, reg_a, reg_b, std::nullopt);
    Circuit c(n);
    for (std::size_t k = 0; k < reg_a.size(); ++k) {
        c.cnot(reg_a[k], reg_b[k]);
        c.h(reg_a[k]);
    }
    const StateVector out = run(c, {}, full_state);
    double even = 0.0;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        unsigned parity = 0;
        for (std::size_t k = 0; k < reg_a.size(); ++k) {
            const bool a = (i >> (n - 1 - reg_a[k])) & 1U;
            const bool b = (i >> (n - 1 - reg_b[k])) & 1U;
            parity ^= static_cast<unsigned>(a && b);
        }
        if (parity == 0) {
            even += std::norm(out[i]);
        }
    }
    return std::clamp(even, 0.0, 1.0);
}

double swap_test_states(const StateVector &a, const StateVector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw InvalidArgument("swap test: register widths differ");
    }
    const std::size_t m = a.n_qubits();
    const StateVector full = tensor(StateVector(1), tensor(a, b));
    const auto reg_a = iota_from(1, m);
    const auto reg_b = iota_from(1 + m, m);
    return swap_test(full, reg_a, reg_b, 0);
}

double swap_test_overlap(const StateVector &a, const StateVector &b) {
    return 0.5 + 0.5 * std::norm(inner(a, b));
}

// ------------------------------------------------------------------ IQGAN

IqganModel make_iqgan(const EmbeddingSpec &encoder, std::size_t depth, Topology topology,
                      bool trainable_encoder) {
    if (trainable_encoder && encoder.kind != EmbeddingKind::kAngle) {
        throw InvalidArgument("trainable encoder offsets require angle embedding");
    }
    IqganModel m;
    m.encoder = encoder;
    m.trainable_encoder = trainable_encoder;
    m.depth = depth;
    m.topology = topology;
    m.generator = build_qvc(encoder.n_qubits, depth, topology);
    return m;
}

Circuit encoder_circuit(const IqganModel &model, const FeatureVector &sample) {
    if (model.encoder.kind != EmbeddingKind::kAngle) {
        throw InvalidArgument("encoder_circuit: only angle embedding has a circuit form");
    }
    if (sample.size() != model.width()) {
        throw InvalidArgument("encoder: " + std::to_string(sample.size()) + " features for " +
                              std::to_string(model.width()) + " qubits");
    }
    Circuit c(model.width(), model.width());
    for (std::size_t q = 0; q < model.width(); ++q) {
        c.ry(q, ParamRef{q, 1.0}, model.encoder.angle_scale * sample[q]);
    }
    return c;
}

StateVector encode_sample(const IqganModel &model, std::span<const double> params,
                          const FeatureVector &sample) {
    if (params.size() != model.n_params()) {
        throw InvalidArgument("iqgan: expected " + std::to_string(model.n_params()) +
                              " parameters, got " + std::to_string(params.size()));
    }
    if (!model.trainable_encoder) {
        return encode_fixed(model.encoder, sample);
    }
    const auto offsets = params.subspan(model.n_generator_params());
    return run(encoder_circuit(model, sample), offsets);
}

double iqgan_forward(const IqganModel &model, std::span<const double> params,
                     const FeatureVector &sample) {
    const StateVector data = encode_sample(model, params, sample);
    const StateVector gen =
        run(model.generator, params.subspan(0, model.n_generator_params()));
    return swap_test_states(data, gen);
}

// ------------------------------------------------------------------ QuGAN

QuganModel make_qugan(const EmbeddingSpec &encoder, std::size_t depth, Topology topology) {
    QuganModel m;
    m.encoder = encoder;
    m.depth = depth;
    m.topology = topology;
    m.discriminator = build_qvc(encoder.n_qubits, depth, topology);
    m.generator = build_qvc(encoder.n_qubits, depth, topology);
    return m;
}

StateVector encode_fixed(const EmbeddingSpec &encoder, const FeatureVector &sample) {
    if (encoder.kind == EmbeddingKind::kAngle) {
        return angle_embed(sample, encoder);
    }
    return amplitude_embed(sample.values(), encoder.n_qubits).state;
}

double qugan_disc_out(const QuganModel &model, std::span<const double> disc_params,
                      const StateVector &input) {
    if (input.n_qubits() != model.width()) {
        throw InvalidArgument("qugan_disc_out: input has " + std::to_string(input.n_qubits()) +
                              " qubits, register has " + std::to_string(model.width()));
    }
    const StateVector delta = run(model.discriminator, disc_params);
    return swap_test_states(delta, input);
}

StateVector generator_state(const Circuit &generator, std::span<const double> params,
                            const FeatureVector *noise, double angle_scale) {
    if (noise == nullptr) {
        return run(generator, params);
    }
    if (noise->size() != generator.n_qubits()) {
        throw InvalidArgument("generator_state: noise length " + std::to_string(noise->size()) +
                              " != register width " + std::to_string(generator.n_qubits()));
    }
    const EmbeddingSpec spec{EmbeddingKind::kAngle, generator.n_qubits(), angle_scale};
    return run(generator, params, angle_embed(*noise, spec));
}

// ---------------------------------------------------------- Product IQGAN

FeatureVector product_iqgan_image(const ProductIqgan &model, std::span<const double> params) {
    if (params.size() != model.n_pixels) {
        throw InvalidArgument("product_iqgan_image: expected " + std::to_string(model.n_pixels) +
                              " angles, got " + std::to_string(params.size()));
    }
    ProductState state(model.n_pixels);
    for (std::size_t p = 0; p < model.n_pixels; ++p) {
        state = product_apply(state, Gate{GateKind::kRY, {p, 0, 0}, {}, 0.0}, params[p]);
    }
    return angle_decode(state, model.angle_scale);
}

} // namespace qgan
