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
/**
 * @file models.hpp
 * Circuit builders for the swap-test GAN architectures.
 *
 * IQGAN: fixed (or offset-trainable) angle encoder on the data register, a
 * QVC generator on the generator register and a swap test between the two.
 * QuGAN: a QVC discriminator producing a reference state |delta> and an
 * architecturally identical QVC generator, compared by the same swap test.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgan/embedding.hpp"
#include "qgan/qcore.hpp"

namespace qgan {

enum class Topology { kChain, kRing };

[[nodiscard]] const char *topology_name(Topology t);
[[nodiscard]] Topology parse_topology(const std::string &name);

/// Layered QVC. Each depth unit applies RY on every qubit, RYY on the
/// entangling pairs, then CRY on the same pairs (pair i couples i -> i+1;
/// the ring topology adds n-1 -> 0).
[[nodiscard]] Circuit build_qvc(std::size_t n_qubits, std::size_t depth,
                                Topology topology = Topology::kChain);

[[nodiscard]] std::size_t qvc_param_count(std::size_t n_qubits, std::size_t depth,
                                          Topology topology = Topology::kChain);

/// P(ancilla = 0) after H, CSWAP(ancilla, a_k, b_k) for every k, H.
[[nodiscard]] double swap_test(const StateVector &full_state, std::span<const std::size_t> reg_a,
                               std::span<const std::size_t> reg_b, std::size_t ancilla);

/// Ancilla-free variant: CNOT(a_k, b_k), H(a_k), then the parity of the
/// (a_k AND b_k) outcomes decides. Returns the probability of even parity,
/// which equals the ancilla swap test's P(0).
[[nodiscard]] double destructive_swap_test(const StateVector &full_state,
                                           std::span<const std::size_t> reg_a,
                                           std::span<const std::size_t> reg_b);

/// Simulates the swap test on |0>|a>|b> (ancilla first).
[[nodiscard]] double swap_test_states(const StateVector &a, const StateVector &b);

/// 1/2 + 1/2 |<a|b>|^2, the closed form of the swap test for pure registers.
[[nodiscard]] double swap_test_overlap(const StateVector &a, const StateVector &b);

struct IqganModel {
    EmbeddingSpec encoder;
    bool trainable_encoder = false;
    std::size_t depth = 2;
    Topology topology = Topology::kChain;
    Circuit generator{0};

    [[nodiscard]] std::size_t width() const { return encoder.n_qubits; }
    [[nodiscard]] std::size_t n_generator_params() const { return generator.n_params(); }
    /// Generator parameters followed by one encoder offset per qubit when trainable.
    [[nodiscard]] std::size_t n_params() const {
        return generator.n_params() + (trainable_encoder ? width() : 0);
    }
};

[[nodiscard]] IqganModel make_iqgan(const EmbeddingSpec &encoder, std::size_t depth,
                                    Topology topology = Topology::kChain,
                                    bool trainable_encoder = false);

/// Encoder circuit for one sample: RY(angle_scale * f_q + offset_q) per qubit.
/// The offsets are the circuit's parameters.
[[nodiscard]] Circuit encoder_circuit(const IqganModel &model, const FeatureVector &sample);

/// Data-register state for one sample.
[[nodiscard]] StateVector encode_sample(const IqganModel &model, std::span<const double> params,
                                        const FeatureVector &sample);

/// Full-circuit forward pass: ancilla, data register, generator register.
[[nodiscard]] double iqgan_forward(const IqganModel &model, std::span<const double> params,
                                   const FeatureVector &sample);

struct QuganModel {
    EmbeddingSpec encoder;
    std::size_t depth = 2;
    Topology topology = Topology::kChain;
    Circuit discriminator{0};
    Circuit generator{0};

    [[nodiscard]] std::size_t width() const { return encoder.n_qubits; }
};

[[nodiscard]] QuganModel make_qugan(const EmbeddingSpec &encoder, std::size_t depth,
                                    Topology topology = Topology::kChain);

/// Encodes one real sample with the fixed encoder.
[[nodiscard]] StateVector encode_fixed(const EmbeddingSpec &encoder, const FeatureVector &sample);

/// Swap-test output between the discriminator's reference state D|0> and `input`.
[[nodiscard]] double qugan_disc_out(const QuganModel &model, std::span<const double> disc_params,
                                    const StateVector &input);

/// G|0>, or G applied to the angle-embedded noise when noise is given.
[[nodiscard]] StateVector generator_state(const Circuit &generator, std::span<const double> params,
                                          const FeatureVector *noise = nullptr,
                                          double angle_scale = std::numbers::pi);

/// One qubit per pixel, one trainable angle each. No entangling gates.
struct ProductIqgan {
    std::size_t n_pixels = 0;
    /// Standard deviation of the additive angle noise; 0 disables it.
    double noise_stddev = 0.0;
    double angle_scale = std::numbers::pi;

    [[nodiscard]] std::size_t n_params() const { return n_pixels; }
};

/// Decoded pixels of RY(theta_p)|0>: sin^2(theta_p / 2) read back through angle_decode.
[[nodiscard]] FeatureVector product_iqgan_image(const ProductIqgan &model,
                                                std::span<const double> params);

} // namespace qgan
