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
 * @file toycompare.hpp
 * Classical-versus-quantum toy: reproduce one random 8x8 image from noise
 * with (a) a bias-only network whose channels never mix, (b) a 6-qubit
 * QVC read out as 64 basis probabilities and (c) the same with 6 ancilla
 * qubits traced out.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "qgan/qcore.hpp"
#include "qgan/training.hpp"

namespace qgan {

inline constexpr std::size_t kToyPixels = 64;
inline constexpr std::size_t kToyVisible = 6;

struct ToyTarget {
    std::vector<double> pixels;      // uniform in [0, 1]
    std::vector<double> normalized;  // pixels / sum
    double sum = 0.0;
};

[[nodiscard]] ToyTarget toy_target(std::uint64_t seed);

enum class Activation { kSigmoid, kTanh };

[[nodiscard]] Activation parse_activation(const std::string &name);
[[nodiscard]] const char *activation_name(Activation a);

/// Channel i feeds only channel i of the next layer, with weight 1. The
/// trainable biases are one row per hidden layer plus one for the output.
struct ConstrainedNet {
    std::size_t depth = 1;
    Activation activation = Activation::kSigmoid;
    std::vector<std::vector<double>> biases;  // depth + 1 rows of kToyPixels

    [[nodiscard]] std::size_t n_params() const { return (depth + 1) * kToyPixels; }
};

/// Zero biases.
[[nodiscard]] ConstrainedNet make_net(std::size_t depth, Activation activation);

/// out_i = clamp(act(...act(z_i + b1_i)... + bD_i) + bout_i, 0, 1).
[[nodiscard]] std::vector<double> net_forward(const ConstrainedNet &net,
                                              std::span<const double> noise);

/// MSE against `target` and its exact gradient, laid out row by row like
/// the biases. Clamped outputs pass zero gradient.
struct NetGradient {
    double mse;
    std::vector<double> grad;
};
[[nodiscard]] NetGradient net_mse_gradient(const ConstrainedNet &net, std::span<const double> noise,
                                           std::span<const double> target);

struct ToyQuantumGen {
    std::size_t n_ancilla = 0;
    std::size_t layers = 4;
    Circuit circuit{1};

    [[nodiscard]] std::size_t n_qubits() const { return kToyVisible + n_ancilla; }
    [[nodiscard]] std::size_t n_params() const { return circuit.n_params(); }
};

[[nodiscard]] ToyQuantumGen make_toy_gen(std::size_t n_ancilla, std::size_t layers = 4);

/// Basis-outcome probabilities of the 6 visible qubits (qubits 0..5) after
/// angle-embedding the noise on every qubit and running the QVC.
[[nodiscard]] std::vector<double> toy_quantum_image(const ToyQuantumGen &gen,
                                                    std::span<const double> params,
                                                    std::span<const double> noise,
                                                    double noise_angle_scale = std::numbers::pi);

/// MSE of the visible probabilities against `target` plus its gradient.
struct QuantumGradient {
    double mse;
    std::vector<double> grad;
};
[[nodiscard]] QuantumGradient toy_quantum_gradient(const ToyQuantumGen &gen,
                                                   std::span<const double> params,
                                                   std::span<const double> noise,
                                                   std::span<const double> target,
                                                   double noise_angle_scale = std::numbers::pi);

struct ToyConfig {
    std::size_t classical_epochs = 2000;
    std::size_t quantum_epochs = 2000;
    double classical_lr = 0.05;
    double quantum_lr = 0.02;
    std::size_t net_depth = 1;
    Activation activation = Activation::kSigmoid;
    std::size_t layers = 4;
    std::size_t n_eval_noise = 20;
    std::size_t n_samples = 5;
    std::size_t trace_every = 50;
    double init_scale = 0.1;
    /// Radians per unit of noise in the quantum models' angle embedding.
    double noise_angle_scale = std::numbers::pi;
    /// Ancilla count of the mixed-output model; 0 skips it.
    std::size_t n_ancilla = kToyVisible;
};

struct MseTrace {
    std::vector<std::size_t> epochs;
    std::vector<double> mse;

    [[nodiscard]] std::string to_csv() const;
};

struct ToyModelResult {
    std::string name;
    std::size_t n_params = 0;
    std::vector<double> params;
    /// Mean over the evaluation noise set of the per-image MSE against the
    /// raw target (quantum outputs are rescaled by the target sum).
    double mse_raw = 0.0;
    /// Same, for quantum models measured on the normalized target.
    double mse_normalized = 0.0;
    /// Mean over pixels of the population standard deviation across the
    /// evaluation noise set (raw scale).
    double output_spread = 0.0;
    std::vector<double> image;                 // output at the first evaluation noise
    std::vector<std::vector<double>> samples;  // outputs for fresh noise vectors
    MseTrace trace;
};

struct ToyReport {
    std::uint64_t seed = 0;
    ToyConfig config;
    ToyTarget target;
    std::vector<ToyModelResult> models;  // classical, quantum_pure, quantum_ancilla

    [[nodiscard]] const ToyModelResult &model(const std::string &name) const;
    [[nodiscard]] std::string to_json() const;
};

/// Trains one classical net on the raw target with fresh uniform noise each epoch.
[[nodiscard]] ToyModelResult train_net(const ToyTarget &target, const ToyConfig &cfg,
                                       std::uint64_t seed);

/// Trains one quantum generator on the normalized target.
[[nodiscard]] ToyModelResult train_toy_quantum(std::size_t n_ancilla, const ToyTarget &target,
                                               const ToyConfig &cfg, std::uint64_t seed);

[[nodiscard]] ToyReport run_comparison(std::uint64_t seed, const ToyConfig &cfg);

/// report.json, target.pgm, <model>.pgm, <model>_sample<i>.pgm and
/// <model>_mse.csv in `dir`.
void write_comparison(const ToyReport &report, const std::filesystem::path &dir);

} // namespace qgan
