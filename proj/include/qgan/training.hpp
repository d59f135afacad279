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
 * @file training.hpp
 * Losses, parameter-shift gradients, optimizers and the training loops for
 * the IQGAN, QuGAN and qubit-per-pixel models.
 *
 * Every loop is single-threaded and fully determined by TrainConfig::seed:
 * the seed drives parameter initialisation, per-epoch shuffling and noise.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgan/embedding.hpp"
#include "qgan/models.hpp"
#include "qgan/qcore.hpp"
#include "qgan/random.hpp"

namespace qgan {

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::kAdam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

enum class NoiseKind { kNone, kUniform01, kGaussian };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::kNone;
    double sigma = 0.0;
};

/// Parses "none", "uniform01" or "gaussian:<sigma>".
[[nodiscard]] NoiseSpec parse_noise(const std::string &text);
[[nodiscard]] std::string noise_to_string(const NoiseSpec &noise);

/// One generator input of `n` features: uniform in [0, 1), or 0.5 + N(0, sigma)
/// clamped to [0, 1] for gaussian noise.
[[nodiscard]] FeatureVector draw_feature_noise(Rng &rng, const NoiseSpec &noise, std::size_t n);

/// Generator objective: -log D(G) (non-saturating) or log(1 - D(G)).
enum class GeneratorLoss { kNonSaturating, kSaturating };

/// How a swap-test probability becomes a discriminator output. The swap test
/// floors at 1/2, so kRescaled maps P(0) to 2 P(0) - 1 (the squared overlap).
enum class SwapReadout { kRescaled, kRaw };

struct TrainConfig {
    std::size_t epochs = 1;
    std::size_t batch_size = 1;
    double learning_rate = 0.01;
    OptimizerConfig optimizer;
    std::uint64_t seed = 0;
    std::size_t log_every_batches = 40;
    NoiseSpec noise;
    /// Initial parameters are uniform in [-init_scale, init_scale].
    double init_scale = 0.1;
    std::size_t disc_steps = 1;
    std::size_t gen_steps = 1;
    GeneratorLoss generator_loss = GeneratorLoss::kNonSaturating;
    SwapReadout readout = SwapReadout::kRescaled;

    /// Throws InvalidArgument naming the offending field.
    void validate() const;
};

/// Plain gradient-descent step rule (SGD or Adam with bias correction).
class Optimizer {
  public:
    Optimizer(const OptimizerConfig &config, double learning_rate, std::size_t n_params);

    /// params -= update(grad).
    void step(std::vector<double> &params, std::span<const double> grad);

  private:
    OptimizerConfig config_;
    double lr_;
    std::size_t t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

struct LossRow {
    std::size_t batch = 0;
    std::optional<double> loss_d;
    double loss_g = 0.0;
};

struct LossTrace {
    std::vector<LossRow> rows;

    /// Header `batch,loss_d,loss_g`; an absent discriminator loss is an empty field.
    [[nodiscard]] std::string to_csv() const;
    static LossTrace from_csv(const std::string &text);
};

/// Number of rows a trace carries: one initial row plus one per full logging period.
[[nodiscard]] std::size_t expected_trace_rows(std::size_t total_batches, std::size_t log_every);

inline constexpr double kLogFloor = 1e-12;

/// mean(log(clamp(d_real))) + mean(log(clamp(1 - d_fake))), clamp floor 1e-12.
[[nodiscard]] double gan_value(std::span<const double> d_real, std::span<const double> d_fake);

/// Evaluates some scalar (or vector) of circuit expectations with one gate
/// occurrence shifted.
using ShiftedLoss = std::function<double(const GateShift &)>;
using ShiftedOutputs = std::function<std::vector<double>(const GateShift &)>;

/// Two-term parameter-shift rule assembled per gate occurrence:
/// dL/dtheta_k = sum_g scale_g * 1/2 [L(+pi/2 at g) - L(-pi/2 at g)].
/// Valid for expectation-linear losses of RY/RYY circuits.
[[nodiscard]] std::vector<double> parameter_shift_grad(const ShiftedLoss &loss_at,
                                                       const Circuit &circuit,
                                                       std::span<const double> params);

/// Vector version: returns J[output][param].
[[nodiscard]] std::vector<std::vector<double>>
parameter_shift_jacobian(const ShiftedOutputs &outputs_at, const Circuit &circuit,
                         std::span<const double> params);

/// Called at every logged batch with the current (generator) parameters.
using LogHook = std::function<void(std::size_t batch, std::span<const double> params)>;

/// Uniform [-scale, scale] initial parameters.
[[nodiscard]] std::vector<double> init_params(Rng &rng, std::size_t n, double scale);

// ------------------------------------------------------------------ IQGAN

/// mean over samples of (1 - swap-test P(0)).
[[nodiscard]] double iqgan_loss(const IqganModel &model, std::span<const double> params,
                                std::span<const FeatureVector> data);

struct IqganTraining {
    std::vector<double> params;
    LossTrace trace;
};

[[nodiscard]] IqganTraining train_iqgan(const IqganModel &model,
                                        std::span<const FeatureVector> data,
                                        const TrainConfig &cfg, const LogHook &hook = {});

// ------------------------------------------------------------------ QuGAN

struct QuganLosses {
    double value;           // V(D, G), ascended by the discriminator
    double generator_loss;  // per cfg.generator_loss
};

struct QuganTraining {
    std::vector<double> disc_params;
    std::vector<double> gen_params;
    LossTrace trace;
};

/// Discriminator output for one input state under the configured readout.
[[nodiscard]] double disc_readout(const StateVector &delta, const StateVector &input,
                                  SwapReadout readout);

[[nodiscard]] QuganLosses qugan_losses(const QuganModel &model, std::span<const double> disc_params,
                                       std::span<const double> gen_params,
                                       std::span<const StateVector> real_states,
                                       std::span<const FeatureVector> noise,
                                       const TrainConfig &cfg);

[[nodiscard]] QuganTraining train_qugan(const QuganModel &model,
                                        std::span<const FeatureVector> data,
                                        const TrainConfig &cfg, const LogHook &hook = {});

// --------------------------------------------------------- Product IQGAN

/// Per-pixel fidelity |<RY(data)0 | RY(theta)0>|^2 = cos^2((theta - data) / 2).
[[nodiscard]] double qubit_fidelity(double theta, double data_angle);

/// mean over pixels and images of (1 - fidelity), noise-free.
[[nodiscard]] double product_loss(const ProductIqgan &model, std::span<const double> angles,
                                  std::span<const FeatureVector> images);

struct ProductTraining {
    std::vector<double> angles;
    LossTrace trace;
};

/// Each pixel's angle follows its own objective mean_i (1 - fidelity_ip);
/// pixels do not share a normalisation.
[[nodiscard]] ProductTraining train_product(const ProductIqgan &model,
                                            std::span<const FeatureVector> images,
                                            const TrainConfig &cfg, const LogHook &hook = {});

} // namespace qgan
