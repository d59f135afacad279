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
#include "qgan/training.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qgan/error.hpp"

namespace qgan {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

double safe_log(double x) { return std::log(std::max(x, kLogFloor)); }

// d/dx log(max(x, floor)).
double safe_log_slope(double x) { return x > kLogFloor ? 1.0 / x : 0.0; }

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Consecutive mini-batches over a freshly shuffled index list.
std::vector<std::vector<std::size_t>> epoch_batches(Rng &rng, std::size_t n, std::size_t batch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < n; start += batch) {
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + batch)));
    }
    return out;
}

void check_widths(std::span<const FeatureVector> data, std::size_t expected, const char *who) {
    if (data.empty()) {
        throw InvalidArgument(std::string(who) + ": training data is empty");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].size() != expected) {
            throw InvalidArgument(std::string(who) + ": sample " + std::to_string(i) + " has " +
                                  std::to_string(data[i].size()) + " features, model expects " +
                                  std::to_string(expected));
        }
    }
}

void record(LossTrace &trace, std::size_t batch, std::optional<double> loss_d, double loss_g) {
    trace.rows.push_back(LossRow{batch, loss_d, loss_g});
}

} // namespace

// ------------------------------------------------------------------ config

FeatureVector draw_feature_noise(Rng &rng, const NoiseSpec &noise, std::size_t n) {
    std::vector<double> v(n);
    for (double &x : v) {
        if (noise.kind == NoiseKind::kUniform01) {
            x = rng.uniform();
        } else {
            // Gaussian feature noise is centred in the feature range.
            x = std::clamp(0.5 + rng.normal(0.0, noise.sigma), 0.0, 1.0);
        }
    }
    return FeatureVector(std::move(v));
}

NoiseSpec parse_noise(const std::string &text) {
    if (text == "none" || text.empty()) {
        return {};
    }
    if (text == "uniform01") {
        return {NoiseKind::kUniform01, 0.0};
    }
    const std::string prefix = "gaussian:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string rest = text.substr(prefix.size());
        std::size_t used = 0;
        double sigma = 0.0;
        try {
            sigma = std::stod(rest, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != rest.size() || rest.empty() || !(sigma > 0.0)) {
            throw InvalidArgument("noise: bad gaussian sigma in '" + text + "'");
        }
        return {NoiseKind::kGaussian, sigma};
    }
    throw InvalidArgument("noise: expected none, uniform01 or gaussian:<sigma>, got '" + text + "'");
}

std::string noise_to_string(const NoiseSpec &noise) {
    switch (noise.kind) {
    case NoiseKind::kNone:
        return "none";
    case NoiseKind::kUniform01:
        return "uniform01";
    case NoiseKind::kGaussian:
        // Shortest form that reads back to the same double.
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, noise.sigma);
        return "gaussian:" + std::string(buf, res.ptr);
    }
    return "none";
}

void TrainConfig::validate() const {
    if (epochs < 1) {
        throw InvalidArgument("epochs must be >= 1");
    }
    if (batch_size < 1) {
        throw InvalidArgument("batch_size must be >= 1");
    }
    if (!(learning_rate > 0.0)) {
        throw InvalidArgument("learning_rate must be > 0");
    }
    if (log_every_batches < 1) {
        throw InvalidArgument("log_every must be >= 1");
    }
    if (disc_steps < 1 || gen_steps < 1) {
        throw InvalidArgument("disc_steps and gen_steps must be >= 1");
    }
    if (init_scale < 0.0) {
        throw InvalidArgument("init_scale must be >= 0");
    }
}

// --------------------------------------------------------------- optimizer

Optimizer::Optimizer(const OptimizerConfig &config, double learning_rate, std::size_t n_params)
    : config_(config), lr_(learning_rate), m_(n_params, 0.0), v_(n_params, 0.0) {}

void Optimizer::step(std::vector<double> &params, std::span<const double> grad) {
    if (grad.size() != params.size() || params.size() != m_.size()) {
        throw InvalidArgument("optimizer: gradient length mismatch");
    }
    if (config_.kind == OptimizerKind::kSgd) {
        for (std::size_t k = 0; k < params.size(); ++k) {
            params[k] -= lr_ * grad[k];
        }
        return;
    }
    ++t_;
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
        m_[k] = b1 * m_[k] + (1.0 - b1) * grad[k];
        v_[k] = b2 * v_[k] + (1.0 - b2) * grad[k] * grad[k];
        params[k] -= lr_ * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + config_.eps);
    }
}

// ------------------------------------------------------------------- trace

std::string LossTrace::to_csv() const {
    std::string out = "batch,loss_d,loss_g\n";
    for (const auto &r : rows) {
        out += std::to_string(r.batch);
        out += ',';
        if (r.loss_d) {
            out += format_double(*r.loss_d);
        }
        out += ',';
        out += format_double(r.loss_g);
        out += '\n';
    }
    return out;
}

LossTrace LossTrace::from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "batch,loss_d,loss_g") {
        throw FormatError("loss trace: missing header 'batch,loss_d,loss_g'");
    }
    LossTrace trace;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw FormatError("loss trace: line " + std::to_string(lineno) + " needs 3 fields");
        }
        try {
            LossRow row;
            row.batch = std::stoul(line.substr(0, c1));
            const std::string d = line.substr(c1 + 1, c2 - c1 - 1);
            if (!d.empty()) {
                row.loss_d = std::stod(d);
            }
            row.loss_g = std::stod(line.substr(c2 + 1));
            trace.rows.push_back(row);
        } catch (const std::exception &) {
            throw FormatError("loss trace: non-numeric field on line " + std::to_string(lineno));
        }
    }
    return trace;
}

std::size_t expected_trace_rows(std::size_t total_batches, std::size_t log_every) {
    return total_batches / log_every + 1;
}

// -------------------------------------------------------------------- loss

double gan_value(std::span<const double> d_real, std::span<const double> d_fake) {
    if (d_real.empty() || d_fake.empty()) {
        throw InvalidArgument("gan_value: empty probability list");
    }
    auto check = [](double p) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("gan_value: probability " + std::to_string(p) +
                                  " outside [0, 1]");
        }
    };
    double real = 0.0;
    for (double p : d_real) {
        check(p);
        real += safe_log(p);
    }
    double fake = 0.0;
    for (double p : d_fake) {
        check(p);
        fake += safe_log(1.0 - p);
    }
    return real / static_cast<double>(d_real.size()) + fake / static_cast<double>(d_fake.size());
}

// -------------------------------------------------------- parameter shift

std::vector<std::vector<double>> parameter_shift_jacobian(const ShiftedOutputs &outputs_at,
                                                          const Circuit &circuit,
                                                          std::span<const double> params) {
    if (params.size() != circuit.n_params()) {
        throw InvalidArgument("parameter_shift: expected " + std::to_string(circuit.n_params()) +
                              " parameters, got " + std::to_string(params.size()));
    }
    std::vector<std::vector<double>> jac;
    const auto gates = circuit.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (!gates[g].param) {
            continue;
        }
        const std::vector<double> plus = outputs_at(GateShift{g, kHalfPi});
        const std::vector<double> minus = outputs_at(GateShift{g, -kHalfPi});
        if (jac.empty()) {
            jac.assign(plus.size(), std::vector<double>(params.size(), 0.0));
        }
        const ParamRef &ref = *gates[g].param;
        for (std::size_t o = 0; o < plus.size(); ++o) {
            jac[o][ref.index] += ref.scale * 0.5 * (plus[o] - minus[o]);
        }
    }
    if (jac.empty()) {
        jac.assign(outputs_at(GateShift{}).size(), std::vector<double>(params.size(), 0.0));
    }
    return jac;
}

std::vector<double> parameter_shift_grad(const ShiftedLoss &loss_at, const Circuit &circuit,
                                         std::span<const double> params) {
    auto jac = parameter_shift_jacobian(
        [&](const GateShift &s) { return std::vector<double>{loss_at(s)}; }, circuit, params);
    return std::move(jac.front());
}

std::vector<double> init_params(Rng &rng, std::size_t n, double scale) {
    std::vector<double> p(n);
    for (double &x : p) {
        x = rng.uniform(-scale, scale);
    }
    return p;
}

// ------------------------------------------------------------------- IQGAN

double iqgan_loss(const IqganModel &model, std::span<const double> params,
                  std::span<const FeatureVector> data) {
    check_widths(data, model.width(), "iqgan_loss");
    const StateVector gamma = run(model.generator, params.subspan(0, model.n_generator_params()));
    double total = 0.0;
    for (const auto &f : data) {
        total += 1.0 - swap_test_overlap(encode_sample(model, params, f), gamma);
    }
    return total / static_cast<double>(data.size());
}

namespace {

std::vector<double> iqgan_gradient(const IqganModel &model, std::span<const double> params,
                                   std::span<const FeatureVector> data,
                                   const std::vector<std::size_t> &batch) {
    const std::size_t n_gen = model.n_generator_params();
    const auto gen_params = params.subspan(0, n_gen);
    const double inv_b = 1.0 / static_cast<double>(batch.size());

    std::vector<StateVector> xs;
    xs.reserve(batch.size());
    for (std::size_t i : batch) {
        xs.push_back(encode_sample(model, params, data[i]));
    }
    const StateVector zero(model.width());
    const std::vector<double> gen_grad = parameter_shift_grad(
        [&](const GateShift &s) {
            const StateVector gamma = run(model.generator, gen_params, zero, s);
            double l = 0.0;
            for (const auto &x : xs) {
                l += 1.0 - swap_test_overlap(x, gamma);
            }
            return l * inv_b;
        },
        model.generator, gen_params);

    std::vector<double> grad(params.size(), 0.0);
    std::copy(gen_grad.begin(), gen_grad.end(), grad.begin());
    if (model.trainable_encoder) {
        const StateVector gamma = run(model.generator, gen_params);
        const auto offsets = params.subspan(n_gen);
        for (std::size_t i : batch) {
            const Circuit enc = encoder_circuit(model, data[i]);
            const std::vector<double> g = parameter_shift_grad(
                [&](const GateShift &s) {
                    return (1.0 - swap_test_overlap(run(enc, offsets, zero, s), gamma)) * inv_b;
                },
                enc, offsets);
            for (std::size_t k = 0; k < g.size(); ++k) {
                grad[n_gen + k] += g[k];
            }
        }
    }
    return grad;
}

} // namespace

IqganTraining train_iqgan(const IqganModel &model, std::span<const FeatureVector> data,
                          const TrainConfig &cfg, const LogHook &hook) {
    cfg.validate();
    check_widths(data, model.width(), "train_iqgan");
    if (cfg.noise.kind != NoiseKind::kNone) {
        throw InvalidArgument("train_iqgan: the IQGAN generator takes no input noise");
    }
    Rng rng(cfg.seed);
    IqganTraining out;
    out.params = init_params(rng, model.n_params(), cfg.init_scale);
    Optimizer opt(cfg.optimizer, cfg.learning_rate, model.n_params());

    auto log_row = [&](std::size_t batch) {
        record(out.trace, batch, std::nullopt, iqgan_loss(model, out.params, data));
        if (hook) {
            hook(batch, std::span<const double>(out.params).subspan(0, model.n_generator_params()));
        }
    };
    log_row(0);
    std::size_t batch_count = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto &batch : epoch_batches(rng, data.size(), cfg.batch_size)) {
            opt.step(out.params, iqgan_gradient(model, out.params, data, batch));
            if (++batch_count % cfg.log_every_batches == 0) {
                log_row(batch_count);
            }
        }
    }
    return out;
}

// ------------------------------------------------------------------- QuGAN

double disc_readout(const StateVector &delta, const StateVector &input, SwapReadout readout) {
    const double p0 = swap_test_overlap(delta, input);
    if (readout == SwapReadout::kRaw) {
        return std::clamp(p0, 0.0, 1.0);
    }
    return std::clamp(2.0 * p0 - 1.0, 0.0, 1.0);
}

namespace {

std::vector<StateVector> fake_states(const Circuit &gen, std::span<const double> gen_params,
                                     std::span<const FeatureVector> noise,
                                     const GateShift &shift = {}) {
    std::vector<StateVector> out;
    if (noise.empty()) {
        out.push_back(run(gen, gen_params, StateVector(gen.n_qubits()), shift));
        return out;
    }
    const EmbeddingSpec spec{EmbeddingKind::kAngle, gen.n_qubits(), std::numbers::pi};
    for (const auto &z : noise) {
        out.push_back(run(gen, gen_params, angle_embed(z, spec), shift));
    }
    return out;
}

double generator_objective(double d_fake, GeneratorLoss kind) {
    return kind == GeneratorLoss::kNonSaturating ? -safe_log(d_fake) : safe_log(1.0 - d_fake);
}

double generator_slope(double d_fake, GeneratorLoss kind) {
    return kind == GeneratorLoss::kNonSaturating ? -safe_log_slope(d_fake)
                                                 : -safe_log_slope(1.0 - d_fake);
}

std::vector<FeatureVector> draw_noise_batch(Rng &rng, const NoiseSpec &noise, std::size_t count,
                                            std::size_t width) {
    std::vector<FeatureVector> out;
    if (noise.kind == NoiseKind::kNone) {
        return out;
    }
    for (std::size_t j = 0; j < count; ++j) {
        out.push_back(draw_feature_noise(rng, noise, width));
    }
    return out;
}

} // namespace

QuganLosses qugan_losses(const QuganModel &model, std::span<const double> disc_params,
                         std::span<const double> gen_params,
                         std::span<const StateVector> real_states,
                         std::span<const FeatureVector> noise, const TrainConfig &cfg) {
    const StateVector delta = run(model.discriminator, disc_params);
    std::vector<double> d_real;
    for (const auto &x : real_states) {
        d_real.push_back(disc_readout(delta, x, cfg.readout));
    }
    std::vector<double> d_fake;
    double lg = 0.0;
    for (const auto &g : fake_states(model.generator, gen_params, noise)) {
        d_fake.push_back(disc_readout(delta, g, cfg.readout));
        lg += generator_objective(d_fake.back(), cfg.generator_loss);
    }
    return {gan_value(d_real, d_fake), lg / static_cast<double>(d_fake.size())};
}

QuganTraining train_qugan(const QuganModel &model, std::span<const FeatureVector> data,
                          const TrainConfig &cfg, const LogHook &hook) {
    cfg.validate();
    check_widths(data, model.width(), "train_qugan");
    const std::size_t width = model.width();
    std::vector<StateVector> real;
    real.reserve(data.size());
    for (const auto &f : data) {
        real.push_back(encode_fixed(model.encoder, f));
    }

    Rng rng(cfg.seed);
    QuganTraining out;
    out.disc_params = init_params(rng, model.discriminator.n_params(), cfg.init_scale);
    out.gen_params = init_params(rng, model.generator.n_params(), cfg.init_scale);
    Optimizer opt_d(cfg.optimizer, cfg.learning_rate, out.disc_params.size());
    Optimizer opt_g(cfg.optimizer, cfg.learning_rate, out.gen_params.size());

    // Logged losses use a fixed noise set so rows are comparable over time.
    Rng eval_rng(cfg.seed ^ 0x5bd1e995ULL);
    const auto eval_noise = draw_noise_batch(eval_rng, cfg.noise, cfg.batch_size, width);

    auto log_row = [&](std::size_t batch) {
        const QuganLosses l =
            qugan_losses(model, out.disc_params, out.gen_params, real, eval_noise, cfg);
        record(out.trace, batch, l.value, l.generator_loss);
        if (hook) {
            hook(batch, out.gen_params);
        }
    };
    log_row(0);

    const StateVector zero(width);
    std::size_t batch_count = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto &batch : epoch_batches(rng, data.size(), cfg.batch_size)) {
            // Step 1: the discriminator ascends V(D, G).
            for (std::size_t s = 0; s < cfg.disc_steps; ++s) {
                const auto noise = draw_noise_batch(rng, cfg.noise, batch.size(), width);
                const auto fakes = fake_states(model.generator, out.gen_params, noise);
                const StateVector delta = run(model.discriminator, out.disc_params);
                auto outputs = [&](const StateVector &d) {
                    std::vector<double> o;
                    for (std::size_t i : batch) {
                        o.push_back(disc_readout(d, real[i], cfg.readout));
                    }
                    for (const auto &g : fakes) {
                        o.push_back(disc_readout(d, g, cfg.readout));
                    }
                    return o;
                };
                const std::vector<double> base = outputs(delta);
                const auto jac = parameter_shift_jacobian(
                    [&](const GateShift &sh) {
                        return outputs(run(model.discriminator, out.disc_params, zero, sh));
                    },
                    model.discriminator, out.disc_params);
                std::vector<double> grad(out.disc_params.size(), 0.0);
                const double wr = 1.0 / static_cast<double>(batch.size());
                const double wf = 1.0 / static_cast<double>(fakes.size());
                for (std::size_t o = 0; o < base.size(); ++o) {
                    // Gradient of -V, which the optimizer descends.
                    const double coeff = o < batch.size() ? -wr * safe_log_slope(base[o])
                                                          : wf * safe_log_slope(1.0 - base[o]);
                    for (std::size_t k = 0; k < grad.size(); ++k) {
                        grad[k] += coeff * jac[o][k];
                    }
                }
                opt_d.step(out.disc_params, grad);
            }
            // Step 2: the generator descends its loss against the updated D.
            for (std::size_t s = 0; s < cfg.gen_steps; ++s) {
                const auto noise = draw_noise_batch(rng, cfg.noise, batch.size(), width);
                const StateVector delta = run(model.discriminator, out.disc_params);
                auto outputs = [&](const GateShift &sh) {
                    std::vector<double> o;
                    for (const auto &g : fake_states(model.generator, out.gen_params, noise, sh)) {
                        o.push_back(disc_readout(delta, g, cfg.readout));
                    }
                    return o;
                };
                const std::vector<double> base = outputs(GateShift{});
                const auto jac = parameter_shift_jacobian(outputs, model.generator, out.gen_params);
                std::vector<double> grad(out.gen_params.size(), 0.0);
                const double wf = 1.0 / static_cast<double>(base.size());
                for (std::size_t o = 0; o < base.size(); ++o) {
                    const double coeff = wf * generator_slope(base[o], cfg.generator_loss);
                    for (std::size_t k = 0; k < grad.size(); ++k) {
                        grad[k] += coeff * jac[o][k];
                    }
                }
                opt_g.step(out.gen_params, grad);
            }
            if (++batch_count % cfg.log_every_batches == 0) {
                log_row(batch_count);
            }
        }
    }
    return out;
}

// ----------------------------------------------------------- Product IQGAN

double qubit_fidelity(double theta, double data_angle) {
    const double c = std::cos((theta - data_angle) / 2);
    return c * c;
}

double product_loss(const ProductIqgan &model, std::span<const double> angles,
                    std::span<const FeatureVector> images) {
    check_widths(images, model.n_pixels, "product_loss");
    if (angles.size() != model.n_pixels) {
        throw InvalidArgument("product_loss: angle count mismatch");
    }
    double total = 0.0;
    for (const auto &img : images) {
        for (std::size_t p = 0; p < model.n_pixels; ++p) {
            total += 1.0 - qubit_fidelity(angles[p], model.angle_scale * img[p]);
        }
    }
    return total / static_cast<double>(images.size() * model.n_pixels);
}

ProductTraining train_product(const ProductIqgan &model, std::span<const FeatureVector> images,
                              const TrainConfig &cfg, const LogHook &hook) {
    cfg.validate();
    if (images.empty()) {
        throw InvalidArgument("train_product: no images");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != images.front().size()) {
            throw InvalidArgument("train_product: image " + std::to_string(i) +
                                  " has a different pixel count (ragged dataset)");
        }
    }
    check_widths(images, model.n_pixels, "train_product");

    NoiseSpec noise = cfg.noise;
    if (noise.kind == NoiseKind::kNone && model.noise_stddev > 0.0) {
        noise = {NoiseKind::kGaussian, model.noise_stddev};
    }

    Rng rng(cfg.seed);
    ProductTraining out;
    out.angles = init_params(rng, model.n_pixels, cfg.init_scale);
    Optimizer opt(cfg.optimizer, cfg.learning_rate, model.n_pixels);

    auto log_row = [&](std::size_t batch) {
        record(out.trace, batch, std::nullopt, product_loss(model, out.angles, images));
        if (hook) {
            hook(batch, out.angles);
        }
    };
    log_row(0);

    std::size_t batch_count = 0;
    std::vector<double> grad(model.n_pixels);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto &batch : epoch_batches(rng, images.size(), cfg.batch_size)) {
            std::fill(grad.begin(), grad.end(), 0.0);
            const double inv_b = 1.0 / static_cast<double>(batch.size());
            for (std::size_t i : batch) {
                for (std::size_t p = 0; p < model.n_pixels; ++p) {
                    double eps = 0.0;
                    if (noise.kind == NoiseKind::kGaussian) {
                        eps = model.angle_scale * rng.normal(0.0, noise.sigma);
                    } else if (noise.kind == NoiseKind::kUniform01) {
                        eps = model.angle_scale * rng.uniform();
                    }
                    const double theta = out.angles[p] + eps;
                    const double data = model.angle_scale * images[i][p];
                    // Two-term shift of the single-qubit fidelity; loss = 1 - fidelity.
                    const double d = 0.5 * (qubit_fidelity(theta + kHalfPi, data) -
                                            qubit_fidelity(theta - kHalfPi, data));
                    grad[p] -= d * inv_b;
                }
            }
            opt.step(out.angles, grad);
            if (++batch_count % cfg.log_every_batches == 0) {
                log_row(batch_count);
            }
        }
    }
    return out;
}

} // namespace qgan
