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
#include "qgan/toycompare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qgan/datapipe.hpp"
#include "qgan/error.hpp"
#include "qgan/models.hpp"
#include "qgan/random.hpp"

namespace qgan {

namespace {

// Independent streams derived from the run seed.
constexpr std::uint64_t kNetStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kPureStream = 0xbf58476d1ce4e5b9ULL;
constexpr std::uint64_t kAncillaStream = 0x94d049bb133111ebULL;
constexpr std::uint64_t kEvalStream = 0x2545f4914f6cdd1dULL;
constexpr std::uint64_t kSampleStream = 0x5851f42d4c957f2dULL;

double act(Activation a, double x) {
    return a == Activation::kSigmoid ? 1.0 / (1.0 + std::exp(-x)) : std::tanh(x);
}

// Derivative expressed through the activation's output y.
double act_slope(Activation a, double y) {
    return a == Activation::kSigmoid ? y * (1.0 - y) : 1.0 - y * y;
}

std::vector<double> uniform_vector(Rng &rng, std::size_t n) {
    std::vector<double> v(n);
    for (double &x : v) {
        x = rng.uniform();
    }
    return v;
}

std::vector<std::vector<double>> noise_set(std::uint64_t seed, std::size_t count, std::size_t n) {
    Rng rng(seed);
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(uniform_vector(rng, n));
    }
    return out;
}

double mse(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return s / static_cast<double>(a.size());
}

std::vector<double> scaled(std::vector<double> v, double k) {
    for (double &x : v) {
        x *= k;
    }
    return v;
}

/// Fills the evaluation fields of `r` from outputs on the evaluation noise
/// set; `to_raw` maps a model output onto the raw target scale.
void summarise(ToyModelResult &r, const std::vector<std::vector<double>> &outputs,
               const ToyTarget &target, double to_raw) {
    double raw = 0.0, norm = 0.0;
    for (const auto &o : outputs) {
        raw += mse(scaled(o, to_raw), target.pixels);
        norm += mse(scaled(o, to_raw / target.sum), target.normalized);
    }
    const auto n = static_cast<double>(outputs.size());
    r.mse_raw = raw / n;
    r.mse_normalized = norm / n;
    double spread = 0.0;
    for (std::size_t p = 0; p < kToyPixels; ++p) {
        double m = 0.0, m2 = 0.0;
        for (const auto &o : outputs) {
            const double v = o[p] * to_raw;
            m += v;
            m2 += v * v;
        }
        m /= n;
        spread += std::sqrt(std::max(0.0, m2 / n - m * m));
    }
    r.output_spread = spread / static_cast<double>(kToyPixels);
    r.image = scaled(outputs.front(), to_raw);
}

} // namespace

ToyTarget toy_target(std::uint64_t seed) {
    Rng rng(seed);
    ToyTarget t;
    t.pixels = uniform_vector(rng, kToyPixels);
    for (double p : t.pixels) {
        t.sum += p;
    }
    t.normalized = scaled(t.pixels, 1.0 / t.sum);
    return t;
}

Activation parse_activation(const std::string &name) {
    if (name == "sigmoid") {
        return Activation::kSigmoid;
    }
    if (name == "tanh") {
        return Activation::kTanh;
    }
    throw InvalidArgument("activation must be sigmoid or tanh, got '" + name + "'");
}

const char *activation_name(Activation a) { return a == Activation::kSigmoid ? "sigmoid" : "tanh"; }

// ---------------------------------------------------------- classical net

ConstrainedNet make_net(std::size_t depth, Activation activation) {
    if (depth < 1) {
        throw InvalidArgument("constrained net needs at least one hidden layer");
    }
    ConstrainedNet net;
    net.depth = depth;
    net.activation = activation;
    net.biases.assign(depth + 1, std::vector<double>(kToyPixels, 0.0));
    return net;
}

std::vector<double> net_forward(const ConstrainedNet &net, std::span<const double> noise) {
    if (noise.size() != kToyPixels) {
        throw InvalidArgument("net_forward: noise has " + std::to_string(noise.size()) +
                              " entries, expected 64");
    }
    std::vector<double> out(kToyPixels);
    for (std::size_t i = 0; i < kToyPixels; ++i) {
        double h = noise[i];
        for (std::size_t l = 0; l < net.depth; ++l) {
            h = act(net.activation, h + net.biases[l][i]);
        }
        out[i] = std::clamp(h + net.biases[net.depth][i], 0.0, 1.0);
    }
    return out;
}

NetGradient net_mse_gradient(const ConstrainedNet &net, std::span<const double> noise,
                             std::span<const double> target) {
    if (noise.size() != kToyPixels || target.size() != kToyPixels) {
        throw InvalidArgument("net_mse_gradient: expected 64 noise and target values");
    }
    NetGradient g{0.0, std::vector<double>(net.n_params(), 0.0)};
    std::vector<double> hs(net.depth);
    for (std::size_t i = 0; i < kToyPixels; ++i) {
        double h = noise[i];
        for (std::size_t l = 0; l < net.depth; ++l) {
            h = act(net.activation, h + net.biases[l][i]);
            hs[l] = h;
        }
        const double pre = h + net.biases[net.depth][i];
        const double out = std::clamp(pre, 0.0, 1.0);
        const double err = out - target[i];
        g.mse += err * err;
        if (pre < 0.0 || pre > 1.0) {
            continue;
        }
        double up = 2.0 * err / static_cast<double>(kToyPixels);
        g.grad[net.depth * kToyPixels + i] = up;
        for (std::size_t l = net.depth; l-- > 0;) {
            up *= act_slope(net.activation, hs[l]);
            g.grad[l * kToyPixels + i] = up;
        }
    }
    g.mse /= static_cast<double>(kToyPixels);
    return g;
}

// ------------------------------------------------------- quantum generator

ToyQuantumGen make_toy_gen(std::size_t n_ancilla, std::size_t layers) {
    ToyQuantumGen gen;
    gen.n_ancilla = n_ancilla;
    gen.layers = layers;
    gen.circuit = build_qvc(kToyVisible + n_ancilla, layers, Topology::kChain);
    return gen;
}

namespace {

StateVector toy_state(const ToyQuantumGen &gen, std::span<const double> params,
                      std::span<const double> noise, double scale) {
    if (noise.size() != gen.n_qubits()) {
        throw InvalidArgument("toy generator: noise has " + std::to_string(noise.size()) +
                              " entries, expected " + std::to_string(gen.n_qubits()));
    }
    const EmbeddingSpec spec{EmbeddingKind::kAngle, gen.n_qubits(), scale};
    const FeatureVector f(std::vector<double>(noise.begin(), noise.end()));
    return run(gen.circuit, params, angle_embed(f, spec));
}

} // namespace

std::vector<double> toy_quantum_image(const ToyQuantumGen &gen, std::span<const double> params,
                                      std::span<const double> noise, double noise_angle_scale) {
    return marginal_probabilities(toy_state(gen, params, noise, noise_angle_scale), kToyVisible);
}

QuantumGradient toy_quantum_gradient(const ToyQuantumGen &gen, std::span<const double> params,
                                     std::span<const double> noise,
                                     std::span<const double> target, double noise_angle_scale) {
    if (target.size() != kToyPixels) {
        throw InvalidArgument("toy_quantum_gradient: target must have 64 entries");
    }
    const StateVector psi = toy_state(gen, params, noise, noise_angle_scale);
    const std::vector<double> p = marginal_probabilities(psi, kToyVisible);
    const std::size_t block = std::size_t{1} << gen.n_ancilla;
    std::vector<Complex> cot(psi.dim());
    for (std::size_t k = 0; k < kToyPixels; ++k) {
        const double slope = 2.0 * (p[k] - target[k]) / static_cast<double>(kToyPixels);
        for (std::size_t a = 0; a < block; ++a) {
            cot[k * block + a] = slope * psi[k * block + a];
        }
    }
    return {mse(p, target), adjoint_vjp(gen.circuit, params, psi, cot)};
}

// ---------------------------------------------------------------- training

std::string MseTrace::to_csv() const {
    std::string out = "epoch,mse\n";
    char buf[64];
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", epochs[i], mse[i]);
        out += buf;
    }
    return out;
}

ToyModelResult train_net(const ToyTarget &target, const ToyConfig &cfg, std::uint64_t seed) {
    Rng rng(seed ^ kNetStream);
    ConstrainedNet net = make_net(cfg.net_depth, cfg.activation);
    std::vector<double> flat = init_params(rng, net.n_params(), cfg.init_scale);
    auto unflatten = [&] {
        for (std::size_t l = 0; l <= net.depth; ++l) {
            std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(l * kToyPixels), kToyPixels,
                        net.biases[l].begin());
        }
    };
    unflatten();
    const auto eval = noise_set(seed ^ kEvalStream, cfg.n_eval_noise, kToyPixels);
    auto eval_mse = [&] {
        double s = 0.0;
        for (const auto &z : eval) {
            s += mse(net_forward(net, z), target.pixels);
        }
        return s / static_cast<double>(eval.size());
    };

    ToyModelResult r;
    r.name = "classical";
    r.n_params = net.n_params();
    Optimizer opt({}, cfg.classical_lr, flat.size());
    for (std::size_t epoch = 0; epoch <= cfg.classical_epochs; ++epoch) {
        if (epoch % cfg.trace_every == 0 || epoch == cfg.classical_epochs) {
            r.trace.epochs.push_back(epoch);
            r.trace.mse.push_back(eval_mse());
        }
        if (epoch == cfg.classical_epochs) {
            break;
        }
        const auto z = uniform_vector(rng, kToyPixels);
        opt.step(flat, net_mse_gradient(net, z, target.pixels).grad);
        unflatten();
    }
    r.params = flat;

    std::vector<std::vector<double>> outs;
    for (const auto &z : eval) {
        outs.push_back(net_forward(net, z));
    }
    summarise(r, outs, target, 1.0);
    for (const auto &z : noise_set(seed ^ kSampleStream, cfg.n_samples, kToyPixels)) {
        r.samples.push_back(net_forward(net, z));
    }
    return r;
}

ToyModelResult train_toy_quantum(std::size_t n_ancilla, const ToyTarget &target,
                                 const ToyConfig &cfg, std::uint64_t seed) {
    const ToyQuantumGen gen = make_toy_gen(n_ancilla, cfg.layers);
    Rng rng(seed ^ (n_ancilla == 0 ? kPureStream : kAncillaStream));
    std::vector<double> params = init_params(rng, gen.n_params(), cfg.init_scale);
    const auto eval = noise_set(seed ^ kEvalStream, cfg.n_eval_noise, gen.n_qubits());
    auto eval_mse = [&] {
        double s = 0.0;
        for (const auto &z : eval) {
            s += mse(scaled(toy_quantum_image(gen, params, z, cfg.noise_angle_scale), target.sum), target.pixels);
        }
        return s / static_cast<double>(eval.size());
    };

    ToyModelResult r;
    r.name = n_ancilla == 0 ? "quantum_pure" : "quantum_ancilla";
    r.n_params = gen.n_params();
    Optimizer opt({}, cfg.quantum_lr, params.size());
    for (std::size_t epoch = 0; epoch <= cfg.quantum_epochs; ++epoch) {
        if (epoch % cfg.trace_every == 0 || epoch == cfg.quantum_epochs) {
            r.trace.epochs.push_back(epoch);
            r.trace.mse.push_back(eval_mse());
        }
        if (epoch == cfg.quantum_epochs) {
            break;
        }
        const auto z = uniform_vector(rng, gen.n_qubits());
        opt.step(params, toy_quantum_gradient(gen, params, z, target.normalized, cfg.noise_angle_scale).grad);
    }
    r.params = params;

    std::vector<std::vector<double>> outs;
    for (const auto &z : eval) {
        outs.push_back(toy_quantum_image(gen, params, z, cfg.noise_angle_scale));
    }
    summarise(r, outs, target, target.sum);
    for (const auto &z : noise_set(seed ^ kSampleStream, cfg.n_samples, gen.n_qubits())) {
        r.samples.push_back(scaled(toy_quantum_image(gen, params, z, cfg.noise_angle_scale), target.sum));
    }
    return r;
}

ToyReport run_comparison(std::uint64_t seed, const ToyConfig &cfg) {
    if (cfg.trace_every == 0 || cfg.n_eval_noise == 0) {
        throw InvalidArgument("toy config: trace_every and n_eval_noise must be >= 1");
    }
    ToyReport rep;
    rep.seed = seed;
    rep.config = cfg;
    rep.target = toy_target(seed);
    rep.models.push_back(train_net(rep.target, cfg, seed));
    rep.models.push_back(train_toy_quantum(0, rep.target, cfg, seed));
    if (cfg.n_ancilla > 0) {
        rep.models.push_back(train_toy_quantum(cfg.n_ancilla, rep.target, cfg, seed));
    }
    return rep;
}

const ToyModelResult &ToyReport::model(const std::string &name) const {
    for (const auto &m : models) {
        if (m.name == name) {
            return m;
        }
    }
    throw InvalidArgument("toy report has no model named '" + name + "'");
}

std::string ToyReport::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["target_sum"] = target.sum;
    j["config"] = {{"classical_epochs", config.classical_epochs},
                   {"quantum_epochs", config.quantum_epochs},
                   {"classical_lr", config.classical_lr},
                   {"quantum_lr", config.quantum_lr},
                   {"net_depth", config.net_depth},
                   {"activation", activation_name(config.activation)},
                   {"layers", config.layers},
                   {"n_eval_noise", config.n_eval_noise},
                   {"n_ancilla", config.n_ancilla}};
    for (const auto &m : models) {
        j["models"][m.name] = {{"n_params", m.n_params},
                               {"mse_raw", m.mse_raw},
                               {"mse_normalized", m.mse_normalized},
                               {"output_spread", m.output_spread}};
    }
    return j.dump(2);
}

void write_comparison(const ToyReport &report, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "report.json") << report.to_json() << '\n';
    }
    write_pgm(dir / "target.pgm", report.target.pixels, 8, 8);
    for (const auto &m : report.models) {
        write_pgm(dir / (m.name + ".pgm"), m.image, 8, 8);
        for (std::size_t i = 0; i < m.samples.size(); ++i) {
            write_pgm(dir / (m.name + "_sample" + std::to_string(i) + ".pgm"), m.samples[i], 8, 8);
        }
        std::ofstream(dir / (m.name + "_mse.csv")) << m.trace.to_csv();
    }
}

} // namespace qgan
