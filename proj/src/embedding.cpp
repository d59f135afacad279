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
#include "qgan/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qgan/error.hpp"

namespace qgan {

namespace {

constexpr double kRangeSlack = 1e-9;
constexpr double kProductTolerance = 1e-6;

double decode_angle(double p1, double angle_scale) {
    const double f = (2.0 / angle_scale) * std::asin(std::sqrt(std::clamp(p1, 0.0, 1.0)));
    return std::clamp(f, 0.0, 1.0);
}

void check_angle_spec(const FeatureVector &f, const EmbeddingSpec &spec) {
    if (spec.kind != EmbeddingKind::kAngle) {
        throw InvalidArgument("angle_embed: embedding spec is not angle kind");
    }
    if (f.size() != spec.n_qubits) {
        throw InvalidArgument("angle_embed: " + std::to_string(f.size()) + " features for " +
                              std::to_string(spec.n_qubits) + " qubits");
    }
}

} // namespace

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        double &v = values_[i];
        if (!(v >= -kRangeSlack && v <= 1.0 + kRangeSlack)) {
            throw InvalidArgument("feature " + std::to_string(i) + " = " + std::to_string(v) +
                                  " outside [0, 1]");
        }
        v = std::clamp(v, 0.0, 1.0);
    }
}

ProductState angle_embed_product(const FeatureVector &f, const EmbeddingSpec &spec) {
    check_angle_spec(f, spec);
    std::vector<std::array<Complex, 2>> qubits(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double half = spec.angle_scale * f[i] / 2;
        qubits[i] = {Complex{std::cos(half), 0.0}, Complex{std::sin(half), 0.0}};
    }
    return ProductState::from_qubits(std::move(qubits));
}

StateVector angle_embed(const FeatureVector &f, const EmbeddingSpec &spec) {
    return angle_embed_product(f, spec).to_state_vector();
}

AmplitudeEncoding amplitude_embed(std::span<const double> v, std::size_t n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (v.size() > dim) {
        throw InvalidArgument("amplitude_embed: " + std::to_string(v.size()) +
                              " values do not fit in " + std::to_string(n_qubits) + " qubits");
    }
    double sq = 0.0;
    for (double x : v) {
        sq += x * x;
    }
    if (sq == 0.0) {
        throw InvalidArgument("amplitude_embed: zero vector cannot be embedded");
    }
    const double norm = std::sqrt(sq);
    std::vector<Complex> amps(dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < v.size(); ++i) {
        amps[i] = v[i] / norm;
    }
    return {StateVector::from_amplitudes(std::move(amps), 1e-9), norm};
}

FeatureVector angle_decode(const ProductState &state, double angle_scale) {
    std::vector<double> f(state.n_qubits());
    for (std::size_t q = 0; q < state.n_qubits(); ++q) {
        f[q] = decode_angle(state.prob_one(q), angle_scale);
    }
    return FeatureVector(std::move(f));
}

double product_defect(const StateVector &state) {
    double worst = 0.0;
    const std::size_t n = state.n_qubits();
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t m = std::size_t{1} << (n - 1 - q);
        double p0 = 0.0;
        double p1 = 0.0;
        Complex off{0.0, 0.0};
        for (std::size_t i = 0; i < state.dim(); ++i) {
            if (i & m) {
                p1 += std::norm(state[i]);
            } else {
                p0 += std::norm(state[i]);
                off += state[i] * std::conj(state[i | m]);
            }
        }
        const double purity = p0 * p0 + p1 * p1 + 2.0 * std::norm(off);
        worst = std::max(worst, 1.0 - purity);
    }
    return worst;
}

FeatureVector angle_decode(const StateVector &state, double angle_scale) {
    const double defect = product_defect(state);
    if (defect > kProductTolerance) {
        throw InvalidArgument("angle_decode: state is entangled (purity defect " +
                              std::to_string(defect) + "); use amplitude decoding");
    }
    return marginal_angle_decode(state, angle_scale);
}

FeatureVector marginal_angle_decode(const StateVector &state, double angle_scale) {
    std::vector<double> f(state.n_qubits());
    for (std::size_t q = 0; q < state.n_qubits(); ++q) {
        f[q] = decode_angle(prob_one(state, q), angle_scale);
    }
    return FeatureVector(std::move(f));
}

std::vector<double> amplitude_decode(const StateVector &state, std::size_t length, double norm) {
    if (length > state.dim()) {
        throw InvalidArgument("amplitude_decode: length exceeds state dimension");
    }
    std::vector<double> out(length);
    for (std::size_t i = 0; i < length; ++i) {
        out[i] = std::abs(state[i]) * norm;
    }
    return out;
}

} // namespace qgan
