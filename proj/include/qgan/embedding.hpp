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
#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "qgan/qcore.hpp"

namespace qgan {

/// Real feature vector with every component in [0, 1].
class FeatureVector {
  public:
    FeatureVector() = default;
    /// Components within 1e-9 of the range are clamped; anything further out throws.
    explicit FeatureVector(std::vector<double> values);

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  private:
    std::vector<double> values_;
};

enum class EmbeddingKind { kAngle, kAmplitude };

struct EmbeddingSpec {
    EmbeddingKind kind = EmbeddingKind::kAngle;
    std::size_t n_qubits = 0;
    /// Radians per unit feature (angle embedding only).
    double angle_scale = std::numbers::pi;
};

[[nodiscard]] ProductState angle_embed_product(const FeatureVector &f, const EmbeddingSpec &spec);

/// Tensor product of RY(angle_scale * f_i)|0>.
[[nodiscard]] StateVector angle_embed(const FeatureVector &f, const EmbeddingSpec &spec);

struct AmplitudeEncoding {
    StateVector state;
    double norm;
};

/// Pads `v` with zeros to 2^n_qubits and normalizes.
[[nodiscard]] AmplitudeEncoding amplitude_embed(std::span<const double> v, std::size_t n_qubits);

/// Inverts angle embedding: f_i = (2 / angle_scale) * asin(sqrt(P(q_i = 1))), clamped to [0, 1].
[[nodiscard]] FeatureVector angle_decode(const ProductState &state,
                                         double angle_scale = std::numbers::pi);

/// Same readout for a full state vector; throws if the state is not a product
/// state (every single-qubit marginal must be pure within 1e-6).
[[nodiscard]] FeatureVector angle_decode(const StateVector &state,
                                         double angle_scale = std::numbers::pi);

/// Per-qubit readout without the product check. Used to render images from
/// entangled generator outputs, where each pixel feature is read from its
/// own qubit's P(1).
[[nodiscard]] FeatureVector marginal_angle_decode(const StateVector &state,
                                                  double angle_scale = std::numbers::pi);

/// First `length` amplitude magnitudes scaled by `norm` (phases dropped).
[[nodiscard]] std::vector<double> amplitude_decode(const StateVector &state, std::size_t length,
                                                   double norm);

/// Largest deviation from purity over the single-qubit marginals, 1 - Tr(rho_q^2).
[[nodiscard]] double product_defect(const StateVector &state);

} // namespace qgan
