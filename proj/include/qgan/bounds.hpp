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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgan/qcore.hpp"

namespace qgan {

/// 1/2 ||rho - sigma||_1, from the singular values of the difference.
[[nodiscard]] double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)) (root convention: |<a|b>| for pure states).
[[nodiscard]] double uhlmann_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

/// <gamma| rho |gamma> (squared-overlap convention).
[[nodiscard]] double overlap_fidelity(const StateVector &gamma, const DensityMatrix &rho);

/// Slack on each side of 1 - F <= T <= sqrt(1 - F^2) with F the Uhlmann fidelity.
struct FvgMargins {
    double lower;
    double upper;
};
[[nodiscard]] FvgMargins fvg_check(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Optimal success probability for telling rho (prior `prior`) from sigma:
/// 1/2 + 1/2 ||prior rho - (1 - prior) sigma||_1.
[[nodiscard]] double helstrom_success(const DensityMatrix &rho, const DensityMatrix &sigma,
                                      double prior = 0.5);

/// log(1/2 + t) + log(1/2 - t); -infinity once t reaches 1/2.
[[nodiscard]] double nash_value_at(double t);

/// Value of the game at the Helstrom discriminator, t = T / 2.
[[nodiscard]] double nash_value(const DensityMatrix &rho_data, const DensityMatrix &rho_g);

struct TopEigen {
    double lambda_max;
    StateVector v_max;
};
/// Best pure generator state: the top eigenpair of rho_data.
[[nodiscard]] TopEigen best_pure_generator(const DensityMatrix &rho_data);

struct BestDataState {
    std::size_t index;
    double p_data_max;
};
/// argmax_i <x_i| rho |x_i>, lowest index on ties.
[[nodiscard]] BestDataState best_data_state(const DensityMatrix &rho_data,
                                            std::span<const StateVector> xs);

struct LowerBoundCheck {
    double bound;      // 1 - <gamma|rho|gamma> / 2
    double helstrom;   // helstrom_success(rho, |gamma><gamma|, 1/2)
    bool satisfied;
};
[[nodiscard]] LowerBoundCheck discriminator_lower_bound(const DensityMatrix &rho_data,
                                                        const StateVector &gamma);

/// Equal-weight mixture of the given states.
[[nodiscard]] DensityMatrix uniform_density(std::span<const StateVector> states);

struct BoundReport {
    double trace_distance = 0.0;
    double uhlmann_fidelity = 0.0;
    std::optional<double> overlap_fidelity;
    double helstrom_success = 0.5;
    double fvg_lower_margin = 0.0;
    double fvg_upper_margin = 0.0;
    double lambda_max = 0.0;
    std::optional<double> p_data_max;
    double lower_bound_value = 0.0;
    double nash_value = 0.0;
    /// helstrom_success - (1 - F/2), F the overlap fidelity.
    double printed_bound_margin = 0.0;
    /// (1/2 + T) - (3/2 - F): the sharper form with an unhalved success term.
    double strong_bound_margin = 0.0;

    /// Flat JSON object; -infinity is written as null.
    [[nodiscard]] std::string to_json() const;
    /// Two-column text table.
    [[nodiscard]] std::string to_table() const;
};

/// Report for a pure generator state against a data density matrix. `xs`
/// (the data states) may be empty, in which case p_data_max is absent.
[[nodiscard]] BoundReport make_bound_report(const DensityMatrix &rho_data,
                                            const StateVector &gamma,
                                            std::span<const StateVector> xs = {});

} // namespace qgan
