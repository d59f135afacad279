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
#include "qgan/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "qgan/error.hpp"

namespace qgan {

namespace {

// Eigenvalues below this are numerical zeros. The square root would turn
// 1e-17 rounding into 3e-9 of spurious fidelity.
constexpr double kRankCutoff = 1e-13;

double root_of(double lambda) { return lambda > kRankCutoff ? std::sqrt(lambda) : 0.0; }

void check_dims(const DensityMatrix &a, const DensityMatrix &b, const char *who) {
    if (a.dim() != b.dim()) {
        throw InvalidArgument(std::string(who) + ": dimension mismatch (" +
                              std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

/// Sum of |eigenvalues|; every caller passes a Hermitian difference.
double trace_norm(const CMatrix &m) {
    const CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double unit_clamp(double x) { return std::clamp(x, 0.0, 1.0); }

/// PSD square root through the eigendecomposition, eigenvalues clipped at 0.
CMatrix psd_sqrt(const CMatrix &m) {
    const HermitianEigen eig = hermitian_eigen(m, 1e-9);
    Eigen::VectorXd roots(eig.values.size());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        roots(i) = root_of(eig.values(i));
    }
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

} // namespace

double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    check_dims(rho, sigma, "trace_distance");
    return unit_clamp(0.5 * trace_norm(rho.matrix() - sigma.matrix()));
}

double uhlmann_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    check_dims(rho, sigma, "uhlmann_fidelity");
    const CMatrix root = psd_sqrt(rho.matrix());
    CMatrix inner_m = root * sigma.matrix() * root;
    inner_m = 0.5 * (inner_m + inner_m.adjoint()).eval();
    const HermitianEigen eig = hermitian_eigen(inner_m, 1e-9);
    double f = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        f += root_of(eig.values(i));
    }
    return unit_clamp(f);
}

double overlap_fidelity(const StateVector &gamma, const DensityMatrix &rho) {
    if (gamma.dim() != rho.dim()) {
        throw InvalidArgument("overlap_fidelity: state has dimension " +
                              std::to_string(gamma.dim()) + ", density matrix " +
                              std::to_string(rho.dim()));
    }
    const Eigen::VectorXcd g = gamma.to_eigen();
    return unit_clamp(g.dot(rho.matrix() * g).real());
}

FvgMargins fvg_check(const DensityMatrix &rho, const DensityMatrix &sigma) {
    const double t = trace_distance(rho, sigma);
    const double f = uhlmann_fidelity(rho, sigma);
    return {t - (1.0 - f), std::sqrt(std::max(0.0, 1.0 - f * f)) - t};
}

double helstrom_success(const DensityMatrix &rho, const DensityMatrix &sigma, double prior) {
    check_dims(rho, sigma, "helstrom_success");
    if (!(prior >= 0.0 && prior <= 1.0)) {
        throw InvalidArgument("helstrom_success: prior " + std::to_string(prior) +
                              " outside [0, 1]");
    }
    const CMatrix gamma = prior * rho.matrix() - (1.0 - prior) * sigma.matrix();
    return unit_clamp(0.5 + 0.5 * trace_norm(gamma));
}

double nash_value_at(double t) {
    if (0.5 - std::abs(t) <= 1e-12) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(0.5 + t) + std::log(0.5 - t);
}

double nash_value(const DensityMatrix &rho_data, const DensityMatrix &rho_g) {
    return nash_value_at(0.5 * trace_distance(rho_data, rho_g));
}

TopEigen best_pure_generator(const DensityMatrix &rho_data) {
    EigenDecomposition eig = eigh(rho_data);
    return {eig.values.front(), std::move(eig.vectors.front())};
}

BestDataState best_data_state(const DensityMatrix &rho_data, std::span<const StateVector> xs) {
    if (xs.empty()) {
        throw InvalidArgument("best_data_state: no data states");
    }
    BestDataState best{0, overlap_fidelity(xs[0], rho_data)};
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double f = overlap_fidelity(xs[i], rho_data);
        if (f > best.p_data_max) {
            best = {i, f};
        }
    }
    return best;
}

LowerBoundCheck discriminator_lower_bound(const DensityMatrix &rho_data, const StateVector &gamma) {
    const double bound = 1.0 - overlap_fidelity(gamma, rho_data) / 2.0;
    const double p = helstrom_success(rho_data, DensityMatrix::pure(gamma), 0.5);
    return {bound, p, p >= bound - 1e-9};
}

DensityMatrix uniform_density(std::span<const StateVector> states) {
    if (states.empty()) {
        throw InvalidArgument("uniform_density: no states");
    }
    const std::vector<double> probs(states.size(), 1.0 / static_cast<double>(states.size()));
    return density_from_ensemble(states, probs);
}

BoundReport make_bound_report(const DensityMatrix &rho_data, const StateVector &gamma,
                              std::span<const StateVector> xs) {
    const DensityMatrix rho_g = DensityMatrix::pure(gamma);
    BoundReport r;
    r.trace_distance = trace_distance(rho_data, rho_g);
    r.uhlmann_fidelity = uhlmann_fidelity(rho_data, rho_g);
    r.overlap_fidelity = overlap_fidelity(gamma, rho_data);
    r.helstrom_success = helstrom_success(rho_data, rho_g, 0.5);
    const FvgMargins m = fvg_check(rho_data, rho_g);
    r.fvg_lower_margin = m.lower;
    r.fvg_upper_margin = m.upper;
    r.lambda_max = best_pure_generator(rho_data).lambda_max;
    if (!xs.empty()) {
        r.p_data_max = best_data_state(rho_data, xs).p_data_max;
    }
    const double f = *r.overlap_fidelity;
    r.lower_bound_value = 1.0 - f / 2.0;
    r.nash_value = nash_value(rho_data, rho_g);
    r.printed_bound_margin = r.helstrom_success - r.lower_bound_value;
    r.strong_bound_margin = (0.5 + r.trace_distance) - (1.5 - f);
    return r;
}

std::string BoundReport::to_json() const {
    using nlohmann::json;
    auto finite_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    json j;
    j["trace_distance"] = trace_distance;
    j["uhlmann_fidelity"] = uhlmann_fidelity;
    j["overlap_fidelity"] = overlap_fidelity ? json(*overlap_fidelity) : json(nullptr);
    j["helstrom_success"] = helstrom_success;
    j["fvg_lower_margin"] = fvg_lower_margin;
    j["fvg_upper_margin"] = fvg_upper_margin;
    j["lambda_max"] = lambda_max;
    j["p_data_max"] = p_data_max ? json(*p_data_max) : json(nullptr);
    j["lower_bound_value"] = lower_bound_value;
    j["nash_value"] = finite_or_null(nash_value);
    j["printed_bound_margin"] = printed_bound_margin;
    j["strong_bound_margin"] = strong_bound_margin;
    return j.dump(2);
}

std::string BoundReport::to_table() const {
    std::string out;
    auto row = [&](const char *name, std::optional<double> v) {
        char buf[96];
        if (v) {
            std::snprintf(buf, sizeof buf, "%-22s %.10f\n", name, *v);
        } else {
            std::snprintf(buf, sizeof buf, "%-22s %s\n", name, "n/a");
        }
        out += buf;
    };
    row("trace_distance", trace_distance);
    row("uhlmann_fidelity", uhlmann_fidelity);
    row("overlap_fidelity", overlap_fidelity);
    row("helstrom_success", helstrom_success);
    row("fvg_lower_margin", fvg_lower_margin);
    row("fvg_upper_margin", fvg_upper_margin);
    row("lambda_max", lambda_max);
    row("p_data_max", p_data_max);
    row("lower_bound_value", lower_bound_value);
    row("nash_value", nash_value);
    row("printed_bound_margin", printed_bound_margin);
    row("strong_bound_margin", strong_bound_margin);
    return out;
}

} // namespace qgan
