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
#include "qgan/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qgan/error.hpp"

namespace qgan {

namespace {

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t log2_exact(std::size_t dim) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

// Bit mask of qubit q in an n-qubit register (qubit 0 = most significant bit).
inline std::size_t bit(std::size_t n, std::size_t q) { return std::size_t{1} << (n - 1 - q); }

void apply_ry(std::vector<Complex> &amps, std::size_t n, std::size_t q, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const std::size_t m = bit(n, q);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & m) {
            continue;
        }
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | m];
        amps[i] = c * a0 - s * a1;
        amps[i | m] = s * a0 + c * a1;
    }
}

void apply_ryy(std::vector<Complex> &amps, std::size_t n, std::size_t qa, std::size_t qb,
               double angle) {
    const double c = std::cos(angle / 2);
    const Complex is{0.0, std::sin(angle / 2)};
    const std::size_t ma = bit(n, qa);
    const std::size_t mb = bit(n, qb);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & (ma | mb)) {
            continue;
        }
        const std::size_t i00 = i;
        const std::size_t i01 = i | mb;
        const std::size_t i10 = i | ma;
        const std::size_t i11 = i | ma | mb;
        const Complex a00 = amps[i00];
        const Complex a01 = amps[i01];
        const Complex a10 = amps[i10];
        const Complex a11 = amps[i11];
        // cos(t/2) I - i sin(t/2) Y(x)Y
        amps[i00] = c * a00 + is * a11;
        amps[i11] = c * a11 + is * a00;
        amps[i01] = c * a01 - is * a10;
        amps[i10] = c * a10 - is * a01;
    }
}

void apply_h(std::vector<Complex> &amps, std::size_t n, std::size_t q) {
    const double r = 1.0 / std::sqrt(2.0);
    const std::size_t m = bit(n, q);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & m) {
            continue;
        }
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | m];
        amps[i] = r * (a0 + a1);
        amps[i | m] = r * (a0 - a1);
    }
}

void apply_x(std::vector<Complex> &amps, std::size_t n, std::size_t q) {
    const std::size_t m = bit(n, q);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (!(i & m)) {
            std::swap(amps[i], amps[i | m]);
        }
    }
}

void apply_cnot(std::vector<Complex> &amps, std::size_t n, std::size_t c, std::size_t t) {
    const std::size_t mc = bit(n, c);
    const std::size_t mt = bit(n, t);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mc) && !(i & mt)) {
            std::swap(amps[i], amps[i | mt]);
        }
    }
}

void apply_cswap(std::vector<Complex> &amps, std::size_t n, std::size_t c, std::size_t a,
                 std::size_t b) {
    const std::size_t mc = bit(n, c);
    const std::size_t ma = bit(n, a);
    const std::size_t mb = bit(n, b);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mc) && (i & ma) && !(i & mb)) {
            std::swap(amps[i], (amps[(i & ~ma) | mb]));
        }
    }
}

void apply_in_place(std::vector<Complex> &amps, std::size_t n, const Gate &g, double angle) {
    const auto &w = g.wires;
    switch (g.kind) {
    case GateKind::kRY:
        apply_ry(amps, n, w[0], angle);
        break;
    case GateKind::kRYY:
        apply_ryy(amps, n, w[0], w[1], angle);
        break;
    case GateKind::kH:
        apply_h(amps, n, w[0]);
        break;
    case GateKind::kX:
        apply_x(amps, n, w[0]);
        break;
    case GateKind::kCNOT:
        apply_cnot(amps, n, w[0], w[1]);
        break;
    case GateKind::kCSWAP:
        apply_cswap(amps, n, w[0], w[1], w[2]);
        break;
    }
}

// <lambda| (-i G) |psi> for the generator G of a parametric gate
// (Y/2 for RY, Y(x)Y/2 for RYY).
Complex generator_overlap(const std::vector<Complex> &lambda, const std::vector<Complex> &psi,
                          std::size_t n, const Gate &g) {
    Complex acc{0.0, 0.0};
    if (g.kind == GateKind::kRY) {
        // -iY/2 = [[0, -1/2], [1/2, 0]]
        const std::size_t m = bit(n, g.wires[0]);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            if (i & m) {
                continue;
            }
            acc += std::conj(lambda[i]) * (-0.5 * psi[i | m]);
            acc += std::conj(lambda[i | m]) * (0.5 * psi[i]);
        }
        return acc;
    }
    // -i (Y(x)Y)/2 maps |00> -> (i/2)|11>, |11> -> (i/2)|00>,
    // |01> -> (-i/2)|10>, |10> -> (-i/2)|01>.
    const Complex ih{0.0, 0.5};
    const std::size_t ma = bit(n, g.wires[0]);
    const std::size_t mb = bit(n, g.wires[1]);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (i & (ma | mb)) {
            continue;
        }
        const std::size_t i00 = i;
        const std::size_t i01 = i | mb;
        const std::size_t i10 = i | ma;
        const std::size_t i11 = i | ma | mb;
        acc += std::conj(lambda[i11]) * (ih * psi[i00]);
        acc += std::conj(lambda[i00]) * (ih * psi[i11]);
        acc += std::conj(lambda[i10]) * (-ih * psi[i01]);
        acc += std::conj(lambda[i01]) * (-ih * psi[i10]);
    }
    return acc;
}

void require_same_dim(const StateVector &a, const StateVector &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                              std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

std::vector<std::size_t> validate_keep(std::size_t n, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw InvalidArgument("partial_trace: keep set must be non-empty");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t q : keep) {
        if (q >= n) {
            throw InvalidArgument("partial_trace: qubit " + std::to_string(q) +
                                  " out of range for " + std::to_string(n) + " qubits");
        }
        if (seen[q]) {
            throw InvalidArgument("partial_trace: duplicate qubit " + std::to_string(q));
        }
        seen[q] = true;
    }
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q) {
        if (!seen[q]) {
            traced.push_back(q);
        }
    }
    return traced;
}

// Gathers the bits of `index` at the given qubits into a compact label
// (first listed qubit most significant).
std::size_t gather(std::size_t index, std::size_t n, std::span<const std::size_t> qubits) {
    std::size_t label = 0;
    for (std::size_t q : qubits) {
        label = (label << 1) | ((index & bit(n, q)) ? 1 : 0);
    }
    return label;
}

std::size_t scatter(std::size_t label, std::size_t n, std::span<const std::size_t> qubits) {
    std::size_t index = 0;
    const std::size_t k = qubits.size();
    for (std::size_t j = 0; j < k; ++j) {
        if (label & (std::size_t{1} << (k - 1 - j))) {
            index |= bit(n, qubits[j]);
        }
    }
    return index;
}

} // namespace

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(std::size_t n_qubits)
    : n_qubits_(n_qubits), amplitudes_(std::size_t{1} << n_qubits, Complex{0.0, 0.0}) {
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(std::size_t n_qubits, std::size_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) {
        throw InvalidArgument("basis index " + std::to_string(index) + " out of range");
    }
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[index] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes, double tolerance) {
    if (!is_power_of_two(amplitudes.size())) {
        throw InvalidArgument("state length " + std::to_string(amplitudes.size()) +
                              " is not a power of two");
    }
    double sq = 0.0;
    for (const auto &a : amplitudes) {
        sq += std::norm(a);
    }
    if (std::abs(sq - 1.0) > tolerance) {
        throw InvalidArgument("state is not unit norm (squared norm " + std::to_string(sq) + ")");
    }
    const std::size_t n = log2_exact(amplitudes.size());
    return {n, std::move(amplitudes)};
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
    double sq = 0.0;
    for (const auto &a : amplitudes) {
        sq += std::norm(a);
    }
    if (sq == 0.0) {
        throw InvalidArgument("cannot normalize the zero vector");
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (auto &a : amplitudes) {
        a *= inv;
    }
    return from_amplitudes(std::move(amplitudes));
}

double StateVector::norm() const {
    double sq = 0.0;
    for (const auto &a : amplitudes_) {
        sq += std::norm(a);
    }
    return std::sqrt(sq);
}

Eigen::VectorXcd StateVector::to_eigen() const {
    return Eigen::Map<const Eigen::VectorXcd>(amplitudes_.data(),
                                              static_cast<Eigen::Index>(amplitudes_.size()));
}

// -------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(CMatrix entries, std::size_t n_qubits)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {}

DensityMatrix::DensityMatrix(CMatrix entries, double tolerance) : n_qubits_(0) {
    if (entries.rows() != entries.cols()) {
        throw InvalidArgument("density matrix must be square");
    }
    const auto dim = static_cast<std::size_t>(entries.rows());
    if (!is_power_of_two(dim)) {
        throw InvalidArgument("density matrix dimension " + std::to_string(dim) +
                              " is not a power of two");
    }
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tolerance) {
        throw InvalidArgument("density matrix is not Hermitian (max deviation " +
                              std::to_string(asym) + ")");
    }
    const Complex tr = entries.trace();
    if (std::abs(tr - 1.0) > tolerance) {
        throw InvalidArgument("density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    const CMatrix herm = 0.5 * (entries + entries.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tolerance) {
        throw InvalidArgument("density matrix has negative eigenvalue " +
                              std::to_string(solver.eigenvalues().minCoeff()));
    }
    n_qubits_ = log2_exact(dim);
    entries_ = std::move(entries);
}

DensityMatrix DensityMatrix::pure(const StateVector &psi) {
    const Eigen::VectorXcd v = psi.to_eigen();
    return {v * v.adjoint(), psi.n_qubits()};
}

// ------------------------------------------------------------------- Gates

std::size_t arity(GateKind kind) {
    switch (kind) {
    case GateKind::kRY:
    case GateKind::kH:
    case GateKind::kX:
        return 1;
    case GateKind::kRYY:
    case GateKind::kCNOT:
        return 2;
    case GateKind::kCSWAP:
        return 3;
    }
    return 0;
}

bool is_parametric(GateKind kind) { return kind == GateKind::kRY || kind == GateKind::kRYY; }

const char *gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::kRY:
        return "RY";
    case GateKind::kRYY:
        return "RYY";
    case GateKind::kH:
        return "H";
    case GateKind::kX:
        return "X";
    case GateKind::kCNOT:
        return "CNOT";
    case GateKind::kCSWAP:
        return "CSWAP";
    }
    return "?";
}

CMatrix gate_matrix(GateKind kind, double angle) {
    const Complex i{0.0, 1.0};
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    switch (kind) {
    case GateKind::kRY: {
        CMatrix m(2, 2);
        m << c, -s, s, c;
        return m;
    }
    case GateKind::kRYY: {
        CMatrix m = CMatrix::Zero(4, 4);
        m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = c;
        m(0, 3) = m(3, 0) = i * s;
        m(1, 2) = m(2, 1) = -i * s;
        return m;
    }
    case GateKind::kH: {
        const double r = 1.0 / std::sqrt(2.0);
        CMatrix m(2, 2);
        m << r, r, r, -r;
        return m;
    }
    case GateKind::kX: {
        CMatrix m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }
    case GateKind::kCNOT: {
        CMatrix m = CMatrix::Zero(4, 4);
        m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
        return m;
    }
    case GateKind::kCSWAP: {
        CMatrix m = CMatrix::Identity(8, 8);
        m(5, 5) = m(6, 6) = 0;
        m(5, 6) = m(6, 5) = 1;
        return m;
    }
    }
    throw InvalidArgument("unknown gate kind");
}

// ----------------------------------------------------------------- Circuit

Circuit::Circuit(std::size_t n_qubits, std::size_t n_params)
    : n_qubits_(n_qubits), n_params_(n_params) {}

std::size_t Circuit::add_param() { return n_params_++; }

Circuit &Circuit::add(const Gate &gate) {
    const auto wires = gate.used_wires();
    for (std::size_t j = 0; j < wires.size(); ++j) {
        if (wires[j] >= n_qubits_) {
            throw InvalidArgument(std::string(gate_name(gate.kind)) + ": wire " +
                                  std::to_string(wires[j]) + " out of range for " +
                                  std::to_string(n_qubits_) + " qubits");
        }
        for (std::size_t k = 0; k < j; ++k) {
            if (wires[k] == wires[j]) {
                throw InvalidArgument(std::string(gate_name(gate.kind)) + ": repeated wire " +
                                      std::to_string(wires[j]));
            }
        }
    }
    if (gate.param) {
        if (!is_parametric(gate.kind)) {
            throw InvalidArgument(std::string(gate_name(gate.kind)) + " takes no parameter");
        }
        if (gate.param->index >= n_params_) {
            throw InvalidArgument("parameter index " + std::to_string(gate.param->index) +
                                  " >= n_params " + std::to_string(n_params_));
        }
    }
    gates_.push_back(gate);
    return *this;
}

Circuit &Circuit::ry(std::size_t q, std::optional<ParamRef> p, double offset) {
    return add(Gate{GateKind::kRY, {q, 0, 0}, p, offset});
}

Circuit &Circuit::ryy(std::size_t a, std::size_t b, std::optional<ParamRef> p, double offset) {
    return add(Gate{GateKind::kRYY, {a, b, 0}, p, offset});
}

Circuit &Circuit::h(std::size_t q) { return add(Gate{GateKind::kH, {q, 0, 0}, {}, 0.0}); }

Circuit &Circuit::x(std::size_t q) { return add(Gate{GateKind::kX, {q, 0, 0}, {}, 0.0}); }

Circuit &Circuit::cnot(std::size_t control, std::size_t target) {
    return add(Gate{GateKind::kCNOT, {control, target, 0}, {}, 0.0});
}

Circuit &Circuit::cswap(std::size_t control, std::size_t a, std::size_t b) {
    return add(Gate{GateKind::kCSWAP, {control, a, b}, {}, 0.0});
}

Circuit &Circuit::cry(std::size_t control, std::size_t target, std::size_t param_index) {
    ry(target, ParamRef{param_index, 0.5});
    cnot(control, target);
    ry(target, ParamRef{param_index, -0.5});
    cnot(control, target);
    return *this;
}

double Circuit::angle(std::size_t g, std::span<const double> params, const GateShift &shift) const {
    const Gate &gate = gates_[g];
    double a = gate.offset;
    if (gate.param) {
        a += params[gate.param->index] * gate.param->scale;
    }
    if (shift.gate == g) {
        a += shift.delta;
    }
    return a;
}

// -------------------------------------------------------------- Simulation

StateVector apply_gate(const StateVector &state, const Gate &gate, double angle) {
    for (std::size_t w : gate.used_wires()) {
        if (w >= state.n_qubits()) {
            throw InvalidArgument(std::string(gate_name(gate.kind)) + ": wire " +
                                  std::to_string(w) + " out of range for " +
                                  std::to_string(state.n_qubits()) + " qubits");
        }
    }
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    apply_in_place(amps, state.n_qubits(), gate, angle);
    return StateVector::from_amplitudes(std::move(amps), 1e-9);
}

StateVector run(const Circuit &circuit, std::span<const double> params, const StateVector &initial,
                const GateShift &shift) {
    if (params.size() != circuit.n_params()) {
        throw InvalidArgument("run: expected " + std::to_string(circuit.n_params()) +
                              " parameters, got " + std::to_string(params.size()));
    }
    if (initial.n_qubits() != circuit.n_qubits()) {
        throw InvalidArgument("run: initial state has " + std::to_string(initial.n_qubits()) +
                              " qubits, circuit has " + std::to_string(circuit.n_qubits()));
    }
    std::vector<Complex> amps(initial.amplitudes().begin(), initial.amplitudes().end());
    const auto gates = circuit.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        apply_in_place(amps, circuit.n_qubits(), gates[g], circuit.angle(g, params, shift));
    }
    return StateVector::from_amplitudes(std::move(amps), 1e-9);
}

StateVector run(const Circuit &circuit, std::span<const double> params) {
    return run(circuit, params, StateVector(circuit.n_qubits()));
}

std::vector<double> adjoint_vjp(const Circuit &circuit, std::span<const double> params,
                                const StateVector &final_state, std::span<const Complex> cotangent) {
    if (params.size() != circuit.n_params()) {
        throw InvalidArgument("adjoint_vjp: parameter length mismatch");
    }
    if (cotangent.size() != final_state.dim() || final_state.n_qubits() != circuit.n_qubits()) {
        throw InvalidArgument("adjoint_vjp: state/cotangent dimension mismatch");
    }
    const std::size_t n = circuit.n_qubits();
    std::vector<Complex> psi(final_state.amplitudes().begin(), final_state.amplitudes().end());
    std::vector<Complex> lambda(cotangent.begin(), cotangent.end());
    std::vector<double> grad(circuit.n_params(), 0.0);
    const auto gates = circuit.gates();
    for (std::size_t g = gates.size(); g-- > 0;) {
        const Gate &gate = gates[g];
        const double angle = circuit.angle(g, params);
        if (gate.param) {
            const Complex d = generator_overlap(lambda, psi, n, gate);
            grad[gate.param->index] += 2.0 * d.real() * gate.param->scale;
        }
        // Inverse: negated angle for rotations, the rest are self-inverse.
        apply_in_place(psi, n, gate, -angle);
        apply_in_place(lambda, n, gate, -angle);
    }
    return grad;
}

double prob_one(const StateVector &state, std::size_t qubit) {
    if (qubit >= state.n_qubits()) {
        throw InvalidArgument("prob_one: qubit " + std::to_string(qubit) + " out of range");
    }
    const std::size_t m = bit(state.n_qubits(), qubit);
    double p = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & m) {
            p += std::norm(state[i]);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> marginal_probabilities(const StateVector &state, std::size_t visible) {
    if (visible == 0 || visible > state.n_qubits()) {
        throw InvalidArgument("marginal_probabilities: visible count out of range");
    }
    const std::size_t hidden_dim = std::size_t{1} << (state.n_qubits() - visible);
    std::vector<double> probs(std::size_t{1} << visible, 0.0);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        probs[i / hidden_dim] += std::norm(state[i]);
    }
    return probs;
}

Complex inner(const StateVector &a, const StateVector &b) {
    require_same_dim(a, b, "inner");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<Complex> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return StateVector::from_amplitudes(std::move(amps), 1e-9);
}

DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep) {
    const std::size_t n = state.n_qubits();
    const std::vector<std::size_t> traced = validate_keep(n, keep);
    const auto keep_dim = static_cast<Eigen::Index>(std::size_t{1} << keep.size());
    const auto trace_dim = static_cast<Eigen::Index>(std::size_t{1} << traced.size());
    CMatrix m(keep_dim, trace_dim);
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        m(static_cast<Eigen::Index>(gather(idx, n, keep)),
          static_cast<Eigen::Index>(gather(idx, n, traced))) = state[idx];
    }
    CMatrix rho = m * m.adjoint();
    return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
    const std::size_t n = rho.n_qubits();
    const std::vector<std::size_t> traced = validate_keep(n, keep);
    const std::size_t keep_dim = std::size_t{1} << keep.size();
    const std::size_t trace_dim = std::size_t{1} << traced.size();
    std::vector<std::size_t> keep_index(keep_dim);
    std::vector<std::size_t> trace_index(trace_dim);
    for (std::size_t i = 0; i < keep_dim; ++i) {
        keep_index[i] = scatter(i, n, keep);
    }
    for (std::size_t a = 0; a < trace_dim; ++a) {
        trace_index[a] = scatter(a, n, traced);
    }
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(keep_dim),
                                static_cast<Eigen::Index>(keep_dim));
    for (std::size_t i = 0; i < keep_dim; ++i) {
        for (std::size_t j = 0; j < keep_dim; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t a = 0; a < trace_dim; ++a) {
                acc += rho(keep_index[i] | trace_index[a], keep_index[j] | trace_index[a]);
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

DensityMatrix density_from_ensemble(std::span<const StateVector> states,
                                    std::span<const double> probs) {
    if (states.empty()) {
        throw InvalidArgument("density_from_ensemble: empty ensemble");
    }
    if (states.size() != probs.size()) {
        throw InvalidArgument("density_from_ensemble: " + std::to_string(states.size()) +
                              " states but " + std::to_string(probs.size()) + " probabilities");
    }
    double total = 0.0;
    for (double p : probs) {
        if (p < 0.0) {
            throw InvalidArgument("density_from_ensemble: negative probability");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("density_from_ensemble: probabilities sum to " +
                              std::to_string(total));
    }
    const auto dim = static_cast<Eigen::Index>(states.front().dim());
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].dim() != states.front().dim()) {
            throw InvalidArgument("density_from_ensemble: state " + std::to_string(k) +
                                  " has mismatched dimension");
        }
        const Eigen::VectorXcd v = states[k].to_eigen();
        rho.noalias() += probs[k] * (v * v.adjoint());
    }
    return DensityMatrix(std::move(rho));
}

HermitianEigen hermitian_eigen(const CMatrix &m, double hermitian_tol) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("hermitian_eigen: matrix must be square");
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol) {
        throw InvalidArgument("hermitian_eigen: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error("hermitian_eigen: eigensolver did not converge");
    }
    // Eigen returns ascending order.
    return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

EigenDecomposition eigh(const DensityMatrix &rho) {
    const HermitianEigen he = hermitian_eigen(rho.matrix());
    EigenDecomposition out;
    const auto dim = he.values.size();
    out.values.reserve(static_cast<std::size_t>(dim));
    out.vectors.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) {
        out.values.push_back(he.values(k));
        std::vector<Complex> v(he.vectors.col(k).data(), he.vectors.col(k).data() + dim);
        out.vectors.push_back(StateVector::normalized(std::move(v)));
    }
    return out;
}

// ------------------------------------------------------------ ProductState

ProductState::ProductState(std::size_t n_qubits)
    : qubits_(n_qubits, std::array<Complex, 2>{Complex{1.0, 0.0}, Complex{0.0, 0.0}}) {}

ProductState ProductState::from_qubits(std::vector<std::array<Complex, 2>> qubits) {
    for (std::size_t q = 0; q < qubits.size(); ++q) {
        const double sq = std::norm(qubits[q][0]) + std::norm(qubits[q][1]);
        if (std::abs(sq - 1.0) > kNormTolerance) {
            throw InvalidArgument("product qubit " + std::to_string(q) + " is not unit norm");
        }
    }
    ProductState s(0);
    s.qubits_ = std::move(qubits);
    return s;
}

StateVector ProductState::to_state_vector() const {
    std::vector<Complex> amps{Complex{1.0, 0.0}};
    for (const auto &q : qubits_) {
        std::vector<Complex> next(amps.size() * 2);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            next[2 * i] = amps[i] * q[0];
            next[2 * i + 1] = amps[i] * q[1];
        }
        amps = std::move(next);
    }
    return StateVector::from_amplitudes(std::move(amps), 1e-9);
}

ProductState product_apply(const ProductState &state, const Gate &gate, double angle) {
    if (arity(gate.kind) != 1) {
        throw InvalidArgument(std::string("product_apply: entangling gate ") +
                              gate_name(gate.kind) + " cannot act on a product state");
    }
    const std::size_t q = gate.wires[0];
    if (q >= state.n_qubits()) {
        throw InvalidArgument("product_apply: wire " + std::to_string(q) + " out of range");
    }
    const CMatrix u = gate_matrix(gate.kind, angle);
    ProductState out = state;
    const auto &v = state.qubits_[q];
    out.qubits_[q] = {u(0, 0) * v[0] + u(0, 1) * v[1], u(1, 0) * v[0] + u(1, 1) * v[1]};
    return out;
}

} // namespace qgan
