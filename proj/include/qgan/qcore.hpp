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
 * @file qcore.hpp
 * Exact statevector and density-matrix simulation.
 *
 * Basis ordering: qubit 0 is the most significant bit of the basis index,
 * so for n qubits qubit q lives at bit position (n - 1 - q).
 *
 * Gate conventions:
 *   RY(t)  = exp(-i t Y / 2)
 *   RYY(t) = exp(-i t (Y (x) Y) / 2)
 *   CRY(t) is never stored directly; append_cry() emits
 *   RY(t/2) on target, CNOT, RY(-t/2) on target, CNOT.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qgan {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-10;

/// Unit-norm amplitude vector over n qubits.
class StateVector {
  public:
    /// |0...0> on n qubits.
    explicit StateVector(std::size_t n_qubits);

    static StateVector basis(std::size_t n_qubits, std::size_t index);

    /// Validates length 2^n and unit norm (within `tolerance`).
    static StateVector from_amplitudes(std::vector<Complex> amplitudes,
                                       double tolerance = kNormTolerance);

    /// Rescales an arbitrary nonzero vector to unit norm.
    static StateVector normalized(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }
    [[nodiscard]] double norm() const;

    [[nodiscard]] Eigen::VectorXcd to_eigen() const;

  private:
    StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);

    std::size_t n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
  public:
    /// Validates the invariants within `tolerance`.
    explicit DensityMatrix(CMatrix entries, double tolerance = kNormTolerance);

    static DensityMatrix pure(const StateVector &psi);

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    [[nodiscard]] const CMatrix &matrix() const { return entries_; }
    [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  private:
    DensityMatrix(CMatrix entries, std::size_t n_qubits);

    std::size_t n_qubits_;
    CMatrix entries_;
};

enum class GateKind { kRY, kRYY, kH, kX, kCNOT, kCSWAP };

[[nodiscard]] std::size_t arity(GateKind kind);
[[nodiscard]] bool is_parametric(GateKind kind);
[[nodiscard]] const char *gate_name(GateKind kind);

/// Reference into a circuit's parameter vector. The gate angle is
/// params[index] * scale (plus the gate's fixed offset).
struct ParamRef {
    std::size_t index = 0;
    double scale = 1.0;
};

struct Gate {
    GateKind kind = GateKind::kH;
    std::array<std::size_t, 3> wires{};
    std::optional<ParamRef> param;
    /// Fixed angle added to the parameter contribution.
    double offset = 0.0;

    [[nodiscard]] std::span<const std::size_t> used_wires() const {
        return {wires.data(), arity(kind)};
    }
};

/// Shift applied to a single gate occurrence (parameter-shift evaluations).
struct GateShift {
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::size_t gate = kNone;
    double delta = 0.0;

    [[nodiscard]] bool active() const { return gate != kNone; }
};

/// Ordered gate list over a fixed register with shared parameter references.
class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits, std::size_t n_params = 0);

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t n_params() const { return n_params_; }
    [[nodiscard]] std::span<const Gate> gates() const { return gates_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }

    /// Reserves a fresh parameter slot and returns its index.
    std::size_t add_param();

    /// Validates wires and parameter references before appending.
    Circuit &add(const Gate &gate);

    Circuit &ry(std::size_t q, std::optional<ParamRef> p, double offset = 0.0);
    Circuit &ryy(std::size_t a, std::size_t b, std::optional<ParamRef> p, double offset = 0.0);
    Circuit &h(std::size_t q);
    Circuit &x(std::size_t q);
    Circuit &cnot(std::size_t control, std::size_t target);
    Circuit &cswap(std::size_t control, std::size_t a, std::size_t b);

    /// Controlled-RY(params[index]) in its two-RY/two-CNOT decomposition.
    Circuit &cry(std::size_t control, std::size_t target, std::size_t param_index);

    /// Effective angle of gate `g` for the given parameters.
    [[nodiscard]] double angle(std::size_t g, std::span<const double> params,
                               const GateShift &shift = {}) const;

  private:
    std::size_t n_qubits_;
    std::size_t n_params_;
    std::vector<Gate> gates_;
};

/// Qubit-wise product state; the fast path for entanglement-free circuits.
class ProductState {
  public:
    explicit ProductState(std::size_t n_qubits);

    static ProductState from_qubits(std::vector<std::array<Complex, 2>> qubits);

    [[nodiscard]] std::size_t n_qubits() const { return qubits_.size(); }
    [[nodiscard]] const std::array<Complex, 2> &qubit(std::size_t q) const { return qubits_.at(q); }
    [[nodiscard]] double prob_one(std::size_t q) const { return std::norm(qubits_.at(q)[1]); }

    /// Tensor product of the per-qubit vectors.
    [[nodiscard]] StateVector to_state_vector() const;

  private:
    std::vector<std::array<Complex, 2>> qubits_;

    friend ProductState product_apply(const ProductState &, const Gate &, double);
};

/// Dense 2x2 / 4x4 / 8x8 unitary of a gate (row-major in the gate's own
/// wire order, first wire most significant).
[[nodiscard]] CMatrix gate_matrix(GateKind kind, double angle);

[[nodiscard]] StateVector apply_gate(const StateVector &state, const Gate &gate, double angle);

/// Runs the circuit gate by gate; each parametric gate receives
/// params[ref.index] * ref.scale + offset (+ shift.delta on the shifted gate).
[[nodiscard]] StateVector run(const Circuit &circuit, std::span<const double> params,
                              const StateVector &initial, const GateShift &shift = {});

[[nodiscard]] StateVector run(const Circuit &circuit, std::span<const double> params);

/// Vector-Jacobian product by adjoint differentiation.
///
/// For a real loss L(psi) with cotangent phi = dL/d(conj psi) evaluated at
/// the final state, returns dL/dparams = 2 Re <phi| d psi / d params>.
/// `final_state` must be the output of run(circuit, params, initial).
[[nodiscard]] std::vector<double> adjoint_vjp(const Circuit &circuit,
                                              std::span<const double> params,
                                              const StateVector &final_state,
                                              std::span<const Complex> cotangent);

[[nodiscard]] double prob_one(const StateVector &state, std::size_t qubit);

/// Basis-outcome probabilities of the first `visible` qubits, marginalised
/// over the remaining ones.
[[nodiscard]] std::vector<double> marginal_probabilities(const StateVector &state,
                                                         std::size_t visible);

[[nodiscard]] Complex inner(const StateVector &a, const StateVector &b);

[[nodiscard]] StateVector tensor(const StateVector &a, const StateVector &b);

/// Reduced density matrix on `keep` (output qubit order follows `keep`).
[[nodiscard]] DensityMatrix partial_trace(const StateVector &state,
                                          std::span<const std::size_t> keep);
[[nodiscard]] DensityMatrix partial_trace(const DensityMatrix &rho,
                                          std::span<const std::size_t> keep);

[[nodiscard]] DensityMatrix density_from_ensemble(std::span<const StateVector> states,
                                                  std::span<const double> probs);

struct EigenDecomposition {
    std::vector<double> values;        // descending
    std::vector<StateVector> vectors;  // orthonormal, vectors[i] pairs with values[i]
};

[[nodiscard]] EigenDecomposition eigh(const DensityMatrix &rho);

/// Eigenvalues (descending) and column eigenvectors of any Hermitian matrix.
struct HermitianEigen {
    Eigen::VectorXd values;
    CMatrix vectors;
};
[[nodiscard]] HermitianEigen hermitian_eigen(const CMatrix &m, double hermitian_tol = 1e-10);

[[nodiscard]] ProductState product_apply(const ProductState &state, const Gate &gate, double angle);

} // namespace qgan
