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
// Brute-force reference computations used only by the test suites. Nothing
// here calls into the library's numerical kernels: dense matrices are built
// element by element, eigenvalues come from a cyclic Jacobi sweep on the
// real symmetric embedding of a Hermitian matrix.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qgan/qcore.hpp"
#include "qgan/random.hpp"

namespace qgan::oracle {

using C = std::complex<double>;
using Dense = std::vector<std::vector<C>>;
using RealDense = std::vector<std::vector<double>>;

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, std::vector<C>(c, C{})); }

inline Dense identity(std::size_t d) {
    Dense m = zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline Dense matmul(const Dense &a, const Dense &b) {
    Dense out = zeros(a.size(), b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            for (std::size_t j = 0; j < b[0].size(); ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

inline Dense kron(const Dense &a, const Dense &b) {
    Dense out = zeros(a.size() * b.size(), a[0].size() * b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[0].size(); ++j) {
            for (std::size_t k = 0; k < b.size(); ++k) {
                for (std::size_t l = 0; l < b[0].size(); ++l) {
                    out[i * b.size() + k][j * b[0].size() + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    return out;
}

inline std::vector<C> matvec(const Dense &m, const std::vector<C> &v) {
    std::vector<C> out(m.size(), C{});
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            out[i] += m[i][j] * v[j];
        }
    }
    return out;
}

inline Dense pauli_y() { return Dense{{C{0, 0}, C{0, -1}}, {C{0, 1}, C{0, 0}}}; }

/// exp(-i * t * G) by Taylor series (G Hermitian, small dimension).
inline Dense expm_minus_i(const Dense &g, double t) {
    const std::size_t d = g.size();
    Dense a = zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            a[i][j] = C{0, -t} * g[i][j];
        }
    }
    Dense result = identity(d);
    Dense term = identity(d);
    for (int k = 1; k < 60; ++k) {
        term = matmul(term, a);
        for (auto &row : term) {
            for (auto &x : row) {
                x /= static_cast<double>(k);
            }
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                result[i][j] += term[i][j];
            }
        }
    }
    return result;
}

/// Reference gate unitaries on the gate's own wires (first wire most significant).
inline Dense gate_unitary(GateKind kind, double angle) {
    switch (kind) {
    case GateKind::kRY:
        return expm_minus_i(pauli_y(), angle / 2);
    case GateKind::kRYY:
        return expm_minus_i(kron(pauli_y(), pauli_y()), angle / 2);
    case GateKind::kH: {
        const double r = 1.0 / std::sqrt(2.0);
        return Dense{{r, r}, {r, -r}};
    }
    case GateKind::kX:
        return Dense{{0, 1}, {1, 0}};
    case GateKind::kCNOT: {
        Dense m = zeros(4, 4);
        m[0][0] = m[1][1] = m[2][3] = m[3][2] = 1;
        return m;
    }
    case GateKind::kCSWAP: {
        Dense m = identity(8);
        m[5][5] = m[6][6] = 0;
        m[5][6] = m[6][5] = 1;
        return m;
    }
    }
    return {};
}

/// Controlled-RY as a block-diagonal 4x4 unitary.
inline Dense controlled_ry(double angle) {
    Dense m = identity(4);
    const Dense r = gate_unitary(GateKind::kRY, angle);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m[2 + i][2 + j] = r[i][j];
        }
    }
    return m;
}

/// Lifts a k-wire unitary to the full n-qubit space by matching every
/// non-acted bit of row and column indices.
inline Dense lift(const Dense &u, const std::vector<std::size_t> &wires, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    Dense full = zeros(dim, dim);
    std::size_t mask = 0;
    for (std::size_t w : wires) {
        mask |= std::size_t{1} << (n - 1 - w);
    }
    auto sub = [&](std::size_t idx) {
        std::size_t s = 0;
        for (std::size_t w : wires) {
            s = (s << 1) | ((idx >> (n - 1 - w)) & 1U);
        }
        return s;
    };
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if ((i & ~mask) == (j & ~mask)) {
                full[i][j] = u[sub(i)][sub(j)];
            }
        }
    }
    return full;
}

/// Dense unitary of an entire circuit as an ordered matrix product.
inline Dense circuit_unitary(const Circuit &c, const std::vector<double> &params) {
    const std::size_t n = c.n_qubits();
    Dense total = identity(std::size_t{1} << n);
    for (std::size_t g = 0; g < c.size(); ++g) {
        const Gate &gate = c.gates()[g];
        const auto w = gate.used_wires();
        const Dense u =
            lift(gate_unitary(gate.kind, c.angle(g, params)), {w.begin(), w.end()}, n);
        total = matmul(u, total);
    }
    return total;
}

// ------------------------------------------------------------ eigenvalues

/// Cyclic Jacobi eigen-decomposition of a real symmetric matrix.
/// Returns eigenvalues (unsorted) and fills `vectors` column-wise.
inline std::vector<double> jacobi_eigen(RealDense a, RealDense *vectors = nullptr) {
    const std::size_t n = a.size();
    RealDense v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        v[i][i] = 1.0;
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a[p][q] * a[p][q];
            }
        }
        if (off < 1e-30) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = a[i][i];
    }
    if (vectors != nullptr) {
        *vectors = v;
    }
    return values;
}

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix.
inline RealDense real_embedding(const Dense &h) {
    const std::size_t d = h.size();
    RealDense r(2 * d, std::vector<double>(2 * d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            r[i][j] = h[i][j].real();
            r[i][j + d] = -h[i][j].imag();
            r[i + d][j] = h[i][j].imag();
            r[i + d][j + d] = h[i][j].real();
        }
    }
    return r;
}

/// Hermitian eigenvalues, descending. Each eigenvalue appears twice in the
/// embedding; every other one of the sorted list is kept.
inline std::vector<double> hermitian_eigenvalues(const Dense &h) {
    std::vector<double> twice = jacobi_eigen(real_embedding(h));
    std::sort(twice.begin(), twice.end(), std::greater<>());
    std::vector<double> out;
    for (std::size_t i = 0; i < twice.size(); i += 2) {
        out.push_back(0.5 * (twice[i] + twice[i + 1]));
    }
    return out;
}

/// f(H) for Hermitian H, computed on the real embedding and read back from
/// its upper-left / lower-left blocks.
template <typename F> Dense hermitian_function(const Dense &h, F f) {
    const std::size_t d = h.size();
    RealDense vecs;
    const std::vector<double> vals = jacobi_eigen(real_embedding(h), &vecs);
    const std::size_t n2 = 2 * d;
    Dense out = zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double re = 0.0;
            double im = 0.0;
            for (std::size_t k = 0; k < n2; ++k) {
                const double fk = f(vals[k]);
                re += vecs[i][k] * fk * vecs[j][k];
                im += vecs[i + d][k] * fk * vecs[j][k];
            }
            out[i][j] = C{re, im};
        }
    }
    return out;
}

// ---------------------------------------------------------- conversions

inline Dense from_eigen(const CMatrix &m) {
    Dense out = zeros(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
        }
    }
    return out;
}

inline double max_abs_diff(const Dense &a, const CMatrix &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[0].size(); ++j) {
            worst = std::max(worst, std::abs(a[i][j] - b(static_cast<Eigen::Index>(i),
                                                        static_cast<Eigen::Index>(j))));
        }
    }
    return worst;
}

/// rho_{ij} = sum_a <i,a|psi><psi|j,a> by explicit enumeration of basis labels.
inline Dense partial_trace_loop(const StateVector &psi, const std::vector<std::size_t> &keep) {
    const std::size_t n = psi.n_qubits();
    const std::size_t kd = std::size_t{1} << keep.size();
    Dense out = zeros(kd, kd);
    for (std::size_t x = 0; x < psi.dim(); ++x) {
        for (std::size_t y = 0; y < psi.dim(); ++y) {
            bool traced_equal = true;
            for (std::size_t q = 0; q < n; ++q) {
                if (std::find(keep.begin(), keep.end(), q) != keep.end()) {
                    continue;
                }
                if (((x >> (n - 1 - q)) & 1U) != ((y >> (n - 1 - q)) & 1U)) {
                    traced_equal = false;
                    break;
                }
            }
            if (!traced_equal) {
                continue;
            }
            std::size_t i = 0;
            std::size_t j = 0;
            for (std::size_t q : keep) {
                i = (i << 1) | ((x >> (n - 1 - q)) & 1U);
                j = (j << 1) | ((y >> (n - 1 - q)) & 1U);
            }
            out[i][j] += psi[x] * std::conj(psi[y]);
        }
    }
    return out;
}

// --------------------------------------------------------- random inputs

inline StateVector random_state(Rng &rng, std::size_t n) {
    std::vector<C> amps(std::size_t{1} << n);
    for (auto &a : amps) {
        a = C{rng.normal(0, 1), rng.normal(0, 1)};
    }
    return StateVector::normalized(std::move(amps));
}

inline StateVector random_real_state(Rng &rng, std::size_t n) {
    std::vector<C> amps(std::size_t{1} << n);
    for (auto &a : amps) {
        a = C{rng.normal(0, 1), 0.0};
    }
    return StateVector::normalized(std::move(amps));
}

/// Random mixed state of the given rank from a uniform random ensemble.
inline DensityMatrix random_density(Rng &rng, std::size_t n, std::size_t rank) {
    std::vector<StateVector> states;
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t k = 0; k < rank; ++k) {
        states.push_back(random_state(rng, n));
        w.push_back(rng.uniform(0.05, 1.0));
        total += w.back();
    }
    for (double &x : w) {
        x /= total;
    }
    return density_from_ensemble(states, w);
}

} // namespace qgan::oracle
