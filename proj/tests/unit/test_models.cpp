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
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qgan/error.hpp"
#include "qgan/models.hpp"
#include "support/oracles.hpp"

using namespace qgan;
using std::numbers::pi;

namespace {

EmbeddingSpec angle_spec(std::size_t n) { return {EmbeddingKind::kAngle, n, pi}; }

std::vector<std::size_t> range(std::size_t first, std::size_t count) {
    std::vector<std::size_t> r(count);
    for (std::size_t i = 0; i < count; ++i) {
        r[i] = first + i;
    }
    return r;
}

FeatureVector random_features(Rng &rng, std::size_t n) {
    std::vector<double> v(n);
    for (double &x : v) {
        x = rng.uniform();
    }
    return FeatureVector(v);
}

std::vector<double> random_params(Rng &rng, std::size_t n) {
    std::vector<double> p(n);
    for (double &x : p) {
        x = rng.uniform(-pi, pi);
    }
    return p;
}

// Parameters of a depth-1 chain QVC whose output is angle_embed(f): the RY
// layer carries the angles and every entangling parameter is zero.
std::vector<double> embedding_params(const FeatureVector &f, std::size_t n_params) {
    std::vector<double> p(n_params, 0.0);
    for (std::size_t q = 0; q < f.size(); ++q) {
        p[q] = pi * f[q];
    }
    return p;
}

} // namespace

// ---------- build_qvc ----------

TEST(BuildQvc, TwoQubitsDepthOne) {
    const Circuit c = build_qvc(2, 1);
    EXPECT_EQ(c.n_params(), 4u);
    // RY, RY, RYY, then CRY decomposed as RY CNOT RY CNOT.
    const std::vector<GateKind> kinds{GateKind::kRY,  GateKind::kRY,   GateKind::kRYY,
                                      GateKind::kRY,  GateKind::kCNOT, GateKind::kRY,
                                      GateKind::kCNOT};
    ASSERT_EQ(c.size(), kinds.size());
    for (std::size_t g = 0; g < kinds.size(); ++g) {
        EXPECT_EQ(c.gates()[g].kind, kinds[g]) << g;
    }
    EXPECT_EQ(c.gates()[3].param->index, 3u);
    EXPECT_DOUBLE_EQ(c.gates()[3].param->scale, 0.5);
    EXPECT_DOUBLE_EQ(c.gates()[5].param->scale, -0.5);
}

TEST(BuildQvc, ParameterCounts) {
    EXPECT_EQ(build_qvc(4, 1).n_params(), 10u);
    EXPECT_EQ(build_qvc(4, 3).n_params(), 30u);
    EXPECT_EQ(qvc_param_count(4, 3), 30u);
    EXPECT_EQ(build_qvc(4, 1, Topology::kRing).n_params(), 12u);
    EXPECT_EQ(qvc_param_count(6, 4), 64u);
    EXPECT_EQ(qvc_param_count(12, 4), 136u);
    EXPECT_THROW((void)build_qvc(1, 1), InvalidArgument);
    EXPECT_THROW((void)build_qvc(3, 0), InvalidArgument);
}

// ---------- swap_test ----------

TEST(SwapTest, IdenticalOrthogonalAndPlus) {
    Rng rng(1);
    const StateVector psi = oracle::random_state(rng, 2);
    EXPECT_NEAR(swap_test_states(psi, psi), 1.0, 1e-12);
    EXPECT_NEAR(swap_test_states(StateVector::basis(1, 0), StateVector::basis(1, 1)), 0.5, 1e-15);
    const double r = 1.0 / std::sqrt(2.0);
    const StateVector plus = StateVector::from_amplitudes({r, r});
    EXPECT_NEAR(swap_test_states(StateVector(1), plus), 0.75, 1e-15);
}

TEST(SwapTest, RegisterOverlapRejected) {
    const StateVector s(5);
    const std::vector<std::size_t> a{1, 2}, b{2, 3}, c{3, 4};
    EXPECT_THROW((void)swap_test(s, a, b, 0), InvalidArgument);
    EXPECT_THROW((void)swap_test(s, a, c, 1), InvalidArgument);
    EXPECT_THROW((void)swap_test(s, a, std::vector<std::size_t>{3}, 0), InvalidArgument);
}

TEST(SwapTest, MatchesOverlapFormulaAndStaysInRange) {
    Rng rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const StateVector a = oracle::random_state(rng, 3);
        const StateVector b = oracle::random_state(rng, 3);
        const double p = swap_test_states(a, b);
        EXPECT_NEAR(p, 0.5 + 0.5 * std::norm(inner(a, b)), 1e-12);
        EXPECT_GE(p, 0.5 - 1e-10);
        EXPECT_LE(p, 1.0 + 1e-10);
        EXPECT_NEAR(swap_test_states(a, a), 1.0, 1e-10);
    }
}

TEST(SwapTest, MixedRegistersGivePurityOverlap) {
    // Registers entangled with spectator qubits: P(0) = 1/2 + 1/2 Tr(rho_A rho_B).
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector left = oracle::random_state(rng, 2);   // qubits 1 (A) and 2 (spectator)
        const StateVector right = oracle::random_state(rng, 2);  // qubits 3 (B) and 4 (spectator)
        const StateVector full = tensor(StateVector(1), tensor(left, right));
        const DensityMatrix ra = partial_trace(left, std::vector<std::size_t>{0});
        const DensityMatrix rb = partial_trace(right, std::vector<std::size_t>{0});
        const double overlap = (ra.matrix() * rb.matrix()).trace().real();
        const std::vector<std::size_t> a{1}, b{3};
        EXPECT_NEAR(swap_test(full, a, b, 0), 0.5 + 0.5 * overlap, 1e-12);
    }
}

TEST(SwapTest, DestructiveVariantAgreesWithAncillaVersion) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector a = oracle::random_state(rng, 3);
        const StateVector b = oracle::random_state(rng, 3);
        const StateVector pair = tensor(a, b);
        EXPECT_NEAR(destructive_swap_test(pair, range(0, 3), range(3, 3)), swap_test_states(a, b),
                    1e-12);
    }
}

// ---------- IQGAN ----------

TEST(Iqgan, GeneratorMatchingSampleGivesOne) {
    Rng rng(5);
    const IqganModel model = make_iqgan(angle_spec(4), 1);
    const FeatureVector f = random_features(rng, 4);
    EXPECT_NEAR(iqgan_forward(model, embedding_params(f, model.n_params()), f), 1.0, 1e-12);
}

TEST(Iqgan, ZeroParamsZeroSample) {
    const IqganModel model = make_iqgan(angle_spec(4), 2);
    const std::vector<double> zeros(model.n_params(), 0.0);
    EXPECT_NEAR(iqgan_forward(model, zeros, FeatureVector({0, 0, 0, 0})), 1.0, 1e-12);
}

TEST(Iqgan, RandomCaseMatchesInnerProductOracle) {
    Rng rng(6);
    const IqganModel model = make_iqgan(angle_spec(4), 2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto params = random_params(rng, model.n_params());
        const FeatureVector f = random_features(rng, 4);
        const StateVector gamma = run(model.generator, params);
        const StateVector x = angle_embed(f, angle_spec(4));
        EXPECT_NEAR(iqgan_forward(model, params, f), 0.5 + 0.5 * std::norm(inner(gamma, x)),
                    1e-12);
        // Exchanging the registers leaves the swap test unchanged.
        EXPECT_NEAR(swap_test_states(gamma, x), swap_test_states(x, gamma), 1e-12);
    }
}

TEST(Iqgan, TrainableEncoderOffsetsShiftAngles) {
    const IqganModel model = make_iqgan(angle_spec(2), 1, Topology::kChain, true);
    EXPECT_EQ(model.n_params(), qvc_param_count(2, 1) + 2);
    std::vector<double> params(model.n_params(), 0.0);
    params[model.n_generator_params()] = 0.3;
    const StateVector enc = encode_sample(model, params, FeatureVector({0.2, 0.0}));
    const StateVector ref = angle_embed(FeatureVector({0.2 + 0.3 / pi, 0.0}), angle_spec(2));
    EXPECT_NEAR(std::abs(inner(enc, ref)), 1.0, 1e-12);
}

TEST(Iqgan, FeatureLengthMismatchPropagates) {
    const IqganModel model = make_iqgan(angle_spec(4), 1);
    const std::vector<double> zeros(model.n_params(), 0.0);
    EXPECT_THROW((void)iqgan_forward(model, zeros, FeatureVector({0, 0, 0})), InvalidArgument);
}

TEST(Iqgan, AmplitudeEncoderSupported) {
    const IqganModel model = make_iqgan({EmbeddingKind::kAmplitude, 2, pi}, 1);
    const std::vector<double> zeros(model.n_params(), 0.0);
    // |00> generator against the uniform data state: 1/2 + 1/2 * 1/4.
    EXPECT_NEAR(iqgan_forward(model, zeros, FeatureVector({1, 1, 1, 1})), 0.625, 1e-12);
    EXPECT_THROW((void)make_iqgan({EmbeddingKind::kAmplitude, 2, pi}, 1, Topology::kChain, true),
                 InvalidArgument);
}

// ---------- QuGAN ----------

TEST(Qugan, ArchitecturallyIdentical) {
    for (std::size_t n : {2u, 4u, 6u}) {
        for (std::size_t d : {1u, 3u}) {
            const QuganModel m = make_qugan(angle_spec(n), d);
            EXPECT_EQ(m.discriminator.n_params(), m.generator.n_params());
            ASSERT_EQ(m.discriminator.size(), m.generator.size());
            for (std::size_t g = 0; g < m.generator.size(); ++g) {
                EXPECT_EQ(m.discriminator.gates()[g].kind, m.generator.gates()[g].kind);
            }
        }
    }
}

TEST(Qugan, DiscriminatorOutputs) {
    Rng rng(7);
    const QuganModel m = make_qugan(angle_spec(4), 1);
    const FeatureVector f = random_features(rng, 4);
    const StateVector x = angle_embed(f, angle_spec(4));
    EXPECT_NEAR(qugan_disc_out(m, embedding_params(f, m.discriminator.n_params()), x), 1.0, 1e-12);

    const std::vector<double> zeros(m.discriminator.n_params(), 0.0);
    const StateVector ones = angle_embed(FeatureVector({1, 1, 1, 1}), angle_spec(4));
    EXPECT_NEAR(qugan_disc_out(m, zeros, ones), 0.5, 1e-12);

    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_params(rng, m.discriminator.n_params());
        const StateVector in = oracle::random_state(rng, 4);
        const StateVector delta = run(m.discriminator, p);
        EXPECT_NEAR(qugan_disc_out(m, p, in), 0.5 + 0.5 * std::norm(inner(delta, in)), 1e-12);
    }
    EXPECT_THROW((void)qugan_disc_out(m, zeros, StateVector(3)), InvalidArgument);
}

// ---------- generator_state ----------

TEST(GeneratorState, IdentityGenerator) {
    const Circuit g = build_qvc(3, 1);
    const std::vector<double> zeros(g.n_params(), 0.0);
    EXPECT_NEAR(std::abs(generator_state(g, zeros)[0]), 1.0, 1e-15);
    const FeatureVector noise({0.2, 0.7, 0.4});
    const StateVector out = generator_state(g, zeros, &noise);
    EXPECT_NEAR(std::abs(inner(out, angle_embed(noise, angle_spec(3)))), 1.0, 1e-12);
    const FeatureVector bad({0.1});
    EXPECT_THROW((void)generator_state(g, zeros, &bad), InvalidArgument);
}

TEST(GeneratorState, TwoQubitQvcMatchesDenseUnitary) {
    const Circuit g = build_qvc(2, 1);
    const std::vector<double> p{0.3, -1.1, 0.8, 2.0};
    const auto u = oracle::circuit_unitary(g, p);
    const StateVector out = generator_state(g, p);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(std::abs(out[i] - u[i][0]), 0.0, 1e-12);
    }
    // Independent assembly: RY(p0) x RY(p1), RYY(p2), CRY(p3).
    oracle::Dense ref = oracle::kron(oracle::gate_unitary(GateKind::kRY, 0.3),
                                     oracle::gate_unitary(GateKind::kRY, -1.1));
    ref = oracle::matmul(oracle::gate_unitary(GateKind::kRYY, 0.8), ref);
    ref = oracle::matmul(oracle::controlled_ry(2.0), ref);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(std::abs(out[i] - ref[i][0]), 0.0, 1e-12);
    }
}

// ---------- product IQGAN ----------

TEST(ProductIqgan, DecodedPixels) {
    const ProductIqgan m{3, 0.0, pi};
    const FeatureVector img = product_iqgan_image(m, std::vector<double>{0.0, pi, pi / 2});
    EXPECT_NEAR(img[0], 0.0, 1e-15);
    EXPECT_NEAR(img[1], 1.0, 1e-12);
    EXPECT_NEAR(img[2], 0.5, 1e-12);
    EXPECT_THROW((void)product_iqgan_image(m, std::vector<double>{0.0}), InvalidArgument);
}
