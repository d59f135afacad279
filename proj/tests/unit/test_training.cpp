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
#include "qgan/training.hpp"
#include "support/oracles.hpp"

using namespace qgan;
using std::numbers::pi;

namespace {

EmbeddingSpec angle_spec(std::size_t n) { return {EmbeddingKind::kAngle, n, pi}; }

std::vector<double> random_params(Rng &rng, std::size_t n) {
    std::vector<double> p(n);
    for (double &x : p) {
        x = rng.uniform(-pi, pi);
    }
    return p;
}

std::vector<double> central_difference(const std::function<double(std::span<const double>)> &f,
                                       std::vector<double> params, double h = 1e-5) {
    std::vector<double> g(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double x = params[k];
        params[k] = x + h;
        const double up = f(params);
        params[k] = x - h;
        const double down = f(params);
        params[k] = x;
        g[k] = (up - down) / (2 * h);
    }
    return g;
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// Random 4-qubit circuit whose parametric gates are all of one kind, with
// fixed H/CNOT scrambling in between. Some parameters are shared by
// several gates so that the per-occurrence accumulation is exercised.
Circuit random_circuit(Rng &rng, GateKind kind) {
    const std::size_t n = 4;
    Circuit c(n);
    for (int i = 0; i < 4; ++i) {
        c.add_param();
    }
    for (int layer = 0; layer < 6; ++layer) {
        const std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) {
            ++b;
        }
        const std::size_t idx = rng.below(c.n_params());
        switch (kind) {
        case GateKind::kRY:
            c.ry(a, ParamRef{idx});
            break;
        case GateKind::kRYY:
            c.ryy(a, b, ParamRef{idx});
            break;
        default:
            c.cry(a, b, idx);
            break;
        }
        c.h(rng.below(n));
        c.cnot(b, a);
    }
    return c;
}

std::vector<FeatureVector> repeat(const FeatureVector &f, std::size_t n) {
    return std::vector<FeatureVector>(n, f);
}

} // namespace

// ------------------------------------------------------------------ gan_value

TEST(GanValue, BalancedDiscriminatorGivesMinusTwoLogTwo) {
    const std::vector<double> half{0.5};
    EXPECT_NEAR(gan_value(half, half), -1.386294, 1e-6);
    EXPECT_NEAR(gan_value(half, half), -2 * std::log(2.0), 1e-15);
}

TEST(GanValue, PerfectDiscriminatorIsNearZero) {
    const std::vector<double> real{1 - 1e-12};
    const std::vector<double> fake{1e-12};
    EXPECT_NEAR(gan_value(real, fake), 0.0, 1e-9);
}

TEST(GanValue, MeanLogArithmetic) {
    const std::vector<double> real{0.8, 0.6};
    const std::vector<double> fake{0.3, 0.1};
    const double expected = (std::log(0.8) + std::log(0.6)) / 2 + (std::log(0.7) + std::log(0.9)) / 2;
    EXPECT_NEAR(gan_value(real, fake), expected, 1e-15);
}

TEST(GanValue, ClampsAtTheFloor) {
    const std::vector<double> zero{0.0};
    const std::vector<double> one{1.0};
    EXPECT_NEAR(gan_value(zero, one), 2 * std::log(kLogFloor), 1e-9);
}

TEST(GanValue, MonotoneInEachArgument) {
    for (double p = 0.05; p < 0.95; p += 0.05) {
        const std::vector<double> base{0.5};
        const std::vector<double> lo{p}, hi{p + 0.05};
        EXPECT_LT(gan_value(lo, base), gan_value(hi, base));
        EXPECT_GT(gan_value(base, lo), gan_value(base, hi));
    }
}

TEST(GanValue, Errors) {
    const std::vector<double> empty;
    const std::vector<double> half{0.5};
    const std::vector<double> bad{1.5};
    EXPECT_THROW((void)gan_value(empty, half), InvalidArgument);
    EXPECT_THROW((void)gan_value(half, empty), InvalidArgument);
    EXPECT_THROW((void)gan_value(bad, half), InvalidArgument);
}

// ------------------------------------------------------------ parameter shift

TEST(ParameterShift, ZExpectationAfterRy) {
    Circuit c(1, 1);
    c.ry(0, ParamRef{0});
    auto z_at = [&](std::span<const double> p) {
        return [&, p](const GateShift &s) {
            const StateVector psi = run(c, p, StateVector(1), s);
            return 1.0 - 2.0 * prob_one(psi, 0);
        };
    };
    const std::vector<double> at0{0.0};
    const std::vector<double> at_half{pi / 2};
    EXPECT_NEAR(parameter_shift_grad(z_at(at0), c, at0)[0], 0.0, 1e-12);
    EXPECT_NEAR(parameter_shift_grad(z_at(at_half), c, at_half)[0], -1.0, 1e-12);
}

TEST(ParameterShift, SwapTestLossMatchesFiniteDifferenceOnQvc) {
    Rng rng(11);
    const Circuit c = build_qvc(4, 2, Topology::kChain);
    const auto params = random_params(rng, c.n_params());
    const StateVector target = oracle::random_state(rng, 4);
    auto loss = [&](std::span<const double> p, const GateShift &s) {
        return 1.0 - swap_test_overlap(run(c, p, StateVector(4), s), target);
    };
    const auto ps = parameter_shift_grad([&](const GateShift &s) { return loss(params, s); }, c,
                                         params);
    const auto fd =
        central_difference([&](std::span<const double> p) { return loss(p, GateShift{}); }, params);
    EXPECT_LT(max_abs_diff(ps, fd), 1e-6);
}

class ParameterShiftPerKind : public ::testing::TestWithParam<GateKind> {};

TEST_P(ParameterShiftPerKind, MatchesFiniteDifferenceOnTwentyCircuits) {
    Rng rng(100 + static_cast<int>(GetParam()));
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit c = random_circuit(rng, GetParam());
        const auto params = random_params(rng, c.n_params());
        const StateVector target = oracle::random_state(rng, 4);
        auto loss = [&](std::span<const double> p, const GateShift &s) {
            return swap_test_overlap(run(c, p, StateVector(4), s), target);
        };
        const auto ps = parameter_shift_grad([&](const GateShift &s) { return loss(params, s); },
                                             c, params);
        const auto fd = central_difference(
            [&](std::span<const double> p) { return loss(p, GateShift{}); }, params);
        EXPECT_LT(max_abs_diff(ps, fd), 1e-6) << gate_name(GetParam()) << " trial " << trial;
    }
}

INSTANTIATE_TEST_SUITE_P(Kinds, ParameterShiftPerKind,
                         ::testing::Values(GateKind::kRY, GateKind::kRYY, GateKind::kCNOT),
                         [](const auto &info) {
                             return info.param == GateKind::kCNOT ? std::string("CRY")
                                                                  : gate_name(info.param);
                         });

TEST(ParameterShift, JacobianRowsMatchScalarGradients) {
    Rng rng(5);
    const Circuit c = build_qvc(3, 1, Topology::kRing);
    const auto params = random_params(rng, c.n_params());
    const StateVector a = oracle::random_state(rng, 3);
    const StateVector b = oracle::random_state(rng, 3);
    const auto jac = parameter_shift_jacobian(
        [&](const GateShift &s) {
            const StateVector psi = run(c, params, StateVector(3), s);
            return std::vector<double>{swap_test_overlap(psi, a), swap_test_overlap(psi, b)};
        },
        c, params);
    ASSERT_EQ(jac.size(), 2u);
    const auto ga = parameter_shift_grad(
        [&](const GateShift &s) { return swap_test_overlap(run(c, params, StateVector(3), s), a); },
        c, params);
    EXPECT_EQ(jac[0], ga);
}

TEST(ParameterShift, RejectsWrongParameterCount) {
    const Circuit c = build_qvc(2, 1, Topology::kChain);
    const std::vector<double> params(c.n_params() + 1, 0.0);
    EXPECT_THROW((void)parameter_shift_grad([](const GateShift &) { return 0.0; }, c, params),
                 InvalidArgument);
}

// ------------------------------------------------------------------ optimizer

TEST(Optimizer, SgdStepsAgainstTheGradient) {
    Optimizer opt({OptimizerKind::kSgd}, 0.5, 2);
    std::vector<double> p{1.0, -1.0};
    const std::vector<double> g{2.0, -4.0};
    opt.step(p, g);
    EXPECT_DOUBLE_EQ(p[0], 0.0);
    EXPECT_DOUBLE_EQ(p[1], 1.0);
}

TEST(Optimizer, AdamFirstStepHasLearningRateMagnitude) {
    Optimizer opt({}, 0.01, 2);
    std::vector<double> p{0.0, 0.0};
    const std::vector<double> g{3.0, -0.2};
    opt.step(p, g);
    EXPECT_NEAR(p[0], -0.01, 1e-9);
    EXPECT_NEAR(p[1], 0.01, 1e-9);
}

// ----------------------------------------------------------------- config & IO

TEST(TrainConfig, ValidateNamesTheField) {
    TrainConfig cfg;
    cfg.batch_size = 0;
    try {
        cfg.validate();
        FAIL();
    } catch (const InvalidArgument &e) {
        EXPECT_NE(std::string(e.what()).find("batch_size"), std::string::npos);
    }
    cfg = {};
    cfg.learning_rate = 0.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.epochs = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Noise, ParseRoundTrip) {
    EXPECT_EQ(parse_noise("none").kind, NoiseKind::kNone);
    EXPECT_EQ(parse_noise("uniform01").kind, NoiseKind::kUniform01);
    const NoiseSpec g = parse_noise("gaussian:0.25");
    EXPECT_EQ(g.kind, NoiseKind::kGaussian);
    EXPECT_DOUBLE_EQ(g.sigma, 0.25);
    EXPECT_EQ(parse_noise(noise_to_string(g)).sigma, 0.25);
    EXPECT_THROW((void)parse_noise("gaussian:"), InvalidArgument);
    EXPECT_THROW((void)parse_noise("gaussian:-1"), InvalidArgument);
    EXPECT_THROW((void)parse_noise("pink"), InvalidArgument);
}

TEST(LossTrace, CsvRoundTripKeepsEmptyDiscriminatorField) {
    LossTrace t;
    t.rows.push_back({0, std::nullopt, 0.125});
    t.rows.push_back({40, -1.3862943611198906, 0.1 + 0.2});
    const std::string csv = t.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "batch,loss_d,loss_g");
    EXPECT_NE(csv.find("\n0,,0.125\n"), std::string::npos);
    const LossTrace back = LossTrace::from_csv(csv);
    ASSERT_EQ(back.rows.size(), 2u);
    EXPECT_FALSE(back.rows[0].loss_d.has_value());
    EXPECT_EQ(*back.rows[1].loss_d, -1.3862943611198906);
    EXPECT_EQ(back.rows[1].loss_g, 0.1 + 0.2);
    EXPECT_THROW((void)LossTrace::from_csv("a,b,c\n"), FormatError);
    EXPECT_THROW((void)LossTrace::from_csv("batch,loss_d,loss_g\n1,x,2\n"), FormatError);
}

TEST(LossTrace, CadenceFormula) {
    EXPECT_EQ(expected_trace_rows(180, 40), 5u);
    EXPECT_EQ(expected_trace_rows(39, 40), 1u);
    EXPECT_EQ(expected_trace_rows(80, 40), 3u);
}

// ---------------------------------------------------------------------- IQGAN

TEST(TrainIqgan, SinglePointConverges) {
    const IqganModel model = make_iqgan(angle_spec(4), 2);
    const std::vector<FeatureVector> data{FeatureVector({0.2, 0.9, 0.5, 0.7})};
    TrainConfig cfg;
    cfg.epochs = 300;
    cfg.learning_rate = 0.05;
    cfg.seed = 3;
    const IqganTraining r = train_iqgan(model, data, cfg);
    EXPECT_LT(iqgan_loss(model, r.params, data), 0.01);
    EXPECT_LT(r.trace.rows.back().loss_g, r.trace.rows.front().loss_g);
}

TEST(TrainIqgan, ZeroInitialisedParamsOnZeroDataHaveZeroLoss) {
    const IqganModel model = make_iqgan(angle_spec(4), 2);
    const std::vector<FeatureVector> data{FeatureVector({0.0, 0.0, 0.0, 0.0})};
    TrainConfig cfg;
    cfg.init_scale = 0.0;
    const IqganTraining r = train_iqgan(model, data, cfg);
    EXPECT_NEAR(r.trace.rows.front().loss_g, 0.0, 1e-15);
}

TEST(TrainIqgan, LossIsNonNegativeAndZeroOnlyAtTheSample) {
    const IqganModel model = make_iqgan(angle_spec(3), 2);
    Rng rng(8);
    const std::vector<FeatureVector> data{FeatureVector({0.4, 0.1, 0.8})};
    for (int t = 0; t < 50; ++t) {
        const auto p = random_params(rng, model.n_params());
        const double loss = iqgan_loss(model, p, data);
        EXPECT_GE(loss, 0.0);
        const double overlap = swap_test_overlap(run(model.generator, p),
                                                 encode_fixed(model.encoder, data[0]));
        EXPECT_NEAR(loss, 1.0 - overlap, 1e-12);
    }
}

TEST(TrainIqgan, TrainableEncoderOffsetsFollowTheGradient) {
    // Generator frozen at zero: only the offsets can pull the data toward |000>.
    const IqganModel model = make_iqgan(angle_spec(3), 1, Topology::kChain, true);
    std::vector<double> params(model.n_params(), 0.0);
    const std::vector<FeatureVector> data{FeatureVector({0.3, 0.3, 0.3})};
    const double before = iqgan_loss(model, params, data);
    for (std::size_t q = 0; q < 3; ++q) {
        params[model.n_generator_params() + q] = -0.3 * pi;
    }
    EXPECT_GT(before, 0.1);
    EXPECT_NEAR(iqgan_loss(model, params, data), 0.0, 1e-12);

    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.learning_rate = 0.05;
    const IqganTraining r = train_iqgan(model, data, cfg);
    EXPECT_LT(r.trace.rows.back().loss_g, 0.01);
    EXPECT_EQ(r.params.size(), model.n_params());
}

TEST(TrainIqgan, DeterministicAndCadenceRowCount) {
    const IqganModel model = make_iqgan(angle_spec(3), 1);
    Rng rng(4);
    std::vector<FeatureVector> data;
    for (int i = 0; i < 7; ++i) {
        data.push_back(FeatureVector({rng.uniform(), rng.uniform(), rng.uniform()}));
    }
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 2;
    cfg.log_every_batches = 3;
    cfg.seed = 77;
    std::vector<std::size_t> hooked;
    const auto a = train_iqgan(model, data, cfg,
                               [&](std::size_t b, std::span<const double>) { hooked.push_back(b); });
    const auto b = train_iqgan(model, data, cfg);
    EXPECT_EQ(a.trace.to_csv(), b.trace.to_csv());
    EXPECT_EQ(a.params, b.params);
    const std::size_t total = 5 * 4;
    EXPECT_EQ(a.trace.rows.size(), expected_trace_rows(total, 3));
    EXPECT_EQ(hooked.size(), a.trace.rows.size());
    for (std::size_t i = 1; i < a.trace.rows.size(); ++i) {
        EXPECT_GT(a.trace.rows[i].batch, a.trace.rows[i - 1].batch);
        EXPECT_FALSE(a.trace.rows[i].loss_d.has_value());
    }
    cfg.seed = 78;
    EXPECT_NE(train_iqgan(model, data, cfg).params, a.params);
}

TEST(TrainIqgan, Errors) {
    const IqganModel model = make_iqgan(angle_spec(3), 1);
    TrainConfig cfg;
    EXPECT_THROW((void)train_iqgan(model, {}, cfg), InvalidArgument);
    const std::vector<FeatureVector> wrong{FeatureVector({0.1, 0.2})};
    EXPECT_THROW((void)train_iqgan(model, wrong, cfg), InvalidArgument);
    const std::vector<FeatureVector> ok{FeatureVector({0.1, 0.2, 0.3})};
    cfg.noise = parse_noise("uniform01");
    EXPECT_THROW((void)train_iqgan(model, ok, cfg), InvalidArgument);
}

// ---------------------------------------------------------------------- QuGAN

TEST(DiscReadout, RescaledIsSquaredOverlap) {
    Rng rng(2);
    const StateVector a = oracle::random_state(rng, 2);
    const StateVector b = oracle::random_state(rng, 2);
    const double ov = std::norm(inner(a, b));
    EXPECT_NEAR(disc_readout(a, b, SwapReadout::kRescaled), ov, 1e-12);
    EXPECT_NEAR(disc_readout(a, b, SwapReadout::kRaw), 0.5 + 0.5 * ov, 1e-12);
}

TEST(TrainQugan, FrozenMatchedGeneratorCapsTheValueAtMinusTwoLogTwo) {
    // When the generator reproduces the data exactly, every discriminator
    // sees D(real) = D(fake) and V(D, G) <= -2 log 2.
    const QuganModel model = make_qugan(angle_spec(2), 1);
    Rng rng(6);
    const auto gen = random_params(rng, model.generator.n_params());
    const StateVector data_state = run(model.generator, gen);
    const std::vector<StateVector> real{data_state};
    TrainConfig cfg;
    double best = -1e9;
    for (int t = 0; t < 200; ++t) {
        const auto disc = random_params(rng, model.discriminator.n_params());
        const QuganLosses l = qugan_losses(model, disc, gen, real, {}, cfg);
        EXPECT_LE(l.value, -2 * std::log(2.0) + 1e-12);
        best = std::max(best, l.value);
    }
    EXPECT_GT(best, -2 * std::log(2.0) - 0.05);
}

TEST(TrainQugan, OneQubitToyReachesTheDataState) {
    // Data |0>, generator RY(theta), discriminator reference RY(phi)|0>.
    QuganModel model;
    model.encoder = angle_spec(1);
    model.depth = 1;
    model.generator = Circuit(1, 1);
    model.generator.ry(0, ParamRef{0});
    model.discriminator = Circuit(1, 1);
    model.discriminator.ry(0, ParamRef{0});

    // Landscape oracle: for each theta, max over phi of V(phi, theta); the
    // generator's minimax optimum sits at theta = 0 with value -2 log 2.
    auto value = [](double phi, double theta) {
        const double dr = std::pow(std::cos(phi / 2), 2);
        const double df = std::pow(std::cos((phi - theta) / 2), 2);
        return std::log(std::max(dr, kLogFloor)) + std::log(std::max(1 - df, kLogFloor));
    };
    double best_theta = 0.0, best_val = 1e9;
    for (int i = -200; i <= 200; ++i) {
        const double theta = pi * i / 200.0;
        double inner_max = -1e9;
        for (int j = -400; j <= 400; ++j) {
            inner_max = std::max(inner_max, value(pi * j / 400.0, theta));
        }
        if (inner_max < best_val) {
            best_val = inner_max;
            best_theta = theta;
        }
    }
    EXPECT_NEAR(best_theta, 0.0, 1e-12);
    EXPECT_NEAR(best_val, -2 * std::log(2.0), 1e-3);

    // Alternating gradient play does not settle at that point: a pure
    // reference state cannot output D = 1/2 with zero slope, so the pair
    // orbits it. The trajectory must keep passing through theta = 0 (mod 2 pi).
    const std::vector<FeatureVector> data{FeatureVector({0.0})};
    TrainConfig cfg;
    cfg.epochs = 600;
    cfg.learning_rate = 0.05;
    cfg.init_scale = 1.0;
    cfg.log_every_batches = 1;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        cfg.seed = seed;
        double best = 0.0;
        const QuganTraining r = train_qugan(model, data, cfg, [&](std::size_t, auto p) {
            best = std::max(best, std::pow(std::cos(p[0] / 2), 2));
        });
        EXPECT_GT(best, 0.999) << "seed " << seed;
        EXPECT_EQ(r.trace.rows.size(), 601u);
    }
}

TEST(TrainQugan, DeterministicWithNoiseAndBothLossesLogged) {
    const QuganModel model = make_qugan(angle_spec(2), 1);
    const std::vector<FeatureVector> data{FeatureVector({0.1, 0.8}), FeatureVector({0.3, 0.6}),
                                          FeatureVector({0.9, 0.2})};
    TrainConfig cfg;
    cfg.epochs = 4;
    cfg.batch_size = 2;
    cfg.log_every_batches = 2;
    cfg.noise = parse_noise("gaussian:0.2");
    cfg.disc_steps = 2;
    const auto a = train_qugan(model, data, cfg);
    const auto b = train_qugan(model, data, cfg);
    EXPECT_EQ(a.trace.to_csv(), b.trace.to_csv());
    EXPECT_EQ(a.trace.rows.size(), expected_trace_rows(8, 2));
    for (const auto &row : a.trace.rows) {
        ASSERT_TRUE(row.loss_d.has_value());
        EXPECT_LE(*row.loss_d, 0.0);
        EXPECT_GE(row.loss_g, 0.0);
    }
}

TEST(TrainQugan, Errors) {
    const QuganModel model = make_qugan(angle_spec(2), 1);
    TrainConfig cfg;
    EXPECT_THROW((void)train_qugan(model, {}, cfg), InvalidArgument);
    const std::vector<FeatureVector> wrong{FeatureVector({0.1, 0.2, 0.3})};
    EXPECT_THROW((void)train_qugan(model, wrong, cfg), InvalidArgument);
}

// -------------------------------------------------------------- product mode

TEST(TrainProduct, SingleImageIsRecoveredExactly) {
    const std::vector<FeatureVector> images{FeatureVector({0.0, 0.25, 0.5, 1.0, 0.8})};
    const ProductIqgan model{5};
    TrainConfig cfg;
    cfg.epochs = 400;
    cfg.learning_rate = 2.0;
    cfg.optimizer.kind = OptimizerKind::kSgd;
    const ProductTraining r = train_product(model, images, cfg);
    for (std::size_t p = 0; p < 5; ++p) {
        EXPECT_NEAR(r.angles[p], pi * images[0][p], 1e-6) << "pixel " << p;
    }
    EXPECT_NEAR(r.trace.rows.back().loss_g, 0.0, 1e-12);
}

TEST(TrainProduct, OppositePixelsGiveAFlatObjective) {
    // x = 0 and x = 1 contribute cos^2(t/2) + sin^2(t/2): every angle,
    // including pi/2, is optimal.
    const ProductIqgan model{1};
    const std::vector<FeatureVector> images{FeatureVector({0.0}), FeatureVector({1.0})};
    const std::vector<double> half{pi / 2};
    EXPECT_NEAR(product_loss(model, half, images), 0.5, 1e-15);
    for (double t = -pi; t <= pi; t += 0.1) {
        const std::vector<double> a{t};
        EXPECT_NEAR(product_loss(model, a, images), 0.5, 1e-12);
    }
}

TEST(TrainProduct, QubitFidelityMatchesStateOverlap) {
    for (double t : {-1.0, 0.0, 0.7, 2.5}) {
        for (double d : {0.0, 1.3, pi}) {
            Circuit ca(1), cb(1);
            ca.ry(0, std::nullopt, t);
            cb.ry(0, std::nullopt, d);
            const StateVector sa = run(ca, {});
            const StateVector sb = run(cb, {});
            EXPECT_NEAR(qubit_fidelity(t, d), std::norm(inner(sa, sb)), 1e-12);
        }
    }
}

TEST(TrainProduct, NoiseIsDeterministicAndRaggedInputsAreRejected) {
    const ProductIqgan model{2, 0.1};
    const std::vector<FeatureVector> images{FeatureVector({0.2, 0.4}), FeatureVector({0.3, 0.5})};
    TrainConfig cfg;
    cfg.epochs = 10;
    const auto a = train_product(model, images, cfg);
    const auto b = train_product(model, images, cfg);
    EXPECT_EQ(a.angles, b.angles);
    const ProductIqgan clean{2};
    EXPECT_NE(train_product(clean, images, cfg).angles, a.angles);

    const std::vector<FeatureVector> ragged{FeatureVector({0.2, 0.4}), FeatureVector({0.3})};
    EXPECT_THROW((void)train_product(model, ragged, cfg), InvalidArgument);
    EXPECT_THROW((void)train_product(model, {}, cfg), InvalidArgument);
}
