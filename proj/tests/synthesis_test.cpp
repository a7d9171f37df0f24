// Copyright 2026 The qproc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace qproc;
using namespace qproc::testing;

namespace {

QuditRegisterState qubit(Complex mu, Complex nu) { return QuditRegisterState(2, 1, {mu, nu}); }

/// Program for A_z written out from its Bell expansion on the qubit network:
/// -(mu nu* + mu* nu)|Phi+> + (mu nu* - mu* nu)|Phi-> + (|nu|^2 - |mu|^2)|Psi->, already of unit norm.
Amplitudes az_program_closed_form(Complex mu, Complex nu) {
    Complex a = -(mu * std::conj(nu) + std::conj(mu) * nu);
    Complex b = mu * std::conj(nu) - std::conj(mu) * nu;
    Complex c = std::norm(nu) - std::norm(mu);
    Amplitudes out(4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = a * phi_plus()[i] + b * phi_minus()[i] + c * psi_minus()[i];
    }
    return out;
}

/// q_mn of 1 - 2|phi><phi| straight from the trace:
/// delta_{m0} delta_{n0} - (2/N) sum_s exp(2 pi i s m / N) phi_{s-n} phi*_s.
Complex reflection_coefficient(const QuditRegisterState &phi, std::size_t m, std::size_t n) {
    const std::size_t dim = phi.dim();
    Complex acc = 0.0;
    for (std::size_t s = 0; s < dim; ++s) {
        acc += root_of_unity(static_cast<long long>(s * m), dim) * phi[(s + dim - n) % dim] * std::conj(phi[s]);
    }
    Complex q = -2.0 / static_cast<double>(dim) * acc;
    if (m == 0 && n == 0) {
        q += 1.0;
    }
    return q;
}

} // namespace

TEST(HsExpand, Identity) {
    for (std::size_t n = 2; n <= 5; ++n) {
        auto e = hs_expand(DenseOperator::identity(n));
        for (const BellLabel &l : all_bell_labels(n)) {
            EXPECT_LT(std::abs(e.at(l) - (l == BellLabel(n, 0, 0) ? 1.0 : 0.0)), 1e-15);
        }
    }
}

TEST(HsExpand, AzCoefficients) {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        auto phi = random_state(2, 1, rng);
        const Complex mu = phi[0];
        const Complex nu = phi[1];
        auto e = hs_expand(az_operator(phi));
        EXPECT_LT(std::abs(e.at({2, 0, 0})), 1e-15);
        EXPECT_LT(std::abs(e.at({2, 0, 1}) + (mu * std::conj(nu) + std::conj(mu) * nu)), 1e-15);
        EXPECT_LT(std::abs(e.at({2, 1, 1}) - (mu * std::conj(nu) - std::conj(mu) * nu)), 1e-15);
        EXPECT_LT(std::abs(e.at({2, 1, 0}) - (std::norm(nu) - std::norm(mu))), 1e-15);
    }
}

TEST(HsExpand, ReflectionClosedForm) {
    Rng rng(42);
    for (std::size_t n = 2; n <= 5; ++n) {
        auto phi = random_state(n, 1, rng);
        auto e = hs_expand(reflection_operator(phi));
        for (const BellLabel &l : all_bell_labels(n)) {
            EXPECT_LT(std::abs(e.at(l) - reflection_coefficient(phi, l.m(), l.n())), 1e-14);
        }
    }
}

TEST(HsExpand, MatchesTraceOracle) {
    Rng rng(43);
    for (std::size_t n = 2; n <= 5; ++n) {
        auto a = random_operator(n, rng);
        auto e = hs_expand(a);
        for (const BellLabel &l : all_bell_labels(n)) {
            EXPECT_LT(std::abs(e.at(l) - trace_coefficient(a, l)), 1e-13);
        }
    }
}

TEST(HsExpand, ZeroOperator) {
    EXPECT_THROW(hs_expand(DenseOperator::zero(3)), ZeroOperatorError);
    EXPECT_THROW(synthesize_program(DenseOperator::zero(2)), ZeroOperatorError);
}

TEST(SynthesizeProgram, BasisOperatorGivesBellState) {
    for (std::size_t n = 2; n <= 4; ++n) {
        for (const BellLabel &l : all_bell_labels(n)) {
            auto p = synthesize_program(u_mn(n, l));
            EXPECT_LT(max_abs_diff(p.state, bell_state(n, l)), 1e-15);
            EXPECT_EQ(p.support.size(), 1u);
        }
    }
}

TEST(SynthesizeProgram, AzMatchesClosedForm) {
    Rng rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        auto phi = random_state(2, 1, rng);
        auto p = synthesize_program(az_operator(phi));
        EXPECT_LT(max_abs_diff(amps(p.state), az_program_closed_form(phi[0], phi[1])), 1e-14);
        EXPECT_EQ(p.support.size(), 3u);
    }
}

TEST(SynthesizeProgram, Example2) {
    for (std::size_t n : {2, 4, 6, 8}) {
        for (double theta : {0.0, 0.3, 1.1, std::numbers::pi / 2}) {
            auto p = example2_program(theta, n);
            auto expected = Complex(std::cos(theta)) * as_unnormalized(bell_state(n, {n, 0, 0})) +
                            Complex(0.0, std::sin(theta)) * as_unnormalized(bell_state(n, {n, 0, static_cast<long long>(n / 2)}));
            EXPECT_LT(max_abs_diff(p.state, expected), 1e-14) << n << " " << theta;
        }
        EXPECT_EQ(example2_program(0.3, n).support.size(), 2u);
        EXPECT_EQ(example2_program(0.0, n).support.size(), 1u);
        EXPECT_EQ(example2_program(std::numbers::pi / 2, n).support.size(), 1u);
    }
    EXPECT_THROW(example2_operator(0.3, 3), ShapeError);
}

TEST(SynthesizeProgram, Example2Unitary) {
    for (std::size_t n : {2, 4, 6, 8}) {
        for (int k = 0; k < 10; ++k) {
            EXPECT_TRUE(example2_operator(0.37 * k, n).is_unitary(1e-12));
        }
    }
}

TEST(Measurement, FullOverlaps) {
    for (std::size_t n = 2; n <= 8; ++n) {
        auto m = measurement_full(n);
        EXPECT_EQ(m.support.size(), n * n);
        EXPECT_EQ(m.kind, MeasurementKind::Full);
        for (const BellLabel &l : all_bell_labels(n)) {
            EXPECT_LT(std::abs(inner_product(m.state, bell_state(n, l)) - 1.0 / static_cast<double>(n)), 1e-14);
        }
    }
}

TEST(Measurement, SingleSupportIsBellState) {
    auto e = hs_expand(u_mn(3, {3, 2, 1}));
    auto m = measurement_restricted(e);
    EXPECT_LT(max_abs_diff(m.state, bell_state(3, {3, 2, 1})), 1e-15);
}

TEST(Measurement, Example2Support) {
    for (std::size_t n : {2, 4, 6}) {
        auto m = measurement_restricted(example2_program(0.3, n).expansion);
        const double r = 1.0 / std::sqrt(2.0);
        auto expected = Complex(r) * (as_unnormalized(bell_state(n, {n, 0, 0})) +
                                      as_unnormalized(bell_state(n, {n, 0, static_cast<long long>(n / 2)})));
        EXPECT_LT(max_abs_diff(m.state, expected), 1e-15);
    }
}

TEST(Measurement, QubitReflection) {
    auto m = qubit_reflection_measurement();
    const double r = 1.0 / std::sqrt(3.0);
    auto expected = Complex(r) * (as_unnormalized(phi_plus()) + as_unnormalized(phi_minus()) +
                                  as_unnormalized(psi_minus()));
    EXPECT_LT(max_abs_diff(m.state, expected), 1e-15);
    EXPECT_THROW(measurement_over(2, {}), ShapeError);
}

TEST(Reflection, QubitGroundState) {
    // 1 - 2|0><0| = diag(-1, 1) = -S_10.
    auto p = reflection_program(ket(2, {0}));
    EXPECT_LT(std::abs(p.expansion.at({2, 0, 0})), 1e-15);
    EXPECT_LT(std::abs(p.expansion.at({2, 1, 0}) + 1.0), 1e-15);
    EXPECT_EQ(p.support, (std::vector<BellLabel>{{2, 1, 0}}));
    EXPECT_LT(max_abs_diff(p.state, Complex(-1.0) * as_unnormalized(psi_minus())), 1e-15);
}

TEST(Reflection, FactorizedRouteMatchesExpansion) {
    Rng rng(45);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            auto phi = random_state(n, 1, rng);
            auto direct = reflection_program(phi).state;
            auto product = reflection_program_from_product(phi);
            EXPECT_LT(max_abs_diff(direct, product), 1e-10) << n;
        }
    }
}

TEST(Reflection, HsNorm) {
    Rng rng(46);
    for (std::size_t n = 2; n <= 5; ++n) {
        auto phi = random_state(n, 1, rng);
        EXPECT_NEAR(reflection_operator(phi).hs_norm_squared(), static_cast<double>(n), 1e-12);
        EXPECT_TRUE(reflection_operator(phi).is_unitary(1e-12));
    }
}

TEST(UInitPrograms, MatchSynthesisUpToSign) {
    Rng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        auto phi = random_state(2, 1, rng);
        auto az = az_program_prepared(phi);
        auto ax = ax_program_prepared(phi);
        EXPECT_LT(max_abs_diff(az, Complex(-1.0) * as_unnormalized(synthesize_program(az_operator(phi)).state)),
                  1e-14);
        EXPECT_LT(max_abs_diff(ax, Complex(-1.0) * as_unnormalized(synthesize_program(ax_operator(phi)).state)),
                  1e-14);
    }
}

TEST(UInitPrograms, OrthogonalQubit) {
    auto phi = qubit(Complex(0.6, 0.0), Complex(0.0, 0.8));
    auto perp = orthogonal_qubit(phi);
    EXPECT_LT(std::abs(inner_product(phi, perp)), 1e-15);
    EXPECT_TRUE(ax_operator(phi).is_unitary(1e-12));
}

TEST(Example1, BracketIsLeadingSigmaZ) {
    auto expected = kron(sigma_z(), DenseOperator::identity(2));
    EXPECT_LT(max_abs_diff(example1_bracket(), expected), 1e-12);
}

// Reading the two bracket terms as the pure shifts U^(01), U^(03) does not give sigma_3 x 1.
TEST(Example1, ShiftReadingFails) {
    auto shifts = Complex(0.5, 0.5) * u_mn(4, {4, 0, 1}) + Complex(0.5, -0.5) * u_mn(4, {4, 0, 3});
    EXPECT_GT(max_abs_diff(shifts, kron(sigma_z(), DenseOperator::identity(2))), 0.5);
}

TEST(Example1, ProgramAndSupport) {
    EXPECT_LT(max_abs_diff(example1_program(0.0).state, bell_state(4, {4, 0, 0})), 1e-15);
    for (int k = 1; k <= 20; ++k) {
        double angle = 0.15 * k;
        if (std::abs(std::sin(angle)) < 1e-3 || std::abs(std::cos(angle)) < 1e-3) {
            continue;
        }
        auto p = example1_program(angle);
        EXPECT_EQ(p.support, (std::vector<BellLabel>{{4, 0, 0}, {4, 1, 0}, {4, 3, 0}}));
        EXPECT_TRUE(example1_operator(angle).is_unitary(1e-12));
    }
}

TEST(Family, SupportSizes) {
    for (std::size_t l = 1; l <= 3; ++l) {
        auto p = family_program(l, 0.7);
        const std::size_t n = ipow(2, l);
        EXPECT_EQ(p.support.size(), 1 + ipow(2, l - 1)) << l;
        for (const BellLabel &label : p.support) {
            EXPECT_EQ(label.n(), 0u);
            EXPECT_TRUE(label.m() == 0 || label.m() % 2 == 1);
        }
        // The trace oracle agrees on which coefficients vanish.
        std::size_t counted = 0;
        for (const BellLabel &label : all_bell_labels(n)) {
            counted += std::abs(trace_coefficient(family_operator(l, 0.7), label)) > 1e-12 ? 1 : 0;
        }
        EXPECT_EQ(counted, p.support.size());
    }
    EXPECT_EQ(family_program(1, 0.7).support, (std::vector<BellLabel>{{2, 0, 0}, {2, 1, 0}}));
    EXPECT_LT(max_abs_diff(family_operator(2, 0.4), example1_operator(0.4)), 1e-15);
}

TEST(SynthesisProperties, RoundTripAndParseval) {
    Rng rng(48);
    for (std::size_t n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 200; ++trial) {
            auto a = random_operator(n, rng);
            auto e = hs_expand(a);
            EXPECT_LT(max_abs_diff(e.reconstruct(), a), 1e-10);
            EXPECT_NEAR(e.gram_norm, a.hs_norm_squared() / static_cast<double>(n), 1e-10);
        }
    }
}

TEST(SynthesisProperties, UnitarySupportPrograms) {
    Rng rng(49);
    for (std::size_t n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            auto u = random_unitary(n, rng);
            auto p = synthesize_program(u);
            EXPECT_NEAR(p.state.norm(), 1.0, 1e-12);
            std::size_t counted = 0;
            for (const Complex &q : p.expansion.coeffs) {
                counted += std::abs(q) > 1e-10 ? 1 : 0;
            }
            EXPECT_EQ(measurement_restricted(p.expansion).support.size(), counted);
        }
    }
}

TEST(SynthesisProperties, CatalogConsistency) {
    Rng rng(50);
    auto phi = random_state(3, 1, rng);
    auto qphi = random_state(2, 1, rng);
    const std::vector<std::pair<ProgramVector, DenseOperator>> catalog = {
        {reflection_program(phi), reflection_operator(phi)},
        {example1_program(0.7), example1_operator(0.7)},
        {family_program(3, 0.7), family_operator(3, 0.7)},
        {example2_program(0.3, 6), example2_operator(0.3, 6)},
    };
    for (const auto &[program, op] : catalog) {
        EXPECT_LT(max_abs_diff(program.state, synthesize_program(op).state), 1e-10);
    }
    EXPECT_LT(max_abs_diff(reflection_program_from_product(phi), synthesize_program(reflection_operator(phi)).state),
              1e-10);
    EXPECT_LT(max_abs_diff(az_program_prepared(qphi), Complex(-1.0) * as_unnormalized(synthesize_program(az_operator(qphi)).state)),
              1e-10);
}

TEST(BasisSynthesis, TensorArrayBasis) {
    Rng rng(51);
    auto basis = program_basis(TensorQubitArray{2});
    auto a = random_operator(4, rng);
    auto p = synthesize_in_basis(basis, a);
    DenseOperator rebuilt = DenseOperator::zero(4);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        rebuilt = rebuilt + p.coeffs[k] * basis[k].data_op;
    }
    EXPECT_LT(max_abs_diff(rebuilt, a), 1e-12);
    EXPECT_EQ(p.support.size(), 16u);
    EXPECT_THROW(synthesize_in_basis(basis, DenseOperator::identity(2)), ShapeError);
}
