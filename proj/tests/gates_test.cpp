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

/// Matrix of conditional_shift on `arity` qudits, collected column by column.
Matrix shift_as_matrix(std::size_t dim, std::size_t arity, std::size_t c, std::size_t t, ShiftDirection dir) {
    const std::size_t size = ipow(dim, arity);
    Matrix m = zeros(size);
    for (std::size_t col = 0; col < size; ++col) {
        auto d = digits_of(col, dim, arity);
        auto out = conditional_shift({c}, {t}, dir, basis_state(dim, arity, std::span<const std::size_t>(d)));
        for (std::size_t row = 0; row < size; ++row) {
            m[row][col] = out[row];
        }
    }
    return m;
}

Matrix adjoint(const Matrix &a) {
    Matrix out = zeros(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            out[i][j] = std::conj(a[j][i]);
        }
    }
    return out;
}

const std::vector<std::size_t> kUnitaryDims = {2, 3, 4, 5, 8};

} // namespace

TEST(ConditionalShift, QubitDirectionsAgree) {
    for (std::size_t i = 0; i < 4; ++i) {
        auto d = digits_of(i, 2, 2);
        auto in = basis_state(2, 2, std::span<const std::size_t>(d));
        auto f = conditional_shift({1}, {2}, ShiftDirection::Forward, in);
        auto b = conditional_shift({1}, {2}, ShiftDirection::Backward, in);
        EXPECT_EQ(max_abs_diff(f, b), 0.0);
    }
}

TEST(ConditionalShift, QutritExamples) {
    auto f = conditional_shift({1}, {2}, ShiftDirection::Forward, ket(3, {1, 2}));
    EXPECT_EQ(max_abs_diff(f, ket(3, {1, 0})), 0.0);
    auto b = conditional_shift({1}, {2}, ShiftDirection::Backward, ket(3, {1, 0}));
    EXPECT_EQ(max_abs_diff(b, ket(3, {1, 2})), 0.0);
}

TEST(ConditionalShift, Errors) {
    EXPECT_THROW(conditional_shift({1}, {1}, ShiftDirection::Forward, ket(3, {1, 0})), ShapeError);
    EXPECT_THROW(conditional_shift({1}, {3}, ShiftDirection::Forward, ket(3, {1, 0})), ShapeError);
}

TEST(ConditionalShift, MatchesDigitOracle) {
    for (std::size_t n = 2; n <= 5; ++n) {
        for (std::size_t c = 1; c <= 3; ++c) {
            for (std::size_t t = 1; t <= 3; ++t) {
                if (c == t) {
                    continue;
                }
                for (bool fwd : {true, false}) {
                    auto dir = fwd ? ShiftDirection::Forward : ShiftDirection::Backward;
                    EXPECT_EQ(max_abs_diff(shift_as_matrix(n, 3, c, t, dir), shift_matrix(n, 3, c, t, fwd)), 0.0);
                }
            }
        }
    }
}

TEST(BellState, QubitPsiPlus) {
    EXPECT_LT(max_abs_diff(bell_state(2, {2, 0, 0}), psi_plus()), 1e-15);
}

TEST(BellState, QubitLabelTable) {
    EXPECT_LT(max_abs_diff(bell_state(2, {2, 0, 1}), phi_plus()), 1e-15);
    EXPECT_LT(max_abs_diff(bell_state(2, {2, 1, 1}), phi_minus()), 1e-15);
    EXPECT_LT(max_abs_diff(bell_state(2, {2, 1, 0}), psi_minus()), 1e-15);
}

TEST(BellState, QutritOneZero) {
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const double r = 1.0 / std::sqrt(3.0);
    Amplitudes expected(9, 0.0);
    expected[0] = r;
    expected[4] = r * w;
    expected[8] = r * w * w;
    EXPECT_LT(max_abs_diff(amps(bell_state(3, {3, 1, 0})), expected), 1e-15);
}

TEST(BellLabel, ReducesModDim) {
    BellLabel l(4, -1, 5);
    EXPECT_EQ(l.m(), 3u);
    EXPECT_EQ(l.n(), 1u);
    EXPECT_EQ(l.str(), "(3,1)");
}

TEST(UMn, ZeroIsIdentity) {
    for (std::size_t n = 2; n <= 5; ++n) {
        EXPECT_EQ(max_abs_diff(u_mn(n, {n, 0, 0}), DenseOperator::identity(n)), 0.0);
    }
}

TEST(UMn, QuartShiftsAndPhases) {
    // m = 0 is a pure shift |s-1><s| with no phases; the diagonal ones carry m.
    auto shift = u_mn(4, {4, 0, 1});
    for (std::size_t s = 0; s < 4; ++s) {
        EXPECT_EQ(shift((s + 3) % 4, s), Complex(1.0));
        EXPECT_EQ(shift(s, s), Complex(0.0));
    }
    auto minus_i = u_mn(4, {4, 1, 0});
    auto plus_i = u_mn(4, {4, 3, 0});
    const Complex i(0.0, 1.0);
    for (int s = 0; s < 4; ++s) {
        EXPECT_LT(std::abs(minus_i(s, s) - std::pow(-i, s)), 1e-15);
        EXPECT_LT(std::abs(plus_i(s, s) - std::pow(i, s)), 1e-15);
    }
}

TEST(PauliS, Table) {
    EXPECT_EQ(max_abs_diff(pauli_s(0, 0), DenseOperator::identity(2)), 0.0);
    EXPECT_EQ(max_abs_diff(pauli_s(0, 1), sigma_x()), 0.0);
    EXPECT_EQ(max_abs_diff(pauli_s(1, 0), sigma_z()), 0.0);
    EXPECT_EQ(max_abs_diff(pauli_s(1, 1), Complex(0, -1) * sigma_y()), 0.0);
    EXPECT_EQ(max_abs_diff(pauli_s(1, 1), DenseOperator(2, {0.0, -1.0, 1.0, 0.0})), 0.0);
    EXPECT_THROW(pauli_s(2, 0), ShapeError);
}

TEST(PauliS, AgreesWithUMn) {
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            EXPECT_LT(max_abs_diff(pauli_s(j, k), u_mn(2, {2, j, k})), 1e-15) << j << k;
        }
    }
}

TEST(UInit, Columns) {
    auto u = u_init();
    auto col = [&](std::size_t c) { return u.apply(basis_state(2, 2, digits_of(c, 2, 2)).amplitudes()); };
    EXPECT_EQ(col(0), amps(Complex(-1.0) * as_unnormalized(ket(2, {1, 0}))));
    EXPECT_EQ(col(2), amps(Complex(-1.0) * as_unnormalized(ket(2, {1, 1}))));
    EXPECT_EQ(col(3), amps(ket(2, {0, 1})));
    EXPECT_EQ(col(1), amps(ket(2, {0, 0})));
}

TEST(NegationW, Examples) {
    EXPECT_EQ(max_abs_diff(negation_w(2), DenseOperator::identity(2)), 0.0);
    auto w = negation_w(4);
    EXPECT_EQ(max_abs_diff(amps(apply_to_subsystem(w, {1}, ket(4, {1}))), amps(ket(4, {3}))), 0.0);
    EXPECT_EQ(max_abs_diff(amps(apply_to_subsystem(w, {1}, ket(4, {2}))), amps(ket(4, {2}))), 0.0);
}

TEST(NegationW, SelfInverse) {
    for (std::size_t n = 2; n <= 8; ++n) {
        EXPECT_EQ(max_abs_diff(negation_w(n) * negation_w(n), DenseOperator::identity(n)), 0.0);
    }
}

TEST(ConjugateVector, Examples) {
    QuditRegisterState real(2, 1, {0.6, 0.8});
    EXPECT_EQ(max_abs_diff(conjugate_vector(real), real), 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    QuditRegisterState v(2, 1, {r, Complex(0, r)});
    EXPECT_EQ(amps(conjugate_vector(v)), (Amplitudes{r, Complex(0, -r)}));
    EXPECT_EQ(max_abs_diff(conjugate_vector(conjugate_vector(v)), v), 0.0);
    EXPECT_THROW(conjugate_vector(ket(2, {0, 0})), ShapeError);
}

TEST(GateProperties, Unitarity) {
    for (std::size_t n : kUnitaryDims) {
        for (const BellLabel &l : all_bell_labels(n)) {
            EXPECT_TRUE(u_mn(n, l).is_unitary(1e-12)) << n << l.str();
        }
        EXPECT_TRUE(negation_w(n).is_unitary(1e-12));
        for (auto dir : {ShiftDirection::Forward, ShiftDirection::Backward}) {
            Matrix d = shift_as_matrix(n, 2, 1, 2, dir);
            EXPECT_LT(max_abs_diff(matmul(adjoint(d), d), eye(n * n)), 1e-12);
        }
    }
    EXPECT_TRUE(u_init().is_unitary(1e-12));
}

TEST(GateProperties, Orthogonality) {
    for (std::size_t n = 2; n <= 5; ++n) {
        for (const BellLabel &a : all_bell_labels(n)) {
            for (const BellLabel &b : all_bell_labels(n)) {
                Complex tr = (u_mn(n, b).adjoint() * u_mn(n, a)).trace();
                Complex expected = a == b ? Complex(static_cast<double>(n)) : Complex(0.0);
                EXPECT_LT(std::abs(tr - expected), 1e-12) << n << a.str() << b.str();
            }
        }
    }
}

TEST(GateProperties, BellCompleteness) {
    for (std::size_t n = 2; n <= 5; ++n) {
        auto labels = all_bell_labels(n);
        for (const BellLabel &a : labels) {
            for (const BellLabel &b : labels) {
                Complex g = inner_product(bell_state(n, a), bell_state(n, b));
                EXPECT_LT(std::abs(g - (a == b ? 1.0 : 0.0)), 1e-12);
            }
        }
    }
}

TEST(GateProperties, ShiftInverse) {
    Rng rng(11);
    for (std::size_t n = 2; n <= 5; ++n) {
        auto s = random_state(n, 3, rng);
        auto there = conditional_shift({3}, {1}, ShiftDirection::Forward, s);
        auto back = conditional_shift({3}, {1}, ShiftDirection::Backward, there);
        EXPECT_LT(max_abs_diff(back, s), 1e-15);
    }
}

// (U^(mn) x 1)|Xi_00> = exp(-2 pi i nm/N) |Xi_{-m,-n}>: the operator label maps
// to the negated Bell label.
TEST(GateProperties, BellOperatorLink) {
    for (std::size_t n = 2; n <= 5; ++n) {
        auto xi00 = bell_state(n, {n, 0, 0});
        for (const BellLabel &l : all_bell_labels(n)) {
            auto lhs = apply_to_subsystem(u_mn(n, l), {1}, xi00);
            BellLabel neg(n, -static_cast<long long>(l.m()), -static_cast<long long>(l.n()));
            Complex phase = root_of_unity(-static_cast<long long>(l.n() * l.m()), n);
            auto rhs = Complex(phase) * as_unnormalized(bell_state(n, neg));
            EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12) << n << l.str();
        }
    }
}
