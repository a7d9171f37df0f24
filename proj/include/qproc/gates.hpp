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

/**
 * @file
 * Named gates and states: conditional shifts, generalized Bell states, the
 * phase-and-shift operator basis, the qubit S_jk table and helpers used to
 * prepare reflection programs.
 */

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qproc/register.hpp"

namespace qproc {

/// (m, n) label of a generalized Bell state and of the matching basis operator.
/// Both components are reduced mod dim on construction.
class BellLabel {
  public:
    BellLabel(std::size_t dim, long long m, long long n) : m_(reduce(m, dim)), n_(reduce(n, dim)) {}

    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }

    /// Row-major position in an N x N coefficient table.
    std::size_t flat(std::size_t dim) const { return m_ * dim + n_; }

    std::string str() const { return "(" + std::to_string(m_) + "," + std::to_string(n_) + ")"; }

    friend bool operator==(const BellLabel &, const BellLabel &) = default;
    friend auto operator<=>(const BellLabel &, const BellLabel &) = default;

  private:
    static std::size_t reduce(long long value, std::size_t dim) {
        if (dim < 2) {
            throw ShapeError("qudit dimension must be at least 2");
        }
        long long d = static_cast<long long>(dim);
        return static_cast<std::size_t>(((value % d) + d) % d);
    }

    std::size_t m_;
    std::size_t n_;
};

inline std::vector<BellLabel> all_bell_labels(std::size_t dim) {
    std::vector<BellLabel> labels;
    labels.reserve(dim * dim);
    for (std::size_t m = 0; m < dim; ++m) {
        for (std::size_t n = 0; n < dim; ++n) {
            labels.emplace_back(dim, static_cast<long long>(m), static_cast<long long>(n));
        }
    }
    return labels;
}

enum class ShiftDirection { Forward, Backward };

/// exp(2 pi i k / dim)
inline Complex root_of_unity(long long k, std::size_t dim) {
    long long d = static_cast<long long>(dim);
    long long r = ((k % d) + d) % d;
    double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(dim);
    return std::polar(1.0, angle);
}

/**
 * Conditional shift between two qudits of a register:
 * |k>_control |m>_target -> |k>_control |(m +- k) mod N>_target.
 *
 * Forward is D_{control,target}, Backward its adjoint. The map is a
 * permutation of basis states, so norms are preserved exactly and the result
 * has the same normalization kind as the input.
 */
template <Normalization Kind>
RegisterVector<Kind> conditional_shift(Subsystem control, Subsystem target, ShiftDirection dir,
                                       const RegisterVector<Kind> &v) {
    const std::size_t n = v.dim();
    detail::check_subsystem(control, v.arity());
    detail::check_subsystem(target, v.arity());
    if (control == target) {
        throw ShapeError("conditional shift needs distinct control and target");
    }
    const std::size_t sc = detail::stride_of(control, n, v.arity());
    const std::size_t st = detail::stride_of(target, n, v.arity());
    Amplitudes out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t k = (i / sc) % n;
        const std::size_t m = (i / st) % n;
        const std::size_t shifted = dir == ShiftDirection::Forward ? (m + k) % n : (m + n - k) % n;
        out[i - m * st + shifted * st] = v[i];
    }
    return RegisterVector<Kind>(n, v.arity(), std::move(out));
}

/// |Xi_mn> = N^{-1/2} sum_k exp(2 pi i m k / N) |k> |(k - n) mod N>
inline QuditRegisterState bell_state(std::size_t dim, BellLabel label) {
    Amplitudes amps(dim * dim, 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        std::size_t second = (k + dim - label.n()) % dim;
        amps[k * dim + second] =
            scale * root_of_unity(static_cast<long long>(label.m() * k), dim);
    }
    return renormalized(dim, 2, std::move(amps));
}

/// U^(mn) = sum_s exp(-2 pi i s m / N) |(s - n) mod N><s|
inline DenseOperator u_mn(std::size_t dim, BellLabel label) {
    DenseOperator op = DenseOperator::zero(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        std::size_t row = (s + dim - label.n()) % dim;
        op(row, s) = root_of_unity(-static_cast<long long>(s * label.m()), dim);
    }
    return op.with_label("U" + label.str());
}

/**
 * Qubit operators selected by the four Bell programs:
 * S_00 = 1, S_01 = sigma_x, S_10 = sigma_z, S_11 = -i sigma_y.
 *
 * Kept as an explicit table; tests cross-check it against u_mn at N = 2.
 */
inline DenseOperator pauli_s(int j, int k) {
    using C = Complex;
    static const std::array<std::array<C, 4>, 4> table = {{
        {C(1), C(0), C(0), C(1)},
        {C(0), C(1), C(1), C(0)},
        {C(1), C(0), C(0), C(-1)},
        {C(0), C(-1), C(1), C(0)},
    }};
    if ((j != 0 && j != 1) || (k != 0 && k != 1)) {
        throw ShapeError("S_jk indices must be bits");
    }
    const auto &e = table[static_cast<std::size_t>(2 * j + k)];
    return DenseOperator(2, {e.begin(), e.end()},
                         "S" + std::to_string(j) + std::to_string(k));
}

/**
 * Two-qubit preparation unitary (dimension 4, big-endian pair):
 * |00> -> -|10>, |10> -> -|11>, |11> -> |01>, |01> -> |00>.
 */
inline DenseOperator u_init() {
    DenseOperator op = DenseOperator::zero(4);
    op(2, 0) = -1.0;
    op(3, 2) = -1.0;
    op(1, 3) = 1.0;
    op(0, 1) = 1.0;
    return op.with_label("U_init");
}

/// W|k> = |(-k) mod N>
inline DenseOperator negation_w(std::size_t dim) {
    if (dim < 2) {
        throw ShapeError("qudit dimension must be at least 2");
    }
    DenseOperator op = DenseOperator::zero(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        op((dim - k) % dim, k) = 1.0;
    }
    return op.with_label("W");
}

/// Entrywise conjugate in the computational basis of a single qudit.
inline QuditRegisterState conjugate_vector(const QuditRegisterState &v) {
    if (v.arity() != 1) {
        throw ShapeError("conjugate_vector takes a single qudit");
    }
    Amplitudes out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::conj(v[i]);
    }
    return QuditRegisterState(v.dim(), 1, std::move(out));
}

} // namespace qproc
