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
 * Seeded random states and operators.
 *
 * States are normalized complex-normal vectors (the unitarily invariant
 * measure). Unitaries are modified Gram-Schmidt orthonormalizations of
 * complex-normal matrices, column by column. Draw order is fixed, so a seed
 * reproduces the same objects within one standard library implementation.
 */

#pragma once

#include <cstdint>
#include <random>

#include "qproc/register.hpp"

namespace qproc {

using Rng = std::mt19937_64;

inline Complex complex_normal(Rng &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double re = gauss(rng);
    double im = gauss(rng);
    return {re, im};
}

inline QuditRegisterState random_state(std::size_t dim, std::size_t arity, Rng &rng) {
    Amplitudes amps(ipow(dim, arity));
    for (Complex &a : amps) {
        a = complex_normal(rng);
    }
    return normalize(UnnormalizedVector(dim, arity, std::move(amps)));
}

/// Complex-normal entries; almost surely invertible and non-unitary.
inline DenseOperator random_operator(std::size_t dim, Rng &rng) {
    std::vector<Complex> e(dim * dim);
    for (Complex &x : e) {
        x = complex_normal(rng);
    }
    return DenseOperator(dim, std::move(e), "random_operator");
}

inline DenseOperator random_unitary(std::size_t dim, Rng &rng) {
    std::vector<Amplitudes> columns(dim, Amplitudes(dim));
    for (auto &col : columns) {
        for (Complex &x : col) {
            x = complex_normal(rng);
        }
    }
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            Complex overlap = 0.0;
            for (std::size_t r = 0; r < dim; ++r) {
                overlap += std::conj(columns[prev][r]) * columns[c][r];
            }
            for (std::size_t r = 0; r < dim; ++r) {
                columns[c][r] -= overlap * columns[prev][r];
            }
        }
        double n = std::sqrt(squared_norm(columns[c]));
        for (Complex &x : columns[c]) {
            x /= n;
        }
    }
    DenseOperator u = DenseOperator::zero(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            u(r, c) = columns[c][r];
        }
    }
    return u.with_label("random_unitary");
}

} // namespace qproc
