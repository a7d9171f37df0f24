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
 * Program synthesis: expand an operator over the U^(mn) basis, turn the
 * expansion into a program state for the shift network, and build the
 * projective measurement vectors used for post-selection. Also holds the
 * named program catalog.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qproc/gates.hpp"
#include "qproc/processor.hpp"
#include "qproc/register.hpp"

namespace qproc {

/// Coefficients below this fraction of the largest |q_mn| are outside the support.
inline constexpr double kSupportThreshold = 1e-10;

class ZeroOperatorError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A = sum_mn q_mn U^(mn).
struct HsExpansion {
    std::size_t dim;
    /// Row-major in (m, n).
    std::vector<Complex> coeffs;
    /// sum |q_mn|^2, equal to Tr(A^dagger A) / N.
    double gram_norm;

    Complex at(BellLabel label) const { return coeffs[label.flat(dim)]; }

    DenseOperator reconstruct() const {
        DenseOperator a = DenseOperator::zero(dim);
        for (const BellLabel &label : all_bell_labels(dim)) {
            Complex q = at(label);
            if (q != Complex(0.0)) {
                a = a + q * u_mn(dim, label);
            }
        }
        return a;
    }

    std::vector<BellLabel> support(double threshold = kSupportThreshold) const {
        double largest = 0.0;
        for (const Complex &q : coeffs) {
            largest = std::max(largest, std::abs(q));
        }
        std::vector<BellLabel> labels;
        for (const BellLabel &label : all_bell_labels(dim)) {
            if (std::abs(at(label)) > threshold * largest) {
                labels.push_back(label);
            }
        }
        return labels;
    }
};

/// q_mn = (1/N) Tr[(U^(mn))^dagger A] = (1/N) sum_s exp(2 pi i s m / N) A[(s - n) mod N, s]
inline HsExpansion hs_expand(const DenseOperator &a) {
    const std::size_t n = a.dim();
    if (n < 2) {
        throw ShapeError("operator dimension must be at least 2");
    }
    if (!(a.hs_norm_squared() > 0.0)) {
        throw ZeroOperatorError("cannot build a program for the zero operator");
    }
    HsExpansion e{n, std::vector<Complex>(n * n, 0.0), 0.0};
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t shift = 0; shift < n; ++shift) {
            Complex acc = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                acc += root_of_unity(static_cast<long long>(s * m), n) * a((s + n - shift) % n, s);
            }
            e.coeffs[m * n + shift] = acc / static_cast<double>(n);
        }
    }
    e.gram_norm = squared_norm(e.coeffs);
    return e;
}

struct ProgramVector {
    std::size_t dim;
    /// Two-qudit program register state.
    QuditRegisterState state;
    std::vector<BellLabel> support;
    HsExpansion expansion;
};

/// Program for an expansion: (N / Tr(A^dagger A))^{1/2} sum q_mn |Xi_mn>.
inline ProgramVector program_from_expansion(const HsExpansion &e) {
    const std::size_t n = e.dim;
    Amplitudes amps(n * n, 0.0);
    // sum |q|^2 = Tr(A^dagger A) / N, so the prefactor is 1 / sqrt(gram_norm).
    const double scale = 1.0 / std::sqrt(e.gram_norm);
    for (const BellLabel &label : all_bell_labels(n)) {
        Complex q = e.at(label);
        if (q == Complex(0.0)) {
            continue;
        }
        auto bell = bell_state(n, label);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] += scale * q * bell[i];
        }
    }
    return {n, renormalized(n, 2, std::move(amps)), e.support(), e};
}

inline ProgramVector synthesize_program(const DenseOperator &a) { return program_from_expansion(hs_expand(a)); }

enum class MeasurementKind { Full, SupportRestricted };

inline std::string to_string(MeasurementKind kind) {
    return kind == MeasurementKind::Full ? "full" : "support";
}

/// Uniform superposition of Bell states; post-selection projects the program register onto it.
struct MeasurementVector {
    std::size_t dim;
    QuditRegisterState state;
    MeasurementKind kind;
    std::vector<BellLabel> support;
};

/// (1/sqrt|labels|) sum_{labels} |Xi_mn>
inline MeasurementVector measurement_over(std::size_t dim, std::vector<BellLabel> labels,
                                          MeasurementKind kind = MeasurementKind::SupportRestricted) {
    if (labels.empty()) {
        throw ShapeError("measurement vector needs a nonempty label set");
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    Amplitudes amps(dim * dim, 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(labels.size()));
    for (const BellLabel &label : labels) {
        auto bell = bell_state(dim, label);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] += scale * bell[i];
        }
    }
    return {dim, renormalized(dim, 2, std::move(amps)), kind, std::move(labels)};
}

/// (1/N) sum over all N^2 Bell states.
inline MeasurementVector measurement_full(std::size_t dim) {
    return measurement_over(dim, all_bell_labels(dim), MeasurementKind::Full);
}

/// Uniform over the labels with nonzero coefficients.
inline MeasurementVector measurement_restricted(const HsExpansion &e) {
    auto labels = e.support();
    if (labels.empty()) {
        throw ShapeError("expansion has empty support");
    }
    return measurement_over(e.dim, std::move(labels), MeasurementKind::SupportRestricted);
}

/// 1 - 2|phi><phi|
inline DenseOperator reflection_operator(const QuditRegisterState &phi) {
    if (phi.arity() != 1) {
        throw ShapeError("reflection needs a single-qudit vector");
    }
    return (DenseOperator::identity(phi.dim()) -
            Complex(2.0) * DenseOperator::outer(phi.amplitudes(), phi.amplitudes()))
        .with_label("reflection");
}

/// Program for 1 - 2|phi><phi| through the general expansion.
inline ProgramVector reflection_program(const QuditRegisterState &phi) {
    return synthesize_program(reflection_operator(phi));
}

/**
 * The same reflection program prepared from the product-like state
 * |Xi_00> - (2/sqrt N)|phi*>|phi> by the fixed network (W x 1)(D23^dagger)^2.
 */
inline QuditRegisterState reflection_program_from_product(const QuditRegisterState &phi) {
    if (phi.arity() != 1) {
        throw ShapeError("reflection needs a single-qudit vector");
    }
    const std::size_t n = phi.dim();
    auto seed = as_unnormalized(bell_state(n, BellLabel(n, 0, 0))) -
                Complex(2.0 / std::sqrt(static_cast<double>(n))) *
                    as_unnormalized(tensor(conjugate_vector(phi), phi));
    auto v = conditional_shift({1}, {2}, ShiftDirection::Backward, seed);
    v = conditional_shift({1}, {2}, ShiftDirection::Backward, v);
    auto out = apply_to_subsystem(negation_w(n), {1}, v);
    return renormalized(n, 2, Amplitudes(out.amplitudes().begin(), out.amplitudes().end()));
}

// ---------------------------------------------------------------------------
// Qubit programs prepared with U_init.

/// phi_perp = -conj(nu)|0> + conj(mu)|1> for phi = mu|0> + nu|1>.
inline QuditRegisterState orthogonal_qubit(const QuditRegisterState &phi) {
    if (!phi.same_shape(2, 1)) {
        throw ShapeError("orthogonal_qubit takes a single qubit");
    }
    return QuditRegisterState(2, 1, {-std::conj(phi[1]), std::conj(phi[0])});
}

/// A_z = 1 - 2|phi><phi| on a qubit.
inline DenseOperator az_operator(const QuditRegisterState &phi) {
    if (!phi.same_shape(2, 1)) {
        throw ShapeError("A_z acts on a qubit");
    }
    return reflection_operator(phi).with_label("A_z");
}

/// A_x = |phi><phi_perp| + |phi_perp><phi|.
inline DenseOperator ax_operator(const QuditRegisterState &phi) {
    auto perp = orthogonal_qubit(phi);
    return (DenseOperator::outer(phi.amplitudes(), perp.amplitudes()) +
            DenseOperator::outer(perp.amplitudes(), phi.amplitudes()))
        .with_label("A_x");
}

namespace detail {

inline QuditRegisterState prepare_with_u_init(const UnnormalizedVector &pair) {
    auto out = apply_to_pair(u_init(), {1}, {2}, pair);
    return renormalized(2, 2, Amplitudes(out.amplitudes().begin(), out.amplitudes().end()));
}

} // namespace detail

/// U_init (|phi>|phi_perp> + |phi_perp>|phi>)/sqrt 2. Equals the A_z program up to a global sign.
inline QuditRegisterState az_program_prepared(const QuditRegisterState &phi) {
    auto perp = orthogonal_qubit(phi);
    auto sym = tensor_unnormalized(phi, perp) + tensor_unnormalized(perp, phi);
    return detail::prepare_with_u_init(Complex(1.0 / std::numbers::sqrt2) * sym);
}

/// U_init (|phi>|phi> - |phi_perp>|phi_perp>)/sqrt 2. Equals the A_x program up to a global sign.
inline QuditRegisterState ax_program_prepared(const QuditRegisterState &phi) {
    auto perp = orthogonal_qubit(phi);
    auto anti = tensor_unnormalized(phi, phi) - tensor_unnormalized(perp, perp);
    return detail::prepare_with_u_init(Complex(1.0 / std::numbers::sqrt2) * anti);
}

/// (|Phi+> + |Phi-> + |Psi->)/sqrt 3: uniform over the three non-identity qubit labels.
inline MeasurementVector qubit_reflection_measurement() {
    return measurement_over(2, {BellLabel(2, 0, 1), BellLabel(2, 1, 1), BellLabel(2, 1, 0)});
}

// ---------------------------------------------------------------------------
// One-parameter unitary families.

/**
 * (1+i)/2 U^(10) + (1-i)/2 U^(30) at N = 4, equal to sigma_3 x 1.
 *
 * The diagonal operators sum (-i)^s P_s and sum i^s P_s are U^(10) and U^(30)
 * under the U^(mn) definition; U^(01) and U^(03) are pure shifts and do not
 * produce sigma_3 x 1. The diagonal labeling is the one used here.
 */
inline DenseOperator example1_bracket() {
    const Complex half_plus(0.5, 0.5);
    const Complex half_minus(0.5, -0.5);
    return (half_plus * u_mn(4, BellLabel(4, 1, 0)) + half_minus * u_mn(4, BellLabel(4, 3, 0)))
        .with_label("example1_bracket");
}

/// cos(angle) 1 + i sin(angle) (sigma_3 x 1) on one ququart.
inline DenseOperator example1_operator(double angle) {
    return (Complex(std::cos(angle)) * DenseOperator::identity(4) +
            Complex(0.0, std::sin(angle)) * example1_bracket())
        .with_label("example1");
}

inline ProgramVector example1_program(double angle) { return synthesize_program(example1_operator(angle)); }

/// sigma_3 x 1^(l-1) on l qubits, as a diagonal operator of dimension 2^l.
inline DenseOperator leading_sigma_z(std::size_t qubits) {
    if (qubits < 1) {
        throw ShapeError("need at least one qubit");
    }
    const std::size_t n = ipow(2, qubits);
    DenseOperator z = DenseOperator::zero(n);
    for (std::size_t s = 0; s < n; ++s) {
        z(s, s) = s < n / 2 ? 1.0 : -1.0;
    }
    return z;
}

/// cos(angle) 1 + i sin(angle) sigma_3 x 1^(l-1), dimension 2^l.
inline DenseOperator family_operator(std::size_t qubits, double angle) {
    const std::size_t n = ipow(2, qubits);
    return (Complex(std::cos(angle)) * DenseOperator::identity(n) +
            Complex(0.0, std::sin(angle)) * leading_sigma_z(qubits))
        .with_label("family");
}

inline ProgramVector family_program(std::size_t qubits, double angle) {
    return synthesize_program(family_operator(qubits, angle));
}

/// cos(theta) 1 + i sin(theta) U^(0,N/2) for even N.
inline DenseOperator example2_operator(double theta, std::size_t dim) {
    if (dim < 2 || dim % 2 != 0) {
        throw ShapeError("example2 needs an even dimension");
    }
    return (Complex(std::cos(theta)) * DenseOperator::identity(dim) +
            Complex(0.0, std::sin(theta)) * u_mn(dim, BellLabel(dim, 0, static_cast<long long>(dim / 2))))
        .with_label("example2");
}

inline ProgramVector example2_program(double theta, std::size_t dim) {
    return synthesize_program(example2_operator(theta, dim));
}

// ---------------------------------------------------------------------------
// Generic program bases (tensor arrays, general diagonal processors).

/// Program for `a` over an arbitrary processor basis whose data operators are
/// Hilbert-Schmidt orthogonal with Tr(V^dagger V) = dim.
struct BasisProgram {
    QuditRegisterState state;
    std::vector<Complex> coeffs;
    std::vector<std::size_t> support;
};

inline BasisProgram synthesize_in_basis(const std::vector<ProgramBasisTerm> &basis, const DenseOperator &a) {
    if (basis.empty()) {
        throw ShapeError("empty program basis");
    }
    if (!(a.hs_norm_squared() > 0.0)) {
        throw ZeroOperatorError("cannot build a program for the zero operator");
    }
    const double n = static_cast<double>(a.dim());
    std::vector<Complex> coeffs;
    DenseOperator rebuilt = DenseOperator::zero(a.dim());
    for (const auto &term : basis) {
        if (term.data_op.dim() != a.dim()) {
            throw ShapeError("operator dimension does not match the program basis");
        }
        Complex q = 0.0;
        auto v = term.data_op.entries();
        auto e = a.entries();
        for (std::size_t i = 0; i < e.size(); ++i) {
            q += std::conj(v[i]) * e[i];
        }
        q /= n;
        coeffs.push_back(q);
        rebuilt = rebuilt + q * term.data_op;
    }
    if (max_abs_diff(rebuilt, a) > 1e-9 * std::max(1.0, std::sqrt(a.hs_norm_squared()))) {
        throw ShapeError("program basis does not span the operator");
    }
    double largest = 0.0;
    for (const Complex &q : coeffs) {
        largest = std::max(largest, std::abs(q));
    }
    const auto &first = basis.front().program;
    Amplitudes amps(first.size(), 0.0);
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (std::abs(coeffs[k]) > kSupportThreshold * largest) {
            support.push_back(k);
        }
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] += coeffs[k] * basis[k].program[i];
        }
    }
    return {normalize(UnnormalizedVector(first.dim(), first.arity(), std::move(amps))), std::move(coeffs),
            std::move(support)};
}

/// Uniform superposition of the selected program basis vectors.
inline QuditRegisterState basis_measurement(const std::vector<ProgramBasisTerm> &basis,
                                            const std::vector<std::size_t> &selected) {
    if (selected.empty()) {
        throw ShapeError("measurement vector needs a nonempty label set");
    }
    const auto &first = basis.front().program;
    Amplitudes amps(first.size(), 0.0);
    for (std::size_t k : selected) {
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] += basis.at(k).program[i];
        }
    }
    return normalize(UnnormalizedVector(first.dim(), first.arity(), std::move(amps)));
}

} // namespace qproc
