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
 * Fixed processor circuits acting on a data register followed by a program
 * register.
 *
 * Joint layout: data qudits first (most significant), program qudits after.
 */

#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "qproc/gates.hpp"
#include "qproc/register.hpp"

namespace qproc {

/// Conditional-shift network D31 D21^dagger D13 D12 on one data qudit and a two-qudit program.
struct QuditShiftNetwork {
    std::size_t dim;
};

/// Qubit network D31 D21 D13 D12 built from C-NOT gates.
struct QubitCnotNetwork {};

/// `qubits` independent copies of the qubit network, one per data qubit.
struct TensorQubitArray {
    std::size_t qubits;
};

/// One element of a processor's program basis: programming the register with
/// `program` applies `data_op` to the data register.
struct ProgramBasisTerm {
    DenseOperator data_op;
    QuditRegisterState program;
};

/// P = sum_n V_n (x) |y_n><y_n| over orthonormal program vectors y_n.
class GeneralDiagonal {
  public:
    static constexpr double kOrthonormalityTolerance = 1e-10;

    explicit GeneralDiagonal(std::vector<ProgramBasisTerm> terms) : terms_(std::move(terms)) {
        if (terms_.empty()) {
            throw ShapeError("general processor needs at least one term");
        }
        const auto &first = terms_.front();
        for (const auto &t : terms_) {
            if (t.data_op.dim() != first.data_op.dim() ||
                !t.program.same_shape(first.program.dim(), first.program.arity())) {
                throw ShapeError("general processor terms must share shapes");
            }
        }
        if (first.data_op.dim() != first.program.dim()) {
            throw ShapeError("data operator dimension must match the qudit dimension");
        }
        for (const auto &t : terms_) {
            if (!t.data_op.is_unitary(kOrthonormalityTolerance)) {
                throw ShapeError("general processor data operators must be unitary");
            }
        }
        for (std::size_t a = 0; a < terms_.size(); ++a) {
            for (std::size_t b = a; b < terms_.size(); ++b) {
                Complex overlap = inner_product(terms_[a].program, terms_[b].program);
                double expected = a == b ? 1.0 : 0.0;
                if (std::abs(overlap - expected) > kOrthonormalityTolerance) {
                    throw ShapeError("general processor program vectors are not orthonormal");
                }
            }
        }
    }

    const std::vector<ProgramBasisTerm> &terms() const { return terms_; }
    std::size_t dim() const { return terms_.front().data_op.dim(); }
    std::size_t program_arity() const { return terms_.front().program.arity(); }

  private:
    std::vector<ProgramBasisTerm> terms_;
};

using ProcessorSpec = std::variant<QuditShiftNetwork, QubitCnotNetwork, TensorQubitArray, GeneralDiagonal>;

/// Thrown when a program has weight outside the span of a general processor's program basis.
class ProgramOutsideSpanError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Shape of the joint register a processor expects.
struct ProcessorShape {
    std::size_t dim;
    std::size_t data_arity;
    std::size_t program_arity;
};

inline ProcessorShape processor_shape(const ProcessorSpec &spec) {
    return std::visit(
        [](const auto &s) -> ProcessorShape {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QuditShiftNetwork>) {
                if (s.dim < 2) {
                    throw ShapeError("shift network needs dimension at least 2");
                }
                return {s.dim, 1, 2};
            } else if constexpr (std::is_same_v<T, QubitCnotNetwork>) {
                return {2, 1, 2};
            } else if constexpr (std::is_same_v<T, TensorQubitArray>) {
                if (s.qubits < 1) {
                    throw ShapeError("tensor array needs at least one data qubit");
                }
                return {2, s.qubits, 2 * s.qubits};
            } else {
                return {s.dim(), 1, s.program_arity()};
            }
        },
        spec);
}

/// Direction of the D21 gate: the qudit network uses the backward shift, the qubit network the forward one.
enum class MiddleShift { Backward, Forward };

/**
 * Applies D31 D21^(dagger) D13 D12 with subsystem 1 = `data`, 2 = `program_a`,
 * 3 = `program_b`. Gates act right to left: D12 first, D31 last.
 */
template <Normalization Kind>
RegisterVector<Kind> apply_shift_network(Subsystem data, Subsystem program_a, Subsystem program_b,
                                         MiddleShift middle, const RegisterVector<Kind> &joint) {
    auto v = conditional_shift(data, program_a, ShiftDirection::Forward, joint);
    v = conditional_shift(data, program_b, ShiftDirection::Forward, v);
    v = conditional_shift(program_a, data,
                          middle == MiddleShift::Backward ? ShiftDirection::Backward
                                                          : ShiftDirection::Forward,
                          v);
    return conditional_shift(program_b, data, ShiftDirection::Forward, v);
}

namespace detail {

/// Partial inner product <y| over the trailing `y.arity()` qudits of `joint`.
template <Normalization KJ, Normalization KY>
Amplitudes project_trailing(const RegisterVector<KJ> &joint, const RegisterVector<KY> &y) {
    const std::size_t tail = y.size();
    if (joint.size() % tail != 0 || joint.dim() != y.dim() || joint.arity() <= y.arity()) {
        throw ShapeError("program vector does not fit the trailing subsystems of the joint register");
    }
    const std::size_t head = joint.size() / tail;
    Amplitudes out(head, 0.0);
    for (std::size_t h = 0; h < head; ++h) {
        Complex acc = 0.0;
        for (std::size_t t = 0; t < tail; ++t) {
            acc += std::conj(y[t]) * joint[h * tail + t];
        }
        out[h] = acc;
    }
    return out;
}

template <Normalization Kind>
RegisterVector<Kind> apply_general_diagonal(const GeneralDiagonal &g, const RegisterVector<Kind> &joint) {
    const std::size_t n = g.dim();
    if (!joint.same_shape(n, 1 + g.program_arity())) {
        throw ShapeError("joint register does not match the general processor shape");
    }
    Amplitudes out(joint.size(), 0.0);
    double captured = 0.0;
    for (const auto &term : g.terms()) {
        Amplitudes slice = project_trailing(joint, term.program);
        captured += squared_norm(slice);
        Amplitudes image = term.data_op.apply(slice);
        const std::size_t tail = term.program.size();
        for (std::size_t h = 0; h < n; ++h) {
            for (std::size_t t = 0; t < tail; ++t) {
                out[h * tail + t] += image[h] * term.program[t];
            }
        }
    }
    const double total = joint.squared_norm();
    if (std::abs(total - captured) > GeneralDiagonal::kOrthonormalityTolerance * std::max(1.0, total)) {
        throw ProgramOutsideSpanError("program register has weight outside the program basis span");
    }
    if constexpr (Kind == Normalization::Normalized) {
        return renormalized(n, joint.arity(), std::move(out));
    } else {
        return RegisterVector<Kind>(n, joint.arity(), std::move(out));
    }
}

} // namespace detail

/// Runs the processor on an already-assembled joint register (data then program).
template <Normalization Kind>
RegisterVector<Kind> apply_processor_joint(const ProcessorSpec &spec, const RegisterVector<Kind> &joint) {
    const ProcessorShape shape = processor_shape(spec);
    if (!joint.same_shape(shape.dim, shape.data_arity + shape.program_arity)) {
        throw ShapeError("joint register does not match the processor shape");
    }
    return std::visit(
        [&](const auto &s) -> RegisterVector<Kind> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QuditShiftNetwork>) {
                return apply_shift_network({1}, {2}, {3}, MiddleShift::Backward, joint);
            } else if constexpr (std::is_same_v<T, QubitCnotNetwork>) {
                return apply_shift_network({1}, {2}, {3}, MiddleShift::Forward, joint);
            } else if constexpr (std::is_same_v<T, TensorQubitArray>) {
                RegisterVector<Kind> v = joint;
                const std::size_t l = s.qubits;
                for (std::size_t m = 1; m <= l; ++m) {
                    v = apply_shift_network({m}, {l + 2 * m - 1}, {l + 2 * m}, MiddleShift::Forward, v);
                }
                return v;
            } else {
                return detail::apply_general_diagonal(s, joint);
            }
        },
        spec);
}

/// Processor output for data (x) program.
inline QuditRegisterState apply_processor(const ProcessorSpec &spec, const QuditRegisterState &data,
                                          const QuditRegisterState &program) {
    const ProcessorShape shape = processor_shape(spec);
    if (!data.same_shape(shape.dim, shape.data_arity)) {
        throw ShapeError("data register does not match the processor");
    }
    if (!program.same_shape(shape.dim, shape.program_arity)) {
        throw ShapeError("program register does not match the processor");
    }
    return apply_processor_joint(spec, tensor(data, program));
}

/// `qubits` data qubits, one two-qubit program per data qubit.
inline QuditRegisterState tensor_array_apply(std::size_t qubits, const QuditRegisterState &data,
                                             const std::vector<QuditRegisterState> &programs) {
    if (programs.size() != qubits) {
        throw ShapeError("tensor array needs one program per data qubit");
    }
    if (qubits == 0) {
        throw ShapeError("tensor array needs at least one data qubit");
    }
    QuditRegisterState program = programs.front();
    for (std::size_t i = 1; i < programs.size(); ++i) {
        program = tensor(program, programs[i]);
    }
    return apply_processor(TensorQubitArray{qubits}, data, program);
}

/// P_dp applied to data (x) program for a general diagonal processor.
inline QuditRegisterState general_diagonal_apply(const GeneralDiagonal &processor,
                                                 const QuditRegisterState &data,
                                                 const QuditRegisterState &program) {
    return apply_processor(processor, data, program);
}

/// Program basis of a processor: the programs it implements exactly and the operators they select.
inline std::vector<ProgramBasisTerm> program_basis(const ProcessorSpec &spec) {
    return std::visit(
        [](const auto &s) -> std::vector<ProgramBasisTerm> {
            using T = std::decay_t<decltype(s)>;
            std::vector<ProgramBasisTerm> basis;
            if constexpr (std::is_same_v<T, QuditShiftNetwork> || std::is_same_v<T, QubitCnotNetwork>) {
                std::size_t dim = 2;
                if constexpr (std::is_same_v<T, QuditShiftNetwork>) {
                    dim = s.dim;
                }
                for (const BellLabel &label : all_bell_labels(dim)) {
                    basis.push_back({u_mn(dim, label), bell_state(dim, label)});
                }
            } else if constexpr (std::is_same_v<T, TensorQubitArray>) {
                auto qubit_term = [](const BellLabel &label) {
                    return ProgramBasisTerm{pauli_s(static_cast<int>(label.m()), static_cast<int>(label.n())),
                                            bell_state(2, label)};
                };
                for (const BellLabel &label : all_bell_labels(2)) {
                    basis.push_back(qubit_term(label));
                }
                // Index order: the first data qubit's label is the most significant.
                for (std::size_t q = 1; q < s.qubits; ++q) {
                    std::vector<ProgramBasisTerm> next;
                    for (const auto &prefix : basis) {
                        for (const BellLabel &label : all_bell_labels(2)) {
                            auto t = qubit_term(label);
                            next.push_back({kron(prefix.data_op, t.data_op), tensor(prefix.program, t.program)});
                        }
                    }
                    basis = std::move(next);
                }
            } else {
                basis = s.terms();
            }
            return basis;
        },
        spec);
}

/// Full processor matrix, built column by column from basis inputs. Debug aid for small dimensions.
inline DenseOperator materialize_processor(const ProcessorSpec &spec) {
    const ProcessorShape shape = processor_shape(spec);
    const std::size_t arity = shape.data_arity + shape.program_arity;
    const std::size_t size = ipow(shape.dim, arity);
    if (size > 4096) {
        throw ShapeError("processor too large to materialize");
    }
    DenseOperator matrix = DenseOperator::zero(size);
    for (std::size_t col = 0; col < size; ++col) {
        Amplitudes e(size, 0.0);
        e[col] = 1.0;
        auto image = apply_processor_joint(spec, UnnormalizedVector(shape.dim, arity, std::move(e)));
        for (std::size_t row = 0; row < size; ++row) {
            matrix(row, col) = image[row];
        }
    }
    return matrix;
}

/// True when the forward-middle (qubit) and backward-middle (qudit) networks
/// agree on every basis input of dimension `dim`. Holds for dim == 2 only.
inline bool qubit_network_equals_qudit_network(std::size_t dim = 2) {
    const std::size_t size = dim * dim * dim;
    for (std::size_t i = 0; i < size; ++i) {
        auto digits = digits_of(i, dim, 3);
        auto input = basis_state(dim, 3, std::span<const std::size_t>(digits));
        auto qudit = apply_shift_network({1}, {2}, {3}, MiddleShift::Backward, input);
        auto qubit = apply_shift_network({1}, {2}, {3}, MiddleShift::Forward, input);
        if (max_abs_diff(qudit, qubit) > 1e-12) {
            return false;
        }
    }
    return true;
}

} // namespace qproc
