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
 * Post-selection on the program register and comparison with direct
 * application of the target operator.
 */

#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "qproc/processor.hpp"
#include "qproc/synthesis.hpp"

namespace qproc {

/// Outcomes less likely than this are treated as impossible.
inline constexpr double kZeroProbability = 1e-14;

struct PostSelectionOutcome {
    double probability = 0.0;
    /// Renormalized data register after a successful measurement; empty when the outcome is impossible.
    std::optional<QuditRegisterState> data_state;
    /// |<oracle|data_state>|^2, zero when data_state is empty.
    double oracle_fidelity = 0.0;
    /// Unit scalar c with data_state ~= c * oracle.
    Complex global_phase = 1.0;

    bool succeeded() const { return data_state.has_value(); }
};

/// Thrown by oracle_apply when A maps the input to (numerically) zero.
class AnnihilatedStateError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/**
 * Projects the trailing qudits of `joint` onto `measurement`.
 *
 * The success probability is the squared norm of the partial inner product
 * <M|joint> over the program register; the data state is that partial inner
 * product renormalized.
 */
inline PostSelectionOutcome post_select(const QuditRegisterState &joint, const QuditRegisterState &measurement,
                                        const QuditRegisterState &oracle_state) {
    if (joint.arity() != oracle_state.arity() + measurement.arity() || joint.dim() != oracle_state.dim()) {
        throw ShapeError("joint register does not split into oracle and measurement registers");
    }
    Amplitudes data = detail::project_trailing(joint, measurement);
    PostSelectionOutcome outcome;
    outcome.probability = squared_norm(data);
    if (outcome.probability < kZeroProbability) {
        return outcome;
    }
    auto state = normalize(UnnormalizedVector(joint.dim(), oracle_state.arity(), std::move(data)));
    Complex overlap = inner_product(oracle_state, state);
    outcome.oracle_fidelity = std::min(1.0, std::norm(overlap));
    outcome.global_phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    outcome.data_state = std::move(state);
    return outcome;
}

inline PostSelectionOutcome post_select(const QuditRegisterState &joint, const MeasurementVector &measurement,
                                        const QuditRegisterState &oracle_state) {
    return post_select(joint, measurement.state, oracle_state);
}

/// A|psi> / ||A psi||. `a` acts on the whole register of `psi`.
inline QuditRegisterState oracle_apply(const DenseOperator &a, const QuditRegisterState &psi) {
    auto image = apply_to_register(a, psi);
    if (!(image.norm() > kZeroProbability)) {
        throw AnnihilatedStateError("operator annihilates the input state");
    }
    return normalize(image);
}

/**
 * Closed-form success probability when the program register is measured onto
 * a uniform superposition of `measured_terms` program basis vectors that
 * covers the operator's support:
 *
 *   p = N ||A psi||^2 / (measured_terms * Tr(A^dagger A)).
 *
 * With the full measurement (measured_terms = N^2) this is
 * ||A psi||^2 / (N Tr(A^dagger A)). A unitary A gives 1 / measured_terms.
 * The non-unitary form is derived from the processor output and is validated
 * against simulation in the tests.
 */
inline double predicted_probability_for_terms(const DenseOperator &a, const QuditRegisterState &psi,
                                              std::size_t measured_terms) {
    const double image = apply_to_register(a, psi).squared_norm();
    const double n = static_cast<double>(a.dim());
    return n * image / (static_cast<double>(measured_terms) * a.hs_norm_squared());
}

inline double predicted_probability(const DenseOperator &a, const QuditRegisterState &psi, MeasurementKind kind) {
    const std::size_t n = a.dim();
    const std::size_t terms = kind == MeasurementKind::Full ? n * n : hs_expand(a).support().size();
    return predicted_probability_for_terms(a, psi, terms);
}

/**
 * Success probability for the shift-network program of `a` measured onto the
 * uniform superposition of the Bell states in `labels`, whether or not the
 * labels cover the support:
 *
 *   p = N || sum_{labels} q_mn U^(mn) psi ||^2 / (|labels| Tr(A^dagger A)).
 */
inline double predicted_probability_for_labels(const DenseOperator &a, const QuditRegisterState &psi,
                                               const std::vector<BellLabel> &labels) {
    if (labels.empty()) {
        throw ShapeError("measurement vector needs a nonempty label set");
    }
    const std::size_t n = a.dim();
    HsExpansion e = hs_expand(a);
    Amplitudes image(psi.size(), 0.0);
    for (const BellLabel &label : labels) {
        Amplitudes term = u_mn(n, label).apply(psi.amplitudes());
        for (std::size_t i = 0; i < image.size(); ++i) {
            image[i] += e.at(label) * term[i];
        }
    }
    return static_cast<double>(n) * squared_norm(image) /
           (static_cast<double>(labels.size()) * a.hs_norm_squared());
}

/// Runs a prepared program through the processor and post-selects.
inline PostSelectionOutcome run_with_program(const ProcessorSpec &spec, const DenseOperator &a,
                                             const QuditRegisterState &psi, const QuditRegisterState &program,
                                             const QuditRegisterState &measurement) {
    auto joint = apply_processor(spec, psi, program);
    QuditRegisterState oracle = [&] {
        try {
            return oracle_apply(a, psi);
        } catch (const AnnihilatedStateError &) {
            // Fidelity is meaningless here; the simulated probability is zero as well.
            return psi;
        }
    }();
    return post_select(joint, measurement, oracle);
}

/// Program and measurement a processor would use for `a`.
struct PreparedRun {
    QuditRegisterState program;
    QuditRegisterState measurement;
    /// Number of program basis vectors in the measurement.
    std::size_t measured_terms;
};

inline PreparedRun prepare_run(const ProcessorSpec &spec, const DenseOperator &a, MeasurementKind kind) {
    if (std::holds_alternative<QuditShiftNetwork>(spec) || std::holds_alternative<QubitCnotNetwork>(spec)) {
        if (a.dim() != processor_shape(spec).dim) {
            throw ShapeError("operator dimension does not match the processor");
        }
        ProgramVector program = synthesize_program(a);
        MeasurementVector meas =
            kind == MeasurementKind::Full ? measurement_full(a.dim()) : measurement_restricted(program.expansion);
        std::size_t terms = meas.support.size();
        return {program.state, meas.state, terms};
    }
    auto basis = program_basis(spec);
    BasisProgram program = synthesize_in_basis(basis, a);
    std::vector<std::size_t> selected;
    if (kind == MeasurementKind::Full) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            selected.push_back(k);
        }
    } else {
        selected = program.support;
    }
    return {program.state, basis_measurement(basis, selected), selected.size()};
}

/// synthesize program -> apply processor -> post-select.
inline PostSelectionOutcome run_experiment(const ProcessorSpec &spec, const DenseOperator &a,
                                           const QuditRegisterState &psi, MeasurementKind kind) {
    PreparedRun run = prepare_run(spec, a, kind);
    return run_with_program(spec, a, psi, run.program, run.measurement);
}

/// Stochastic post-selection for demonstrations: one Bernoulli draw per shot.
inline std::size_t sample_successes(const PostSelectionOutcome &outcome, std::size_t shots, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution success(std::clamp(outcome.probability, 0.0, 1.0));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < shots; ++i) {
        hits += success(rng) ? 1 : 0;
    }
    return hits;
}

} // namespace qproc
