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
 * Scenario configs, the operator catalog and report rendering behind the
 * `qproc` command-line tool. Requires nlohmann/json (vendor/json.hpp).
 *
 * Config schema 1:
 *
 *   {
 *     "schema": 1,
 *     "seed": 12345,                 // optional, u64
 *     "trials": 10,                  // optional default for scenarios
 *     "scenarios": [
 *       {
 *         "id": "az-qubit",
 *         "dim": 2,
 *         "processor": "qubit_cnot" | "qudit_shift" | "tensor_qubit_array",
 *         "operator": {"catalog": "az", "params": {...}} | {"matrix": [[[re, im], ...], ...]},
 *         "program": "synthesized" | "u_init" | "factorized",     // optional
 *         "data_state": "random" | {"random": {"seed": 7}} | {"amplitudes": [[re, im], ...]},
 *         "measurement": "full" | "support" | "qubit_reflection" | {"labels": [[m, n], ...]},
 *         "trials": 20,
 *         "expect": {"probability": "1/3", "tolerance": 1e-10}  // optional
 *       }
 *     ]
 *   }
 */

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qproc/postselection.hpp"
#include "qproc/random.hpp"
#include "qproc/synthesis.hpp"

namespace qproc::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::uint64_t kDefaultSeed = 20010525;

/// Config is well-formed JSON but describes something invalid.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Config file could not be read or is not JSON.
class ConfigReadError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON helpers.

inline Complex parse_complex(const json &j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("complex numbers are written as [re, im], got " + j.dump());
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Amplitudes parse_amplitudes(const json &j) {
    if (!j.is_array()) {
        throw ConfigError("amplitude list must be an array");
    }
    Amplitudes out;
    for (const auto &x : j) {
        out.push_back(parse_complex(x));
    }
    return out;
}

inline DenseOperator parse_matrix(const json &j, std::optional<std::size_t> dim = std::nullopt) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("matrix must be a nonempty array of rows");
    }
    const std::size_t n = j.size();
    if (dim && *dim != n) {
        throw ConfigError("matrix side " + std::to_string(n) + " does not match dim " + std::to_string(*dim));
    }
    std::vector<Complex> entries;
    for (const auto &row : j) {
        if (!row.is_array() || row.size() != n) {
            throw ConfigError("matrix must be square");
        }
        for (const auto &x : row) {
            entries.push_back(parse_complex(x));
        }
    }
    return DenseOperator(n, std::move(entries), "matrix");
}

/// Shortest decimal text for the double nearest to `x` at 15 significant digits.
inline double round15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

inline std::string format15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

/// Exact text form of a double, used where output must re-parse bit for bit.
inline std::string format17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const DenseOperator &a) {
    json rows = json::array();
    for (std::size_t r = 0; r < a.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < a.dim(); ++c) {
            row.push_back(complex_to_json(a(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// "1/3", "0.25" or a JSON number.
inline double parse_probability(const json &j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (!j.is_string()) {
        throw ConfigError("expected probability must be a number or a \"p/q\" string");
    }
    const std::string s = j.get<std::string>();
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            return std::stod(s);
        }
        double num = std::stod(s.substr(0, slash));
        double den = std::stod(s.substr(slash + 1));
        if (den == 0.0) {
            throw ConfigError("zero denominator in " + s);
        }
        return num / den;
    } catch (const std::logic_error &) {
        throw ConfigError("cannot parse probability \"" + s + "\"");
    }
}

// ---------------------------------------------------------------------------
// Operator catalog.

inline const std::vector<std::string> &catalog_names() {
    static const std::vector<std::string> names = {"identity",  "u_mn",     "projector",      "reflection",
                                                   "az",        "ax",       "example1",       "family",
                                                   "example2",  "random_unitary", "random_operator", "matrix"};
    return names;
}

inline bool is_catalog_name(const std::string &name) {
    for (const auto &n : catalog_names()) {
        if (n == name) {
            return true;
        }
    }
    return false;
}

/// Catalog entries whose operator is redrawn on every trial.
inline bool is_randomized(const std::string &name, const json &params) {
    if (name == "random_unitary" || name == "random_operator") {
        return true;
    }
    if (name == "reflection" || name == "az" || name == "ax") {
        return !params.contains("phi");
    }
    return false;
}

namespace detail {

inline double number_param(const json &params, const char *key, std::optional<double> fallback = std::nullopt) {
    if (params.contains(key)) {
        if (!params[key].is_number()) {
            throw ConfigError(std::string("parameter ") + key + " must be a number");
        }
        return params[key].get<double>();
    }
    if (fallback) {
        return *fallback;
    }
    throw ConfigError(std::string("missing parameter ") + key);
}

inline long long integer_param(const json &params, const char *key) {
    if (!params.contains(key) || !params[key].is_number_integer()) {
        throw ConfigError(std::string("parameter ") + key + " must be an integer");
    }
    return params[key].get<long long>();
}

inline QuditRegisterState phi_param(const json &params, std::size_t dim, Rng &rng) {
    if (!params.contains("phi")) {
        return random_state(dim, 1, rng);
    }
    Amplitudes amps = parse_amplitudes(params["phi"]);
    if (amps.size() != dim) {
        throw ConfigError("phi has " + std::to_string(amps.size()) + " amplitudes, expected " +
                          std::to_string(dim));
    }
    try {
        return QuditRegisterState(dim, 1, std::move(amps));
    } catch (const NormalizationError &) {
        throw ConfigError("phi must be normalized");
    }
}

} // namespace detail

/// A catalog operator together with the vector it was built from, when there is one.
struct CatalogOperator {
    DenseOperator op;
    std::optional<QuditRegisterState> phi;
};

/// Builds a catalog operator of dimension `dim`. `rng` feeds entries drawn at random.
inline CatalogOperator make_catalog_operator(const std::string &name, std::size_t dim, const json &params, Rng &rng) {
    if (dim < 2) {
        throw ConfigError("dim must be at least 2");
    }
    const json p = params.is_null() ? json::object() : params;
    if (name == "identity") {
        return {DenseOperator::identity(dim), std::nullopt};
    }
    if (name == "u_mn") {
        BellLabel label(dim, detail::integer_param(p, "m"), detail::integer_param(p, "n"));
        return {u_mn(dim, label), std::nullopt};
    }
    if (name == "projector") {
        long long k = detail::integer_param(p, "k");
        if (k < 0 || static_cast<std::size_t>(k) >= dim) {
            throw ConfigError("projector index out of range");
        }
        DenseOperator a = DenseOperator::zero(dim);
        a(static_cast<std::size_t>(k), static_cast<std::size_t>(k)) = 1.0;
        return {a.with_label("projector"), std::nullopt};
    }
    if (name == "reflection") {
        auto phi = detail::phi_param(p, dim, rng);
        return {reflection_operator(phi), phi};
    }
    if (name == "az" || name == "ax") {
        if (dim != 2) {
            throw ConfigError(name + " acts on a qubit; dim must be 2");
        }
        auto phi = detail::phi_param(p, dim, rng);
        return {name == "az" ? az_operator(phi) : ax_operator(phi), phi};
    }
    if (name == "example1") {
        if (dim != 4) {
            throw ConfigError("example1 needs dim 4");
        }
        return {example1_operator(detail::number_param(p, "phi", 0.7)), std::nullopt};
    }
    if (name == "family") {
        long long qubits = detail::integer_param(p, "qubits");
        if (qubits < 1 || qubits > 6 || ipow(2, static_cast<std::size_t>(qubits)) != dim) {
            throw ConfigError("family needs dim = 2^qubits");
        }
        return {family_operator(static_cast<std::size_t>(qubits), detail::number_param(p, "phi", 0.7)),
                std::nullopt};
    }
    if (name == "example2") {
        if (dim % 2 != 0) {
            throw ConfigError("example2 needs an even dim");
        }
        return {example2_operator(detail::number_param(p, "theta", 0.3), dim), std::nullopt};
    }
    if (name == "random_unitary") {
        return {random_unitary(dim, rng), std::nullopt};
    }
    if (name == "random_operator") {
        return {random_operator(dim, rng), std::nullopt};
    }
    if (name == "matrix") {
        if (!p.contains("matrix")) {
            throw ConfigError("matrix entry needs a \"matrix\" parameter");
        }
        return {parse_matrix(p["matrix"], dim), std::nullopt};
    }
    throw ConfigError("unknown catalog operator \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// Scenarios.

enum class ProgramSource { Synthesized, UInit, Factorized };

struct MeasurementSpec {
    enum class Kind { Full, Support, Labels } kind = Kind::Full;
    std::vector<BellLabel> labels;
};

struct Scenario {
    std::string id;
    std::size_t dim = 0;
    std::string processor;
    std::string operator_name;
    json operator_params = json::object();
    ProgramSource program = ProgramSource::Synthesized;
    std::optional<Amplitudes> data_amplitudes;
    std::optional<std::uint64_t> data_seed;
    MeasurementSpec measurement;
    std::size_t trials = 1;
    std::optional<double> expected_probability;
    double tolerance = kDefaultTolerance;
};

struct ScenarioConfig {
    int schema = kSchemaVersion;
    std::uint64_t seed = kDefaultSeed;
    std::vector<Scenario> scenarios;
};

struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
};

namespace detail {

inline std::size_t positive_size(const json &j, const std::string &what) {
    if (!j.is_number_integer() || j.get<long long>() < 1) {
        throw ConfigError(what + " must be a positive integer");
    }
    return j.get<std::size_t>();
}

inline std::size_t processor_dim_check(const Scenario &s) {
    if (s.processor == "qudit_shift") {
        return s.dim;
    }
    if (s.processor == "qubit_cnot") {
        if (s.dim != 2) {
            throw ConfigError(s.id + ": qubit_cnot needs dim 2");
        }
        return s.dim;
    }
    if (s.processor == "tensor_qubit_array") {
        std::size_t d = s.dim;
        std::size_t qubits = 0;
        while (d > 1 && d % 2 == 0) {
            d /= 2;
            ++qubits;
        }
        if (d != 1 || qubits == 0 || qubits > 4) {
            throw ConfigError(s.id + ": tensor_qubit_array needs dim = 2^l with 1 <= l <= 4");
        }
        return qubits;
    }
    throw ConfigError(s.id + ": unknown processor \"" + s.processor + "\"");
}

inline Scenario parse_scenario(const json &j, std::size_t index, std::optional<std::size_t> default_trials) {
    if (!j.is_object()) {
        throw ConfigError("scenario " + std::to_string(index) + " must be an object");
    }
    Scenario s;
    s.id = j.value("id", "scenario-" + std::to_string(index));
    if (!j.contains("dim")) {
        throw ConfigError(s.id + ": missing dim");
    }
    s.dim = positive_size(j["dim"], s.id + ": dim");
    if (s.dim < 2 || s.dim > 64) {
        throw ConfigError(s.id + ": dim must be in [2, 64]");
    }
    s.processor = j.value("processor", std::string("qudit_shift"));
    processor_dim_check(s);

    if (!j.contains("operator") || !j["operator"].is_object()) {
        throw ConfigError(s.id + ": missing operator object");
    }
    const json &op = j["operator"];
    if (op.contains("matrix")) {
        s.operator_name = "matrix";
        s.operator_params = json{{"matrix", op["matrix"]}};
        parse_matrix(op["matrix"], s.dim);
    } else if (op.contains("catalog") && op["catalog"].is_string()) {
        s.operator_name = op["catalog"].get<std::string>();
        if (!is_catalog_name(s.operator_name)) {
            throw ConfigError(s.id + ": unknown catalog operator \"" + s.operator_name + "\"");
        }
        s.operator_params = op.value("params", json::object());
    } else {
        throw ConfigError(s.id + ": operator needs \"catalog\" or \"matrix\"");
    }
    {
        Rng probe(0);
        make_catalog_operator(s.operator_name, s.dim, s.operator_params, probe);
    }

    const std::string program = j.value("program", std::string("synthesized"));
    if (program == "synthesized") {
        s.program = ProgramSource::Synthesized;
    } else if (program == "u_init") {
        if (s.processor != "qubit_cnot" || (s.operator_name != "az" && s.operator_name != "ax")) {
            throw ConfigError(s.id + ": u_init programs exist for az/ax on the qubit_cnot processor");
        }
        s.program = ProgramSource::UInit;
    } else if (program == "factorized") {
        if (s.operator_name != "reflection" || s.processor == "tensor_qubit_array") {
            throw ConfigError(s.id + ": factorized programs exist for reflections on shift networks");
        }
        s.program = ProgramSource::Factorized;
    } else {
        throw ConfigError(s.id + ": unknown program source \"" + program + "\"");
    }

    const json data = j.value("data_state", json("random"));
    const bool plain_random = data.is_string() && data.get<std::string>() == "random";
    if (plain_random) {
        s.data_seed.reset();
    } else if (data.is_object() && data.contains("random")) {
        const json &r = data["random"];
        if (r.is_object() && r.contains("seed")) {
            if (!r["seed"].is_number_unsigned()) {
                throw ConfigError(s.id + ": data seed must be an unsigned integer");
            }
            s.data_seed = r["seed"].get<std::uint64_t>();
        }
    } else if (data.is_object() && data.contains("amplitudes")) {
        Amplitudes amps = parse_amplitudes(data["amplitudes"]);
        if (amps.size() != s.dim) {
            throw ConfigError(s.id + ": data state needs " + std::to_string(s.dim) + " amplitudes");
        }
        if (std::abs(squared_norm(amps) - 1.0) > kNormTolerance) {
            throw ConfigError(s.id + ": data state must be normalized");
        }
        s.data_amplitudes = std::move(amps);
    } else {
        throw ConfigError(s.id + ": data_state must be \"random\", {\"random\": ...} or {\"amplitudes\": ...}");
    }

    const json meas = j.value("measurement", json("full"));
    if (meas.is_string()) {
        const std::string m = meas.get<std::string>();
        if (m == "full") {
            s.measurement.kind = MeasurementSpec::Kind::Full;
        } else if (m == "support") {
            s.measurement.kind = MeasurementSpec::Kind::Support;
        } else if (m == "qubit_reflection") {
            if (s.dim != 2) {
                throw ConfigError(s.id + ": qubit_reflection measurement needs dim 2");
            }
            s.measurement.kind = MeasurementSpec::Kind::Labels;
            s.measurement.labels = qubit_reflection_measurement().support;
        } else {
            throw ConfigError(s.id + ": unknown measurement \"" + m + "\"");
        }
    } else if (meas.is_object() && meas.contains("labels") && meas["labels"].is_array()) {
        s.measurement.kind = MeasurementSpec::Kind::Labels;
        for (const auto &l : meas["labels"]) {
            if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() || !l[1].is_number_integer()) {
                throw ConfigError(s.id + ": measurement labels are [m, n] integer pairs");
            }
            s.measurement.labels.emplace_back(s.dim, l[0].get<long long>(), l[1].get<long long>());
        }
        if (s.measurement.labels.empty()) {
            throw ConfigError(s.id + ": measurement label list is empty");
        }
    } else {
        throw ConfigError(s.id + ": measurement must be \"full\", \"support\", \"qubit_reflection\" or {\"labels\"}");
    }
    if (s.measurement.kind == MeasurementSpec::Kind::Labels && s.processor == "tensor_qubit_array") {
        throw ConfigError(s.id + ": explicit labels are only meaningful on shift networks");
    }

    if (default_trials) {
        s.trials = *default_trials;
    } else if (j.contains("trials")) {
        s.trials = positive_size(j["trials"], s.id + ": trials");
    }

    if (j.contains("expect")) {
        const json &e = j["expect"];
        if (!e.is_object()) {
            throw ConfigError(s.id + ": expect must be an object");
        }
        if (e.contains("probability")) {
            s.expected_probability = parse_probability(e["probability"]);
        }
        if (e.contains("tolerance")) {
            if (!e["tolerance"].is_number() || e["tolerance"].get<double>() <= 0.0) {
                throw ConfigError(s.id + ": tolerance must be a positive number");
            }
            s.tolerance = e["tolerance"].get<double>();
        }
    }
    return s;
}

} // namespace detail

/// Validates the whole config before anything runs.
inline ScenarioConfig parse_config(const json &j, const ConfigOverrides &overrides = {}) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ScenarioConfig config;
    if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != kSchemaVersion) {
        throw ConfigError("config must declare \"schema\": 1");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) {
            throw ConfigError("seed must be an unsigned 64-bit integer");
        }
        config.seed = j["seed"].get<std::uint64_t>();
    }
    if (overrides.seed) {
        config.seed = *overrides.seed;
    }
    std::optional<std::size_t> default_trials = overrides.trials;
    std::optional<std::size_t> file_trials;
    if (j.contains("trials")) {
        file_trials = detail::positive_size(j["trials"], "trials");
    }
    const json scenarios = j.value("scenarios", json::array());
    if (!scenarios.is_array()) {
        throw ConfigError("scenarios must be an array");
    }
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        Scenario s = detail::parse_scenario(scenarios[i], i, default_trials);
        if (!default_trials && !scenarios[i].contains("trials") && file_trials) {
            s.trials = *file_trials;
        }
        config.scenarios.push_back(std::move(s));
    }
    return config;
}

inline json read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigReadError("cannot open config file " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigReadError("config file " + path + " is not valid JSON: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Running.

struct ReportRow {
    std::string id;
    std::size_t dim = 0;
    std::string processor;
    std::string operator_label;
    std::string measurement;
    std::size_t trials = 0;
    double predicted_probability = 0.0;
    double simulated_probability = 0.0;
    double max_abs_diff = 0.0;
    double min_fidelity = 1.0;
    std::optional<double> expected_probability;
    double tolerance = kDefaultTolerance;
    std::optional<double> wall_time_s;
    bool passed = true;
    std::vector<std::string> failures;
};

inline std::string measurement_name(const MeasurementSpec &m) {
    switch (m.kind) {
    case MeasurementSpec::Kind::Full:
        return "full";
    case MeasurementSpec::Kind::Support:
        return "support";
    case MeasurementSpec::Kind::Labels:
        break;
    }
    std::string out = "labels:";
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        out += (i ? " " : "") + m.labels[i].str();
    }
    return out;
}

/// Independent per-scenario stream: seed_seq over (global seed halves, scenario index).
inline Rng scenario_rng(std::uint64_t seed, std::size_t index, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), stream};
    return Rng(seq);
}

namespace detail {

inline ProcessorSpec make_processor(const Scenario &s) {
    if (s.processor == "qubit_cnot") {
        return QubitCnotNetwork{};
    }
    if (s.processor == "tensor_qubit_array") {
        return TensorQubitArray{processor_dim_check(s)};
    }
    return QuditShiftNetwork{s.dim};
}

struct TrialResult {
    double predicted;
    double simulated;
    double fidelity;
    bool impossible;
};

inline TrialResult run_trial(const Scenario &s, const ProcessorSpec &proc, const CatalogOperator &catalog,
                             const QuditRegisterState &psi) {
    const DenseOperator &a = catalog.op;
    const bool shift = !std::holds_alternative<TensorQubitArray>(proc);
    QuditRegisterState data = psi;
    if (!shift) {
        std::size_t qubits = processor_shape(proc).data_arity;
        data = QuditRegisterState(2, qubits, Amplitudes(psi.amplitudes().begin(), psi.amplitudes().end()));
    }

    std::optional<QuditRegisterState> program;
    std::optional<QuditRegisterState> measurement;
    double predicted = 0.0;
    if (shift) {
        ProgramVector synthesized = synthesize_program(a);
        std::vector<BellLabel> labels;
        switch (s.measurement.kind) {
        case MeasurementSpec::Kind::Full:
            labels = all_bell_labels(a.dim());
            break;
        case MeasurementSpec::Kind::Support:
            labels = synthesized.support;
            break;
        case MeasurementSpec::Kind::Labels:
            labels = s.measurement.labels;
            break;
        }
        measurement = measurement_over(a.dim(), labels).state;
        predicted = predicted_probability_for_labels(a, psi, labels);
        switch (s.program) {
        case ProgramSource::Synthesized:
            program = synthesized.state;
            break;
        case ProgramSource::UInit:
            program = s.operator_name == "az" ? az_program_prepared(*catalog.phi) : ax_program_prepared(*catalog.phi);
            break;
        case ProgramSource::Factorized:
            program = reflection_program_from_product(*catalog.phi);
            break;
        }
    } else {
        MeasurementKind kind =
            s.measurement.kind == MeasurementSpec::Kind::Full ? MeasurementKind::Full : MeasurementKind::SupportRestricted;
        PreparedRun run = prepare_run(proc, a, kind);
        program = run.program;
        measurement = run.measurement;
        predicted = predicted_probability_for_terms(a, data, run.measured_terms);
    }
    PostSelectionOutcome outcome = run_with_program(proc, a, data, *program, *measurement);
    return {predicted, outcome.probability, outcome.oracle_fidelity, !outcome.succeeded()};
}

} // namespace detail

inline ReportRow run_scenario(const Scenario &s, std::uint64_t seed, std::size_t index, bool timing = false) {
    auto start = std::chrono::steady_clock::now();
    ReportRow row;
    row.id = s.id;
    row.dim = s.dim;
    row.processor = s.processor;
    row.measurement = measurement_name(s.measurement);
    row.trials = s.trials;
    row.expected_probability = s.expected_probability;
    row.tolerance = s.tolerance;

    Rng operator_rng = scenario_rng(seed, index, 1);
    Rng data_rng = s.data_seed ? Rng(*s.data_seed) : scenario_rng(seed, index, 2);
    const ProcessorSpec proc = detail::make_processor(s);
    std::optional<CatalogOperator> fixed;
    if (!is_randomized(s.operator_name, s.operator_params)) {
        fixed = make_catalog_operator(s.operator_name, s.dim, s.operator_params, operator_rng);
    }

    double predicted_total = 0.0;
    double simulated_total = 0.0;
    for (std::size_t t = 0; t < s.trials; ++t) {
        CatalogOperator catalog =
            fixed ? *fixed : make_catalog_operator(s.operator_name, s.dim, s.operator_params, operator_rng);
        if (row.operator_label.empty()) {
            row.operator_label = catalog.op.label().empty() ? s.operator_name : catalog.op.label();
        }
        QuditRegisterState psi = s.data_amplitudes ? QuditRegisterState(s.dim, 1, *s.data_amplitudes)
                                                   : random_state(s.dim, 1, data_rng);
        detail::TrialResult r = detail::run_trial(s, proc, catalog, psi);
        predicted_total += r.predicted;
        simulated_total += r.simulated;
        row.max_abs_diff = std::max(row.max_abs_diff, std::abs(r.predicted - r.simulated));
        if (!r.impossible) {
            row.min_fidelity = std::min(row.min_fidelity, r.fidelity);
        }
        if (s.expected_probability && std::abs(r.simulated - *s.expected_probability) > s.tolerance) {
            row.failures.push_back("trial " + std::to_string(t) + ": simulated probability " + format15(r.simulated) +
                                   " differs from expected " + format15(*s.expected_probability));
        }
    }
    row.predicted_probability = predicted_total / static_cast<double>(s.trials);
    row.simulated_probability = simulated_total / static_cast<double>(s.trials);
    if (row.max_abs_diff > s.tolerance) {
        row.failures.push_back("simulated and predicted probabilities differ by " + format15(row.max_abs_diff));
    }
    if (row.min_fidelity < 1.0 - s.tolerance) {
        row.failures.push_back("post-selected state fidelity " + format15(row.min_fidelity));
    }
    row.passed = row.failures.empty();
    if (timing) {
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return row;
}

/// Runs every scenario; scenarios are dispatched concurrently and reported in config order.
inline std::vector<ReportRow> run_config(const ScenarioConfig &config, bool timing = false) {
    std::vector<std::future<ReportRow>> pending;
    pending.reserve(config.scenarios.size());
    for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
        pending.push_back(std::async(std::launch::async, [&config, i, timing] {
            return run_scenario(config.scenarios[i], config.seed, i, timing);
        }));
    }
    std::vector<ReportRow> rows;
    rows.reserve(pending.size());
    for (auto &f : pending) {
        rows.push_back(f.get());
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Rendering.

inline json row_to_json(const ReportRow &r) {
    json j = {
        {"id", r.id},
        {"N", r.dim},
        {"processor", r.processor},
        {"operator", r.operator_label},
        {"measurement", r.measurement},
        {"trials", r.trials},
        {"predicted_probability", round15(r.predicted_probability)},
        {"simulated_probability", round15(r.simulated_probability)},
        {"max_abs_diff", round15(r.max_abs_diff)},
        {"min_fidelity", round15(r.min_fidelity)},
        {"tolerance", r.tolerance},
        {"passed", r.passed},
    };
    j["expected_probability"] = r.expected_probability ? json(round15(*r.expected_probability)) : json(nullptr);
    if (r.wall_time_s) {
        j["wall_time_s"] = round15(*r.wall_time_s);
    }
    if (!r.failures.empty()) {
        j["failures"] = r.failures;
    }
    return j;
}

inline std::string render_json(const std::vector<ReportRow> &rows, std::uint64_t seed) {
    json report = {{"schema", kSchemaVersion}, {"seed", seed}, {"rows", json::array()}};
    bool all = true;
    for (const auto &r : rows) {
        report["rows"].push_back(row_to_json(r));
        all = all && r.passed;
    }
    report["passed"] = all;
    return report.dump(2) + "\n";
}

namespace detail {

inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline std::string render_csv(const std::vector<ReportRow> &rows) {
    bool timing = false;
    for (const auto &r : rows) {
        timing = timing || r.wall_time_s.has_value();
    }
    std::ostringstream out;
    out << "id,N,processor,operator,measurement,trials,predicted_probability,simulated_probability,"
           "max_abs_diff,min_fidelity,expected_probability,passed";
    if (timing) {
        out << ",wall_time_s";
    }
    out << "\n";
    for (const auto &r : rows) {
        out << detail::csv_field(r.id) << ',' << r.dim << ',' << r.processor << ','
            << detail::csv_field(r.operator_label) << ',' << detail::csv_field(r.measurement) << ',' << r.trials
            << ',' << format15(r.predicted_probability) << ',' << format15(r.simulated_probability) << ','
            << format15(r.max_abs_diff) << ',' << format15(r.min_fidelity) << ','
            << (r.expected_probability ? format15(*r.expected_probability) : "") << ','
            << (r.passed ? "true" : "false");
        if (timing) {
            out << ',' << (r.wall_time_s ? format15(*r.wall_time_s) : "");
        }
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Describe.

struct OperatorDescription {
    DenseOperator op;
    HsExpansion expansion;
    std::vector<BellLabel> support;
    bool unitary;
    /// Input-averaged success probabilities; exact for unitary operators.
    double full_probability;
    double support_probability;
};

/**
 * Averaged over uniformly random inputs, E||A psi||^2 = Tr(A^dagger A) / N,
 * so the closed forms average to 1/N^2 (full) and 1/support (restricted) for
 * every operator. For unitary operators they hold for each input.
 */
inline OperatorDescription describe_operator(const DenseOperator &a) {
    HsExpansion e = hs_expand(a);
    auto support = e.support();
    const double n = static_cast<double>(a.dim());
    return {a,
            e,
            support,
            a.is_unitary(1e-10),
            1.0 / (n * n),
            1.0 / static_cast<double>(support.size())};
}

inline json description_to_json(const OperatorDescription &d) {
    json coeffs = json::array();
    for (const BellLabel &label : all_bell_labels(d.expansion.dim)) {
        Complex q = d.expansion.at(label);
        coeffs.push_back({{"m", label.m()},
                          {"n", label.n()},
                          {"q", complex_to_json(q)},
                          {"magnitude", round15(std::abs(q))},
                          {"phase", round15(std::abs(q) > 0.0 ? std::arg(q) : 0.0)}});
    }
    json support = json::array();
    for (const BellLabel &label : d.support) {
        support.push_back({label.m(), label.n()});
    }
    return {{"schema", kSchemaVersion},
            {"operator", d.op.label()},
            {"dim", d.op.dim()},
            {"matrix", matrix_to_json(d.op)},
            {"unitary", d.unitary},
            {"coefficients", coeffs},
            {"support", support},
            {"support_size", d.support.size()},
            {"predicted_probability", {{"full", round15(d.full_probability)}, {"support", round15(d.support_probability)}}}};
}

inline std::string render_description_text(const OperatorDescription &d) {
    std::ostringstream out;
    const std::size_t n = d.op.dim();
    out << "operator: " << d.op.label() << "\n";
    out << "dim: " << n << "\n";
    out << "unitary: " << (d.unitary ? "yes" : "no") << "\n";
    out << "matrix:\n";
    for (std::size_t r = 0; r < n; ++r) {
        out << " ";
        for (std::size_t c = 0; c < n; ++c) {
            out << " [" << format17(d.op(r, c).real()) << ", " << format17(d.op(r, c).imag()) << "]";
        }
        out << "\n";
    }
    out << "coefficients q_mn (magnitude, phase):\n";
    for (const BellLabel &label : all_bell_labels(n)) {
        Complex q = d.expansion.at(label);
        out << "  " << label.str() << "  " << format15(std::abs(q)) << "  "
            << format15(std::abs(q) > 0.0 ? std::arg(q) : 0.0) << "\n";
    }
    out << "support size: " << d.support.size() << "\n";
    out << "predicted probability (full): " << format15(d.full_probability) << "\n";
    out << "predicted probability (support): " << format15(d.support_probability) << "\n";
    if (!d.unitary) {
        out << "note: operator is not unitary; probabilities above are averages over input states\n";
    }
    return out.str();
}

} // namespace qproc::harness
