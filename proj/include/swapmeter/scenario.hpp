// Copyright 2026 The swapmeter Authors
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

#ifndef SWAPMETER_SCENARIO_HPP
#define SWAPMETER_SCENARIO_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "swapmeter/observables.hpp"

// Declarative experiment descriptions (one JSON document per scenario) and
// the result records they produce.

namespace swapmeter::scenario {

using Json = nlohmann::json;

/// Largest cutoff accepted for devices other than the ideal one; those keep
/// dense operators on the two-mode space.
inline constexpr std::size_t kMaxDenseCutoff = 32;
inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kDefaultShotSigmas = 5.0;

/// Validation failure, located by field path and line in the source text.
class ScenarioError : public Error {
   public:
    ScenarioError(std::string path, std::size_t line, const std::string &message)
        : Error(format(path, line, message)), path_(std::move(path)), line_(line) {}

    const std::string &path() const { return path_; }
    std::size_t line() const { return line_; }

   private:
    static std::string format(const std::string &path, std::size_t line, const std::string &message) {
        return (path.empty() ? std::string("(document)") : path) + " (line " + std::to_string(line) +
               "): " + message;
    }

    std::string path_;
    std::size_t line_;
};

namespace detail {

/// Line on which every field of a JSON document starts, keyed by dotted
/// path ("state_a.type", "amplitudes[2]"). Assumes well-formed input.
class LineIndex {
   public:
    explicit LineIndex(std::string_view text) : text_(text) {
        value("");
        text_ = {};
    }

    std::size_t line_of(std::string path) const {
        while (true) {
            if (auto it = lines_.find(path); it != lines_.end()) return it->second;
            if (path.empty()) return 1;
            const auto cut = path.find_last_of(".[");
            path = cut == std::string::npos ? std::string() : path.substr(0, cut);
        }
    }

   private:
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
                                       text_[pos_] == '\n')) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string string_token() {
        std::string out;
        ++pos_;  // opening quote
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\') {
                out += text_[pos_++];
            }
            if (pos_ < text_.size()) out += text_[pos_++];
        }
        ++pos_;  // closing quote
        return out;
    }

    void value(const std::string &path) {
        skip_ws();
        lines_.emplace(path, line_);
        if (pos_ >= text_.size()) return;
        const char c = text_[pos_];
        if (c == '{') {
            ++pos_;
            while (true) {
                skip_ws();
                if (pos_ >= text_.size() || text_[pos_] == '}') break;
                const std::string key = string_token();
                const std::string child = path.empty() ? key : path + "." + key;
                lines_.emplace(child, line_);
                skip_ws();
                ++pos_;  // ':'
                value(child);
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
            }
            ++pos_;
        } else if (c == '[') {
            ++pos_;
            for (std::size_t i = 0;; ++i) {
                skip_ws();
                if (pos_ >= text_.size() || text_[pos_] == ']') break;
                value(path + "[" + std::to_string(i) + "]");
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
            }
            ++pos_;
        } else if (c == '"') {
            string_token();
        } else {
            while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) == std::string_view::npos) {
                ++pos_;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::map<std::string, std::size_t> lines_;
};

inline std::string join(const std::string &path, const std::string &key) {
    return path.empty() ? key : path + "." + key;
}

/// Typed field access with located errors.
class Reader {
   public:
    explicit Reader(const LineIndex &lines) : lines_(lines) {}

    [[noreturn]] void fail(const std::string &path, const std::string &message) const {
        throw ScenarioError(path, lines_.line_of(path), message);
    }

    void only_keys(const Json &obj, const std::string &path, std::initializer_list<const char *> allowed) const {
        for (const auto &[key, _] : obj.items()) {
            bool ok = false;
            for (const char *a : allowed) ok = ok || key == a;
            if (!ok) fail(join(path, key), "unknown field '" + key + "'");
        }
    }

    const Json &object(const Json &j, const std::string &path) const {
        if (!j.is_object()) fail(path, "expected an object");
        return j;
    }

    std::string string(const Json &j, const std::string &path) const {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }

    double number(const Json &j, const std::string &path) const {
        if (!j.is_number()) fail(path, "expected a number");
        const double v = j.get<double>();
        if (!std::isfinite(v)) fail(path, "expected a finite number");
        return v;
    }

    double positive(const Json &j, const std::string &path) const {
        const double v = number(j, path);
        if (!(v > 0.0)) fail(path, "must be > 0");
        return v;
    }

    std::uint64_t unsigned_integer(const Json &j, const std::string &path) const {
        if (!j.is_number_integer()) fail(path, "expected an integer");
        if (j.is_number_unsigned()) return j.get<std::uint64_t>();
        const auto v = j.get<std::int64_t>();
        if (v < 0) fail(path, "must be >= 0");
        return static_cast<std::uint64_t>(v);
    }

    Complex complex(const Json &j, const std::string &path) const {
        if (j.is_number()) return {number(j, path), 0.0};
        if (j.is_array() && j.size() == 2) {
            return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
        }
        fail(path, "expected a number or a [re, im] pair");
    }

   private:
    const LineIndex &lines_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

enum class Task { Overlap, Fidelity, Purity, LinearEntropy, HsDistance, Witness, RepeatCheck };

inline std::string to_string(Task t) {
    switch (t) {
        case Task::Overlap:
            return "overlap";
        case Task::Fidelity:
            return "fidelity";
        case Task::Purity:
            return "purity";
        case Task::LinearEntropy:
            return "linear_entropy";
        case Task::HsDistance:
            return "hs_distance";
        case Task::Witness:
            return "witness";
        case Task::RepeatCheck:
            return "repeat_check";
    }
    return "unknown";
}

inline std::optional<Task> task_from_string(const std::string &s) {
    for (Task t : {Task::Overlap, Task::Fidelity, Task::Purity, Task::LinearEntropy, Task::HsDistance, Task::Witness,
                   Task::RepeatCheck}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

enum class Arity { Pair, Single, Joint };

inline Arity arity(Task t) {
    switch (t) {
        case Task::Purity:
        case Task::LinearEntropy:
            return Arity::Single;
        case Task::Witness:
            return Arity::Joint;
        default:
            return Arity::Pair;
    }
}

/// Reference values for the suite runner.
struct Expected {
    std::optional<double> device_value;
    std::optional<double> oracle_value;
    std::optional<std::string> verdict;
    std::optional<double> tolerance;
};

struct Scenario {
    std::string name;
    std::string description;
    std::size_t cutoff = 2;
    std::string device_label = "ideal";
    protocol::DeviceMode mode = protocol::Ideal{};
    Task task = Task::Overlap;
    std::optional<DensityMatrix> state_a;
    std::optional<DensityMatrix> state_b;
    std::optional<DensityMatrix> state_joint;
    std::optional<CVector> pure_b;  // fidelity target
    std::size_t phases = protocol::kDefaultPhases;
    std::optional<std::uint64_t> shots;  // empty = exact
    std::uint64_t seed = 0;
    std::optional<std::string> output;
    /// Names reported for the up and down detectors.
    std::array<std::string, 2> detectors{"up", "down"};
    Expected expected;
    std::vector<std::string> warnings;
};

namespace detail {

struct BuiltState {
    DensityMatrix rho;
    std::optional<CVector> vector;  // set for pure constructors
};

inline CVector read_amplitudes(const Reader &r, const Json &j, const std::string &path, std::size_t dim) {
    if (!j.is_array()) r.fail(path, "expected an array of amplitudes");
    if (j.size() != dim) {
        r.fail(path, "expected " + std::to_string(dim) + " amplitudes, got " + std::to_string(j.size()));
    }
    CVector v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        v(static_cast<Eigen::Index>(i)) = r.complex(j[i], path + "[" + std::to_string(i) + "]");
    }
    if (!(v.norm() > 0.0)) r.fail(path, "amplitudes are all zero");
    return v / v.norm();
}

inline void require_qubit_cutoff(const Reader &r, const std::string &path, const std::string &type,
                                 std::size_t cutoff) {
    if (cutoff != 2) {
        r.fail(path, "cutoff mismatch: '" + type + "' is a two-qubit state but the scenario cutoff is " +
                         std::to_string(cutoff));
    }
}

inline BuiltState build_state(const Reader &r, const Json &spec, const std::string &path, std::size_t cutoff,
                              bool joint) {
    r.object(spec, path);
    if (!spec.contains("type")) r.fail(path, "missing field 'type'");
    const std::string type = r.string(spec["type"], join(path, "type"));
    auto at = [&](const char *key) { return join(path, key); };
    auto require = [&](const char *key) -> const Json & {
        if (!spec.contains(key)) r.fail(path, "'" + type + "' needs field '" + key + "'");
        return spec[key];
    };

    static const std::set<std::string> single_only{"fock", "coherent", "thermal"};
    static const std::set<std::string> joint_only{"singlet", "classical_correlated", "werner", "product"};
    static const std::set<std::string> either{"maximally_mixed", "ginibre", "pure"};
    if (!single_only.count(type) && !joint_only.count(type) && !either.count(type)) {
        r.fail(at("type"), "unknown state constructor '" + type + "'");
    }
    if (joint && single_only.count(type)) {
        r.fail(at("type"), "'" + type + "' describes one mode; state_joint needs a two-mode state (use 'product')");
    }
    if (!joint && joint_only.count(type)) {
        r.fail(at("type"), "'" + type + "' describes two modes; use it as state_joint");
    }

    const CompositeSpace joint_space{cutoff, cutoff};
    try {
        if (type == "fock") {
            r.only_keys(spec, path, {"type", "n"});
            const auto n = r.unsigned_integer(require("n"), at("n"));
            if (n >= cutoff) r.fail(at("n"), "Fock level " + std::to_string(n) + " needs cutoff > " + std::to_string(n));
            const CVector v = states::fock_vector(n, cutoff);
            return {states::pure(v), v};
        }
        if (type == "coherent") {
            r.only_keys(spec, path, {"type", "alpha"});
            const CVector v = states::coherent_vector(r.complex(require("alpha"), at("alpha")), cutoff);
            return {states::pure(v), v};
        }
        if (type == "thermal") {
            r.only_keys(spec, path, {"type", "nbar"});
            const double nbar = r.number(require("nbar"), at("nbar"));
            if (nbar < 0.0) r.fail(at("nbar"), "mean photon number must be >= 0");
            return {states::thermal(nbar, cutoff), std::nullopt};
        }
        if (type == "maximally_mixed") {
            r.only_keys(spec, path, {"type"});
            return {joint ? states::maximally_mixed(joint_space) : states::maximally_mixed(cutoff), std::nullopt};
        }
        if (type == "pure") {
            r.only_keys(spec, path, {"type", "amplitudes"});
            const CVector v = read_amplitudes(r, require("amplitudes"), at("amplitudes"), joint ? cutoff * cutoff : cutoff);
            return {joint ? states::pure(v, joint_space) : states::pure(v), v};
        }
        if (type == "ginibre") {
            r.only_keys(spec, path, {"type", "rank", "seed", "dim"});
            std::size_t dim = cutoff;
            if (spec.contains("dim")) {
                if (joint) r.fail(at("dim"), "'dim' is only supported for single-mode ginibre states");
                dim = r.unsigned_integer(spec["dim"], at("dim"));
                if (dim < 2 || dim > cutoff) {
                    r.fail(at("dim"), "dim must lie in [2, cutoff] = [2, " + std::to_string(cutoff) + "]");
                }
            }
            const std::size_t total = joint ? cutoff * cutoff : dim;
            const std::size_t rank = spec.contains("rank") ? r.unsigned_integer(spec["rank"], at("rank")) : total;
            if (rank < 1) r.fail(at("rank"), "rank must be >= 1");
            const std::uint64_t seed = spec.contains("seed") ? r.unsigned_integer(spec["seed"], at("seed")) : 0;
            if (joint) return {states::ginibre_mixed(joint_space, rank, seed), std::nullopt};
            return {states::pad_to_cutoff(states::ginibre_mixed(dim, rank, seed), cutoff), std::nullopt};
        }
        if (type == "singlet") {
            r.only_keys(spec, path, {"type"});
            require_qubit_cutoff(r, at("type"), type, cutoff);
            return {states::bell_singlet(), states::singlet_vector()};
        }
        if (type == "classical_correlated") {
            r.only_keys(spec, path, {"type"});
            require_qubit_cutoff(r, at("type"), type, cutoff);
            return {states::classical_correlated(), std::nullopt};
        }
        if (type == "werner") {
            r.only_keys(spec, path, {"type", "p"});
            require_qubit_cutoff(r, at("type"), type, cutoff);
            const double p = r.number(require("p"), at("p"));
            if (p < 0.0 || p > 1.0) r.fail(at("p"), "Werner weight must lie in [0, 1]");
            return {states::werner(p), std::nullopt};
        }
        // product
        r.only_keys(spec, path, {"type", "a", "b"});
        const BuiltState a = build_state(r, require("a"), at("a"), cutoff, false);
        const BuiltState b = build_state(r, require("b"), at("b"), cutoff, false);
        return {DensityMatrix::unchecked(joint_space, tensor(a.rho.matrix(), b.rho.matrix())), std::nullopt};
    } catch (const ScenarioError &) {
        throw;
    } catch (const Error &e) {
        r.fail(path, e.what());
    }
}

inline protocol::DeviceMode read_device(const Reader &r, const Json &doc, const std::string &label,
                                        std::size_t cutoff) {
    static const Json empty = Json::object();
    const Json &dev = doc.contains("device") ? r.object(doc["device"], "device") : empty;
    auto get = [&](const char *key) -> const Json * { return dev.contains(key) ? &dev[key] : nullptr; };
    auto target = [&]() -> std::size_t {
        const Json *t = get("target_mode");
        if (!t) return gates::kDefaultCpsMode;
        const auto v = r.unsigned_integer(*t, "device.target_mode");
        if (v > 1) r.fail("device.target_mode", "target mode must be 0 or 1");
        return v;
    };

    if (label == "ideal") {
        r.only_keys(dev, "device", {});
        return protocol::Ideal{};
    }
    if (cutoff > kMaxDenseCutoff) {
        r.fail("device_mode", "device '" + label + "' keeps dense two-mode operators; cutoff must be <= " +
                                  std::to_string(kMaxDenseCutoff));
    }
    if (label == "physical") {
        r.only_keys(dev, "device", {"target_mode"});
        return protocol::PhysicalGates{target()};
    }
    if (label == "hamiltonian:cavity" || label == "hamiltonian:ion") {
        const bool cavity = label == "hamiltonian:cavity";
        if (cavity) {
            r.only_keys(dev, "device", {"target_mode", "xi", "kappa", "rabi", "detuning", "mixing_time", "phase_time"});
        } else {
            r.only_keys(dev, "device", {"target_mode", "xi", "omega", "mixing_time", "phase_time"});
        }
        protocol::HamiltonianDevice h;
        h.platform = cavity ? protocol::Platform::CavityQed : protocol::Platform::TrappedIon;
        h.target_mode = target();
        if (const Json *x = get("xi")) h.xi = r.positive(*x, "device.xi");
        if (cavity) {
            const bool has_kappa = get("kappa") != nullptr;
            const bool has_pair = get("rabi") != nullptr || get("detuning") != nullptr;
            if (has_kappa && has_pair) {
                r.fail("device.kappa", "give either kappa or rabi/detuning, not both");
            }
            if (has_kappa) h.phase_coupling = r.positive(*get("kappa"), "device.kappa");
            if (has_pair) {
                if (!get("rabi") || !get("detuning")) r.fail("device", "rabi and detuning must be given together");
                const double k = dynamics::cavity_kappa(r.number(*get("rabi"), "device.rabi"),
                                                        r.number(*get("detuning"), "device.detuning"));
                if (!(k > 0.0)) r.fail("device.rabi", "rabi / detuning must be > 0");
                h.phase_coupling = k;
            }
        } else if (const Json *o = get("omega")) {
            h.phase_coupling = r.positive(*o, "device.omega");
        }
        if (const Json *t = get("mixing_time")) h.mixing_time = r.positive(*t, "device.mixing_time");
        if (const Json *t = get("phase_time")) h.phase_time = r.positive(*t, "device.phase_time");
        return h;
    }
    r.fail("device_mode",
           "unknown device mode '" + label + "' (expected ideal, physical, hamiltonian:cavity or hamiltonian:ion)");
}

}  // namespace detail

/// Parse and validate a scenario document. Defaults: ideal device, 8
/// phases, exact probabilities, seed 0.
inline Scenario parse_scenario(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error &e) {
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n')) + 1;
        throw ScenarioError("", line, std::string("malformed JSON: ") + e.what());
    }
    const detail::LineIndex lines(text);
    const detail::Reader r(lines);
    r.object(doc, "");
    r.only_keys(doc, "", {"name", "description", "cutoff", "device_mode", "device", "task", "state_a", "state_b",
                          "state_joint", "phases", "shots", "seed", "output", "detectors", "expected"});

    Scenario s;
    auto require = [&](const char *key) -> const Json & {
        if (!doc.contains(key)) r.fail("", std::string("missing required field '") + key + "'");
        return doc[key];
    };
    s.name = r.string(require("name"), "name");
    if (s.name.empty()) r.fail("name", "name must not be empty");
    if (doc.contains("description")) s.description = r.string(doc["description"], "description");

    s.cutoff = r.unsigned_integer(require("cutoff"), "cutoff");
    if (s.cutoff < 2) r.fail("cutoff", "cutoff must be >= 2");

    const std::string task = r.string(require("task"), "task");
    const auto t = task_from_string(task);
    if (!t) {
        r.fail("task", "unknown task '" + task +
                           "' (expected overlap, fidelity, purity, linear_entropy, hs_distance, witness or "
                           "repeat_check)");
    }
    s.task = *t;

    if (doc.contains("device_mode")) s.device_label = r.string(doc["device_mode"], "device_mode");
    s.mode = detail::read_device(r, doc, s.device_label, s.cutoff);

    if (doc.contains("phases")) {
        s.phases = r.unsigned_integer(doc["phases"], "phases");
        if (s.phases < 3) r.fail("phases", "phase grid needs at least 3 points");
    }
    if (doc.contains("shots")) {
        const Json &j = doc["shots"];
        if (j.is_string()) {
            if (j.get<std::string>() != "exact") r.fail("shots", "expected a positive integer or \"exact\"");
        } else {
            const auto n = r.unsigned_integer(j, "shots");
            if (n < 1) r.fail("shots", "shots must be >= 1");
            s.shots = n;
        }
    }
    if (doc.contains("seed")) s.seed = r.unsigned_integer(doc["seed"], "seed");
    if (doc.contains("output")) s.output = r.string(doc["output"], "output");
    if (doc.contains("detectors")) {
        const Json &d = r.object(doc["detectors"], "detectors");
        r.only_keys(d, "detectors", {"up", "down"});
        if (d.contains("up")) s.detectors[0] = r.string(d["up"], "detectors.up");
        if (d.contains("down")) s.detectors[1] = r.string(d["down"], "detectors.down");
        if (s.detectors[0].empty() || s.detectors[1].empty() || s.detectors[0] == s.detectors[1]) {
            r.fail("detectors", "detector names must be non-empty and distinct");
        }
    }

    // Arity.
    const bool has_a = doc.contains("state_a"), has_b = doc.contains("state_b"), has_j = doc.contains("state_joint");
    const Arity ar = arity(s.task);
    if (ar == Arity::Joint) {
        if (has_a || has_b) {
            r.fail(has_a ? "state_a" : "state_b", "arity mismatch: task '" + task + "' takes state_joint only");
        }
        if (!has_j) r.fail("", "arity mismatch: task '" + task + "' needs state_joint");
    } else {
        if (has_j) r.fail("state_joint", "arity mismatch: task '" + task + "' takes " +
                                             (ar == Arity::Pair ? "state_a and state_b" : "state_a only"));
        if (!has_a) r.fail("", "arity mismatch: task '" + task + "' needs state_a");
        if (ar == Arity::Pair && !has_b) r.fail("", "arity mismatch: task '" + task + "' needs state_b");
        if (ar == Arity::Single && has_b) r.fail("state_b", "arity mismatch: task '" + task + "' takes state_a only");
    }

    if (has_j) s.state_joint = detail::build_state(r, doc["state_joint"], "state_joint", s.cutoff, true).rho;
    if (has_a) s.state_a = detail::build_state(r, doc["state_a"], "state_a", s.cutoff, false).rho;
    if (has_b) {
        auto b = detail::build_state(r, doc["state_b"], "state_b", s.cutoff, false);
        if (s.task == Task::Fidelity) {
            if (!b.vector) r.fail("state_b.type", "fidelity needs a pure state_b (fock, coherent or pure)");
            s.pure_b = *b.vector;
        }
        s.state_b = std::move(b.rho);
    }

    if (doc.contains("expected")) {
        const Json &e = r.object(doc["expected"], "expected");
        r.only_keys(e, "expected", {"device_value", "oracle_value", "verdict", "tolerance"});
        if (e.contains("device_value")) s.expected.device_value = r.number(e["device_value"], "expected.device_value");
        if (e.contains("oracle_value")) s.expected.oracle_value = r.number(e["oracle_value"], "expected.oracle_value");
        if (e.contains("tolerance")) s.expected.tolerance = r.positive(e["tolerance"], "expected.tolerance");
        if (e.contains("verdict")) {
            s.expected.verdict = r.string(e["verdict"], "expected.verdict");
            if (*s.expected.verdict != "entangled" && *s.expected.verdict != "inconclusive") {
                r.fail("expected.verdict", "verdict must be \"entangled\" or \"inconclusive\"");
            }
        }
    }

    // The composed gates equal the controlled swap only below D photons in
    // total; flag inputs with weight outside that sector.
    if (!std::holds_alternative<protocol::Ideal>(s.mode)) {
        std::vector<ModeState> inputs;
        if (s.state_joint) inputs.push_back(ModeState::joint(*s.state_joint));
        if (s.state_a && s.state_b) inputs.push_back(ModeState::product(*s.state_a, *s.state_b));
        if (s.state_a && s.task != Task::Overlap && s.task != Task::Fidelity && s.task != Task::RepeatCheck) {
            inputs.push_back(ModeState::product(*s.state_a, *s.state_a));
        }
        if (s.state_b && s.task == Task::HsDistance) inputs.push_back(ModeState::product(*s.state_b, *s.state_b));
        double worst = 0.0;
        for (const ModeState &m : inputs) worst = std::max(worst, out_of_safe_sector_weight(m));
        if (worst > 1e-12) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3g", worst);
            s.warnings.push_back(std::string("input has weight ") + buf + " on " + std::to_string(s.cutoff) +
                                 " or more photons in total; the '" + s.device_label +
                                 "' device is not an exact controlled swap there");
        }
    }
    return s;
}

inline std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Scenario load_scenario(const std::filesystem::path &path) { return parse_scenario(read_text_file(path)); }

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct ResultRecord {
    std::string scenario;
    std::string task;
    std::string device_mode;
    std::size_t cutoff = 0;
    double device_value = 0.0;
    double oracle_value = 0.0;
    double abs_error = 0.0;
    std::optional<double> std_error;
    std::optional<std::uint64_t> shots;  // per phase; empty = exact
    std::vector<observables::PhaseRow> phases;
    std::optional<std::string> verdict;
    std::uint64_t seed = 0;
    std::array<std::string, 2> detectors{"up", "down"};
    std::string rng = kRngAlgorithm;
    std::optional<std::string> timestamp;

    friend bool operator==(const ResultRecord &a, const ResultRecord &b) {
        auto rows_equal = [](const observables::PhaseRow &x, const observables::PhaseRow &y) {
            return x.phase == y.phase && x.p_up == y.p_up && x.p_down == y.p_down && x.count_up == y.count_up &&
                   x.count_down == y.count_down;
        };
        if (a.phases.size() != b.phases.size()) return false;
        for (std::size_t k = 0; k < a.phases.size(); ++k) {
            if (!rows_equal(a.phases[k], b.phases[k])) return false;
        }
        return a.scenario == b.scenario && a.task == b.task && a.device_mode == b.device_mode &&
               a.cutoff == b.cutoff && a.device_value == b.device_value && a.oracle_value == b.oracle_value &&
               a.abs_error == b.abs_error && a.std_error == b.std_error && a.shots == b.shots &&
               a.verdict == b.verdict && a.seed == b.seed && a.detectors == b.detectors && a.rng == b.rng && a.timestamp == b.timestamp;
    }
};

/// Execute the scenario's pipeline.
inline ResultRecord run_scenario(const Scenario &s, std::optional<std::string> timestamp = std::nullopt) {
    observables::Settings settings{s.mode, s.phases, s.shots, s.seed};
    observables::ObservableReport rep;
    try {
        switch (s.task) {
            case Task::Overlap:
                rep = observables::overlap(*s.state_a, *s.state_b, settings);
                break;
            case Task::Fidelity:
                rep = observables::fidelity_with_pure(*s.state_a, *s.pure_b, settings);
                break;
            case Task::Purity:
                rep = observables::purity(*s.state_a, settings);
                break;
            case Task::LinearEntropy:
                rep = observables::linear_entropy(*s.state_a, settings);
                break;
            case Task::HsDistance:
                rep = observables::hs_distance(*s.state_a, *s.state_b, settings);
                break;
            case Task::Witness:
                rep = observables::witness(*s.state_joint, settings);
                break;
            case Task::RepeatCheck:
                rep = observables::repeat_check(*s.state_a, *s.state_b, settings);
                break;
        }
    } catch (const Error &e) {
        throw Error("scenario '" + s.name + "': " + e.what());
    }
    ResultRecord rec;
    rec.scenario = s.name;
    rec.task = to_string(s.task);
    rec.device_mode = s.device_label;
    rec.cutoff = s.cutoff;
    rec.device_value = rep.device_value;
    rec.oracle_value = rep.oracle_value;
    rec.abs_error = rep.abs_error;
    rec.std_error = rep.std_error;
    rec.shots = rep.shots;
    rec.phases = std::move(rep.table);
    rec.verdict = rep.verdict;
    rec.seed = s.seed;
    rec.detectors = s.detectors;
    rec.timestamp = std::move(timestamp);
    return rec;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// %.17g: enough digits for an exact round trip of any double.
inline std::string format_double(double v) {
    if (!std::isfinite(v)) {
        throw Error("cannot serialize non-finite value");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string quoted(const std::string &s) { return Json(s).dump(); }

template <class T, class F>
std::string or_null(const std::optional<T> &v, F &&f) {
    return v ? f(*v) : std::string("null");
}

}  // namespace detail

/// One JSON object with a fixed key order.
inline std::string to_json(const ResultRecord &r) {
    using detail::or_null;
    using detail::quoted;
    auto u64 = [](std::uint64_t v) { return std::to_string(v); };
    std::string o = "{\n";
    o += "  \"scenario\": " + quoted(r.scenario) + ",\n";
    o += "  \"task\": " + quoted(r.task) + ",\n";
    o += "  \"device_mode\": " + quoted(r.device_mode) + ",\n";
    o += "  \"cutoff\": " + std::to_string(r.cutoff) + ",\n";
    o += "  \"device_value\": " + format_double(r.device_value) + ",\n";
    o += "  \"oracle_value\": " + format_double(r.oracle_value) + ",\n";
    o += "  \"abs_error\": " + format_double(r.abs_error) + ",\n";
    o += "  \"std_error\": " + or_null(r.std_error, format_double) + ",\n";
    o += "  \"shots\": " + (r.shots ? u64(*r.shots) : std::string("\"exact\"")) + ",\n";
    o += "  \"phases\": [";
    for (std::size_t k = 0; k < r.phases.size(); ++k) {
        const auto &row = r.phases[k];
        o += k == 0 ? "\n" : ",\n";
        o += "    {\"phase\": " + format_double(row.phase) + ", \"p_up\": " + format_double(row.p_up) +
             ", \"p_down\": " + format_double(row.p_down) + ", \"count_up\": " + or_null(row.count_up, u64) +
             ", \"count_down\": " + or_null(row.count_down, u64) + "}";
    }
    o += r.phases.empty() ? "],\n" : "\n  ],\n";
    o += "  \"verdict\": " + or_null(r.verdict, quoted) + ",\n";
    o += "  \"seed\": " + u64(r.seed) + ",\n";
    o += "  \"detectors\": {\"up\": " + quoted(r.detectors[0]) + ", \"down\": " + quoted(r.detectors[1]) + "},\n";
    o += "  \"rng\": " + quoted(r.rng) + ",\n";
    o += "  \"timestamp\": " + or_null(r.timestamp, quoted) + "\n";
    o += "}\n";
    return o;
}

/// Per-phase table; the remaining fields go to the summary sidecar.
inline std::string to_csv(const ResultRecord &r) {
    std::string o = "phase,p_up,p_down,count_up,count_down\n";
    for (const auto &row : r.phases) {
        o += format_double(row.phase) + "," + format_double(row.p_up) + "," + format_double(row.p_down) + "," +
             (row.count_up ? std::to_string(*row.count_up) : "") + "," +
             (row.count_down ? std::to_string(*row.count_down) : "") + "\n";
    }
    return o;
}

inline ResultRecord record_from_json(std::string_view text) {
    const Json j = Json::parse(text);
    auto opt_u64 = [](const Json &v) -> std::optional<std::uint64_t> {
        if (v.is_null()) return std::nullopt;
        return v.get<std::uint64_t>();
    };
    ResultRecord r;
    r.scenario = j.at("scenario").get<std::string>();
    r.task = j.at("task").get<std::string>();
    r.device_mode = j.at("device_mode").get<std::string>();
    r.cutoff = j.at("cutoff").get<std::size_t>();
    r.device_value = j.at("device_value").get<double>();
    r.oracle_value = j.at("oracle_value").get<double>();
    r.abs_error = j.at("abs_error").get<double>();
    if (!j.at("std_error").is_null()) r.std_error = j["std_error"].get<double>();
    if (!j.at("shots").is_string()) r.shots = j["shots"].get<std::uint64_t>();
    for (const Json &row : j.at("phases")) {
        r.phases.push_back({row.at("phase").get<double>(), row.at("p_up").get<double>(),
                            row.at("p_down").get<double>(), opt_u64(row.at("count_up")),
                            opt_u64(row.at("count_down"))});
    }
    if (!j.at("verdict").is_null()) r.verdict = j["verdict"].get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.detectors = {j.at("detectors").at("up").get<std::string>(), j.at("detectors").at("down").get<std::string>()};
    r.rng = j.at("rng").get<std::string>();
    if (!j.at("timestamp").is_null()) r.timestamp = j["timestamp"].get<std::string>();
    return r;
}

enum class Format { Json, Csv };

inline std::string emit(const ResultRecord &r, Format f) { return f == Format::Json ? to_json(r) : to_csv(r); }

inline void write_text_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << content;
    out.close();
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
}

/// "out.csv" -> "out.summary.json".
inline std::filesystem::path summary_path(std::filesystem::path csv_path) {
    return csv_path.replace_extension(".summary.json");
}

/// Write the record; CSV output also writes the JSON summary sidecar.
/// Returns the files written.
inline std::vector<std::filesystem::path> write_record(const ResultRecord &r, Format f,
                                                       const std::filesystem::path &path) {
    write_text_file(path, emit(r, f));
    if (f == Format::Csv) {
        const auto side = summary_path(path);
        write_text_file(side, to_json(r));
        return {path, side};
    }
    return {path};
}

// ---------------------------------------------------------------------------
// Suite checks
// ---------------------------------------------------------------------------

struct Check {
    bool pass = true;
    double oracle_tolerance = 0.0;    // device vs oracle
    double expected_tolerance = 0.0;  // record vs the scenario's expected values
    std::vector<std::string> failures;
};

/// Compare a record with its oracle and with the scenario's expected values.
/// Device and oracle must agree within 1e-9 for exact runs and within five
/// standard errors for sampled ones. Expected values use the scenario's
/// tolerance when given, else the same bound.
inline Check check_expected(const Scenario &s, const ResultRecord &r) {
    Check c;
    c.oracle_tolerance =
        r.std_error ? std::max(kDefaultTolerance, kDefaultShotSigmas * *r.std_error) : kDefaultTolerance;
    c.expected_tolerance = s.expected.tolerance.value_or(c.oracle_tolerance);
    auto fail = [&](std::string msg) {
        c.pass = false;
        c.failures.push_back(std::move(msg));
    };
    if (!(r.abs_error <= c.oracle_tolerance)) {
        fail("device differs from oracle by " + format_double(r.abs_error));
    }
    if (s.expected.device_value && !(std::abs(r.device_value - *s.expected.device_value) <= c.expected_tolerance)) {
        fail("device_value " + format_double(r.device_value) + " != expected " +
             format_double(*s.expected.device_value));
    }
    if (s.expected.oracle_value && !(std::abs(r.oracle_value - *s.expected.oracle_value) <= c.expected_tolerance)) {
        fail("oracle_value " + format_double(r.oracle_value) + " != expected " +
             format_double(*s.expected.oracle_value));
    }
    if (s.expected.verdict && r.verdict != s.expected.verdict) {
        fail("verdict " + r.verdict.value_or("none") + " != expected " + *s.expected.verdict);
    }
    return c;
}

}  // namespace swapmeter::scenario

#endif  // SWAPMETER_SCENARIO_HPP
