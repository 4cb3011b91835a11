#pragma once

// Declarative scenario files and structured report emission. A scenario file
// is a JSON object with a kind tag, a seed, a run mode, and kind-specific
// parameters; identical (config, seed) pairs produce byte-identical reports.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "catswap/protocols.hpp"
#include "catswap/report.hpp"
#include "catswap/timing.hpp"

namespace catswap {

using Json = nlohmann::ordered_json;

// Validation failure with the offending field path, e.g. "swap.cats[0].pattern".
struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what) {}
};

struct SwapParams {
    SwapScenario scenario;
};
struct ExchangeParams {
    int n_users = 0;
    std::vector<int> subset;
};
struct GrowParams {
    int n = 0;
};
struct SuperdenseParams {
    int n = 0;
    std::string message;  // empty = exhaustive over all messages
};
struct AmplitudeParams {
    double theta = 0;
};
struct ConferenceParams {
    int users = 0;
    int rounds = 0;
    BasisMode basis = BasisMode::Single;
    bool eavesdrop = false;
    int channel = 0;
};
struct TimingSweepParams {
    SweepGrid grid;
};

struct ScenarioConfig {
    std::string kind;
    std::string name;
    std::uint64_t seed = 0;
    Mode mode = Mode::Exhaustive();
    std::variant<SwapParams, ExchangeParams, GrowParams, SuperdenseParams, AmplitudeParams,
                 ConferenceParams, TimingSweepParams>
        params;
};

namespace detail {

inline const Json& require(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ScenarioError(path.empty() ? key : path + "." + key, "missing field");
    }
    return j.at(key);
}

inline std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

inline int get_int(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = require(j, key, path);
    if (!v.is_number_integer()) throw ScenarioError(join_path(path, key), "expected integer");
    return v.get<int>();
}

inline double get_number(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = require(j, key, path);
    if (!v.is_number()) throw ScenarioError(join_path(path, key), "expected number");
    return v.get<double>();
}

inline std::string get_string(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = require(j, key, path);
    if (!v.is_string()) throw ScenarioError(join_path(path, key), "expected string");
    return v.get<std::string>();
}

inline std::vector<int> get_int_list(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ScenarioError(path, "expected array of integers");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) throw ScenarioError(path, "expected array of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

inline std::vector<double> get_number_list(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ScenarioError(path, "expected array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ScenarioError(path, "expected array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline CatLabel parse_label(const Json& j, const std::string& path) {
    CatLabel label;
    label.qubits = get_int_list(require(j, "qubits", path), join_path(path, "qubits"));
    label.pattern = get_string(j, "pattern", path);
    label.sign = get_int(j, "sign", path);
    try {
        validate_label(label);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(path, e.what());
    }
    return label;
}

inline Json label_json(const CatLabel& label) {
    Json j;
    j["qubits"] = label.qubits;
    j["pattern"] = label.pattern;
    j["sign"] = label.sign;
    return j;
}

inline Json gate_json(const Gate& g) {
    Json j;
    switch (g.kind) {
        case GateKind::H: j["gate"] = "H"; break;
        case GateKind::X: j["gate"] = "X"; break;
        case GateKind::Z: j["gate"] = "Z"; break;
        case GateKind::Cnot: j["gate"] = "CNOT"; break;
    }
    j["qubits"] = g.kind == GateKind::Cnot ? std::vector<int>{g.qubit, g.target}
                                           : std::vector<int>{g.qubit};
    return j;
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const Json& j) {
    ScenarioConfig cfg;
    cfg.kind = detail::get_string(j, "scenario", "");
    if (j.contains("name")) cfg.name = detail::get_string(j, "name", "");
    if (j.contains("seed")) {
        const Json& s = j.at("seed");
        if (!s.is_number_integer() && !s.is_number_unsigned()) {
            throw ScenarioError("seed", "expected integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }
    if (j.contains("mode")) {
        const Json& m = j.at("mode");
        const std::string kind = detail::get_string(m, "kind", "mode");
        if (kind == "exhaustive") {
            cfg.mode = Mode::Exhaustive();
        } else if (kind == "sampled") {
            const int trials = detail::get_int(m, "trials", "mode");
            if (trials < 1) throw ScenarioError("mode.trials", "must be >= 1");
            cfg.mode = Mode::Sampled(trials);
        } else {
            throw ScenarioError("mode.kind", "must be 'exhaustive' or 'sampled'");
        }
    }

    if (cfg.kind == "swap") {
        const Json& p = detail::require(j, "swap", "");
        SwapParams params;
        const Json& cats = detail::require(p, "cats", "swap");
        if (!cats.is_array() || cats.empty()) throw ScenarioError("swap.cats", "expected array");
        for (std::size_t i = 0; i < cats.size(); ++i) {
            params.scenario.cats.push_back(
                detail::parse_label(cats[i], "swap.cats[" + std::to_string(i) + "]"));
        }
        const Json& measured = detail::require(p, "measured", "swap");
        if (!measured.is_array()) throw ScenarioError("swap.measured", "expected array");
        for (std::size_t i = 0; i < measured.size(); ++i) {
            params.scenario.measured.push_back(detail::get_int_list(
                measured[i], "swap.measured[" + std::to_string(i) + "]"));
        }
        if (p.contains("terminal")) {
            if (!p.at("terminal").is_boolean()) {
                throw ScenarioError("swap.terminal", "expected boolean");
            }
            params.scenario.terminal = p.at("terminal").get<bool>();
        }
        try {
            validate_scenario(params.scenario);
        } catch (const std::invalid_argument& e) {
            throw ScenarioError("swap", e.what());
        }
        cfg.params = std::move(params);
    } else if (cfg.kind == "exchange") {
        const Json& p = detail::require(j, "exchange", "");
        ExchangeParams params;
        params.n_users = detail::get_int(p, "users", "exchange");
        params.subset = detail::get_int_list(detail::require(p, "subset", "exchange"),
                                             "exchange.subset");
        if (params.n_users < 2 || params.n_users > 8) {
            throw ScenarioError("exchange.users", "must be in [2, 8]");
        }
        if (params.subset.size() < 2) throw ScenarioError("exchange.subset", "needs >= 2 users");
        for (int u : params.subset) {
            if (u < 0 || u >= params.n_users) {
                throw ScenarioError("exchange.subset", "user id out of range");
            }
        }
        cfg.params = std::move(params);
    } else if (cfg.kind == "grow") {
        const Json& p = detail::require(j, "grow", "");
        GrowParams params;
        params.n = detail::get_int(p, "n", "grow");
        if (params.n < 2 || params.n > 10) throw ScenarioError("grow.n", "must be in [2, 10]");
        cfg.params = params;
    } else if (cfg.kind == "superdense") {
        const Json& p = detail::require(j, "superdense", "");
        SuperdenseParams params;
        params.n = detail::get_int(p, "n", "superdense");
        if (params.n < 1 || params.n > 10) {
            throw ScenarioError("superdense.n", "must be in [1, 10]");
        }
        if (p.contains("message")) {
            params.message = detail::get_string(p, "message", "superdense");
            if (static_cast<int>(params.message.size()) != params.n + 1) {
                throw ScenarioError("superdense.message", "must have n+1 bits");
            }
            for (char c : params.message) {
                if (c != '0' && c != '1') {
                    throw ScenarioError("superdense.message", "must be a bitstring");
                }
            }
        }
        cfg.params = std::move(params);
    } else if (cfg.kind == "amplitude") {
        const Json& p = detail::require(j, "amplitude", "");
        AmplitudeParams params;
        params.theta = detail::get_number(p, "theta", "amplitude");
        const double half_pi = std::asin(1.0);
        if (!(params.theta > 0) || !(params.theta < half_pi)) {
            throw ScenarioError("amplitude.theta", "must lie strictly inside (0, pi/2)");
        }
        cfg.params = params;
    } else if (cfg.kind == "conference") {
        const Json& p = detail::require(j, "conference", "");
        ConferenceParams params;
        params.users = detail::get_int(p, "users", "conference");
        params.rounds = detail::get_int(p, "rounds", "conference");
        if (params.users < 2 || params.users > 12) {
            throw ScenarioError("conference.users", "must be in [2, 12]");
        }
        if (params.rounds < 1) throw ScenarioError("conference.rounds", "must be >= 1");
        const std::string basis = detail::get_string(p, "basis", "conference");
        if (basis == "single") {
            params.basis = BasisMode::Single;
        } else if (basis == "dual") {
            params.basis = BasisMode::Dual;
        } else {
            throw ScenarioError("conference.basis", "must be 'single' or 'dual'");
        }
        if (p.contains("eavesdropper")) {
            const Json& e = p.at("eavesdropper");
            if (e.is_string() && e.get<std::string>() == "none") {
                params.eavesdrop = false;
            } else if (e.is_object()) {
                const std::string kind =
                    detail::get_string(e, "kind", "conference.eavesdropper");
                if (kind != "intercept_resend") {
                    throw ScenarioError("conference.eavesdropper.kind",
                                        "only 'intercept_resend' is supported");
                }
                params.eavesdrop = true;
                params.channel = detail::get_int(e, "channel", "conference.eavesdropper");
                if (params.channel < 0 || params.channel >= params.users) {
                    throw ScenarioError("conference.eavesdropper.channel", "out of range");
                }
            } else {
                throw ScenarioError("conference.eavesdropper",
                                    "expected 'none' or an object");
            }
        }
        cfg.params = params;
    } else if (cfg.kind == "timing-sweep") {
        const Json& p = detail::require(j, "timing", "");
        TimingSweepParams params;
        params.grid.length = detail::get_number_list(detail::require(p, "L", "timing"),
                                                     "timing.L");
        params.grid.particle_speed =
            detail::get_number_list(detail::require(p, "v", "timing"), "timing.v");
        params.grid.classical_speed =
            detail::get_number_list(detail::require(p, "c", "timing"), "timing.c");
        params.grid.measure_time =
            detail::get_number_list(detail::require(p, "t_m", "timing"), "timing.t_m");
        params.grid.levels = detail::get_int_list(detail::require(p, "levels", "timing"),
                                                  "timing.levels");
        if (p.contains("include_classical")) {
            if (!p.at("include_classical").is_boolean()) {
                throw ScenarioError("timing.include_classical", "expected boolean");
            }
            params.grid.include_classical = p.at("include_classical").get<bool>();
        }
        for (double L : params.grid.length) {
            if (!(L > 0)) throw ScenarioError("timing.L", "lengths must be positive");
        }
        for (int levels : params.grid.levels) {
            if (levels < 1) throw ScenarioError("timing.levels", "levels must be >= 1");
        }
        cfg.params = std::move(params);
    } else {
        throw ScenarioError("scenario",
                            "unknown kind '" + cfg.kind +
                                "' (expected swap | exchange | grow | superdense | amplitude "
                                "| conference | timing-sweep)");
    }
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("scenario file " + path + " is not valid JSON: " + e.what());
    }
    return parse_scenario(j);
}

inline Json serialize_scenario(const ScenarioConfig& cfg) {
    Json j;
    j["scenario"] = cfg.kind;
    if (!cfg.name.empty()) j["name"] = cfg.name;
    j["seed"] = cfg.seed;
    Json mode;
    mode["kind"] = cfg.mode.exhaustive ? "exhaustive" : "sampled";
    if (!cfg.mode.exhaustive) mode["trials"] = cfg.mode.trials;
    j["mode"] = mode;

    if (const auto* p = std::get_if<SwapParams>(&cfg.params)) {
        Json swap;
        swap["cats"] = Json::array();
        for (const auto& cat : p->scenario.cats) swap["cats"].push_back(detail::label_json(cat));
        swap["measured"] = p->scenario.measured;
        if (p->scenario.terminal) swap["terminal"] = true;
        j["swap"] = std::move(swap);
    } else if (const auto* p = std::get_if<ExchangeParams>(&cfg.params)) {
        j["exchange"] = Json{{"users", p->n_users}, {"subset", p->subset}};
    } else if (const auto* p = std::get_if<GrowParams>(&cfg.params)) {
        j["grow"] = Json{{"n", p->n}};
    } else if (const auto* p = std::get_if<SuperdenseParams>(&cfg.params)) {
        Json sd;
        sd["n"] = p->n;
        if (!p->message.empty()) sd["message"] = p->message;
        j["superdense"] = std::move(sd);
    } else if (const auto* p = std::get_if<AmplitudeParams>(&cfg.params)) {
        j["amplitude"] = Json{{"theta", p->theta}};
    } else if (const auto* p = std::get_if<ConferenceParams>(&cfg.params)) {
        Json conf;
        conf["users"] = p->users;
        conf["rounds"] = p->rounds;
        conf["basis"] = p->basis == BasisMode::Single ? "single" : "dual";
        if (p->eavesdrop) {
            conf["eavesdropper"] = Json{{"kind", "intercept_resend"}, {"channel", p->channel}};
        } else {
            conf["eavesdropper"] = "none";
        }
        j["conference"] = std::move(conf);
    } else if (const auto* p = std::get_if<TimingSweepParams>(&cfg.params)) {
        Json timing;
        timing["L"] = p->grid.length;
        timing["v"] = p->grid.particle_speed;
        timing["c"] = p->grid.classical_speed;
        timing["t_m"] = p->grid.measure_time;
        timing["levels"] = p->grid.levels;
        timing["include_classical"] = p->grid.include_classical;
        j["timing"] = std::move(timing);
    }
    return j;
}

// Plain swap scenarios get a report of their own: the full outcome
// distribution with the symbolic prediction cross-checked entry by entry.
inline ProtocolReport swap_report(const SwapScenario& sc, const Mode& mode,
                                  std::uint64_t seed) {
    ProtocolReport report;
    report.scenario = "swap";
    report.seed = seed;
    report.mode = mode.str();

    const auto entries = swap_simulate<double>(sc);
    const int n_measured_cats = static_cast<int>(measured_cat_indices(sc).size());
    const double uniform = std::ldexp(1.0, -n_measured_cats);

    double total = 0;
    int compatible = 0;
    bool residuals_ok = true, prediction_agrees = true, uniform_ok = true;
    std::vector<double> probs;
    for (const auto& entry : entries) {
        total += entry.probability;
        probs.push_back(entry.probability);
        const auto predicted = swap_predict(sc, entry.outcome);
        if (entry.probability > 1e-10) {
            ++compatible;
            if (!entry.residual) residuals_ok = false;
            if (std::abs(entry.probability - uniform) > 1e-10) uniform_ok = false;
            if (!predicted || !entry.residual || predicted->residual != *entry.residual ||
                std::abs(predicted->probability - entry.probability) > 1e-10) {
                prediction_agrees = false;
            }
        } else if (predicted) {
            prediction_agrees = false;
        }
        OutcomeRecord rec;
        rec.outcome = canonicalized(entry.outcome);
        rec.probability = entry.probability;
        rec.residual = entry.residual;
        report.outcomes.push_back(std::move(rec));
    }

    report.checks.push_back(check_close("outcome probabilities sum to 1", 1.0, total, 1e-10));
    report.checks.push_back(check_close(
        "compatible outcome count is 2^" + std::to_string(n_measured_cats),
        std::ldexp(1.0, n_measured_cats), double(compatible), 0.0));
    report.checks.push_back(check_true("compatible outcomes share probability 2^-" +
                                           std::to_string(n_measured_cats),
                                       uniform_ok));
    report.checks.push_back(check_true("every nonzero residual is a cat state", residuals_ok));
    report.checks.push_back(check_true("symbolic prediction matches simulation",
                                       prediction_agrees));

    if (!mode.exhaustive) {
        Rng rng = substream(seed, 0);
        std::vector<int> counts(probs.size(), 0);
        for (int t = 0; t < mode.trials; ++t) counts[detail::sample_index(probs, rng)]++;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            report.outcomes[i].note = "count=" + std::to_string(counts[i]) + "/" +
                                      std::to_string(mode.trials);
        }
    }
    return report;
}

inline ProtocolReport run_scenario(const ScenarioConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ProtocolReport report;
    if (const auto* p = std::get_if<SwapParams>(&cfg.params)) {
        report = swap_report(p->scenario, cfg.mode, cfg.seed);
    } else if (const auto* p = std::get_if<ExchangeParams>(&cfg.params)) {
        report = exchange_entangle(make_star_topology(p->n_users), p->subset, cfg.mode,
                                   cfg.seed);
    } else if (const auto* p = std::get_if<GrowParams>(&cfg.params)) {
        report = grow_cat(p->n, cfg.mode, cfg.seed);
    } else if (const auto* p = std::get_if<SuperdenseParams>(&cfg.params)) {
        report = superdense_roundtrip(p->n, p->message, default_superdense_assignment(p->n));
    } else if (const auto* p = std::get_if<AmplitudeParams>(&cfg.params)) {
        report = amplitude_swap_correct(p->theta, cfg.mode, cfg.seed);
    } else if (const auto* p = std::get_if<ConferenceParams>(&cfg.params)) {
        report = conference_key(p->users, p->rounds, p->basis, cfg.seed,
                                p->eavesdrop ? Eavesdropper::InterceptResend(p->channel)
                                             : Eavesdropper::None());
    } else if (const auto* p = std::get_if<TimingSweepParams>(&cfg.params)) {
        report.scenario = "timing-sweep";
        report.seed = cfg.seed;
        report.mode = "exhaustive";
        report.sweep = timing_sweep(p->grid);
        bool level1_consistent = true;
        for (const auto& row : report.sweep) {
            if (row.levels != 1) continue;
            const LinkModel m{row.length, row.particle_speed, row.classical_speed,
                              row.measure_time};
            if (relay_time(m, p->grid.include_classical).t2 != row.t2) {
                level1_consistent = false;
            }
        }
        report.checks.push_back(
            check_true("level-1 rows equal the single-relay formula", level1_consistent));
    }
    if (!cfg.name.empty()) report.scenario += " (" + cfg.name + ")";
    report.seed = cfg.seed;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

enum class ReportFormat { Json, Table };

inline std::string emit_report(const ProtocolReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        Json j;
        j["version"] = kVersion;
        j["scenario"] = report.scenario;
        j["seed"] = report.seed;
        j["mode"] = report.mode;
        j["outcomes"] = Json::array();
        for (const auto& rec : report.outcomes) {
            Json o;
            if (rec.outcome) o["outcome"] = detail::label_json(*rec.outcome);
            o["probability"] = format_probability(rec.probability);
            if (rec.residual) o["residual"] = detail::label_json(*rec.residual);
            if (!rec.note.empty()) o["note"] = rec.note;
            j["outcomes"].push_back(std::move(o));
        }
        j["checks"] = Json::array();
        for (const auto& c : report.checks) {
            j["checks"].push_back(Json{{"name", c.name},
                                       {"expected", c.expected},
                                       {"measured", c.measured},
                                       {"pass", c.pass}});
        }
        if (!report.sweep.empty()) {
            j["sweep"] = Json::array();
            for (const auto& row : report.sweep) {
                j["sweep"].push_back(Json{{"L", row.length},
                                          {"v", row.particle_speed},
                                          {"c", row.classical_speed},
                                          {"t_m", row.measure_time},
                                          {"levels", row.levels},
                                          {"t1", format_value(row.t1)},
                                          {"t2", format_value(row.t2)},
                                          {"advantage", row.advantageous}});
            }
        }
        if (!report.circuits.empty()) {
            j["circuits"] = Json::array();
            for (const auto& named : report.circuits) {
                Json c;
                c["name"] = named.name;
                c["num_qubits"] = named.circuit.num_qubits;
                c["gates"] = Json::array();
                for (const Gate& g : named.circuit.gates) c["gates"].push_back(detail::gate_json(g));
                j["circuits"].push_back(std::move(c));
            }
        }
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "scenario: " << report.scenario << "\n";
    out << "seed: " << report.seed << "   mode: " << report.mode << "\n";
    if (!report.outcomes.empty()) {
        out << "outcomes:\n";
        for (const auto& rec : report.outcomes) {
            out << "  ";
            if (rec.outcome) out << to_string(*rec.outcome) << "  ";
            out << "p=" << format_probability(rec.probability);
            if (rec.residual) out << "  -> " << to_string(*rec.residual);
            if (!rec.note.empty()) out << "  [" << rec.note << "]";
            out << "\n";
        }
    }
    if (!report.sweep.empty()) {
        out << "sweep (L, v, c, t_m, levels, t1, t2, advantage):\n";
        for (const auto& row : report.sweep) {
            out << "  " << format_value(row.length) << ", " << format_value(row.particle_speed)
                << ", " << format_value(row.classical_speed) << ", "
                << format_value(row.measure_time) << ", " << row.levels << ", "
                << format_value(row.t1) << ", " << format_value(row.t2) << ", "
                << (row.advantageous ? "yes" : "no") << "\n";
        }
    }
    if (!report.circuits.empty()) {
        out << "circuits:\n";
        for (const auto& named : report.circuits) {
            out << "  " << named.name << ":";
            for (const Gate& g : named.circuit.gates) {
                switch (g.kind) {
                    case GateKind::H: out << " H(" << g.qubit << ")"; break;
                    case GateKind::X: out << " X(" << g.qubit << ")"; break;
                    case GateKind::Z: out << " Z(" << g.qubit << ")"; break;
                    case GateKind::Cnot:
                        out << " CNOT(" << g.qubit << "," << g.target << ")";
                        break;
                }
            }
            out << "\n";
        }
    }
    if (!report.checks.empty()) {
        out << "checks:\n";
        for (const auto& c : report.checks) {
            out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << " (expected "
                << c.expected << ", measured " << c.measured << ")\n";
        }
    }
    out << "result: " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace catswap
