#pragma once

// Structured protocol reports: outcome records, expected-vs-measured checks
// and timing sweep rows. Serialization lives in scenario.hpp.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "catswap/catalg.hpp"
#include "catswap/circuits.hpp"
#include "catswap/timing.hpp"

namespace catswap {

inline constexpr const char* kVersion = "0.1.0";

// A gate network attached to a report, serialized as {gate, qubits} records
// in application order.
struct NamedCircuit {
    std::string name;
    Circuit circuit;
};

struct CheckResult {
    std::string name;
    std::string expected;
    std::string measured;
    bool pass = false;
};

struct OutcomeRecord {
    std::optional<CatLabel> outcome;
    double probability = 0.0;
    std::optional<CatLabel> residual;
    std::string note;
};

struct ProtocolReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string mode;  // "exhaustive" or "sampled(N)"
    std::vector<OutcomeRecord> outcomes;
    std::vector<CheckResult> checks;
    std::vector<SweepRow> sweep;
    std::vector<NamedCircuit> circuits;
    double wall_seconds = 0.0;  // diagnostic only, never serialized

    bool all_pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

// Fixed-width decimal with 12 significant digits (trailing zeros kept), so
// report bytes are reproducible: 0.125 -> "0.125000000000".
inline std::string format_probability(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.12g", p);
    return buf;
}

inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline CheckResult check_close(std::string name, double expected, double measured, double tol) {
    CheckResult c;
    c.name = std::move(name);
    c.expected = format_value(expected);
    c.measured = format_value(measured);
    c.pass = std::abs(expected - measured) <= tol;
    return c;
}

inline CheckResult check_true(std::string name, bool pass, std::string measured = "") {
    CheckResult c;
    c.name = std::move(name);
    c.expected = "true";
    c.measured = measured.empty() ? (pass ? "true" : "false") : std::move(measured);
    c.pass = pass;
    return c;
}

}  // namespace catswap
