#pragma once

// Closed-form latency model for entanglement distribution between two users
// a distance L apart: direct supply from a midpoint source versus relayed
// supply through Bell-measuring substations, including the classical
// broadcast of the measurement outcome.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace catswap {

struct LinkModel {
    double length = 1.0;        // user separation L
    double particle_speed = 1;  // v; v <= c (equality models photons)
    double classical_speed = 1; // c
    double measure_time = 0.0;  // t_m, one Bell measurement
};

inline void validate_link(const LinkModel& m) {
    if (!(m.length > 0)) throw std::invalid_argument("link length must be positive");
    if (!(m.particle_speed > 0)) throw std::invalid_argument("particle speed must be positive");
    if (!(m.classical_speed > 0)) throw std::invalid_argument("classical speed must be positive");
    if (m.particle_speed > m.classical_speed) {
        throw std::invalid_argument("particle speed cannot exceed the classical signal speed");
    }
    if (m.measure_time < 0) throw std::invalid_argument("measurement time must be >= 0");
}

// Midpoint source, no relays: particles travel L/2 at speed v.
inline double direct_time(const LinkModel& m) {
    validate_link(m);
    return m.length / (2 * m.particle_speed);
}

struct RelayTime {
    double t2 = 0;             // relayed supply time (bare, or with classical term)
    double bare_t2 = 0;        // L/4v + t_m regardless of the flag
    double classical_term = 0; // L/2c when included, else 0
    bool advantageous = false; // t_m < L/4v, evaluated on the bare form
};

// One source pair per half-link and one measuring station at the middle:
// everything arrives at L/4v, then one Bell measurement. The classical term
// is the worst-case broadcast of the outcome from the measuring station to a
// user, L/2c.
inline RelayTime relay_time(const LinkModel& m, bool include_classical = false) {
    validate_link(m);
    RelayTime out;
    const double quarter = m.length / (4 * m.particle_speed);
    out.bare_t2 = quarter + m.measure_time;
    out.classical_term = include_classical ? m.length / (2 * m.classical_speed) : 0.0;
    out.t2 = out.bare_t2 + out.classical_term;
    out.advantageous = m.measure_time < quarter;
    return out;
}

// levels >= 1 substation layers: 2^levels sources at dyadic midpoints and
// 2^levels - 1 measuring stations. All particles arrive at L/(2^(levels+1) v)
// and every Bell measurement runs concurrently, so t_m is paid once.
inline double hierarchical_time(const LinkModel& m, int levels, bool include_classical = false) {
    validate_link(m);
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    if (levels > 52) throw std::invalid_argument("levels out of range");
    const double travel = m.length / (std::pow(2.0, levels + 1) * m.particle_speed);
    const double classical = include_classical ? m.length / (2 * m.classical_speed) : 0.0;
    return travel + m.measure_time + classical;
}

struct SweepRow {
    double length = 0, particle_speed = 0, classical_speed = 0, measure_time = 0;
    int levels = 1;
    double t1 = 0, t2 = 0;
    bool advantageous = false;
};

struct SweepGrid {
    std::vector<double> length;
    std::vector<double> particle_speed;
    std::vector<double> classical_speed;
    std::vector<double> measure_time;
    std::vector<int> levels;
    bool include_classical = false;
};

inline std::vector<SweepRow> timing_sweep(const SweepGrid& grid) {
    std::vector<SweepRow> rows;
    for (double L : grid.length)
        for (double v : grid.particle_speed)
            for (double c : grid.classical_speed)
                for (double tm : grid.measure_time)
                    for (int levels : grid.levels) {
                        const LinkModel m{L, v, c, tm};
                        SweepRow row;
                        row.length = L;
                        row.particle_speed = v;
                        row.classical_speed = c;
                        row.measure_time = tm;
                        row.levels = levels;
                        row.t1 = direct_time(m);
                        row.t2 = hierarchical_time(m, levels, grid.include_classical);
                        row.advantageous = row.t2 < row.t1;
                        rows.push_back(row);
                    }
    return rows;
}

}  // namespace catswap
