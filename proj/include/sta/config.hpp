#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sta/design.hpp"
#include "sta/errors.hpp"
#include "sta/types.hpp"

namespace sta {

enum class Command { design, evolve_bloch, evolve_quantum, sweep_T, stability, mattis };

inline const char* to_string(Command c) {
    switch (c) {
    case Command::design: return "design";
    case Command::evolve_bloch: return "evolve-bloch";
    case Command::evolve_quantum: return "evolve-quantum";
    case Command::sweep_T: return "sweep-T";
    case Command::stability: return "stability";
    case Command::mattis: return "mattis";
    }
    return "?";
}

inline const char* to_string(SchedId s) {
    switch (s) {
    case SchedId::single1: return "single1";
    case SchedId::single2: return "single2";
    case SchedId::ising1: return "ising1";
    case SchedId::ising2: return "ising2";
    case SchedId::rotating: return "rotating";
    case SchedId::linear: return "linear";
    }
    return "?";
}

/** @brief One fully-specified run: command, schedule, physics, grid, and output. */
struct RunConfig {
    std::optional<Command> command;
    SchedId schedule = SchedId::ising1;
    ModelParams params;
    bool h_set = false;
    std::vector<double> T_list{10.0};
    long long steps = 20000;
    long samples = 200;
    PerturbationSpec pert;
    std::optional<std::uint64_t> seed;
    std::vector<int> xi;
    std::string out;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(where + ": invalid number '" + v + "'");
    }
}

inline long long parse_integer(const std::string& v, const std::string& where) {
    double d = parse_number(v, where);
    if (!std::isfinite(d) || d != std::floor(d) || std::abs(d) > 9e15)
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    return static_cast<long long>(d);
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(v);
    while (std::getline(in, cur, ',')) parts.push_back(trim(cur));
    return parts;
}

inline Command parse_command(const std::string& v, const std::string& where) {
    for (Command c : {Command::design, Command::evolve_bloch, Command::evolve_quantum,
                      Command::sweep_T, Command::stability, Command::mattis})
        if (v == to_string(c)) return c;
    throw ConfigError(where + ": unknown command '" + v + "'");
}

inline SchedId parse_schedule(const std::string& v, const std::string& where) {
    for (SchedId s : {SchedId::single1, SchedId::single2, SchedId::ising1, SchedId::ising2,
                      SchedId::rotating, SchedId::linear})
        if (v == to_string(s)) return s;
    throw ConfigError(where + ": unknown schedule '" + v + "'");
}

} // namespace detail

/** @brief Apply one key=value assignment; `where` prefixes diagnostics. */
inline void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value,
                           const std::string& where) {
    using detail::parse_integer;
    using detail::parse_number;
    if (key == "command") {
        cfg.command = detail::parse_command(value, where);
    } else if (key == "schedule") {
        cfg.schedule = detail::parse_schedule(value, where);
    } else if (key == "J") {
        cfg.params.J = parse_number(value, where);
    } else if (key == "h") {
        cfg.params.h = parse_number(value, where);
        cfg.h_set = true;
    } else if (key == "Gamma0") {
        cfg.params.Gamma0 = parse_number(value, where);
    } else if (key == "T") {
        cfg.T_list.clear();
        for (const auto& part : detail::split_list(value))
            cfg.T_list.push_back(parse_number(part, where));
        if (cfg.T_list.empty()) throw ConfigError(where + ": T needs at least one value");
    } else if (key == "N") {
        cfg.params.N = static_cast<long>(parse_integer(value, where));
    } else if (key == "steps") {
        cfg.steps = parse_integer(value, where);
    } else if (key == "samples") {
        cfg.samples = static_cast<long>(parse_integer(value, where));
    } else if (key == "h0") {
        cfg.pert.h0_amp = parse_number(value, where);
    } else if (key == "hp") {
        cfg.pert.hp_amp = parse_number(value, where);
    } else if (key == "omega") {
        cfg.pert.omega = parse_number(value, where);
    } else if (key == "seed") {
        long long s = parse_integer(value, where);
        if (s < 0) throw ConfigError(where + ": seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "xi") {
        cfg.xi.clear();
        for (const auto& part : detail::split_list(value)) {
            long long s = parse_integer(part, where);
            if (s != 1 && s != -1)
                throw ConfigError(where + ": xi entries must be +1 or -1");
            cfg.xi.push_back(static_cast<int>(s));
        }
    } else if (key == "out") {
        if (value.empty()) throw ConfigError(where + ": out needs a file name");
        cfg.out = value;
    } else {
        throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

/** @brief Parse the key=value config format (one pair per line, # comments). */
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got '" +
                              line + "'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        set_config_key(cfg, key, value, "line " + std::to_string(lineno));
    }
    return cfg;
}

/**
 * @brief Check cross-field rules and fill derived defaults (params.T from the
 *        T list, the output file name). Throws ConfigError on violations.
 */
inline void validate_config(RunConfig& cfg) {
    if (!cfg.command) throw ConfigError("command is required");
    const Command cmd = *cfg.command;

    if (cfg.T_list.empty()) throw ConfigError("T needs at least one value");
    for (double T : cfg.T_list)
        if (!(T > 0.0)) throw ConfigError("T must be > 0");
    if (cmd != Command::sweep_T && cfg.T_list.size() != 1)
        throw ConfigError("multiple T values are only valid with command=sweep-T");
    cfg.params.T = cfg.T_list.front();

    if (!(cfg.params.J >= 0.0)) throw ConfigError("J must be >= 0");
    if (!(cfg.params.h >= 0.0)) throw ConfigError("h must be >= 0");
    if (!(cfg.params.Gamma0 > 0.0)) throw ConfigError("Gamma0 must be > 0");
    if (cfg.params.N < 1) throw ConfigError("N must be >= 1");
    if (cfg.steps < 1000) throw ConfigError("steps must be >= 1000");
    if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
    if (!(cfg.pert.h0_amp >= 0.0)) throw ConfigError("h0 must be >= 0");
    if (!(cfg.pert.hp_amp >= 0.0)) throw ConfigError("hp must be >= 0");
    if (!std::isfinite(cfg.pert.omega)) throw ConfigError("omega must be finite");

    if (cfg.schedule == SchedId::rotating) {
        if (cfg.h_set && cfg.params.h != 0.0)
            throw ConfigError("rotating forbids h != 0");
        cfg.params.h = 0.0;
        cfg.h_set = true;
    }

    const bool single = cfg.schedule == SchedId::single1 || cfg.schedule == SchedId::single2;
    switch (cmd) {
    case Command::design:
    case Command::evolve_bloch:
        break;
    case Command::evolve_quantum:
        if (single && cfg.params.N != 1)
            throw ConfigError("single-spin schedules evolve with N=1");
        if (!single && cfg.params.N > 10000)
            throw ConfigError("N exceeds the sector solver cap 10000");
        break;
    case Command::sweep_T:
        if (single) throw ConfigError("sweep-T needs a collective schedule");
        if (cfg.params.N > 10000) throw ConfigError("N exceeds the sector solver cap 10000");
        break;
    case Command::stability:
        if (cfg.schedule != SchedId::ising1 && cfg.schedule != SchedId::ising2 &&
            cfg.schedule != SchedId::rotating)
            throw ConfigError("stability needs a designed collective schedule");
        if (cfg.params.N > 10000) throw ConfigError("N exceeds the sector solver cap 10000");
        break;
    case Command::mattis:
        if (cfg.schedule != SchedId::ising1 && cfg.schedule != SchedId::ising2)
            throw ConfigError("mattis needs schedule ising1 or ising2");
        if (cfg.params.N > 12) throw ConfigError("mattis caps N at 12");
        if (cfg.xi.empty() && !cfg.seed) throw ConfigError("mattis requires xi or seed");
        if (!cfg.xi.empty() && cfg.seed) throw ConfigError("give either xi or seed, not both");
        if (!cfg.xi.empty() && cfg.xi.size() != static_cast<std::size_t>(cfg.params.N))
            throw ConfigError("xi must have exactly N entries");
        break;
    }

    if (cfg.out.empty()) cfg.out = std::string(to_string(cmd)) + ".csv";
}

/** @brief Canonical text form; parse_config(serialize_config(c)) reproduces c. */
inline std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    if (cfg.command) out << "command=" << to_string(*cfg.command) << "\n";
    out << "schedule=" << to_string(cfg.schedule) << "\n";
    out << "J=" << cfg.params.J << "\n";
    if (cfg.h_set) out << "h=" << cfg.params.h << "\n";
    out << "Gamma0=" << cfg.params.Gamma0 << "\n";
    out << "T=";
    for (std::size_t i = 0; i < cfg.T_list.size(); ++i)
        out << (i ? "," : "") << cfg.T_list[i];
    out << "\n";
    out << "N=" << cfg.params.N << "\n";
    out << "steps=" << cfg.steps << "\n";
    out << "samples=" << cfg.samples << "\n";
    out << "h0=" << cfg.pert.h0_amp << "\n";
    out << "hp=" << cfg.pert.hp_amp << "\n";
    out << "omega=" << cfg.pert.omega << "\n";
    if (cfg.seed) out << "seed=" << *cfg.seed << "\n";
    if (!cfg.xi.empty()) {
        out << "xi=";
        for (std::size_t i = 0; i < cfg.xi.size(); ++i)
            out << (i ? "," : "") << cfg.xi[i];
        out << "\n";
    }
    if (!cfg.out.empty()) out << "out=" << cfg.out << "\n";
    return out.str();
}

} // namespace sta
