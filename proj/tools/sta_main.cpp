#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "sta/cli.hpp"

namespace {

constexpr std::array<sta::Command, 6> kCommands = {
    sta::Command::design,       sta::Command::evolve_bloch, sta::Command::evolve_quantum,
    sta::Command::sweep_T,      sta::Command::stability,    sta::Command::mattis,
};

constexpr std::array<const char*, 6> kCommandHelp = {
    "sample the designed drive coefficients to CSV",
    "integrate the classical spin trajectory",
    "integrate the Schrodinger dynamics in the symmetric sector",
    "summarize quantum runs across a list of horizons",
    "evolve the drive plus a sinusoidal perturbing field",
    "exact small-N run with Mattis couplings",
};

constexpr std::array<const char*, 14> kKeys = {"T",     "N",       "schedule", "J",    "h",
                                               "Gamma0", "steps",  "samples",  "h0",   "hp",
                                               "omega",  "seed",   "xi",       "out"};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariant-based schedule design and dynamics for quantum annealing"};
    app.require_subcommand(1);

    std::vector<std::string> tokens;
    std::string config_path;
    std::array<std::string, kKeys.size()> flag_values;

    for (std::size_t c = 0; c < kCommands.size(); ++c) {
        CLI::App* sub = app.add_subcommand(sta::to_string(kCommands[c]), kCommandHelp[c]);
        sub->set_help_flag("--help", "print this help message and exit");
        sub->add_option("tokens", tokens, "schedule name or key=value settings");
        sub->add_option("--config", config_path, "file of key=value lines");
        for (std::size_t k = 0; k < kKeys.size(); ++k)
            sub->add_option(std::string("--") + kKeys[k], flag_values[k]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    sta::Command command = kCommands[0];
    for (std::size_t c = 0; c < kCommands.size(); ++c)
        if (app.get_subcommand(sta::to_string(kCommands[c]))->parsed()) command = kCommands[c];

    sta::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw sta::ConfigError("cannot read config file '" + config_path + "'");
            std::ostringstream text;
            text << in.rdbuf();
            cfg = sta::parse_config(text.str());
            if (cfg.command && *cfg.command != command)
                throw sta::ConfigError(std::string("config file command '") +
                                       sta::to_string(*cfg.command) +
                                       "' conflicts with subcommand '" +
                                       sta::to_string(command) + "'");
        }
        cfg.command = command;
        for (const std::string& tok : tokens) {
            std::size_t eq = tok.find('=');
            if (eq == std::string::npos) {
                sta::set_config_key(cfg, "schedule", tok, "argument '" + tok + "'");
            } else {
                sta::set_config_key(cfg, tok.substr(0, eq), tok.substr(eq + 1),
                                    "argument '" + tok + "'");
            }
        }
        for (std::size_t k = 0; k < kKeys.size(); ++k)
            if (!flag_values[k].empty())
                sta::set_config_key(cfg, kKeys[k], flag_values[k],
                                    std::string("option --") + kKeys[k]);
        sta::validate_config(cfg);
    } catch (const sta::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        sta::run(cfg);
    } catch (const sta::DivergentSchedule& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const sta::SingularDrive& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
