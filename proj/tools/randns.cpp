#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "randns/app.hpp"
#include "randns/errors.hpp"

namespace app = randns::app;

namespace {

struct Flags {
    std::string config;
    std::vector<std::string> sets;
    std::map<std::string, std::string> named;
};

// Common flags map one-to-one onto configuration keys.
void add_common(CLI::App* sub, Flags& flags) {
    sub->add_option("-c,--config", flags.config, "INI configuration file");
    sub->add_option("-s,--set", flags.sets, "key=value override (repeatable)");
    for (const char* key : {"dim", "M", "alpha", "gamma", "law", "seed", "sample", "samples", "T", "dt", "c1",
                            "c2", "integrator", "datum", "datum_path", "initial", "initial_path",
                            "initial_scale", "lambdas", "output", "workers"}) {
        const std::string name = std::string("--") + key;
        sub->add_option_function<std::string>(
            name, [&flags, key](const std::string& v) { flags.named[key] = v; }, std::string("sets ") + key);
    }
}

std::map<std::string, std::string> overrides(const Flags& flags) {
    std::map<std::string, std::string> out;
    for (const auto& s : flags.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw randns::ConfigError("--set expects key=value, got '" + s + "'");
        out[s.substr(0, eq)] = s.substr(eq + 1);
    }
    for (const auto& [k, v] : flags.named) out[k] = v;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Randomized-data Navier-Stokes toolkit"};
    cli.require_subcommand(1);
    Flags flags;
    app::CheckInputs check;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"randomize", "write the datum and its randomization as checkpoints"},
        {"heat-probe", "deterministic heat-flow constants and mixed-norm probes"},
        {"tail", "Monte Carlo exceedance of the forcing norm"},
        {"solve", "integrate the truncated difference equation"},
        {"check", "energy, rate and uniqueness checks on trajectory directories"},
        {"regression", "exact-solution suites"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = cli.add_subcommand(name, help);
        add_common(sub, flags);
        if (name == "check") {
            sub->add_option("--run", check.run, "trajectory directory")->required();
            sub->add_option("--refine", check.refinements, "refined rerun directory (repeatable)");
            sub->add_option("--compare", check.compare, "second trajectory for the Gronwall check");
        }
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : app::kExitConfig;
    }
    const std::string command = cli.get_subcommands().front()->get_name();

    app::RunConfig cfg;
    try {
        cfg = app::load_config(command, flags.config, overrides(flags));
        if (command == "randomize") return app::run_randomize(cfg);
        if (command == "heat-probe") return app::run_heat_probe(cfg);
        if (command == "tail") return app::run_tail(cfg);
        if (command == "solve") return app::run_solve(cfg);
        if (command == "check") return app::run_check(cfg, check);
        return app::run_regression(cfg);
    } catch (const randns::NumericalFailure& e) {
        app::report_error(cfg.output, "numerical", e.what());
        return app::kExitNumerical;
    } catch (const std::invalid_argument& e) {
        app::report_error(cfg.output, "config", e.what());
        return app::kExitConfig;
    } catch (const std::exception& e) {
        app::report_error(cfg.output, "runtime", e.what());
        return 1;
    }
}
