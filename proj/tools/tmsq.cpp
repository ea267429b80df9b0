#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tmsq/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Two-mode squeezing simulator: generation and persistence of "
                 "optical-microwave squeezing under Markovian and Lorentzian reservoirs"};
    app.require_subcommand(1);

    struct SubSpec {
        const char* name;
        const char* help;
        tmsq::ExperimentKind kind;
    };
    const SubSpec subs[] = {
        {"effective", "Effective coupling, energy shift and validity diagnostics",
         tmsq::ExperimentKind::effective},
        {"validate", "Transition-matrix eigen-splitting scan", tmsq::ExperimentKind::validate},
        {"markov", "Markovian covariance trajectory", tmsq::ExperimentKind::markov},
        {"nmhl", "Memory-kernel covariance trajectory", tmsq::ExperimentKind::nmhl},
        {"persist", "Drive switch-off trajectory", tmsq::ExperimentKind::persist},
        {"sweep-gen", "Squeezing level over a parameter grid",
         tmsq::ExperimentKind::sweep_generation},
        {"sweep-persist", "Final squeezing level versus switch-off time",
         tmsq::ExperimentKind::sweep_persistence},
    };

    std::string config_path;
    std::string out_path;
    std::optional<double> dt_override, tmax_override;
    std::optional<int> threads_override;
    tmsq::ExperimentKind kind = tmsq::ExperimentKind::markov;

    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config_path, "JSON parameter file");
        sub->add_option("--out", out_path, "output CSV path");
        sub->add_option("--dt", dt_override, "time step override");
        sub->add_option("--tmax", tmax_override, "time horizon override");
        sub->add_option("--threads", threads_override, "worker thread count");
        sub->callback([&, k = s.kind] { kind = k; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        tmsq::ExperimentConfig cfg = tmsq::load_config(config_path, kind);
        if (!out_path.empty()) cfg.out_path = out_path;
        if (dt_override) cfg.dt = *dt_override;
        if (tmax_override) cfg.t_max = *tmax_override;
        if (threads_override) cfg.threads = *threads_override;
        tmsq::run_experiment(cfg);
    } catch (const tmsq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
