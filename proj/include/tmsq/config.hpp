#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmsq/analysis.hpp"
#include "tmsq/params.hpp"
#include "tmsq/spectra.hpp"

namespace tmsq {

// Bad or inconsistent configuration input; maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure inside a solver; maps to CLI exit code 1.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    effective,
    validate,
    markov,
    nmhl,
    persist,
    sweep_generation,
    sweep_persistence,
};

std::string kind_name(ExperimentKind k);

struct SweepSpec {
    // "g_r" scans g=G and r jointly; "gamma_a" and "lambda_a" scan one bath
    // parameter with everything else fixed.
    std::string variable = "g_r";
    int n1 = 21;
    int n2 = 21;
    double min1 = 0.1, max1 = 0.2;
    double min2 = 0.0, max2 = 0.2;
    std::vector<double> tau_off_grid;  // for persistence sweeps
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::markov;
    SystemParams params;
    LorentzianBath bath_a;
    LorentzianBath bath_c;
    EnvKind env = EnvKind::structured;
    std::optional<double> tau_off;
    double dt = 0.01;
    double t_max = 300.0;
    double t_final = 1000.0;  // persistence sweep endpoint
    SweepSpec sweep;
    std::string out_path = "out.csv";
    int threads = 1;

    void validate() const;
};

// Parses a JSON config file, fills defaults, rejects unknown keys. An empty
// or absent file yields the default parameter set.
ExperimentConfig load_config(const std::string& path, ExperimentKind kind);

ExperimentConfig default_config(ExperimentKind kind);

// Runs the configured experiment, writing the CSV table to out_path and a
// manifest with every resolved parameter next to it (<out>.manifest.json).
// Output is deterministic byte for byte.
void run_experiment(const ExperimentConfig& cfg);

// Fixed-width serialization with 9 significant digits.
std::string format_number(double x);

}  // namespace tmsq
