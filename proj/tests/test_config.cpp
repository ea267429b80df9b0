#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tmsq/config.hpp"

using namespace tmsq;

namespace {

std::string write_tmp(const std::string& name, const std::string& body) {
    std::string path = std::string("cfg_") + name;
    std::ofstream out(path);
    out << body;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("empty config yields the default parameter set") {
    auto path = write_tmp("empty.json", "\n");
    auto cfg = load_config(path, ExperimentKind::markov);
    CHECK(cfg.params.g == 0.15);
    CHECK(cfg.params.G == 0.15);
    CHECK(cfg.params.r == 0.2);
    CHECK(cfg.params.delta_c == 3.5);
    CHECK(cfg.bath_a.gamma == 1e-3);
    CHECK(cfg.bath_c.gamma == 1.5e-3);
    CHECK(cfg.bath_a.lambda == 1e-2);
    CHECK(cfg.bath_c.lambda == 1.5e-2);
    CHECK(cfg.bath_a.n_bar == 0.0);
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.t_max == 300.0);
    CHECK(cfg.env == EnvKind::markov);
}

TEST_CASE("keys override defaults") {
    auto path = write_tmp("override.json",
                          R"({"g": 0.2, "G": 0.2, "gamma_a": 2e-3, "dt": 0.02, "t_max": 100,
                              "env": "structured", "out": "x.csv"})");
    auto cfg = load_config(path, ExperimentKind::nmhl);
    CHECK(cfg.params.g == 0.2);
    CHECK(cfg.bath_a.gamma == 2e-3);
    CHECK(cfg.dt == 0.02);
    CHECK(cfg.t_max == 100.0);
    CHECK(cfg.env == EnvKind::structured);
    CHECK(cfg.out_path == "x.csv");
}

TEST_CASE("config rejections") {
    CHECK_THROWS_AS(load_config(write_tmp("unk.json", R"({"gg": 1})"), ExperimentKind::markov),
                    ConfigError);
    CHECK_THROWS_AS(load_config(write_tmp("dt0.json", R"({"dt": 0})"), ExperimentKind::markov),
                    ConfigError);
    CHECK_THROWS_AS(
        load_config(write_tmp("guard.json", R"({"dt": 1e-6, "t_max": 300})"),
                    ExperimentKind::markov),
        ConfigError);
    CHECK_THROWS_AS(
        load_config(write_tmp("parse.json", "{not json"), ExperimentKind::markov), ConfigError);
    CHECK_THROWS_AS(
        load_config(write_tmp("neg.json", R"({"gamma_a": -1})"), ExperimentKind::markov),
        ConfigError);
    CHECK_THROWS_AS(load_config(write_tmp("tau.json", R"({"tau_off": 2000})"),
                                ExperimentKind::persist),
                    ConfigError);
    CHECK_THROWS_AS(load_config("no_such_file.json", ExperimentKind::markov), ConfigError);
}

TEST_CASE("thread count comes from the environment by default") {
    setenv("TMSQ_THREADS", "3", 1);
    auto cfg = default_config(ExperimentKind::markov);
    CHECK(cfg.threads == 3);
    setenv("TMSQ_THREADS", "junk", 1);
    CHECK(default_config(ExperimentKind::markov).threads == 1);
    unsetenv("TMSQ_THREADS");
    CHECK(default_config(ExperimentKind::markov).threads == 1);
}

TEST_CASE("number formatting uses 9 significant digits and a point separator") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(0.123456789123) == "0.123456789");
    CHECK(format_number(-3.5) == "-3.5");
    CHECK(format_number(1e-12) == "1e-12");
}

TEST_CASE("markov experiment writes a deterministic CSV and manifest") {
    auto cfg = default_config(ExperimentKind::markov);
    cfg.t_max = 50.0;
    cfg.out_path = "run_markov.csv";
    run_experiment(cfg);
    std::string first = slurp("run_markov.csv");
    REQUIRE(!first.empty());
    CHECK(first.rfind("t,dX,dY,dX_opt,dY_opt,S_dB,S_opt_dB\n", 0) == 0);
    std::string manifest = slurp("run_markov.csv.manifest.json");
    CHECK(manifest.find("\"kappa_a\"") != std::string::npos);
    CHECK(manifest.find("\"g_eff\"") != std::string::npos);
    CHECK(manifest.find("\"dt\"") != std::string::npos);

    run_experiment(cfg);
    CHECK(slurp("run_markov.csv") == first);
}

TEST_CASE("effective experiment emits the model summary") {
    auto cfg = default_config(ExperimentKind::effective);
    cfg.out_path = "run_eff.csv";
    run_experiment(cfg);
    std::string body = slurp("run_eff.csv");
    CHECK(body.rfind("g_eff,delta,theta,valid,detuning_ratio\n", 0) == 0);
    CHECK(body.find("0.00596729879") != std::string::npos);
}

TEST_CASE("solver failures surface as SolverError") {
    auto cfg = default_config(ExperimentKind::markov);
    cfg.params.g = cfg.params.G = 0.3;  // unstable, overflows long before t_max
    cfg.params.r = 0.2;
    cfg.t_max = 12000.0;
    cfg.out_path = "run_fail.csv";
    CHECK_THROWS_AS(run_experiment(cfg), SolverError);
}
