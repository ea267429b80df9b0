#include "tmsq/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tmsq/model.hpp"

namespace tmsq {

using json = nlohmann::ordered_json;

std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::effective: return "effective";
        case ExperimentKind::validate: return "validate";
        case ExperimentKind::markov: return "markov";
        case ExperimentKind::nmhl: return "nmhl";
        case ExperimentKind::persist: return "persist";
        case ExperimentKind::sweep_generation: return "sweep-gen";
        case ExperimentKind::sweep_persistence: return "sweep-persist";
    }
    return "?";
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

void ExperimentConfig::validate() const {
    try {
        params.validate();
        bath_a.validate();
        bath_c.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
    if (!(t_max > 0.0)) throw ConfigError("t_max must be > 0");
    if (t_max / dt > 5e6) throw ConfigError("t_max/dt exceeds the cost guard of 5e6 steps");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (kind == ExperimentKind::persist) {
        if (!tau_off) throw ConfigError("persist requires tau_off");
        if (!(*tau_off > 0.0 && *tau_off < t_max))
            throw ConfigError("tau_off must lie inside (0, t_max)");
    }
    if (kind == ExperimentKind::sweep_persistence) {
        if (!(t_final > 0.0) || t_final / dt > 5e6)
            throw ConfigError("t_final out of range for sweep-persist");
        for (double to : sweep.tau_off_grid)
            if (!(to > 0.0 && to < t_final))
                throw ConfigError("sweep tau_off values must lie inside (0, t_final)");
    }
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.bath_a = {1e-3, 1e-2, 0.0, BathMode::optical};
    cfg.bath_c = {1.5e-3, 1.5e-2, 0.0, BathMode::microwave};
    if (kind == ExperimentKind::markov) cfg.env = EnvKind::markov;
    if (kind == ExperimentKind::persist) {
        cfg.t_max = 1000.0;
        cfg.tau_off = 300.0;
    }
    if (kind == ExperimentKind::sweep_persistence) {
        for (double to = 50.0; to <= 900.0 + 1e-9; to += 50.0) cfg.sweep.tau_off_grid.push_back(to);
    }
    if (kind == ExperimentKind::sweep_generation) {
        cfg.sweep.variable = "g_r";
    }
    if (const char* tenv = std::getenv("TMSQ_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(tenv, &end, 10);
        if (end && *end == '\0' && n >= 1) cfg.threads = static_cast<int>(n);
    }
    return cfg;
}

namespace {

double need_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("key '" + key + "' must be a number");
    return j.get<double>();
}

void parse_sweep(const json& j, SweepSpec& s) {
    for (const auto& [key, val] : j.items()) {
        if (key == "variable") {
            std::string v = val.get<std::string>();
            if (v != "g_r" && v != "gamma_a" && v != "lambda_a")
                throw ConfigError("sweep variable must be g_r, gamma_a or lambda_a");
            s.variable = v;
            if (v == "gamma_a") { s.min1 = 0.5e-3; s.max1 = 2e-3; s.n1 = 16; }
            if (v == "lambda_a") { s.min1 = 0.005; s.max1 = 0.1; s.n1 = 20; }
        } else if (key == "n1") s.n1 = val.get<int>();
        else if (key == "n2") s.n2 = val.get<int>();
        else if (key == "min1") s.min1 = need_number(val, key);
        else if (key == "max1") s.max1 = need_number(val, key);
        else if (key == "min2") s.min2 = need_number(val, key);
        else if (key == "max2") s.max2 = need_number(val, key);
        else if (key == "tau_off_grid") {
            s.tau_off_grid.clear();
            for (const auto& v : val) s.tau_off_grid.push_back(v.get<double>());
        } else throw ConfigError("unknown sweep key: " + key);
    }
    if (s.n1 < 1 || s.n2 < 1) throw ConfigError("sweep point counts must be >= 1");
}

}  // namespace

ExperimentConfig load_config(const std::string& path, ExperimentKind kind) {
    ExperimentConfig cfg = default_config(kind);
    if (path.empty()) return cfg;

    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;

    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    for (const auto& [key, val] : j.items()) {
        if (key == "g" || key == "G" || key == "r" || key == "delta_c" || key == "delta_a" ||
            key == "alpha" || key == "phi" || key == "gamma_a" || key == "lambda_a" ||
            key == "nbar_a" || key == "gamma_c" || key == "lambda_c" || key == "nbar_c") {
            try {
                apply_parameter(cfg.params, cfg.bath_a, cfg.bath_c, key, need_number(val, key));
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
        } else if (key == "tau_off") cfg.tau_off = need_number(val, key);
        else if (key == "dt") cfg.dt = need_number(val, key);
        else if (key == "t_max") cfg.t_max = need_number(val, key);
        else if (key == "t_final") cfg.t_final = need_number(val, key);
        else if (key == "threads") cfg.threads = val.get<int>();
        else if (key == "out") cfg.out_path = val.get<std::string>();
        else if (key == "env") {
            std::string v = val.get<std::string>();
            if (v == "markov") cfg.env = EnvKind::markov;
            else if (v == "structured") cfg.env = EnvKind::structured;
            else throw ConfigError("env must be markov or structured");
        } else if (key == "sweep") {
            if (!val.is_object()) throw ConfigError("sweep must be an object");
            parse_sweep(val, cfg.sweep);
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    cfg.validate();
    return cfg;
}

namespace {

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverError("cannot open output file: " + path);
    out << body;
}

void write_manifest(const ExperimentConfig& cfg, double g_eff, double theta) {
    json m;
    m["kind"] = kind_name(cfg.kind);
    m["g"] = cfg.params.g;
    m["G"] = cfg.params.G;
    m["r"] = cfg.params.r;
    m["delta_c"] = cfg.params.delta_c;
    m["delta_a"] = resolved_delta_a(cfg.params);
    m["alpha"] = cfg.params.alpha;
    m["phi"] = cfg.params.phi;
    m["gamma_a"] = cfg.bath_a.gamma;
    m["lambda_a"] = cfg.bath_a.lambda;
    m["nbar_a"] = cfg.bath_a.n_bar;
    m["gamma_c"] = cfg.bath_c.gamma;
    m["lambda_c"] = cfg.bath_c.lambda;
    m["nbar_c"] = cfg.bath_c.n_bar;
    m["kappa_a"] = markovian_rate(cfg.bath_a);
    m["kappa_c"] = markovian_rate(cfg.bath_c);
    m["g_eff"] = g_eff;
    m["theta"] = theta;
    m["env"] = cfg.env == EnvKind::markov ? "markov" : "structured";
    m["dt"] = cfg.dt;
    m["t_max"] = cfg.t_max;
    if (cfg.tau_off) m["tau_off"] = *cfg.tau_off;
    if (cfg.kind == ExperimentKind::sweep_persistence) m["t_final"] = cfg.t_final;
    if (cfg.kind == ExperimentKind::sweep_generation ||
        cfg.kind == ExperimentKind::sweep_persistence) {
        json sw;
        sw["variable"] = cfg.sweep.variable;
        sw["n1"] = cfg.sweep.n1;
        sw["n2"] = cfg.sweep.n2;
        sw["min1"] = cfg.sweep.min1;
        sw["max1"] = cfg.sweep.max1;
        sw["min2"] = cfg.sweep.min2;
        sw["max2"] = cfg.sweep.max2;
        sw["tau_off_grid"] = cfg.sweep.tau_off_grid;
        m["sweep"] = sw;
    }
    m["threads"] = cfg.threads;
    m["out"] = cfg.out_path;
    write_file(cfg.out_path + ".manifest.json", m.dump(2) + "\n");
}

std::string trajectory_csv(const CovarianceTrajectory& traj, double phi) {
    std::string out = "t,dX,dY,dX_opt,dY_opt,S_dB,S_opt_dB\n";
    for (const auto& rec : squeezing_records(traj, phi)) {
        out += format_number(rec.t);
        out += ',';
        out += format_number(rec.dx);
        out += ',';
        out += format_number(rec.dy);
        out += ',';
        out += format_number(rec.dx_opt);
        out += ',';
        out += format_number(rec.dy_opt);
        out += ',';
        out += format_number(rec.s_db);
        out += ',';
        out += format_number(rec.s_opt_db);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepResult& res) {
    std::string out;
    bool header = false;
    for (const auto& pt : res.points) {
        if (!header) {
            for (const auto& [k, v] : pt.coords) out += k + ",";
            out += "S_dB,S_opt_dB,ok\n";
            header = true;
        }
        for (const auto& [k, v] : pt.coords) {
            out += format_number(v);
            out += ',';
        }
        out += pt.ok ? format_number(pt.s_db) : "nan";
        out += ',';
        out += pt.ok ? format_number(pt.s_opt_db) : "nan";
        out += ',';
        out += pt.ok ? '1' : '0';
        out += '\n';
    }
    return out;
}

long output_stride(double dt) {
    long s = std::lround(0.1 / dt);
    return s < 1 ? 1 : s;
}

std::vector<std::vector<std::pair<std::string, double>>> build_generation_grid(
    const SweepSpec& s) {
    std::vector<std::vector<std::pair<std::string, double>>> grid;
    auto lin = [](double lo, double hi, int n, int i) {
        return n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
    };
    if (s.variable == "g_r") {
        for (int i = 0; i < s.n1; ++i)
            for (int j = 0; j < s.n2; ++j) {
                double g = lin(s.min1, s.max1, s.n1, i);
                double r = lin(s.min2, s.max2, s.n2, j);
                grid.push_back({{"g", g}, {"G", g}, {"r", r}});
            }
    } else {
        for (int i = 0; i < s.n1; ++i)
            grid.push_back({{s.variable, lin(s.min1, s.max1, s.n1, i)}});
    }
    return grid;
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    double g_eff, theta;
    try {
        g_eff = effective_coupling(cfg.params);
        theta = cfg.params.alpha + cfg.params.phi;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    write_manifest(cfg, g_eff, theta);

    try {
        switch (cfg.kind) {
            case ExperimentKind::effective: {
                EffectiveModel m = effective_model(cfg.params);
                std::string out = "g_eff,delta,theta,valid,detuning_ratio\n";
                out += format_number(m.g_eff);
                out += ',';
                out += format_number(m.delta);
                out += ',';
                out += format_number(m.theta);
                out += ',';
                out += m.valid.all_pass() ? '1' : '0';
                out += ',';
                out += format_number(m.valid.detuning_ratio);
                out += '\n';
                write_file(cfg.out_path, out);
                break;
            }
            case ExperimentKind::validate: {
                EigenSplitting es =
                    eigen_splitting(cfg.params, default_delta_a_grid(cfg.params.delta_c));
                std::string out = "# g_eff_num=" + format_number(es.g_eff_num) +
                                  ",delta_num=" + format_number(es.delta_num) + "\n";
                out += "delta_a,branch_hi,branch_lo\n";
                for (std::size_t i = 0; i < es.delta_a.size(); ++i) {
                    out += format_number(es.delta_a[i]);
                    out += ',';
                    out += format_number(es.branch_hi[i]);
                    out += ',';
                    out += format_number(es.branch_lo[i]);
                    out += '\n';
                }
                write_file(cfg.out_path, out);
                break;
            }
            case ExperimentKind::markov:
            case ExperimentKind::nmhl:
            case ExperimentKind::persist: {
                double ka = markovian_rate(cfg.bath_a), kc = markovian_rate(cfg.bath_c);
                double phi = optimal_angle(g_eff, ka, kc);
                TimeGrid grid = TimeGrid::from_span(cfg.t_max, cfg.dt);
                DriveSchedule sched;
                if (cfg.kind == ExperimentKind::persist) sched.tau_off = cfg.tau_off;
                CovarianceTrajectory traj;
                bool markov_env =
                    cfg.kind == ExperimentKind::markov ||
                    (cfg.kind == ExperimentKind::persist && cfg.env == EnvKind::markov);
                if (markov_env) {
                    MarkovModel m{g_eff, ka, kc, cfg.bath_a.n_bar, cfg.bath_c.n_bar};
                    traj = propagate_cm(m, Eigen::Matrix4d(vacuum_cm(4)), grid,
                                        output_stride(cfg.dt), sched);
                } else {
                    traj = nmhl_run(g_eff, theta, cfg.bath_a, cfg.bath_c, sched, grid,
                                    output_stride(cfg.dt));
                }
                write_file(cfg.out_path, trajectory_csv(traj, phi));
                break;
            }
            case ExperimentKind::sweep_generation: {
                SweepResult res = sweep_generation(cfg.params, cfg.bath_a, cfg.bath_c, cfg.env,
                                                   cfg.t_max, cfg.dt,
                                                   build_generation_grid(cfg.sweep), cfg.threads);
                write_file(cfg.out_path, sweep_csv(res));
                break;
            }
            case ExperimentKind::sweep_persistence: {
                SweepResult res =
                    sweep_persistence(cfg.params, cfg.bath_a, cfg.bath_c, cfg.env,
                                      cfg.sweep.tau_off_grid, cfg.t_final, cfg.dt, cfg.threads);
                write_file(cfg.out_path, sweep_csv(res));
                break;
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw SolverError(e.what());
    }
}

}  // namespace tmsq
