#include "tmsq/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "tmsq/model.hpp"

namespace tmsq {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double optimal_angle(double g_eff, double kappa_a, double kappa_c) {
    double y = 2.0 * g_eff, x = kappa_a - kappa_c;
    if (y == 0.0 && x == 0.0)
        throw std::invalid_argument("optimal_angle: undefined for g_eff = 0 and equal decay rates");
    return 0.5 * std::atan2(y, x);
}

std::pair<double, double> variance_xy(const Eigen::MatrixXd& v, double phi) {
    double c = std::cos(phi), s = std::sin(phi);
    double v11 = v(0, 0), v44 = v(3, 3), v14 = v(0, 3);
    double dx = c * c * v11 + s * s * v44 + 2.0 * s * c * v14;
    double dy = s * s * v11 + c * c * v44 - 2.0 * s * c * v14;
    return {dx, dy};
}

OptimalVariances optimal_variances(const Eigen::MatrixXd& v, double tol) {
    double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    bool ok = std::abs(v(1, 1) - v(0, 0)) <= tol * scale &&
              std::abs(v(2, 2) - v(3, 3)) <= tol * scale &&
              std::abs(v(1, 2) - v(0, 3)) <= tol * scale;
    if (!ok)
        throw std::invalid_argument(
            "optimal_variances: covariance lacks the joint-quadrature structure");
    double v11 = v(0, 0), v44 = v(3, 3), v14 = v(0, 3);
    double root = std::sqrt((v11 - v44) * (v11 - v44) + 4.0 * v14 * v14);
    OptimalVariances out;
    out.dx = (v11 + v44 - root) / 2.0;
    out.dy = (v11 + v44 + root) / 2.0;
    // atan2 branch picks the maximizing angle; shift a quarter turn for the
    // minimizer and wrap into (-pi/2, pi/2]
    double a = 0.5 * std::atan2(2.0 * v14, v11 - v44) + kPi / 2.0;
    if (a > kPi / 2.0) a -= kPi;
    out.angle = a;
    return out;
}

double squeezing_level(double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("squeezing_level: variance must be > 0");
    return -10.0 * std::log10(dx / 0.5);
}

std::vector<SqueezingRecord> squeezing_records(const CovarianceTrajectory& traj, double phi) {
    std::vector<SqueezingRecord> out;
    out.reserve(traj.size());
    for (const auto& cm : traj.points) {
        SqueezingRecord r;
        r.t = cm.t;
        std::tie(r.dx, r.dy) = variance_xy(cm.v, phi);
        OptimalVariances ov = optimal_variances(cm.v);
        r.dx_opt = ov.dx;
        r.dy_opt = ov.dy;
        r.phi_opt = ov.angle;
        r.s_db = squeezing_level(r.dx);
        r.s_opt_db = squeezing_level(r.dx_opt);
        out.push_back(r);
    }
    return out;
}

void apply_parameter(SystemParams& p, LorentzianBath& bath_a, LorentzianBath& bath_c,
                     const std::string& key, double value) {
    if (key == "g") p.g = value;
    else if (key == "G") p.G = value;
    else if (key == "r") p.r = value;
    else if (key == "delta_c") p.delta_c = value;
    else if (key == "delta_a") p.delta_a = value;
    else if (key == "alpha") p.alpha = value;
    else if (key == "phi") p.phi = value;
    else if (key == "gamma_a") bath_a.gamma = value;
    else if (key == "lambda_a") bath_a.lambda = value;
    else if (key == "nbar_a") bath_a.n_bar = value;
    else if (key == "gamma_c") bath_c.gamma = value;
    else if (key == "lambda_c") bath_c.lambda = value;
    else if (key == "nbar_c") bath_c.n_bar = value;
    else throw std::invalid_argument("unknown parameter key: " + key);
}

SqueezingRecord generation_point(const SystemParams& p, const LorentzianBath& bath_a,
                                 const LorentzianBath& bath_c, EnvKind kind, double tau,
                                 double dt) {
    double g_eff = effective_coupling(p);
    double theta = p.alpha + p.phi;
    double ka = markovian_rate(bath_a), kc = markovian_rate(bath_c);
    double phi = optimal_angle(g_eff, ka, kc);
    TimeGrid grid = TimeGrid::from_span(tau, dt);

    CovarianceTrajectory traj;
    if (kind == EnvKind::markov) {
        MarkovModel m{g_eff, ka, kc, bath_a.n_bar, bath_c.n_bar};
        traj = propagate_cm(m, Eigen::Matrix4d(vacuum_cm(4)), grid, grid.n_steps);
    } else {
        traj = nmhl_run(g_eff, theta, bath_a, bath_c, {}, grid, grid.n_steps);
    }
    return squeezing_records({{traj.back()}}, phi).front();
}

namespace {

template <typename Fn>
SweepResult run_parallel(std::size_t n_points, int threads, const Fn& eval) {
    SweepResult result;
    result.points.resize(n_points);
    if (threads < 1) threads = 1;
    threads = std::min<int>(threads, static_cast<int>(n_points ? n_points : 1));
    auto worker = [&](int w) {
        for (std::size_t i = w; i < n_points; i += threads) {
            try {
                eval(i, result.points[i]);
            } catch (const std::exception& e) {
                result.points[i].ok = false;
                result.points[i].error = e.what();
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    return result;
}

}  // namespace

SweepResult sweep_generation(const SystemParams& base, const LorentzianBath& bath_a,
                             const LorentzianBath& bath_c, EnvKind kind, double tau, double dt,
                             const std::vector<std::vector<std::pair<std::string, double>>>& grid,
                             int threads) {
    return run_parallel(grid.size(), threads, [&](std::size_t i, SweepPoint& pt) {
        SystemParams p = base;
        LorentzianBath ba = bath_a, bc = bath_c;
        pt.coords = grid[i];
        for (const auto& [key, val] : grid[i]) apply_parameter(p, ba, bc, key, val);
        SqueezingRecord rec = generation_point(p, ba, bc, kind, tau, dt);
        pt.s_db = rec.s_db;
        pt.s_opt_db = rec.s_opt_db;
    });
}

SweepResult sweep_persistence(const SystemParams& p, const LorentzianBath& bath_a,
                              const LorentzianBath& bath_c, EnvKind kind,
                              const std::vector<double>& tau_off_grid, double t_final, double dt,
                              int threads) {
    double g_eff = effective_coupling(p);
    double theta = p.alpha + p.phi;
    double ka = markovian_rate(bath_a), kc = markovian_rate(bath_c);
    double phi = optimal_angle(g_eff, ka, kc);
    return run_parallel(tau_off_grid.size(), threads, [&](std::size_t i, SweepPoint& pt) {
        double tau_off = tau_off_grid[i];
        if (!(tau_off < t_final))
            throw std::invalid_argument("sweep_persistence: tau_off must precede the final time");
        pt.coords = {{"tau_off", tau_off}};
        TimeGrid grid = TimeGrid::from_span(t_final, dt);
        DriveSchedule sched{tau_off};
        CovarianceTrajectory traj;
        if (kind == EnvKind::markov) {
            MarkovModel m{g_eff, ka, kc, bath_a.n_bar, bath_c.n_bar};
            traj = propagate_cm(m, Eigen::Matrix4d(vacuum_cm(4)), grid, grid.n_steps, sched);
        } else {
            traj = nmhl_run(g_eff, theta, bath_a, bath_c, sched, grid, grid.n_steps);
        }
        SqueezingRecord rec = squeezing_records({{traj.back()}}, phi).front();
        pt.s_db = rec.s_db;
        pt.s_opt_db = rec.s_opt_db;
    });
}

}  // namespace tmsq
