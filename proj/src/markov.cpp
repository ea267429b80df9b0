#include "tmsq/markov.hpp"

#include <cmath>

#include "tmsq/model.hpp"

namespace tmsq {

namespace {
constexpr double kOverflowGuard = 1e100;

// RK4 step of dV/dt = A V + V A^T + D with A possibly time dependent.
template <typename Mat, typename DriftFn>
void lyapunov_rk4(Mat& v, double t, double dt, const DriftFn& drift_at, const Mat& d) {
    auto rhs = [&](const Mat& x, double tt) -> Mat {
        Mat a = drift_at(tt);
        return a * x + x * a.transpose() + d;
    };
    Mat k1 = rhs(v, t);
    Mat k2 = rhs(v + 0.5 * dt * k1, t + 0.5 * dt);
    Mat k3 = rhs(v + 0.5 * dt * k2, t + 0.5 * dt);
    Mat k4 = rhs(v + dt * k3, t + dt);
    v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Mat, typename DriftFn>
CovarianceTrajectory run_lyapunov(const Mat& v0, const TimeGrid& grid, long stride,
                                  const DriftFn& drift_at, const Mat& d) {
    grid.validate();
    if (stride < 1) stride = 1;
    CovarianceTrajectory traj;
    Mat v = v0;
    traj.points.push_back({0.0, Eigen::MatrixXd(v)});
    for (long n = 0; n < grid.n_steps; ++n) {
        double t = grid.dt * static_cast<double>(n);
        lyapunov_rk4(v, t, grid.dt, drift_at, d);
        if (!v.allFinite() || v.cwiseAbs().maxCoeff() > kOverflowGuard)
            throw std::runtime_error(
                "covariance propagation overflowed, reduce the time step or the horizon");
        if ((n + 1) % stride == 0 || n + 1 == grid.n_steps)
            traj.points.push_back({grid.dt * static_cast<double>(n + 1), Eigen::MatrixXd(v)});
    }
    return traj;
}
}  // namespace

Stability stability(double g_eff, double kappa_a, double kappa_c) {
    if (!(kappa_a > 0.0 && kappa_c > 0.0))
        throw std::invalid_argument("stability: decay rates must be > 0");
    return (g_eff * g_eff < kappa_a * kappa_c) ? Stability::steady : Stability::unsteady;
}

Eigen::Matrix4d MarkovModel::drift() const {
    Eigen::Matrix4d a;
    a << kappa_a, 0, 0, g_eff,
         0, kappa_a, g_eff, 0,
         0, g_eff, kappa_c, 0,
         g_eff, 0, 0, kappa_c;
    return -a;
}

Eigen::Matrix4d MarkovModel::diffusion() const {
    Eigen::Vector4d d;
    d << kappa_a * (2.0 * N_a + 1.0), kappa_a * (2.0 * N_a + 1.0),
         kappa_c * (2.0 * N_c + 1.0), kappa_c * (2.0 * N_c + 1.0);
    return d.asDiagonal();
}

CovarianceTrajectory propagate_cm(const MarkovModel& model, const Eigen::Matrix4d& v0,
                                  const TimeGrid& grid, long stride,
                                  const DriveSchedule& schedule) {
    Eigen::Matrix4d a_on = model.drift();
    MarkovModel off = model;
    off.g_eff = 0.0;
    Eigen::Matrix4d a_off = off.drift();
    auto drift_at = [&](double t) -> Eigen::Matrix4d {
        return schedule.factor(t) != 0.0 ? a_on : a_off;
    };
    return run_lyapunov(v0, grid, stride, drift_at, Eigen::Matrix4d(model.diffusion()));
}

double analytic_variance(double g_eff, double kappa_a, double kappa_c, double N_a, double N_c,
                         double t) {
    double om = std::sqrt(4.0 * g_eff * g_eff + (kappa_a - kappa_c) * (kappa_a - kappa_c));
    double kp = kappa_a * (2.0 * N_a + 1.0) + kappa_c * (2.0 * N_c + 1.0);
    double km = kappa_a * (2.0 * N_a + 1.0) - kappa_c * (2.0 * N_c + 1.0);
    double cos2phi = om > 0.0 ? (kappa_a - kappa_c) / om : 1.0;
    double c = -(kp + cos2phi * km) / (4.0 * (om + kappa_a + kappa_c)) + 0.25;
    return 0.5 + 2.0 * c * std::exp(-(om + kappa_a + kappa_c) * t) - 2.0 * c;
}

FullModel full_model(const SystemParams& p, double Delta_a, double kappa_a, double kappa_b,
                     double kappa_c, double N_a, double N_b, double N_c) {
    if (!(kappa_a > 0.0 && kappa_b > 0.0 && kappa_c > 0.0))
        throw std::invalid_argument("full_model: decay rates must be > 0");
    double kb = std::exp(2.0 * p.r) * kappa_b;
    FullModel m;
    Eigen::Matrix<double, 6, 1> decay, diff;
    decay << kappa_a, kappa_a, kb, kb, kappa_c, kappa_c;
    diff << kappa_a * (2.0 * N_a + 1.0), kappa_a * (2.0 * N_a + 1.0),
            kb * (2.0 * N_b + 1.0), kb * (2.0 * N_b + 1.0),
            kappa_c * (2.0 * N_c + 1.0), kappa_c * (2.0 * N_c + 1.0);
    m.drift = transition_matrix(p, Delta_a);
    m.drift -= Eigen::Matrix<double, 6, 6>(decay.asDiagonal());
    m.diffusion = diff.asDiagonal();
    return m;
}

CovarianceTrajectory full_propagate(const FullModel& model, const Eigen::Matrix<double, 6, 6>& v0,
                                    const TimeGrid& grid, long stride) {
    auto drift_at = [&](double) { return model.drift; };
    return run_lyapunov(v0, grid, stride, drift_at, model.diffusion);
}

}  // namespace tmsq
