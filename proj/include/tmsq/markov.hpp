#pragma once

#include <Eigen/Dense>
#include <optional>

#include "tmsq/covariance.hpp"
#include "tmsq/params.hpp"

namespace tmsq {

// Uniform time grid t_k = k*dt, k = 0..n_steps.
struct TimeGrid {
    double dt = 0.01;
    long n_steps = 30000;

    double t_max() const { return dt * static_cast<double>(n_steps); }
    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be > 0");
        if (n_steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
    }
    static TimeGrid from_span(double t_max, double dt) {
        TimeGrid g;
        g.dt = dt;
        g.n_steps = static_cast<long>(std::llround(t_max / dt));
        g.validate();
        return g;
    }
};

// Piecewise-constant drive: g_eff up to tau_off, zero afterwards.
struct DriveSchedule {
    std::optional<double> tau_off;

    double factor(double t) const {
        return (tau_off && t >= *tau_off - 1e-12) ? 0.0 : 1.0;
    }
};

enum class Stability { steady, unsteady };

// Steady iff g_eff^2 < kappa_a * kappa_c (boundary counts as unsteady).
Stability stability(double g_eff, double kappa_a, double kappa_c);

// Effective two-mode model under Markovian noise: quadratures (X_a,Y_a,X_c,Y_c).
struct MarkovModel {
    double g_eff = 0.0;
    double kappa_a = 0.0;
    double kappa_c = 0.0;
    double N_a = 0.0;
    double N_c = 0.0;

    Eigen::Matrix4d drift() const;
    Eigen::Matrix4d diffusion() const;
};

// Integrates dV/dt = A V + V A^T + D from V0 (default vacuum I/2) with a
// fixed-step 4th-order scheme; records every `stride` steps. Throws on
// overflow (suggesting a smaller step).
CovarianceTrajectory propagate_cm(const MarkovModel& model, const Eigen::Matrix4d& V0,
                                  const TimeGrid& grid, long stride = 1,
                                  const DriveSchedule& schedule = {});

// Closed-form squeezing variance of the optimal Markovian quadrature,
// DX(t) = 1/2 + 2C e^{-(Omega+ka+kc)t} - 2C.
double analytic_variance(double g_eff, double kappa_a, double kappa_c, double N_a, double N_c,
                         double t);

struct FullModel {
    Eigen::Matrix<double, 6, 6> drift;
    Eigen::Matrix<double, 6, 6> diffusion;
};

// Three-mode model: drift = transition matrix minus local decay, with the
// mechanical decay enlarged by e^{2r}.
FullModel full_model(const SystemParams& p, double Delta_a, double kappa_a, double kappa_b,
                     double kappa_c, double N_a, double N_b, double N_c);

CovarianceTrajectory full_propagate(const FullModel& model, const Eigen::Matrix<double, 6, 6>& V0,
                                    const TimeGrid& grid, long stride = 1);

}  // namespace tmsq
