#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tmsq/covariance.hpp"
#include "tmsq/markov.hpp"
#include "tmsq/nonmarkov.hpp"
#include "tmsq/params.hpp"
#include "tmsq/spectra.hpp"

namespace tmsq {

// Quadrature mixing angle of the decaying joint combination,
// phi = atan2(2 g_eff, kappa_a - kappa_c) / 2. Errors if both arguments
// vanish (angle undefined).
double optimal_angle(double g_eff, double kappa_a, double kappa_c);

// (dX, dY) of the joint quadratures at mixing angle phi.
std::pair<double, double> variance_xy(const Eigen::MatrixXd& v, double mix_angle);

struct OptimalVariances {
    double dx = 0.5;
    double dy = 0.5;
    double angle = 0.0;  // minimizing angle in (-pi/2, pi/2]
};

// Closed-form 2x2 eigen-variances of the joint quadrature block. Requires
// the structural identities V22=V11, V33=V44, V23=V14 (throws otherwise).
OptimalVariances optimal_variances(const Eigen::MatrixXd& v, double tol = 1e-6);

// S = -10 log10(dX / 0.5), positive below vacuum. Errors for dX <= 0.
double squeezing_level(double dx);

struct SqueezingRecord {
    double t = 0.0;
    double dx = 0.5;
    double dy = 0.5;
    double dx_opt = 0.5;
    double dy_opt = 0.5;
    double s_db = 0.0;
    double s_opt_db = 0.0;
    double phi_opt = 0.0;
};

// Per-point reduction of a trajectory at fixed mixing angle.
std::vector<SqueezingRecord> squeezing_records(const CovarianceTrajectory& traj,
                                               double mix_angle);

enum class EnvKind { markov, structured };

// Applies one named parameter override ("g", "G", "r", "delta_c", "gamma_a",
// "lambda_a", "nbar_a", "gamma_c", "lambda_c", "nbar_c"). Unknown key throws.
void apply_parameter(SystemParams& p, LorentzianBath& bath_a, LorentzianBath& bath_c,
                     const std::string& key, double value);

struct SweepPoint {
    std::vector<std::pair<std::string, double>> coords;
    double s_db = 0.0;
    double s_opt_db = 0.0;
    bool ok = true;
    std::string error;
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

// One end-to-end evaluation of S(tau) for the requested environment kind.
SqueezingRecord generation_point(const SystemParams& p, const LorentzianBath& bath_a,
                                 const LorentzianBath& bath_c, EnvKind kind, double tau,
                                 double dt);

// Squeezing level at time tau over a grid of (g=G, r) pairs or any list of
// parameter overrides. Points are evaluated in parallel but recorded in
// input order; per-point failures are captured, not fatal.
SweepResult sweep_generation(const SystemParams& base, const LorentzianBath& bath_a,
                             const LorentzianBath& bath_c, EnvKind kind, double tau, double dt,
                             const std::vector<std::vector<std::pair<std::string, double>>>& grid,
                             int threads = 1);

// Squeezing level at final time T for each drive switch-off time tau_off.
SweepResult sweep_persistence(const SystemParams& p, const LorentzianBath& bath_a,
                              const LorentzianBath& bath_c, EnvKind kind,
                              const std::vector<double>& tau_off_grid, double t_final, double dt,
                              int threads = 1);

}  // namespace tmsq
