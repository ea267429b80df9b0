#pragma once

#include <complex>
#include <vector>

#include "tmsq/covariance.hpp"
#include "tmsq/markov.hpp"
#include "tmsq/spectra.hpp"

namespace tmsq {

// 2x2 complex propagator U(t) of the memory-kernel Langevin equation acting
// on (a, c^dag), sampled on a uniform grid. U(0) = identity.
struct GreensFunction {
    TimeGrid grid;
    double theta = 0.0;
    std::vector<std::complex<double>> u11, u12, u21, u22;

    std::size_t size() const { return u11.size(); }
    double time_at(std::size_t k) const { return grid.dt * static_cast<double>(k); }
};

// The six scalar correlators of the noise response at one time point.
struct NoiseCovariance {
    double t = 0.0;
    double v1v1d = 0.0;  // <V1 V1^dag>
    double v1dv1 = 0.0;  // <V1^dag V1>
    double v2v2d = 0.0;  // <V2 V2^dag>
    double v2dv2 = 0.0;  // <V2^dag V2>
    std::complex<double> v1v2d;  // <V1 V2^dag>
    std::complex<double> v2dv1;  // <V2^dag V1>
};

struct NoiseCovarianceSeries {
    TimeGrid grid;
    std::vector<NoiseCovariance> points;

    // Nearest grid lookup; errors if t is not a grid point.
    const NoiseCovariance& at_time(double t) const;
};

// Solves U'(t) = T(t)U(t) - int_0^t Fbar(t-s)U(s)ds with Fbar built from the
// exponential memory kernels. The integral is removed exactly by per-bath
// accumulator variables W = int e^{-lambda(t-s)}U(s)ds, giving a local ODE
// system stepped with fixed-step RK4.
GreensFunction solve_greens(double g_eff, double theta, const DriveSchedule& schedule,
                            const LorentzianBath& bath_a, const LorentzianBath& bath_c,
                            const TimeGrid& grid);

// Secondary method for cross-checks: trapezoidal predictor-corrector on the
// Volterra form with the convolution evaluated by direct quadrature.
GreensFunction solve_greens_volterra(double g_eff, double theta, const DriveSchedule& schedule,
                                     const LorentzianBath& bath_a, const LorentzianBath& bath_c,
                                     const TimeGrid& grid);

// Double-convolution noise correlators for every grid point, evaluated
// incrementally via the exponential-kernel factorization (O(N) per point).
NoiseCovarianceSeries noise_covariance(const GreensFunction& u, const LorentzianBath& bath_a,
                                       const LorentzianBath& bath_c);

// 4x4 covariance matrix from the propagator row moduli plus noise terms.
CovarianceMatrix assemble_cm(std::complex<double> u11, std::complex<double> u12,
                             std::complex<double> u21, std::complex<double> u22,
                             const NoiseCovariance& n, double theta, double t);

// Full pipeline: Green's function, noise correlators, CM per grid point.
// Records every `stride` steps. Memory convolutions keep the entire history
// across a drive switch-off.
CovarianceTrajectory nmhl_run(double g_eff, double theta, const LorentzianBath& bath_a,
                              const LorentzianBath& bath_c, const DriveSchedule& schedule,
                              const TimeGrid& grid, long stride = 1);

}  // namespace tmsq
