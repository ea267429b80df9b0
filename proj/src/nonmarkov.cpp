#include "tmsq/nonmarkov.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace tmsq {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cd = std::complex<double>;
using Mat2 = std::array<cd, 4>;  // row-major 2x2
using Row2 = std::array<cd, 2>;

// drift T(t) applied to U: dU = i g(t) [[0, -e^{i theta}], [e^{-i theta}, 0]] U
inline Mat2 apply_T(double g, double theta, const Mat2& u) {
    if (g == 0.0) return {cd(0), cd(0), cd(0), cd(0)};
    cd ig(0.0, g);
    cd ep = std::exp(cd(0.0, theta));
    cd em = std::exp(cd(0.0, -theta));
    return {ig * (-ep) * u[2], ig * (-ep) * u[3], ig * em * u[0], ig * em * u[1]};
}

struct AuxState {
    Mat2 u;
    Row2 wa;  // int e^{-lambda_a(t-s)} U_row1(s) ds
    Row2 wc;  // same with lambda_c for row 2
};

struct AuxDeriv {
    Mat2 du;
    Row2 dwa, dwc;
};

AuxDeriv deriv(const AuxState& s, double t, double g_eff, double theta,
               const DriveSchedule& sched, double pref_a, double lam_a, double pref_c,
               double lam_c) {
    AuxDeriv d;
    d.du = apply_T(g_eff * sched.factor(t), theta, s.u);
    d.du[0] -= pref_a * s.wa[0];
    d.du[1] -= pref_a * s.wa[1];
    d.du[2] -= pref_c * s.wc[0];
    d.du[3] -= pref_c * s.wc[1];
    d.dwa = {-lam_a * s.wa[0] + s.u[0], -lam_a * s.wa[1] + s.u[1]};
    d.dwc = {-lam_c * s.wc[0] + s.u[2], -lam_c * s.wc[1] + s.u[3]};
    return d;
}

AuxState advance(const AuxState& s, const AuxDeriv& d, double h) {
    AuxState out;
    for (int k = 0; k < 4; ++k) out.u[k] = s.u[k] + h * d.du[k];
    for (int k = 0; k < 2; ++k) {
        out.wa[k] = s.wa[k] + h * d.dwa[k];
        out.wc[k] = s.wc[k] + h * d.dwc[k];
    }
    return out;
}

}  // namespace

const NoiseCovariance& NoiseCovarianceSeries::at_time(double t) const {
    double k = t / grid.dt;
    long n = std::lround(k);
    if (n < 0 || n >= static_cast<long>(points.size()) || std::abs(k - n) > 1e-6)
        throw std::invalid_argument("noise covariance: requested time is not a grid point");
    return points[static_cast<std::size_t>(n)];
}

GreensFunction solve_greens(double g_eff, double theta, const DriveSchedule& schedule,
                            const LorentzianBath& bath_a, const LorentzianBath& bath_c,
                            const TimeGrid& grid) {
    grid.validate();
    bath_a.validate();
    bath_c.validate();
    if (schedule.tau_off && (*schedule.tau_off < 0.0 || *schedule.tau_off > grid.t_max()))
        throw std::invalid_argument("solve_greens: tau_off outside the simulation window");

    double pref_a = kPi * bath_a.gamma * bath_a.lambda;
    double pref_c = kPi * bath_c.gamma * bath_c.lambda;
    double la = bath_a.lambda, lc = bath_c.lambda;

    GreensFunction g;
    g.grid = grid;
    g.theta = theta;
    std::size_t n_total = static_cast<std::size_t>(grid.n_steps) + 1;
    g.u11.resize(n_total);
    g.u12.resize(n_total);
    g.u21.resize(n_total);
    g.u22.resize(n_total);

    AuxState s{};
    s.u = {cd(1), cd(0), cd(0), cd(1)};
    g.u11[0] = s.u[0];
    g.u12[0] = s.u[1];
    g.u21[0] = s.u[2];
    g.u22[0] = s.u[3];

    double dt = grid.dt;
    for (long n = 0; n < grid.n_steps; ++n) {
        double t = dt * static_cast<double>(n);
        auto k1 = deriv(s, t, g_eff, theta, schedule, pref_a, la, pref_c, lc);
        auto k2 = deriv(advance(s, k1, dt / 2), t + dt / 2, g_eff, theta, schedule, pref_a, la,
                        pref_c, lc);
        auto k3 = deriv(advance(s, k2, dt / 2), t + dt / 2, g_eff, theta, schedule, pref_a, la,
                        pref_c, lc);
        auto k4 = deriv(advance(s, k3, dt), t + dt, g_eff, theta, schedule, pref_a, la, pref_c, lc);
        for (int k = 0; k < 4; ++k)
            s.u[k] += dt / 6.0 * (k1.du[k] + 2.0 * k2.du[k] + 2.0 * k3.du[k] + k4.du[k]);
        for (int k = 0; k < 2; ++k) {
            s.wa[k] += dt / 6.0 * (k1.dwa[k] + 2.0 * k2.dwa[k] + 2.0 * k3.dwa[k] + k4.dwa[k]);
            s.wc[k] += dt / 6.0 * (k1.dwc[k] + 2.0 * k2.dwc[k] + 2.0 * k3.dwc[k] + k4.dwc[k]);
        }
        if (!(std::abs(s.u[0]) < 1e100))
            throw std::runtime_error("solve_greens: propagator overflowed, reduce the step size");
        std::size_t i = static_cast<std::size_t>(n) + 1;
        g.u11[i] = s.u[0];
        g.u12[i] = s.u[1];
        g.u21[i] = s.u[2];
        g.u22[i] = s.u[3];
    }
    return g;
}

GreensFunction solve_greens_volterra(double g_eff, double theta, const DriveSchedule& schedule,
                                     const LorentzianBath& bath_a, const LorentzianBath& bath_c,
                                     const TimeGrid& grid) {
    grid.validate();
    bath_a.validate();
    bath_c.validate();

    double pref_a = kPi * bath_a.gamma * bath_a.lambda;
    double pref_c = kPi * bath_c.gamma * bath_c.lambda;
    double la = bath_a.lambda, lc = bath_c.lambda;
    double dt = grid.dt;

    std::size_t n_total = static_cast<std::size_t>(grid.n_steps) + 1;
    std::vector<Mat2> us(n_total);
    us[0] = {cd(1), cd(0), cd(0), cd(1)};

    // Running trapezoid history sums exploiting the exponential decay of the
    // kernel, updated once per step; the final rhs endpoint is handled by a
    // predictor-corrector pair.
    Row2 ha{cd(0), cd(0)}, hc{cd(0), cd(0)};  // int_0^{t_n} e^{-lam(t_n-s)} U_row(s) ds

    auto rhs = [&](double t, const Mat2& u, const Row2& mem_a, const Row2& mem_c) -> Mat2 {
        Mat2 d = apply_T(g_eff * schedule.factor(t), theta, u);
        d[0] -= pref_a * mem_a[0];
        d[1] -= pref_a * mem_a[1];
        d[2] -= pref_c * mem_c[0];
        d[3] -= pref_c * mem_c[1];
        return d;
    };

    for (long n = 0; n < grid.n_steps; ++n) {
        double t = dt * static_cast<double>(n);
        const Mat2& u0 = us[static_cast<std::size_t>(n)];
        Mat2 f0 = rhs(t, u0, ha, hc);
        // predictor
        Mat2 up;
        for (int k = 0; k < 4; ++k) up[k] = u0[k] + dt * f0[k];
        // trapezoid extension of the memory integral to t_{n+1}
        double ea = std::exp(-la * dt), ec = std::exp(-lc * dt);
        auto mem_next = [&](const Row2& h, double e, const cd* row0, const cd* row1) -> Row2 {
            return {e * h[0] + dt / 2.0 * (e * row0[0] + row1[0]),
                    e * h[1] + dt / 2.0 * (e * row0[1] + row1[1])};
        };
        cd row_a0[2] = {u0[0], u0[1]}, row_c0[2] = {u0[2], u0[3]};
        cd row_ap[2] = {up[0], up[1]}, row_cp[2] = {up[2], up[3]};
        Row2 ha_p = mem_next(ha, ea, row_a0, row_ap);
        Row2 hc_p = mem_next(hc, ec, row_c0, row_cp);
        Mat2 f1 = rhs(t + dt, up, ha_p, hc_p);
        Mat2 u1;
        for (int k = 0; k < 4; ++k) u1[k] = u0[k] + dt / 2.0 * (f0[k] + f1[k]);
        cd row_a1[2] = {u1[0], u1[1]}, row_c1[2] = {u1[2], u1[3]};
        ha = mem_next(ha, ea, row_a0, row_a1);
        hc = mem_next(hc, ec, row_c0, row_c1);
        us[static_cast<std::size_t>(n) + 1] = u1;
    }

    GreensFunction g;
    g.grid = grid;
    g.theta = theta;
    g.u11.resize(n_total);
    g.u12.resize(n_total);
    g.u21.resize(n_total);
    g.u22.resize(n_total);
    for (std::size_t i = 0; i < n_total; ++i) {
        g.u11[i] = us[i][0];
        g.u12[i] = us[i][1];
        g.u21[i] = us[i][2];
        g.u22[i] = us[i][3];
    }
    return g;
}

NoiseCovarianceSeries noise_covariance(const GreensFunction& u, const LorentzianBath& bath_a,
                                       const LorentzianBath& bath_c) {
    bath_a.validate();
    bath_c.validate();
    double dt = u.grid.dt;
    std::size_t n_total = u.size();

    // Per bath b: D_ij(t) = pref * \int\int_0^t U_ib(p) e^{-lam|p-p'|} U_jb*(p') dp dp'
    // split at p=p' into two ordered halves with running accumulators.
    struct BathAcc {
        double lam, pref, e;
        cd y[2]{}, z[2]{};
        cd p[2][2]{}, q[2][2]{};
        cd d[2][2]{};
    };
    BathAcc acc[2];
    acc[0] = {bath_a.lambda, kPi * bath_a.gamma * bath_a.lambda,
              std::exp(-bath_a.lambda * dt)};
    acc[1] = {bath_c.lambda, kPi * bath_c.gamma * bath_c.lambda,
              std::exp(-bath_c.lambda * dt)};

    double na = bath_a.n_bar, nc = bath_c.n_bar;

    NoiseCovarianceSeries out;
    out.grid = u.grid;
    out.points.resize(n_total);
    out.points[0] = NoiseCovariance{};

    auto entry = [&](std::size_t n, int i, int b) -> cd {
        const std::vector<cd>* rows[2][2] = {{&u.u11, &u.u12}, {&u.u21, &u.u22}};
        return (*rows[i][b])[n];
    };

    for (std::size_t n = 0; n + 1 < n_total; ++n) {
        for (int b = 0; b < 2; ++b) {
            BathAcc& a = acc[b];
            cd a0[2], a1[2], b0[2], b1[2];
            for (int i = 0; i < 2; ++i) {
                a0[i] = entry(n, i, b);
                a1[i] = entry(n + 1, i, b);
                b0[i] = std::conj(a0[i]);
                b1[i] = std::conj(a1[i]);
            }
            cd ynew[2], znew[2];
            for (int j = 0; j < 2; ++j) ynew[j] = a.e * a.y[j] + dt / 2.0 * (a.e * b0[j] + b1[j]);
            for (int i = 0; i < 2; ++i) znew[i] = a.e * a.z[i] + dt / 2.0 * (a.e * a0[i] + a1[i]);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    a.p[i][j] += dt / 2.0 * (a0[i] * a.y[j] + a1[i] * ynew[j]);
                    a.q[i][j] += dt / 2.0 * (b0[j] * a.z[i] + b1[j] * znew[i]);
                    a.d[i][j] = a.pref * (a.p[i][j] + a.q[i][j]);
                }
            for (int k = 0; k < 2; ++k) {
                a.y[k] = ynew[k];
                a.z[k] = znew[k];
            }
        }
        NoiseCovariance nc_pt;
        nc_pt.t = dt * static_cast<double>(n + 1);
        const auto& da = acc[0].d;
        const auto& dc = acc[1].d;
        nc_pt.v1v1d = ((na + 1.0) * da[0][0] + nc * dc[0][0]).real();
        nc_pt.v1dv1 = (na * std::conj(da[0][0]) + (nc + 1.0) * std::conj(dc[0][0])).real();
        nc_pt.v2v2d = ((na + 1.0) * da[1][1] + nc * dc[1][1]).real();
        nc_pt.v2dv2 = (na * std::conj(da[1][1]) + (nc + 1.0) * std::conj(dc[1][1])).real();
        nc_pt.v1v2d = (na + 1.0) * da[0][1] + nc * dc[0][1];
        nc_pt.v2dv1 = na * std::conj(da[1][0]) + (nc + 1.0) * std::conj(dc[1][0]);
        out.points[n + 1] = nc_pt;
    }
    return out;
}

CovarianceMatrix assemble_cm(cd u11, cd u12, cd u21, cd u22, const NoiseCovariance& n,
                             double theta, double t) {
    double v11 = (std::norm(u11) + std::norm(u12) + n.v1v1d + n.v1dv1) / 2.0;
    double v44 = (std::norm(u21) + std::norm(u22) + n.v2v2d + n.v2dv2) / 2.0;
    cd grp = u11 * std::conj(u21) + std::conj(u22) * u12 + n.v1v2d + n.v2dv1;
    double v14 = (std::exp(cd(0.0, -theta)) * grp).imag() / 2.0;

    CovarianceMatrix cm;
    cm.t = t;
    cm.v = Eigen::MatrixXd::Zero(4, 4);
    cm.v(0, 0) = cm.v(1, 1) = v11;
    cm.v(2, 2) = cm.v(3, 3) = v44;
    cm.v(0, 3) = cm.v(3, 0) = v14;
    cm.v(1, 2) = cm.v(2, 1) = v14;
    return cm;
}

CovarianceTrajectory nmhl_run(double g_eff, double theta, const LorentzianBath& bath_a,
                              const LorentzianBath& bath_c, const DriveSchedule& schedule,
                              const TimeGrid& grid, long stride) {
    if (stride < 1) stride = 1;
    GreensFunction u = solve_greens(g_eff, theta, schedule, bath_a, bath_c, grid);
    NoiseCovarianceSeries nz = noise_covariance(u, bath_a, bath_c);
    CovarianceTrajectory traj;
    for (std::size_t i = 0; i < u.size(); ++i) {
        long n = static_cast<long>(i);
        if (n != 0 && n % stride != 0 && n != grid.n_steps) continue;
        traj.points.push_back(
            assemble_cm(u.u11[i], u.u12[i], u.u21[i], u.u22[i], nz.points[i], theta,
                        u.time_at(i)));
    }
    return traj;
}

}  // namespace tmsq
