#include <doctest.h>

#include <cmath>
#include <complex>

#include "tmsq/analysis.hpp"
#include "tmsq/model.hpp"
#include "tmsq/nonmarkov.hpp"

using namespace tmsq;

namespace {
constexpr double kPi = 3.14159265358979323846;
using cd = std::complex<double>;

LorentzianBath bath(double gamma, double lambda) {
    LorentzianBath b;
    b.gamma = gamma;
    b.lambda = lambda;
    return b;
}
}  // namespace

TEST_CASE("bath-free propagator matches the hyperbolic closed form") {
    double g = 0.0059673, theta = 0.7;
    auto u = solve_greens(g, theta, {}, bath(0.0, 1e-2), bath(0.0, 1.5e-2),
                          TimeGrid::from_span(300.0, 0.01));
    double max_err = 0.0, max_bogo = 0.0;
    for (std::size_t i = 0; i < u.size(); i += 50) {
        double t = u.time_at(i);
        cd ep = std::exp(cd(0.0, theta));
        max_err = std::max(max_err, std::abs(u.u11[i] - std::cosh(g * t)));
        max_err = std::max(max_err, std::abs(u.u12[i] + cd(0, 1) * ep * std::sinh(g * t)));
        max_err = std::max(max_err, std::abs(u.u21[i] - cd(0, 1) * std::conj(ep) * std::sinh(g * t)));
        max_err = std::max(max_err, std::abs(u.u22[i] - std::cosh(g * t)));
        max_bogo = std::max(max_bogo,
                            std::abs(std::norm(u.u11[i]) - std::norm(u.u12[i]) - 1.0));
    }
    CHECK(max_err <= 1e-8);
    CHECK(max_bogo <= 1e-8);
    CHECK(u.u11[0] == cd(1.0, 0.0));
    CHECK(u.u12[0] == cd(0.0, 0.0));
}

TEST_CASE("single-bath undriven propagator matches the damped closed form") {
    double ga = 1e-3, la = 1e-2;
    auto u = solve_greens(0.0, 0.0, {}, bath(ga, la), bath(0.0, 1.5e-2),
                          TimeGrid::from_span(200.0, 0.01));
    cd nu = std::sqrt(cd(la * la - 4.0 * kPi * ga * la, 0.0));
    for (std::size_t i = 0; i < u.size(); i += 100) {
        double t = u.time_at(i);
        cd expect = std::exp(-la * t / 2.0) *
                    (std::cosh(nu * t / 2.0) + (la / nu) * std::sinh(nu * t / 2.0));
        CHECK(std::abs(u.u11[i] - expect) <= 1e-7);
        // the undriven microwave row only feels its own (empty) bath
        CHECK(std::abs(u.u22[i] - 1.0) <= 1e-12);
        CHECK(std::abs(u.u12[i]) <= 1e-12);
    }
}

TEST_CASE("auxiliary-ODE and Volterra solvers agree") {
    double g = 0.010608;
    auto grid = TimeGrid::from_span(100.0, 0.005);
    auto ua = solve_greens(g, 0.3, {}, bath(1e-3, 1e-2), bath(1.5e-3, 1.5e-2), grid);
    auto uv = solve_greens_volterra(g, 0.3, {}, bath(1e-3, 1e-2), bath(1.5e-3, 1.5e-2), grid);
    double err = 0.0;
    for (std::size_t i = 0; i < ua.size(); ++i) {
        err = std::max(err, std::abs(ua.u11[i] - uv.u11[i]));
        err = std::max(err, std::abs(ua.u12[i] - uv.u12[i]));
        err = std::max(err, std::abs(ua.u21[i] - uv.u21[i]));
        err = std::max(err, std::abs(ua.u22[i] - uv.u22[i]));
    }
    CHECK(err <= 1e-5);
}

TEST_CASE("noise correlators vanish at t=0 and stay nonnegative") {
    auto grid = TimeGrid::from_span(100.0, 0.01);
    auto u = solve_greens(0.0059673, 0.0, {}, bath(1e-3, 1e-2), bath(1.5e-3, 1.5e-2), grid);
    auto nz = noise_covariance(u, bath(1e-3, 1e-2), bath(1.5e-3, 1.5e-2));
    CHECK(nz.points[0].v1v1d == 0.0);
    CHECK(nz.points[0].v2dv2 == 0.0);
    for (const auto& p : nz.points) {
        CHECK(p.v1v1d >= -1e-10);
        CHECK(p.v1dv1 >= -1e-10);
        CHECK(p.v2v2d >= -1e-10);
        CHECK(p.v2dv2 >= -1e-10);
    }
    CHECK_THROWS_AS(nz.at_time(0.005), std::invalid_argument);
    CHECK(nz.at_time(50.0).t == doctest::Approx(50.0));
}

TEST_CASE("vacuum channels route through the correct bath") {
    auto grid = TimeGrid::from_span(50.0, 0.01);
    // at zero temperature the annihilation column carries weight n+1, so the
    // <V+ V> correlators are fed only by the microwave (creation) channel and
    // the <V V+> ones only by the optical channel
    SUBCASE("no microwave bath") {
        auto u = solve_greens(0.005, 0.0, {}, bath(1e-3, 1e-2), bath(0.0, 1.5e-2), grid);
        auto nz = noise_covariance(u, bath(1e-3, 1e-2), bath(0.0, 1.5e-2));
        for (const auto& p : nz.points) {
            CHECK(std::abs(p.v1dv1) <= 1e-14);
            CHECK(std::abs(p.v2dv2) <= 1e-14);
        }
    }
    SUBCASE("no optical bath") {
        auto u = solve_greens(0.005, 0.0, {}, bath(0.0, 1e-2), bath(1.5e-3, 1.5e-2), grid);
        auto nz = noise_covariance(u, bath(0.0, 1e-2), bath(1.5e-3, 1.5e-2));
        for (const auto& p : nz.points) {
            CHECK(std::abs(p.v1v1d) <= 1e-14);
            CHECK(std::abs(p.v2v2d) <= 1e-14);
        }
    }
}

TEST_CASE("markov-limit vacuum replenishment of the undriven mode") {
    double ga = 1e-3, la = 1.0;
    double kappa = kPi * ga;
    auto grid = TimeGrid::from_span(300.0, 0.01);
    auto u = solve_greens(0.0, 0.0, {}, bath(ga, la), bath(0.0, 1.0), grid);
    auto nz = noise_covariance(u, bath(ga, la), bath(0.0, 1.0));
    for (double t : {50.0, 150.0, 300.0}) {
        double expect = 1.0 - std::exp(-2.0 * kappa * t);
        CHECK(nz.at_time(t).v1v1d == doctest::Approx(expect).epsilon(0.02));
    }
}

TEST_CASE("assembled CM starts at vacuum and follows the lossless value") {
    NoiseCovariance zero{};
    auto cm0 = assemble_cm(cd(1, 0), cd(0, 0), cd(0, 0), cd(1, 0), zero, 0.0, 0.0);
    CHECK((cm0.v - vacuum_cm(4)).cwiseAbs().maxCoeff() <= 1e-14);

    // lossless squeezing at g t = 0.4
    double gt = 0.4;
    cd ep = std::exp(cd(0.0, 0.3));
    auto cm = assemble_cm(std::cosh(gt), -cd(0, 1) * ep * std::sinh(gt),
                          cd(0, 1) * std::conj(ep) * std::sinh(gt), std::cosh(gt), zero, 0.3,
                          gt);
    CHECK(cm.v(0, 0) == doctest::Approx(std::cosh(2.0 * gt) / 2.0).epsilon(1e-10));
    CHECK(cm.v(0, 0) == doctest::Approx(0.668717).epsilon(1e-5));
}

TEST_CASE("full pipeline yields structured, physical covariances") {
    SystemParams p;
    p.g = p.G = 0.15;
    double g_eff = effective_coupling(p);
    auto traj = nmhl_run(g_eff, 0.0, bath(1e-3, 1e-2), bath(1.5e-3, 1.5e-2), {},
                         TimeGrid::from_span(300.0, 0.01), 100);
    for (const auto& cm : traj.points) {
        CHECK(is_symmetric(cm.v, 1e-10));
        CHECK(std::abs(cm.v(1, 1) - cm.v(0, 0)) <= 1e-12);
        CHECK(std::abs(cm.v(2, 2) - cm.v(3, 3)) <= 1e-12);
        CHECK(std::abs(cm.v(1, 2) - cm.v(0, 3)) <= 1e-12);
        CHECK(min_symplectic_eigenvalue(cm.v) >= 0.5 - 1e-4);
    }
    // squeezing below vacuum at late times in the paper's working point
    double phi = optimal_angle(g_eff, kPi * 1e-3, kPi * 1.5e-3);
    CHECK(variance_xy(traj.back().v, phi).first < 0.5);
}

TEST_CASE("switch-off freezes the drive but keeps bath memory running") {
    double g_eff = 0.0059673;
    DriveSchedule sched{100.0};
    auto grid = TimeGrid::from_span(200.0, 0.01);
    auto u = solve_greens(g_eff, 0.0, sched, bath(0.0, 1e-2), bath(0.0, 1e-2), grid);
    // bath-free: U constant after the switch-off
    auto i_off = static_cast<std::size_t>(10000);
    for (std::size_t i = i_off; i < u.size(); i += 500)
        CHECK(std::abs(u.u11[i] - u.u11[i_off]) <= 1e-10);
    CHECK_THROWS_AS(solve_greens(g_eff, 0.0, DriveSchedule{500.0}, bath(1e-3, 1e-2),
                                 bath(1e-3, 1e-2), grid),
                    std::invalid_argument);
}
