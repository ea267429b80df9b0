#include <doctest.h>

#include <cmath>

#include "tmsq/analysis.hpp"
#include "tmsq/model.hpp"

using namespace tmsq;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd structured_cm(double v11, double v44, double v14) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
    v(0, 0) = v(1, 1) = v11;
    v(2, 2) = v(3, 3) = v44;
    v(0, 3) = v(3, 0) = v14;
    v(1, 2) = v(2, 1) = v14;
    return v;
}
}  // namespace

TEST_CASE("optimal angle") {
    CHECK(optimal_angle(0.01, 2e-3, 2e-3) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
    CHECK(optimal_angle(1e-12, 3e-3, 1e-3) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(optimal_angle(0.010608, kPi * 1e-3, kPi * 1.5e-3) ==
          doctest::Approx(0.8223).epsilon(1e-4));
    CHECK_THROWS_AS(optimal_angle(0.0, 1e-3, 1e-3), std::invalid_argument);
}

TEST_CASE("variance rotation") {
    Eigen::MatrixXd vac = 0.5 * Eigen::MatrixXd::Identity(4, 4);
    for (double phi : {0.0, 0.3, 1.2}) {
        auto [dx, dy] = variance_xy(vac, phi);
        CHECK(dx == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(dy == doctest::Approx(0.5).epsilon(1e-12));
    }
    auto v = structured_cm(0.7, 0.9, -0.2);
    auto [dx0, dy0] = variance_xy(v, 0.0);
    CHECK(dx0 == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(dy0 == doctest::Approx(0.9).epsilon(1e-12));
    // trace identity at every angle
    for (int k = 0; k < 36; ++k) {
        auto [dx, dy] = variance_xy(v, k * kPi / 36.0);
        CHECK(dx + dy == doctest::Approx(0.7 + 0.9).epsilon(1e-10));
    }
}

TEST_CASE("optimal variances are the 2x2 eigenvalues") {
    auto ov = optimal_variances(structured_cm(0.5, 0.5, 0.0));
    CHECK(ov.dx == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ov.dy == doctest::Approx(0.5).epsilon(1e-12));

    auto sym = optimal_variances(structured_cm(0.8, 0.8, 0.3));
    CHECK(sym.dx == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sym.dy == doctest::Approx(1.1).epsilon(1e-12));

    Eigen::MatrixXd bad = structured_cm(0.7, 0.9, -0.2);
    bad(1, 1) = 0.75;
    CHECK_THROWS_AS(optimal_variances(bad), std::invalid_argument);
}

TEST_CASE("eigen-variance beats every scanned angle") {
    auto v = structured_cm(0.62, 1.45, -0.31);
    auto ov = optimal_variances(v);
    double best = 1e9;
    for (int k = 0; k < 360; ++k) {
        double phi = -kPi / 2.0 + k * kPi / 360.0;
        best = std::min(best, variance_xy(v, phi).first);
    }
    CHECK(ov.dx <= best + 1e-9);
    CHECK(variance_xy(v, ov.angle).first == doctest::Approx(ov.dx).epsilon(1e-9));
    CHECK(ov.angle > -kPi / 2.0);
    CHECK(ov.angle <= kPi / 2.0);
    CHECK(ov.dx + ov.dy == doctest::Approx(v(0, 0) + v(3, 3)).epsilon(1e-10));
}

TEST_CASE("squeezing level") {
    CHECK(squeezing_level(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(squeezing_level(0.25) == doctest::Approx(3.0103).epsilon(1e-4));
    CHECK(squeezing_level(0.13688) == doctest::Approx(5.626).epsilon(1e-3));
    CHECK(squeezing_level(0.2) > squeezing_level(0.3));
    CHECK_THROWS_AS(squeezing_level(0.0), std::invalid_argument);
    CHECK_THROWS_AS(squeezing_level(-0.1), std::invalid_argument);
}

TEST_CASE("generation point agrees across environments in the markov limit") {
    SystemParams p;
    p.g = p.G = 0.2;
    LorentzianBath ba{1e-3, 1.0, 0.0, BathMode::optical};
    LorentzianBath bc{1.5e-3, 1.0, 0.0, BathMode::microwave};
    auto rm = generation_point(p, ba, bc, EnvKind::markov, 100.0, 0.01);
    auto rs = generation_point(p, ba, bc, EnvKind::structured, 100.0, 0.01);
    CHECK(std::abs(rm.dx - rs.dx) <= 0.01);
    CHECK(rm.dx_opt <= rm.dx + 1e-12);
    CHECK(rm.dy <= rm.dy_opt + 1e-12);
}

TEST_CASE("generation sweep runs in input order and tolerates failures") {
    SystemParams p;
    LorentzianBath ba{1e-3, 1e-2, 0.0, BathMode::optical};
    LorentzianBath bc{1.5e-3, 1.5e-2, 0.0, BathMode::microwave};
    std::vector<std::vector<std::pair<std::string, double>>> grid = {
        {{"g", 0.1}, {"G", 0.1}},
        {{"g", 0.15}, {"G", 0.15}},
        {{"bogus", 1.0}},
        {{"g", 0.2}, {"G", 0.2}},
    };
    auto res = sweep_generation(p, ba, bc, EnvKind::markov, 50.0, 0.01, grid, 2);
    REQUIRE(res.points.size() == 4);
    CHECK(res.points[0].ok);
    CHECK_FALSE(res.points[2].ok);
    CHECK(res.points[2].error.find("bogus") != std::string::npos);
    // squeezing grows with coupling
    CHECK(res.points[0].s_db < res.points[1].s_db);
    CHECK(res.points[1].s_db < res.points[3].s_db);
    // deterministic across thread counts
    auto res1 = sweep_generation(p, ba, bc, EnvKind::markov, 50.0, 0.01, grid, 1);
    CHECK(res1.points[3].s_db == res.points[3].s_db);
}

TEST_CASE("persistence sweep distinguishes environments") {
    SystemParams p;
    p.g = p.G = 0.2;
    LorentzianBath ba{1e-3, 1e-2, 0.0, BathMode::optical};
    LorentzianBath bc{1e-3, 1e-2, 0.0, BathMode::microwave};
    auto structured =
        sweep_persistence(p, ba, bc, EnvKind::structured, {50.0, 150.0}, 400.0, 0.01, 2);
    CHECK(structured.points[0].ok);
    CHECK(structured.points[0].s_db < structured.points[1].s_db);

    LorentzianBath bam{1e-3, 1.0, 0.0, BathMode::optical};
    LorentzianBath bcm{1e-3, 1.0, 0.0, BathMode::microwave};
    auto markov = sweep_persistence(p, bam, bcm, EnvKind::markov, {50.0}, 2000.0, 0.01, 1);
    CHECK(std::abs(markov.points[0].s_db) <= 0.1);

    auto bad = sweep_persistence(p, ba, bc, EnvKind::markov, {500.0}, 400.0, 0.01, 1);
    CHECK_FALSE(bad.points[0].ok);
}
