#include "tmsq/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>

namespace tmsq {

namespace {
constexpr double kDenomFloor = 1e-12;

double denom(const SystemParams& p) {
    double d = p.delta_c * p.delta_c - kTildeOmegaB * kTildeOmegaB;
    if (std::abs(d) < kDenomFloor)
        throw std::invalid_argument("effective model: delta_c too close to the mechanical frequency");
    return d;
}
}  // namespace

double effective_coupling(const SystemParams& p) {
    p.validate();
    return 2.0 * kTildeOmegaB * p.g * p.G * std::exp(2.0 * p.r) / denom(p);
}

double energy_shift(const SystemParams& p) {
    p.validate();
    return -2.0 * (p.G * p.G + p.g * p.g) * std::exp(2.0 * p.r) * kTildeOmegaB / denom(p);
}

double resolved_delta_a(const SystemParams& p) {
    if (std::isnan(p.delta_a)) return -p.delta_c + energy_shift(p);
    return p.delta_a;
}

MpaFrame mpa_frame(double Delta_b, double Omega_b) {
    if (!(Delta_b > 0.0)) throw std::invalid_argument("mpa_frame: Delta_b must be > 0");
    double x = 2.0 * Omega_b / Delta_b;
    if (!(std::abs(x) < 1.0))
        throw std::invalid_argument("mpa_frame: |2 Omega_b / Delta_b| >= 1, parametric drive unstable");
    double r = 0.5 * std::atanh(x);
    return {r, Delta_b / std::cosh(2.0 * r)};
}

ValidityReport validity_check(const SystemParams& p, double ratio_threshold) {
    ValidityReport rep;
    rep.ratio_threshold = ratio_threshold;

    double lo = std::min(p.g, p.G), hi = std::max(p.g, p.G);
    rep.coupling_range.pass = (lo >= 0.1 && hi <= 0.3);
    rep.coupling_range.margin = std::min(lo - 0.1, 0.3 - hi);

    rep.mpa_range.pass = (p.r <= 0.2);
    rep.mpa_range.margin = 0.2 - p.r;

    double da = resolved_delta_a(p);
    double det = std::min(std::abs(kTildeOmegaB - da), std::abs(kTildeOmegaB - p.delta_c));
    double coup = std::max(p.g, p.G) * std::exp(p.r);
    rep.detuning_ratio = coup > 0.0 ? det / coup : std::numeric_limits<double>::infinity();
    rep.large_detuning.pass = (rep.detuning_ratio >= ratio_threshold);
    rep.large_detuning.margin = rep.detuning_ratio - ratio_threshold;
    return rep;
}

EffectiveModel effective_model(const SystemParams& p, double ratio_threshold) {
    EffectiveModel m;
    m.g_eff = effective_coupling(p);
    m.delta = energy_shift(p);
    m.theta = p.alpha + p.phi;
    m.valid = validity_check(p, ratio_threshold);
    return m;
}

Eigen::Matrix<double, 6, 6> transition_matrix(const SystemParams& p, double Delta_a) {
    p.validate();
    double Ge = 2.0 * p.G * std::exp(p.r);
    double ge = 2.0 * p.g * std::exp(p.r);
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
    m(0, 1) = Delta_a;
    m(1, 0) = -Delta_a;
    m(1, 2) = -Ge;
    m(2, 3) = kTildeOmegaB;
    m(3, 0) = -Ge;
    m(3, 2) = -kTildeOmegaB;
    m(3, 4) = -ge;
    m(4, 5) = p.delta_c;
    m(5, 2) = -ge;
    m(5, 4) = -p.delta_c;
    return m;
}

namespace {

struct EigPoint {
    std::array<std::complex<double>, 6> lam;
    Eigen::Matrix<std::complex<double>, 6, 6> vec;
};

EigPoint eig_at(const SystemParams& p, double da) {
    Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(transition_matrix(p, da));
    EigPoint out;
    for (int k = 0; k < 6; ++k) {
        out.lam[k] = es.eigenvalues()(k);
        out.vec.col(k) = es.eigenvectors().col(k).normalized();
    }
    return out;
}

// Reorder `cur` so column k continues the branch of `prev` column k, using
// greedy maximal eigenvector overlap.
void match_branches(const EigPoint& prev, EigPoint& cur) {
    std::array<bool, 6> used{};
    EigPoint matched;
    for (int k = 0; k < 6; ++k) {
        int best = -1;
        double best_ov = -1.0;
        for (int j = 0; j < 6; ++j) {
            if (used[j]) continue;
            double ov = std::abs(prev.vec.col(k).dot(cur.vec.col(j)));
            if (ov > best_ov) {
                best_ov = ov;
                best = j;
            }
        }
        used[best] = true;
        matched.lam[k] = cur.lam[best];
        matched.vec.col(k) = cur.vec.col(best);
    }
    cur = matched;
}

double max_growth(const SystemParams& p, double da) {
    auto e = eig_at(p, da);
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& l : e.lam) m = std::max(m, l.real());
    return m;
}

// Golden-section maximization of max_growth over [lo, hi].
double refine_peak(const SystemParams& p, double lo, double hi) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = max_growth(p, c), fd = max_growth(p, d);
    while (b - a > 1e-10) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = max_growth(p, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = max_growth(p, d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::vector<double> default_delta_a_grid(double delta_c, int n_points, double half_width) {
    std::vector<double> g(n_points);
    for (int i = 0; i < n_points; ++i)
        g[i] = -delta_c - half_width + 2.0 * half_width * i / (n_points - 1);
    return g;
}

EigenSplitting eigen_splitting(const SystemParams& p, const std::vector<double>& grid) {
    if (grid.size() < 8)
        throw std::invalid_argument("eigen_splitting: grid too coarse, need at least 8 points");

    EigenSplitting out;
    out.delta_a = grid;
    out.branch_hi.resize(grid.size());
    out.branch_lo.resize(grid.size());

    EigPoint prev = eig_at(p, grid[0]);
    std::size_t imax = 0;
    double smax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EigPoint cur = eig_at(p, grid[i]);
        if (i > 0) match_branches(prev, cur);
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& l : cur.lam) {
            hi = std::max(hi, l.real());
            lo = std::min(lo, l.real());
        }
        out.branch_hi[i] = hi;
        out.branch_lo[i] = lo;
        if (hi > smax) {
            smax = hi;
            imax = i;
        }
        prev = cur;
    }

    if (smax < 1e-12) {
        // no anticrossing, decoupled case
        out.g_eff_num = 0.0;
        out.delta_num = 0.0;
        return out;
    }
    if (imax == 0 || imax + 1 == grid.size())
        throw std::invalid_argument("eigen_splitting: extremum on grid boundary, widen or refine the scan");

    double lo = grid[imax >= 2 ? imax - 2 : 0];
    double hi = grid[std::min(imax + 2, grid.size() - 1)];
    double da_star = refine_peak(p, lo, hi);
    out.g_eff_num = max_growth(p, da_star);
    out.delta_num = da_star + p.delta_c;
    return out;
}

}  // namespace tmsq
