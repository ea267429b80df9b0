#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tmsq/params.hpp"

namespace tmsq {

// Real generator M of the closed-system quadrature flow d/dt u = M u,
// u = (X_a, Y_a, X_b, Y_b, X_c, Y_c). Traceless; spectrum symmetric about 0.
Eigen::Matrix<double, 6, 6> transition_matrix(const SystemParams& p, double Delta_a);

struct EigenSplitting {
    double g_eff_num = 0.0;   // extremal branch half-separation
    double delta_num = 0.0;   // extremum location relative to -delta_c
    // Scan data for the two tracked branches (growth-rate components of the
    // normalized eigenvalues), for plotting against Delta_a.
    std::vector<double> delta_a;
    std::vector<double> branch_hi;
    std::vector<double> branch_lo;
};

// Scans Delta_a, tracks eigenvalue branches of the transition matrix by
// eigenvector-overlap continuity, and extracts the coupling magnitude and
// energy shift from the extremal splitting. Throws if the splitting cannot
// be resolved on the grid.
EigenSplitting eigen_splitting(const SystemParams& p, const std::vector<double>& delta_a_grid);

// Default scan grid: 400 points over [-delta_c - 0.1, -delta_c + 0.1].
std::vector<double> default_delta_a_grid(double delta_c, int n_points = 400, double half_width = 0.1);

}  // namespace tmsq
