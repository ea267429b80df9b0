#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tmsq {

// Symmetric quadrature covariance matrix, entry (i,j) = <u_i u_j + u_j u_i>/2,
// in the ordering (X_a, Y_a, X_c, Y_c) for dim 4 and
// (X_a, Y_a, X_b, Y_b, X_c, Y_c) for dim 6.
struct CovarianceMatrix {
    double t = 0.0;
    Eigen::MatrixXd v;

    int dim() const { return static_cast<int>(v.rows()); }
};

struct CovarianceTrajectory {
    std::vector<CovarianceMatrix> points;

    const CovarianceMatrix& back() const { return points.back(); }
    std::size_t size() const { return points.size(); }
};

// Symplectic eigenvalues (moduli of the eigenvalues of i*Omega*V, one per
// mode), sorted ascending. All >= 1/2 for a physical quantum state.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& v);

double min_symplectic_eigenvalue(const Eigen::MatrixXd& v);

bool is_symmetric(const Eigen::MatrixXd& v, double tol = 1e-10);

bool is_physical(const Eigen::MatrixXd& v, double tol = 1e-6);

// Vacuum covariance I_n / 2.
Eigen::MatrixXd vacuum_cm(int dim);

}  // namespace tmsq
