#include "tmsq/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

namespace tmsq {

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& v) {
    const int dim = static_cast<int>(v.rows());
    if (dim % 2 != 0 || v.cols() != dim)
        throw std::invalid_argument("symplectic_eigenvalues: need a square even-dimensional matrix");
    // Omega for the ordering (X1, Y1, X2, Y2, ...)
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m < dim / 2; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    Eigen::MatrixXd w = omega * v;
    Eigen::EigenSolver<Eigen::MatrixXd> es(w, false);
    std::vector<double> mods;
    mods.reserve(dim);
    for (int k = 0; k < dim; ++k) mods.push_back(std::abs(es.eigenvalues()(k)));
    std::sort(mods.begin(), mods.end());
    // moduli come in pairs; keep one per mode
    std::vector<double> out;
    for (int m = 0; m < dim / 2; ++m) out.push_back(0.5 * (mods[2 * m] + mods[2 * m + 1]));
    return out;
}

double min_symplectic_eigenvalue(const Eigen::MatrixXd& v) {
    return symplectic_eigenvalues(v).front();
}

bool is_symmetric(const Eigen::MatrixXd& v, double tol) {
    return (v - v.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_physical(const Eigen::MatrixXd& v, double tol) {
    return is_symmetric(v, 1e-8) && min_symplectic_eigenvalue(v) >= 0.5 - tol;
}

Eigen::MatrixXd vacuum_cm(int dim) {
    return 0.5 * Eigen::MatrixXd::Identity(dim, dim);
}

}  // namespace tmsq
