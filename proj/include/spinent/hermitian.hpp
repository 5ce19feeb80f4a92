#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "spinent/errors.hpp"

namespace spinent {

using Complex = std::complex<double>;

// Dense Hermitian matrix, rows/columns indexed by ascending m1.
using HermitianMatrix = Eigen::MatrixXcd;

inline void require_hermitian(const HermitianMatrix& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) throw NotHermitian("matrix is not square");
    double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw NotHermitian("matrix deviates from Hermiticity by " + std::to_string(dev));
}

/* Eigenvalues of a Hermitian matrix, descending. Backed by Eigen's
 * self-adjoint solver; its failure (never seen on matrices this small
 * and well-scaled) surfaces as NoConvergence. */
inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& m) {
    require_hermitian(m);
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("hermitian eigensolver failed to converge");
    const auto& ev = solver.eigenvalues();
    std::vector<double> out(static_cast<size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        out[static_cast<size_t>(i)] = ev(ev.size() - 1 - i);
    return out;
}

// Same, but keeps the eigenvectors (column k belongs to value k).
inline std::pair<std::vector<double>, Eigen::MatrixXcd>
hermitian_eigensystem(const HermitianMatrix& m) {
    require_hermitian(m);
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("hermitian eigensolver failed to converge");
    const auto& ev = solver.eigenvalues();
    const Eigen::Index d = ev.size();
    std::vector<double> vals(static_cast<size_t>(d));
    Eigen::MatrixXcd vecs(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        vals[static_cast<size_t>(i)] = ev(d - 1 - i);
        vecs.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return {std::move(vals), std::move(vecs)};
}

} // namespace spinent
