#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "majbound/config.hpp"
#include "majbound/errors.hpp"

namespace majbound {

using Complex = std::complex<double>;

// Dense complex matrix with row-major storage; the row-major layout is also
// the wire order used by the JSON schema.
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace spectral {

inline double max_abs(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kTol.hermiticity) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a - a.adjoint()) <= tol;
}

inline bool is_unitary(const ComplexMatrix& u, double tol = kTol.unitarity) {
    if (u.rows() != u.cols()) return false;
    ComplexMatrix gram = u.adjoint() * u;
    gram -= ComplexMatrix::Identity(u.cols(), u.cols());
    return max_abs(gram) <= tol;
}

// Hermitian eigensystem with eigenvalues sorted non-increasing and the
// eigenvector columns aligned with them.
struct EigenSystem {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
};

// Singular value decomposition A = U Sigma V^dagger with full unitary U, V
// and singular values sorted non-increasing.
struct SvdSystem {
    RealVector singular_values;
    ComplexMatrix left_vectors;
    ComplexMatrix right_vectors;
};

/// Eigendecomposition of a Hermitian matrix. Postconditions enforced:
/// descending eigenvalues, unitary eigenvectors within kTol.unitarity and
/// reconstruction within kTol.reconstruction.
inline EigenSystem eig_hermitian(const ComplexMatrix& a) {
    require(a.rows() == a.cols(), errc::not_square,
            "eig_hermitian needs a square matrix, got " + std::to_string(a.rows()) + "x" +
                std::to_string(a.cols()));
    require(is_hermitian(a), errc::not_hermitian,
            "matrix exceeds hermiticity tolerance " + std::to_string(kTol.hermiticity));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
    require(solver.info() == Eigen::Success, errc::convergence_failure,
            "self-adjoint eigensolver did not converge");

    const Eigen::Index n = a.rows();
    EigenSystem out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();

    ComplexMatrix lambda = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) lambda(i, i) = out.eigenvalues(i);
    require(is_unitary(out.eigenvectors), errc::internal_error, "eigenvector matrix not unitary");
    require(max_abs(out.eigenvectors * lambda * out.eigenvectors.adjoint() - a) <=
                kTol.reconstruction,
            errc::internal_error, "eigendecomposition reconstruction error too large");
    return out;
}

/// Eigenvalues only, descending. Same preconditions as eig_hermitian; used by
/// the subset enumeration where eigenvectors are not needed.
inline RealVector eig_hermitian_values(const ComplexMatrix& a) {
    require(a.rows() == a.cols(), errc::not_square, "eigenvalues need a square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    require(solver.info() == Eigen::Success, errc::convergence_failure,
            "self-adjoint eigensolver did not converge");
    return solver.eigenvalues().reverse();
}

/// Full SVD. Postconditions: non-increasing nonnegative singular values and
/// reconstruction within kTol.reconstruction.
inline SvdSystem svd(const ComplexMatrix& a) {
    require(a.rows() > 0 && a.cols() > 0, errc::dimension_mismatch, "svd needs a nonempty matrix");

    Eigen::JacobiSVD<Eigen::MatrixXcd> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    require(solver.info() == Eigen::Success, errc::convergence_failure,
            "Jacobi SVD did not converge");

    SvdSystem out;
    out.singular_values = solver.singularValues();
    out.left_vectors = solver.matrixU();
    out.right_vectors = solver.matrixV();

    ComplexMatrix sigma = ComplexMatrix::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
        sigma(i, i) = out.singular_values(i);
    }
    require(max_abs(out.left_vectors * sigma * out.right_vectors.adjoint() - a) <=
                kTol.reconstruction,
            errc::internal_error, "svd reconstruction error too large");
    return out;
}

/// Largest singular value of a real matrix (used by the rank-one bound).
inline double top_singular_value(const RealMatrix& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(a);
    return solver.singularValues().size() == 0 ? 0.0 : solver.singularValues()(0);
}

inline double trace_with(const ComplexMatrix& op, const ComplexMatrix& rho) {
    return (op * rho).trace().real();
}

} // namespace spectral
} // namespace majbound
