#include "sympkit/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace sympkit {

double frob(const Matrix& a) { return a.norm(); }

bool all_finite(const Matrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const Complex& v = a(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        }
    return true;
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double hermitian_residual(const Matrix& a) { return (a - a.adjoint()).norm(); }

RealVector hermitian_eigenvalues(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigenvalues: eigen decomposition failed");
    return solver.eigenvalues();
}

double min_eigenvalue(const Matrix& hermitian) {
    const RealVector ev = hermitian_eigenvalues(hermitian);
    return ev(0);
}

double max_eigenvalue(const Matrix& hermitian) {
    const RealVector ev = hermitian_eigenvalues(hermitian);
    return ev(ev.size() - 1);
}

HermitianRank hermitian_rank(const Matrix& a, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_rank: eigen decomposition failed");

    HermitianRank out;
    out.eigenvalues = solver.eigenvalues();
    const Eigen::Index dim = out.eigenvalues.size();
    const double scale = out.eigenvalues.cwiseAbs().maxCoeff();
    const double cutoff = rel_tol * scale;

    std::vector<Eigen::Index> kernel_idx, range_idx;
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(out.eigenvalues(i)) <= cutoff)
            kernel_idx.push_back(i);
        else
            range_idx.push_back(i);
    }
    out.rank = static_cast<int>(range_idx.size());
    out.kernel.resize(dim, static_cast<Eigen::Index>(kernel_idx.size()));
    out.range.resize(dim, static_cast<Eigen::Index>(range_idx.size()));
    for (std::size_t j = 0; j < kernel_idx.size(); ++j)
        out.kernel.col(static_cast<Eigen::Index>(j)) = solver.eigenvectors().col(kernel_idx[j]);
    for (std::size_t j = 0; j < range_idx.size(); ++j)
        out.range.col(static_cast<Eigen::Index>(j)) = solver.eigenvectors().col(range_idx[j]);
    return out;
}

namespace {

Eigen::JacobiSVD<Matrix> svd_of(const Matrix& a, unsigned options) {
    Eigen::JacobiSVD<Matrix> svd(a, options);
    return svd;
}

} // namespace

int numerical_rank(const Matrix& a, double rel_tol) {
    if (a.size() == 0) return 0;
    const auto svd = svd_of(a, 0);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    const double cutoff = rel_tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

Matrix range_basis(const Matrix& a, double rel_tol) {
    if (a.size() == 0) return Matrix(a.rows(), 0);
    const auto svd = svd_of(a, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return Matrix(a.rows(), 0);
    const double cutoff = rel_tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return svd.matrixU().leftCols(rank);
}

double max_principal_angle(const Matrix& u, const Matrix& v) {
    if (u.cols() == 0 && v.cols() == 0) return 0.0;
    if (u.cols() != v.cols()) return std::acos(0.0);  // pi/2 for dimension mismatch
    const Matrix overlap = u.adjoint() * v;
    const auto svd = svd_of(overlap, 0);
    const auto& sv = svd.singularValues();
    const double smallest_cosine = std::clamp(sv(sv.size() - 1), -1.0, 1.0);
    return std::acos(smallest_cosine);
}

Matrix lstsq(const Matrix& a, const Matrix& b) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.solve(b);
}

Matrix null_space(const Matrix& a, double rel_tol) {
    if (a.size() == 0) return Matrix::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    const double cutoff = rel_tol * largest;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (largest > 0.0 && sv(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(a.cols() - rank);
}

Matrix hermitian_pinv(const Matrix& a, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_pinv: eigen decomposition failed");
    const RealVector ev = solver.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    const double cutoff = rel_tol * scale;
    RealVector inv = RealVector::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) > cutoff) inv(i) = 1.0 / ev(i);
    return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().adjoint();
}

} // namespace sympkit
