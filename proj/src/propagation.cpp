#include "sympkit/propagation.hpp"

#include "sympkit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sympkit {

namespace {

void check_horizon_index(const SymplecticSystem& sys, int k, const char* who) {
    if (k < 0 || k > sys.horizon())
        throw std::out_of_range(std::string(who) + ": index " + std::to_string(k) +
                                " outside horizon [0, " + std::to_string(sys.horizon()) + "]");
}

void ensure_finite(const Matrix& value, int k, const char* who) {
    if (!all_finite(value))
        throw PropagationError(std::string(who) + ": non-finite entries at k=" + std::to_string(k), k);
}

} // namespace

TrajectorySequence transfer(const SymplecticSystem& sys, Complex lambda, const Matrix& init,
                            int k0, int target) {
    check_horizon_index(sys, k0, "transfer");
    check_horizon_index(sys, target, "transfer");
    if (init.rows() != sys.dim() || init.cols() < 1)
        throw std::invalid_argument("transfer: init must be 2n x m");

    const int lo = std::min(k0, target);
    const int hi = std::max(k0, target);
    std::vector<Matrix> values(static_cast<std::size_t>(hi - lo + 1));
    values[static_cast<std::size_t>(k0 - lo)] = init;
    // downward: z_k = S_k(lambda) z_{k+1}
    for (int k = k0 - 1; k >= lo; --k) {
        values[static_cast<std::size_t>(k - lo)] =
            sys.s_lambda(k, lambda) * values[static_cast<std::size_t>(k + 1 - lo)];
        ensure_finite(values[static_cast<std::size_t>(k - lo)], k, "transfer");
    }
    // upward: z_{k+1} = S_k^{-1}(lambda) z_k
    for (int k = k0; k < hi; ++k) {
        values[static_cast<std::size_t>(k + 1 - lo)] =
            sys.s_lambda_inverse(k, lambda) * values[static_cast<std::size_t>(k - lo)];
        ensure_finite(values[static_cast<std::size_t>(k + 1 - lo)], k + 1, "transfer");
    }
    return TrajectorySequence(lo, std::move(values), lambda);
}

FundamentalMatrix::FundamentalMatrix(int anchor, Matrix anchor_value, std::vector<Matrix> values,
                                     Complex lambda)
    : anchor_(anchor), anchor_value_(std::move(anchor_value)), values_(std::move(values)),
      lambda_(lambda) {
    if (values_.empty()) throw std::invalid_argument("FundamentalMatrix: empty value list");
}

const Matrix& FundamentalMatrix::at(int k) const {
    if (k < first() || k > last())
        throw std::out_of_range("FundamentalMatrix: index " + std::to_string(k) +
                                " outside [0, " + std::to_string(last()) + "]");
    return values_[static_cast<std::size_t>(k)];
}

TrajectorySequence FundamentalMatrix::column_block(int col0, int ncols) const {
    if (col0 < 0 || ncols < 1 || col0 + ncols > dim())
        throw std::out_of_range("FundamentalMatrix: column block out of range");
    std::vector<Matrix> block;
    block.reserve(values_.size());
    for (const Matrix& v : values_) block.push_back(v.middleCols(col0, ncols));
    return TrajectorySequence(0, std::move(block), lambda_);
}

FundamentalMatrix fundamental_matrix(const SymplecticSystem& sys, Complex lambda, int k0,
                                     const Matrix& C) {
    check_horizon_index(sys, k0, "fundamental_matrix");
    if (C.rows() != sys.dim() || C.cols() != sys.dim())
        throw std::invalid_argument("fundamental_matrix: anchor must be 2n x 2n");
    const double symplectic_defect = frob(C.adjoint() * sys.J() * C - sys.J());
    if (symplectic_defect > sys.tolerances().structural_tol)
        throw std::invalid_argument("fundamental_matrix: anchor is not symplectic (residual " +
                                    std::to_string(symplectic_defect) + ")");

    std::vector<Matrix> values(static_cast<std::size_t>(sys.horizon()) + 1);
    values[static_cast<std::size_t>(k0)] = C;
    for (int k = k0 - 1; k >= 0; --k) {
        values[static_cast<std::size_t>(k)] =
            sys.s_lambda(k, lambda) * values[static_cast<std::size_t>(k + 1)];
        ensure_finite(values[static_cast<std::size_t>(k)], k, "fundamental_matrix");
    }
    for (int k = k0; k < sys.horizon(); ++k) {
        values[static_cast<std::size_t>(k + 1)] =
            sys.s_lambda_inverse(k, lambda) * values[static_cast<std::size_t>(k)];
        ensure_finite(values[static_cast<std::size_t>(k + 1)], k + 1, "fundamental_matrix");
    }
    return FundamentalMatrix(k0, C, std::move(values), lambda);
}

TrajectorySequence apply_L(const SymplecticSystem& sys, const TrajectorySequence& z) {
    if (z.rows() != sys.dim())
        throw std::invalid_argument("apply_L: trajectory dimension mismatch");
    if (z.last() <= z.first())
        throw std::invalid_argument("apply_L: window must contain at least two indices");
    std::vector<Matrix> values;
    values.reserve(static_cast<std::size_t>(z.last() - z.first()));
    for (int k = z.first(); k < z.last(); ++k)
        values.push_back(sys.J() * (z.at(k) - sys.S(k) * z.at(k + 1)));
    return TrajectorySequence(z.first(), std::move(values), z.lambda());
}

TrajectorySequence solve_ivp_nonhom(const SymplecticSystem& sys, Complex lambda,
                                    const TrajectorySequence& f, const Matrix& z0) {
    if (f.rows() != sys.dim())
        throw std::invalid_argument("solve_ivp_nonhom: forcing dimension mismatch");
    if (z0.rows() != sys.dim() || z0.cols() != f.cols())
        throw std::invalid_argument("solve_ivp_nonhom: initial value shape mismatch");
    const int lo = f.first();
    const int hi = std::min(f.last() + 1, sys.horizon());
    check_horizon_index(sys, lo, "solve_ivp_nonhom");

    // z_k = S_k(lambda) z_{k+1} - J Psi_k f_k  <=>  z_{k+1} = S_k^{-1}(lambda) (z_k + J Psi_k f_k)
    std::vector<Matrix> values(static_cast<std::size_t>(hi - lo + 1));
    values.front() = z0;
    for (int k = lo; k < hi; ++k) {
        values[static_cast<std::size_t>(k + 1 - lo)] =
            sys.s_lambda_inverse(k, lambda) *
            (values[static_cast<std::size_t>(k - lo)] + sys.J() * sys.Psi(k) * f.at(k));
        ensure_finite(values[static_cast<std::size_t>(k + 1 - lo)], k + 1, "solve_ivp_nonhom");
    }
    return TrajectorySequence(lo, std::move(values), lambda);
}

double wronskian_residual(const SymplecticSystem& sys, const TrajectorySequence& z,
                          const TrajectorySequence& u) {
    if (z.rows() != u.rows() || z.rows() != sys.dim())
        throw std::invalid_argument("wronskian_residual: dimension mismatch");
    const int lo = std::max(z.first(), u.first());
    const int hi = std::min(z.last(), u.last());
    if (lo > hi) throw std::invalid_argument("wronskian_residual: disjoint windows");
    const Matrix base = z.at(lo).adjoint() * sys.J() * u.at(lo);
    double residual = 0.0;
    for (int k = lo + 1; k <= hi; ++k)
        residual = std::max(residual, frob(z.at(k).adjoint() * sys.J() * u.at(k) - base));
    return residual;
}

LagrangeReport lagrange_residual(const SymplecticSystem& sys,
                                 const TrajectorySequence& z, const TrajectorySequence* f,
                                 const TrajectorySequence& u, const TrajectorySequence* g) {
    if (z.rows() != u.rows() || z.rows() != sys.dim() || z.cols() != u.cols())
        throw std::invalid_argument("lagrange_residual: shape mismatch");
    int lo = std::max(z.first(), u.first());
    int hi = std::min({z.last(), u.last(), sys.horizon()});
    if (f) { lo = std::max(lo, f->first()); hi = std::min(hi, f->last() + 1); }
    if (g) { lo = std::max(lo, g->first()); hi = std::min(hi, g->last() + 1); }
    if (lo >= hi) throw std::invalid_argument("lagrange_residual: window too short");

    const Complex lambda_bar = std::conj(z.lambda());
    const Complex nu = u.lambda();
    const Matrix& J = sys.J();
    const Matrix zero = Matrix::Zero(z.rows(), z.cols());

    LagrangeReport report;
    report.per_step.reserve(static_cast<std::size_t>(hi - lo));
    Matrix rhs_sum = Matrix::Zero(z.cols(), u.cols());
    for (int k = lo; k < hi; ++k) {
        const Matrix& fk = f ? f->at(k) : zero;
        const Matrix& gk = g ? g->at(k) : zero;
        const Matrix& Psi = sys.Psi(k);
        const Matrix lhs = z.at(k + 1).adjoint() * J * u.at(k + 1) - z.at(k).adjoint() * J * u.at(k);
        const Matrix rhs = (lambda_bar - nu) * (z.at(k).adjoint() * Psi * u.at(k)) +
                           fk.adjoint() * Psi * u.at(k) - z.at(k).adjoint() * Psi * gk;
        const double step = frob(lhs - rhs);
        report.per_step.push_back(step);
        report.max_abs = std::max(report.max_abs, step);
        rhs_sum += rhs;
    }
    const Matrix telescoped =
        z.at(hi).adjoint() * J * u.at(hi) - z.at(lo).adjoint() * J * u.at(lo);
    report.summed = frob(telescoped - rhs_sum);
    report.max_abs = std::max(report.max_abs, report.summed);
    return report;
}

double recursion_residual(const SymplecticSystem& sys, Complex lambda,
                          const TrajectorySequence& z, const TrajectorySequence* f) {
    if (z.rows() != sys.dim())
        throw std::invalid_argument("recursion_residual: dimension mismatch");
    double residual = 0.0;
    int hi = std::min(z.last(), sys.horizon());
    if (f) hi = std::min(hi, f->last() + 1);
    for (int k = z.first(); k < hi; ++k) {
        Matrix defect = z.at(k) - sys.s_lambda(k, lambda) * z.at(k + 1);
        if (f) defect += sys.J() * sys.Psi(k) * f->at(k);
        residual = std::max(residual, frob(defect));
    }
    return residual;
}

} // namespace sympkit
