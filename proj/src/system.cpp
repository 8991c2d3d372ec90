#include "sympkit/system.hpp"

#include "sympkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace sympkit {

Matrix make_J(int n) {
    if (n < 1) throw std::invalid_argument("make_J: n must be positive");
    Matrix J = Matrix::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = Matrix::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return J;
}

Matrix build_V(const Matrix& S, const Matrix& Psi) {
    if (S.rows() != S.cols() || Psi.rows() != Psi.cols() || S.rows() != Psi.rows())
        throw std::invalid_argument("build_V: S and Psi must be square of equal size");
    if (S.rows() % 2 != 0 || S.rows() == 0)
        throw std::invalid_argument("build_V: dimension must be even and positive");
    const Matrix J = make_J(static_cast<int>(S.rows()) / 2);
    return -J * Psi * S;
}

SymplecticSystem::SymplecticSystem(std::vector<Matrix> S, std::vector<Matrix> Psi,
                                   ToleranceConfig tolerances)
    : S_(std::move(S)), Psi_(std::move(Psi)), tol_(tolerances) {
    tol_.validate();
    if (S_.empty() || S_.size() != Psi_.size())
        throw std::invalid_argument("SymplecticSystem: S and Psi must be nonempty and equally long");
    const Eigen::Index dim = S_.front().rows();
    if (dim == 0 || dim % 2 != 0)
        throw std::invalid_argument("SymplecticSystem: matrices must be 2n x 2n with n >= 1");
    for (std::size_t k = 0; k < S_.size(); ++k) {
        if (S_[k].rows() != dim || S_[k].cols() != dim ||
            Psi_[k].rows() != dim || Psi_[k].cols() != dim)
            throw std::invalid_argument("SymplecticSystem: inconsistent matrix dimensions at k=" +
                                        std::to_string(k));
    }
    n_ = static_cast<int>(dim) / 2;
    horizon_ = static_cast<int>(S_.size()) - 1;
    J_ = make_J(n_);
    V_.reserve(S_.size());
    for (std::size_t k = 0; k < S_.size(); ++k) V_.push_back(-J_ * Psi_[k] * S_[k]);
}

SymplecticSystem SymplecticSystem::constant(const Matrix& S, const Matrix& Psi, int horizon,
                                            ToleranceConfig tolerances) {
    if (horizon < 0) throw std::invalid_argument("SymplecticSystem: horizon must be >= 0");
    std::vector<Matrix> Ss(static_cast<std::size_t>(horizon) + 1, S);
    std::vector<Matrix> Ps(static_cast<std::size_t>(horizon) + 1, Psi);
    return SymplecticSystem(std::move(Ss), std::move(Ps), tolerances);
}

SymplecticSystem SymplecticSystem::from_generator(int horizon,
                                                  const std::function<Matrix(int)>& S_of,
                                                  const std::function<Matrix(int)>& Psi_of,
                                                  ToleranceConfig tolerances) {
    if (horizon < 0) throw std::invalid_argument("SymplecticSystem: horizon must be >= 0");
    std::vector<Matrix> Ss, Ps;
    Ss.reserve(static_cast<std::size_t>(horizon) + 1);
    Ps.reserve(static_cast<std::size_t>(horizon) + 1);
    for (int k = 0; k <= horizon; ++k) {
        Ss.push_back(S_of(k));
        Ps.push_back(Psi_of(k));
    }
    return SymplecticSystem(std::move(Ss), std::move(Ps), tolerances);
}

void SymplecticSystem::check_index(int k) const {
    if (k < 0 || k > horizon_)
        throw std::out_of_range("SymplecticSystem: index " + std::to_string(k) +
                                " outside horizon [0, " + std::to_string(horizon_) + "]");
}

const Matrix& SymplecticSystem::S(int k) const {
    check_index(k);
    return S_[static_cast<std::size_t>(k)];
}

const Matrix& SymplecticSystem::Psi(int k) const {
    check_index(k);
    return Psi_[static_cast<std::size_t>(k)];
}

const Matrix& SymplecticSystem::V(int k) const {
    check_index(k);
    return V_[static_cast<std::size_t>(k)];
}

Matrix SymplecticSystem::s_lambda(int k, Complex lambda) const {
    check_index(k);
    return S_[static_cast<std::size_t>(k)] + lambda * V_[static_cast<std::size_t>(k)];
}

Matrix SymplecticSystem::s_lambda_inverse(int k, Complex lambda) const {
    check_index(k);
    const Matrix s_conj = S_[static_cast<std::size_t>(k)] +
                          std::conj(lambda) * V_[static_cast<std::size_t>(k)];
    return -J_ * s_conj.adjoint() * J_;
}

ValidationReport validate_hypotheses(const SymplecticSystem& sys) {
    ValidationReport report;
    const Matrix& J = sys.J();
    const double tol = sys.tolerances().structural_tol;
    const double psd_tol = sys.tolerances().psd_tol;

    report.min_weight_eig = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= sys.horizon(); ++k) {
        const Matrix& S = sys.S(k);
        const Matrix& Psi = sys.Psi(k);
        const Matrix& V = sys.V(k);

        HypothesisCheck check;
        check.k = k;
        check.symplectic = frob(S.adjoint() * J * S - J);
        check.weight_hermitian = hermitian_residual(Psi);
        check.weight_isotropic = frob(Psi * J * Psi);
        check.weight_min_eig = min_eigenvalue(Psi);
        check.v_roundtrip = frob(J * S * J * V.adjoint() * J - Psi);
        check.pass = check.symplectic <= tol && check.weight_hermitian <= tol &&
                     check.weight_isotropic <= tol && check.weight_min_eig >= -psd_tol &&
                     check.v_roundtrip <= tol;

        report.max_symplectic = std::max(report.max_symplectic, check.symplectic);
        report.max_weight_hermitian = std::max(report.max_weight_hermitian, check.weight_hermitian);
        report.max_weight_isotropic = std::max(report.max_weight_isotropic, check.weight_isotropic);
        report.min_weight_eig = std::min(report.min_weight_eig, check.weight_min_eig);
        report.max_v_roundtrip = std::max(report.max_v_roundtrip, check.v_roundtrip);

        if (!check.pass && report.first_violation.empty()) {
            if (check.symplectic > tol)
                report.first_violation = "symplectic identity S*JS = J at k=" + std::to_string(k);
            else if (check.weight_hermitian > tol)
                report.first_violation = "weight hermiticity at k=" + std::to_string(k);
            else if (check.weight_isotropic > tol)
                report.first_violation = "weight isotropy Psi J Psi = 0 at k=" + std::to_string(k);
            else if (check.weight_min_eig < -psd_tol)
                report.first_violation = "weight semi-definiteness at k=" + std::to_string(k);
            else
                report.first_violation = "weight roundtrip J S J V* J = Psi at k=" + std::to_string(k);
        }
        report.per_k.push_back(check);
    }
    report.pass = report.first_violation.empty();
    return report;
}

SymplecticSystem from_sturm_liouville(const std::vector<double>& p_next,
                                      const std::vector<double>& q,
                                      const std::vector<double>& w,
                                      ToleranceConfig tolerances) {
    if (p_next.empty() || p_next.size() != q.size() || q.size() != w.size())
        throw std::invalid_argument("from_sturm_liouville: p, q, w must be nonempty and equally long");
    std::vector<Matrix> Ss, Ps;
    Ss.reserve(p_next.size());
    Ps.reserve(p_next.size());
    for (std::size_t k = 0; k < p_next.size(); ++k) {
        if (p_next[k] == 0.0)
            throw std::invalid_argument("from_sturm_liouville: p_{k+1} = 0 at k=" + std::to_string(k));
        if (w[k] < 0.0)
            throw std::invalid_argument("from_sturm_liouville: w_k < 0 at k=" + std::to_string(k));
        Matrix S(2, 2);
        S << 1.0, -1.0 / p_next[k],
             -q[k], 1.0 + q[k] / p_next[k];
        Matrix Psi = Matrix::Zero(2, 2);
        Psi(0, 0) = w[k];
        Ss.push_back(std::move(S));
        Ps.push_back(std::move(Psi));
    }
    return SymplecticSystem(std::move(Ss), std::move(Ps), tolerances);
}

TrajectorySequence::TrajectorySequence(int first_index, std::vector<Matrix> values, Complex lambda)
    : first_(first_index), lambda_(lambda), values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("TrajectorySequence: empty value list");
    rows_ = static_cast<int>(values_.front().rows());
    cols_ = static_cast<int>(values_.front().cols());
    if (rows_ == 0 || rows_ % 2 != 0 || cols_ < 1)
        throw std::invalid_argument("TrajectorySequence: values must be 2n x m with m >= 1");
    for (const Matrix& v : values_)
        if (v.rows() != rows_ || v.cols() != cols_)
            throw std::invalid_argument("TrajectorySequence: inconsistent block shapes");
}

TrajectorySequence TrajectorySequence::zero(int first, int last, int rows, int cols, Complex lambda) {
    if (last < first) throw std::invalid_argument("TrajectorySequence::zero: empty window");
    std::vector<Matrix> values(static_cast<std::size_t>(last - first + 1),
                               Matrix::Zero(rows, cols));
    return TrajectorySequence(first, std::move(values), lambda);
}

const Matrix& TrajectorySequence::at(int k) const {
    if (k < first() || k > last())
        throw std::out_of_range("TrajectorySequence: index " + std::to_string(k) +
                                " outside window [" + std::to_string(first()) + ", " +
                                std::to_string(last()) + "]");
    return values_[static_cast<std::size_t>(k - first_)];
}

Matrix& TrajectorySequence::at(int k) {
    return const_cast<Matrix&>(static_cast<const TrajectorySequence&>(*this).at(k));
}

Matrix semi_inner(const SymplecticSystem& sys, const TrajectorySequence& z,
                  const TrajectorySequence& w, IndexRange interval) {
    if (z.rows() != w.rows() || z.rows() != sys.dim())
        throw std::invalid_argument("semi_inner: trajectory dimension mismatch");
    Matrix acc = Matrix::Zero(z.cols(), w.cols());
    if (interval.empty()) return acc;
    if (!z.window().contains(interval) || !w.window().contains(interval))
        throw std::out_of_range("semi_inner: interval outside trajectory window");
    if (interval.lo < 0 || interval.hi > sys.horizon())
        throw std::out_of_range("semi_inner: interval outside horizon");
    for (int k = interval.lo; k <= interval.hi; ++k)
        acc += z.at(k).adjoint() * sys.Psi(k) * w.at(k);
    return acc;
}

double semi_norm(const SymplecticSystem& sys, const TrajectorySequence& z, IndexRange interval) {
    const Matrix gram = semi_inner(sys, z, z, interval);
    const double trace = gram.real().trace();
    return std::sqrt(std::max(trace, 0.0));
}

int psi_support_bound(const SymplecticSystem& sys, const TrajectorySequence& z, double tol) {
    int bound = z.first();
    for (int k = z.first(); k <= z.last(); ++k)
        if (frob(sys.Psi(k) * z.at(k)) > tol) bound = k + 1;
    return bound;
}

} // namespace sympkit
