#include "sympkit/weyl_green.hpp"

#include "sympkit/linalg.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sympkit {

namespace {

int sign_of_imag(Complex lambda, const char* who) {
    if (lambda.imag() == 0.0)
        throw std::domain_error(std::string(who) + ": lambda must be nonreal");
    return lambda.imag() > 0.0 ? 1 : -1;
}

} // namespace

AlphaMatrix::AlphaMatrix(Matrix value, double tol) : value_(std::move(value)) {
    if (value_.rows() < 1 || value_.cols() != 2 * value_.rows())
        throw std::invalid_argument("AlphaMatrix: expected n x 2n shape");
    const int n = static_cast<int>(value_.rows());
    const Matrix J = make_J(n);
    const double normal_defect = frob(value_ * value_.adjoint() - Matrix::Identity(n, n));
    const double isotropy_defect = frob(value_ * J * value_.adjoint());
    if (normal_defect > tol || isotropy_defect > tol)
        throw std::invalid_argument("AlphaMatrix: alpha alpha* = I / alpha J alpha* = 0 violated"
                                    " (residuals " + std::to_string(normal_defect) + ", " +
                                    std::to_string(isotropy_defect) + ")");
}

AlphaMatrix AlphaMatrix::canonical(int n) {
    Matrix value = Matrix::Zero(n, 2 * n);
    value.leftCols(n) = Matrix::Identity(n, n);
    return AlphaMatrix(std::move(value));
}

NaturalBasis natural_fundamental(const SymplecticSystem& sys, Complex lambda,
                                 const AlphaMatrix& alpha) {
    if (alpha.n() != sys.half_dim())
        throw std::invalid_argument("natural_fundamental: alpha size mismatch");
    const Matrix a_star = alpha.value().adjoint();
    Matrix anchor(sys.dim(), sys.dim());
    anchor.leftCols(sys.half_dim()) = a_star;
    anchor.rightCols(sys.half_dim()) = -sys.J() * a_star;
    FundamentalMatrix Phi = fundamental_matrix(sys, lambda, 0, anchor);
    TrajectorySequence Z = Phi.column_block(0, sys.half_dim());
    TrajectorySequence Z_tilde = Phi.column_block(sys.half_dim(), sys.half_dim());
    return NaturalBasis{std::move(Phi), std::move(Z), std::move(Z_tilde)};
}

TrajectorySequence weyl_solution(const SymplecticSystem& sys, Complex lambda,
                                 const AlphaMatrix& alpha, const Matrix& M) {
    const int n = sys.half_dim();
    if (M.rows() != n || M.cols() != n)
        throw std::invalid_argument("weyl_solution: M must be n x n");
    const NaturalBasis basis = natural_fundamental(sys, lambda, alpha);
    std::vector<Matrix> values;
    values.reserve(static_cast<std::size_t>(sys.horizon()) + 1);
    for (int k = 0; k <= sys.horizon(); ++k)
        values.push_back(basis.Z.at(k) + basis.Z_tilde.at(k) * M);
    return TrajectorySequence(0, std::move(values), lambda);
}

Matrix disk_indicator(const SymplecticSystem& sys, int k, Complex lambda,
                      const AlphaMatrix& alpha, const Matrix& M) {
    const int delta = sign_of_imag(lambda, "disk_indicator");
    const TrajectorySequence X = weyl_solution(sys, lambda, alpha, M);
    const Matrix raw = Complex(0.0, static_cast<double>(delta)) *
                       (X.at(k).adjoint() * sys.J() * X.at(k));
    return hermitian_part(raw);
}

namespace {

Matrix disk_indicator_of(const Matrix& J, int delta, const Matrix& Xk) {
    const Matrix raw = Complex(0.0, static_cast<double>(delta)) * (Xk.adjoint() * J * Xk);
    return 0.5 * (raw + raw.adjoint());
}

// Weyl solution of the boundary problem beta X_bc = 0, alpha X_0 = I, built
// by backward recursion from the boundary. Going downward the recessive
// direction dominates, so this avoids the cancellation that the
// reconstruction Z + Z~ M suffers on growing systems.
struct BoundarySolution {
    TrajectorySequence X;  // window [0, boundary]
    Matrix M;              // implied half-line iterate M_bc
    bool solvable{true};
};

BoundarySolution backward_weyl(const SymplecticSystem& sys, Complex lambda,
                               const AlphaMatrix& alpha, const AlphaMatrix& beta, int boundary) {
    const int n = sys.half_dim();
    const Matrix seed = sys.J() * beta.value().adjoint();  // columns span ker beta
    TrajectorySequence raw = transfer(sys, lambda, seed, boundary, 0);

    const Matrix a_x0 = alpha.value() * raw.at(0);
    Eigen::FullPivLU<Matrix> lu(a_x0);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        return BoundarySolution{TrajectorySequence::zero(0, std::max(boundary, 1), 2 * n, n, lambda),
                                Matrix::Zero(n, n), false};
    }
    const Matrix normalizer = lu.inverse();
    std::vector<Matrix> values;
    values.reserve(static_cast<std::size_t>(boundary) + 1);
    for (int k = 0; k <= boundary; ++k) values.push_back(raw.at(k) * normalizer);

    // Phi_0^{-1} X_0 = [I; M] recovers the boundary iterate
    Matrix anchor(2 * n, 2 * n);
    anchor.leftCols(n) = alpha.value().adjoint();
    anchor.rightCols(n) = -sys.J() * alpha.value().adjoint();
    const Matrix coords = -sys.J() * anchor.adjoint() * sys.J() * values.front();
    return BoundarySolution{TrajectorySequence(0, std::move(values), lambda),
                            coords.bottomRows(n), true};
}

} // namespace

WeylState approx_half_line_M(const SymplecticSystem& sys, Complex lambda,
                             const std::vector<int>& N_list,
                             std::optional<AlphaMatrix> beta,
                             std::optional<AlphaMatrix> alpha) {
    const int delta = sign_of_imag(lambda, "approx_half_line_M");
    if (N_list.empty())
        throw std::invalid_argument("approx_half_line_M: empty N list");
    for (std::size_t i = 0; i < N_list.size(); ++i) {
        if (N_list[i] < 0 || N_list[i] > sys.horizon())
            throw std::out_of_range("approx_half_line_M: boundary index outside horizon");
        if (i > 0 && N_list[i] <= N_list[i - 1])
            throw std::invalid_argument("approx_half_line_M: N list must be strictly increasing");
    }
    const AlphaMatrix a = alpha.value_or(AlphaMatrix::canonical(sys.half_dim()));
    const AlphaMatrix b = beta.value_or(AlphaMatrix::canonical(sys.half_dim()));
    if (a.n() != sys.half_dim() || b.n() != sys.half_dim())
        throw std::invalid_argument("approx_half_line_M: boundary matrix size mismatch");

    const double psd_tol = sys.tolerances().psd_tol;

    std::vector<WeylIterate> trace;
    double final_drift = 0.0;
    std::optional<Matrix> previous;
    std::optional<BoundarySolution> last_good;
    int last_good_N = 0;
    for (int N : N_list) {
        WeylIterate iterate;
        iterate.N = N;
        BoundarySolution solution = backward_weyl(sys, lambda, a, b, N);
        iterate.boundary_solvable = solution.solvable;
        if (iterate.boundary_solvable) {
            iterate.M = solution.M;
            const Matrix Ek = disk_indicator_of(sys.J(), delta, solution.X.at(N));
            iterate.max_disk_eigenvalue = max_eigenvalue(Ek);
            iterate.in_disk =
                iterate.max_disk_eigenvalue <= psd_tol * std::max(1.0, frob(solution.M));
            if (previous) {
                iterate.drift_from_prev = frob(iterate.M - *previous);
                final_drift = iterate.drift_from_prev;
            }
            previous = iterate.M;
            last_good = std::move(solution);
            last_good_N = N;
        }
        trace.push_back(std::move(iterate));
    }
    if (!last_good)
        throw std::runtime_error("approx_half_line_M: boundary condition singular at every index");

    WeylState state{a.value(),     b.value(),   lambda, delta, last_good->M,
                    last_good->X,  std::move(trace), {},   final_drift};
    state.Ek_samples.reserve(N_list.size());
    for (int N : N_list)
        if (N <= last_good_N)
            state.Ek_samples.push_back(disk_indicator_of(sys.J(), delta, state.X.at(N)));
    return state;
}

GreenTable GreenTable::build(const SymplecticSystem& sys, Complex lambda, const AlphaMatrix& alpha,
                             int boundary_index, std::optional<AlphaMatrix> beta) {
    sign_of_imag(lambda, "GreenTable");
    if (boundary_index < 1 || boundary_index > sys.horizon())
        throw std::out_of_range("GreenTable: boundary index outside [1, horizon]");
    const AlphaMatrix b = beta.value_or(AlphaMatrix::canonical(sys.half_dim()));
    BoundarySolution at_lambda = backward_weyl(sys, lambda, alpha, b, boundary_index);
    BoundarySolution at_conj = backward_weyl(sys, std::conj(lambda), alpha, b, boundary_index);
    if (!at_lambda.solvable || !at_conj.solvable)
        throw std::runtime_error("GreenTable: boundary condition singular at the chosen index");
    return GreenTable(sys, lambda, alpha, boundary_index, std::move(at_lambda.M),
                      std::move(at_conj.M),
                      natural_fundamental(sys, lambda, alpha).Z_tilde,
                      natural_fundamental(sys, std::conj(lambda), alpha).Z_tilde,
                      std::move(at_lambda.X), std::move(at_conj.X));
}

GreenTable::GreenTable(const SymplecticSystem& sys, Complex lambda, const AlphaMatrix& alpha,
                       int last, Matrix M, Matrix M_bar, TrajectorySequence Z_tilde,
                       TrajectorySequence Z_tilde_bar, TrajectorySequence X_plus,
                       TrajectorySequence X_plus_bar)
    : sys_(sys), lambda_(lambda), alpha_(alpha), last_(last), M_(std::move(M)),
      M_bar_(std::move(M_bar)), Z_tilde_(std::move(Z_tilde)),
      Z_tilde_bar_(std::move(Z_tilde_bar)), X_plus_(std::move(X_plus)),
      X_plus_bar_(std::move(X_plus_bar)) {}

GreenTable::GreenTable(const SymplecticSystem& sys, Complex lambda, const AlphaMatrix& alpha,
                       Matrix M, Matrix M_bar)
    : GreenTable(sys, lambda, alpha, sys.horizon(), M, M_bar,
                 natural_fundamental(sys, lambda, alpha).Z_tilde,
                 natural_fundamental(sys, std::conj(lambda), alpha).Z_tilde,
                 weyl_solution(sys, lambda, alpha, M),
                 weyl_solution(sys, std::conj(lambda), alpha, M_bar)) {
    sign_of_imag(lambda, "GreenTable");
}

Matrix GreenTable::entry(int k, int l) const {
    if (k <= l) return Z_tilde_.at(k) * X_plus_bar_.at(l).adjoint();
    return X_plus_.at(k) * Z_tilde_bar_.at(l).adjoint();
}

Matrix GreenTable::entry_bar(int k, int l) const {
    if (k <= l) return Z_tilde_bar_.at(k) * X_plus_.at(l).adjoint();
    return X_plus_bar_.at(k) * Z_tilde_.at(l).adjoint();
}

double GreenTable::pairing_mismatch() const { return frob(M_.adjoint() - M_bar_); }

double green_pairing_residual(const GreenTable& table, int k) {
    const Matrix lhs = table.X_plus().at(k) * table.Z_tilde_bar().at(k).adjoint() -
                       table.Z_tilde().at(k) * table.X_plus_bar().at(k).adjoint();
    return frob(lhs - table.system().J());
}

TrajectorySequence zhat(const GreenTable& table, const TrajectorySequence& f) {
    const SymplecticSystem& sys = table.system();
    if (f.rows() != sys.dim())
        throw std::invalid_argument("zhat: forcing dimension mismatch");
    if (f.first() < 0 || f.last() > table.last())
        throw std::out_of_range("zhat: forcing window outside the table range");
    const int N = table.last();
    const int m = f.cols();
    const int n = sys.half_dim();

    // weighted moments Z~_l*(conj) Psi_l f_l and X_l^{+*}(conj) Psi_l f_l
    std::vector<Matrix> lower(static_cast<std::size_t>(N) + 1, Matrix::Zero(n, m));
    std::vector<Matrix> upper(static_cast<std::size_t>(N) + 1, Matrix::Zero(n, m));
    for (int l = f.first(); l <= f.last(); ++l) {
        const Matrix weighted = sys.Psi(l) * f.at(l);
        lower[static_cast<std::size_t>(l)] = table.Z_tilde_bar().at(l).adjoint() * weighted;
        upper[static_cast<std::size_t>(l)] = table.X_plus_bar().at(l).adjoint() * weighted;
    }
    // prefix sums A_k = sum_{l<k} lower_l, suffix sums B_k = sum_{l>=k} upper_l
    std::vector<Matrix> prefix(static_cast<std::size_t>(N) + 2, Matrix::Zero(n, m));
    std::vector<Matrix> suffix(static_cast<std::size_t>(N) + 2, Matrix::Zero(n, m));
    for (int k = 1; k <= N + 1; ++k)
        prefix[static_cast<std::size_t>(k)] =
            prefix[static_cast<std::size_t>(k - 1)] + lower[static_cast<std::size_t>(k - 1)];
    for (int k = N; k >= 0; --k)
        suffix[static_cast<std::size_t>(k)] =
            suffix[static_cast<std::size_t>(k + 1)] + upper[static_cast<std::size_t>(k)];

    std::vector<Matrix> values;
    values.reserve(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k)
        values.push_back(table.X_plus().at(k) * prefix[static_cast<std::size_t>(k)] +
                         table.Z_tilde().at(k) * suffix[static_cast<std::size_t>(k)]);
    return TrajectorySequence(0, std::move(values), table.lambda());
}

TrajectorySequence yhat(const GreenTable& table, const Vector& v, const TrajectorySequence& f) {
    const SymplecticSystem& sys = table.system();
    if (v.size() != sys.half_dim())
        throw std::invalid_argument("yhat: v must have length n");
    if (f.cols() != 1)
        throw std::invalid_argument("yhat: forcing must be a single column");
    TrajectorySequence z = zhat(table, f);
    std::vector<Matrix> values;
    values.reserve(static_cast<std::size_t>(table.last()) + 1);
    for (int k = 0; k <= table.last(); ++k)
        values.push_back(table.X_plus().at(k) * v + z.at(k));
    return TrajectorySequence(0, std::move(values), table.lambda());
}

SquareSummableReport count_square_summable(const SymplecticSystem& sys, Complex lambda,
                                           const std::vector<int>& N_list,
                                           double growth_ratio_threshold) {
    if (N_list.size() < 2)
        throw std::invalid_argument("count_square_summable: need at least two probe indices");
    for (std::size_t i = 0; i < N_list.size(); ++i) {
        if (N_list[i] < 0 || N_list[i] > sys.horizon())
            throw std::out_of_range("count_square_summable: probe index outside horizon");
        if (i > 0 && N_list[i] <= N_list[i - 1])
            throw std::invalid_argument("count_square_summable: probes must be strictly increasing");
    }
    if (growth_ratio_threshold <= 1.0)
        throw std::invalid_argument("count_square_summable: threshold must exceed 1");

    const int dim = sys.dim();
    const FundamentalMatrix Phi =
        fundamental_matrix(sys, lambda, 0, Matrix::Identity(dim, dim));

    SquareSummableReport report;
    report.N_list = N_list;
    report.threshold_per_step = growth_ratio_threshold;
    report.norm_trace.resize(static_cast<Eigen::Index>(N_list.size()), dim);

    std::vector<Matrix> grams;
    grams.reserve(N_list.size());
    Matrix gram = Matrix::Zero(dim, dim);
    int next = 0;
    for (std::size_t j = 0; j < N_list.size(); ++j) {
        for (; next <= N_list[j]; ++next)
            gram += Phi.at(next).adjoint() * sys.Psi(next) * Phi.at(next);
        grams.push_back(hermitian_part(gram));
        report.norm_trace.row(static_cast<Eigen::Index>(j)) =
            hermitian_eigenvalues(grams.back()).transpose();
    }

    const Matrix& last = grams.back();
    const Matrix& prev = grams[grams.size() - 2];
    const int delta_N = N_list.back() - N_list[N_list.size() - 2];
    report.allowed_ratio = std::pow(growth_ratio_threshold, delta_N);

    Eigen::SelfAdjointEigenSolver<Matrix> solver(last);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("count_square_summable: eigen decomposition failed");
    const RealVector ev = solver.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    const double floor = sys.tolerances().rank_tol * scale;

    double min_positive = scale;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > floor) min_positive = std::min(min_positive, ev(i));
    report.dynamic_range = scale > 0.0 ? scale / min_positive : 1.0;

    report.growth_ratios.resize(static_cast<std::size_t>(dim), 1.0);
    report.count = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const Vector direction = solver.eigenvectors().col(i);
        const double quad_prev =
            std::real((direction.adjoint() * prev * direction)(0, 0));
        const double quad_last = ev(i);
        double ratio;
        if (quad_last <= floor) {
            // semi-norm-zero direction: square summable by definition
            ratio = 1.0;
        } else if (quad_prev <= floor) {
            ratio = std::numeric_limits<double>::infinity();
        } else {
            ratio = quad_last / quad_prev;
        }
        report.growth_ratios[static_cast<std::size_t>(i)] = ratio;
        if (ratio <= report.allowed_ratio) ++report.count;
    }
    return report;
}

} // namespace sympkit
