#include "sympkit/relations.hpp"

#include "sympkit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sympkit {

namespace {

double span_angle_tol(const SymplecticSystem& sys) {
    return std::sqrt(sys.tolerances().structural_tol);
}

} // namespace

Vector k_map_apply(const SymplecticSystem& sys, Complex lambda, const TrajectorySequence& z,
                   IndexRange interval) {
    if (interval.empty()) return Vector::Zero(sys.dim());
    if (interval.lo < 0 || interval.hi > sys.horizon())
        throw std::out_of_range("k_map_apply: interval outside horizon");
    if (!z.window().contains(interval))
        throw std::out_of_range("k_map_apply: interval outside trajectory window");
    if (z.cols() != 1)
        throw std::invalid_argument("k_map_apply: expected a single-column trajectory");
    const FundamentalMatrix Phi_conj = fundamental_matrix(
        sys, std::conj(lambda), 0, Matrix::Identity(sys.dim(), sys.dim()));
    Vector acc = Vector::Zero(sys.dim());
    for (int k = interval.lo; k <= interval.hi; ++k)
        acc += Phi_conj.at(k).adjoint() * sys.Psi(k) * z.at(k);
    return acc;
}

KMapRangeReport k_map_range_check(const SymplecticSystem& sys, Complex lambda,
                                  IndexRange interval) {
    if (interval.empty() || interval.lo < 0 || interval.hi > sys.horizon())
        throw std::out_of_range("k_map_range_check: bad interval");
    const FundamentalMatrix Phi_conj = fundamental_matrix(
        sys, std::conj(lambda), 0, Matrix::Identity(sys.dim(), sys.dim()));

    // images of the unit impulses delta_k e_i span ran K
    Matrix images(sys.dim(), static_cast<Eigen::Index>(interval.length()) * sys.dim());
    Matrix phi = Matrix::Zero(sys.dim(), sys.dim());
    for (int k = interval.lo; k <= interval.hi; ++k) {
        images.middleCols(static_cast<Eigen::Index>(k - interval.lo) * sys.dim(), sys.dim()) =
            Phi_conj.at(k).adjoint() * sys.Psi(k);
        phi += Phi_conj.at(k).adjoint() * sys.Psi(k) * Phi_conj.at(k);
    }

    // Ran phi is lambda-independent, so the Gram assembled from Phi(conj lambda)
    // with the same anchor is the right comparison target.
    const double rank_tol = sys.tolerances().rank_tol;
    KMapRangeReport report;
    report.kmap_rank = numerical_rank(images, rank_tol);
    const HermitianRank phi_split = hermitian_rank(phi, rank_tol);
    report.phi_rank = phi_split.rank;
    const Matrix kmap_range = range_basis(images, rank_tol);
    const Matrix& phi_range = phi_split.range;
    report.max_principal_angle = max_principal_angle(kmap_range, phi_range);
    report.equal = report.kmap_rank == report.phi_rank &&
                   report.max_principal_angle <= span_angle_tol(sys);
    return report;
}

TrajectorySequence preimage_construction(const SymplecticSystem& sys, Complex lambda,
                                         const TrajectorySequence& g) {
    if (g.rows() != sys.dim())
        throw std::invalid_argument("preimage_construction: dimension mismatch");
    if (g.first() < 0 || g.last() > sys.horizon())
        throw std::out_of_range("preimage_construction: window outside horizon");

    const FundamentalMatrix Phi =
        fundamental_matrix(sys, lambda, 0, Matrix::Identity(sys.dim(), sys.dim()));
    const FundamentalMatrix Phi_conj = fundamental_matrix(
        sys, std::conj(lambda), 0, Matrix::Identity(sys.dim(), sys.dim()));

    const int N = sys.horizon();
    const int m = g.cols();
    // suffix sums T_k = sum_{j >= k} Phi_j*(conj lambda) Psi_j g_j
    std::vector<Matrix> suffix(static_cast<std::size_t>(N) + 2, Matrix::Zero(sys.dim(), m));
    double term_scale = 1.0;
    for (int k = N; k >= 0; --k) {
        Matrix term = Matrix::Zero(sys.dim(), m);
        if (k >= g.first() && k <= g.last()) {
            term = Phi_conj.at(k).adjoint() * (sys.Psi(k) * g.at(k));
            term_scale = std::max(term_scale, frob(term));
        }
        suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k + 1)] + term;
    }

    const double k_map_norm = frob(suffix[0]);
    if (k_map_norm > 100.0 * sys.tolerances().structural_tol * term_scale)
        throw std::invalid_argument("preimage_construction: K_lambda(g) != 0 (norm " +
                                    std::to_string(k_map_norm) + "), z_0 would not vanish");

    std::vector<Matrix> values;
    values.reserve(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k)
        values.push_back(-Phi.at(k) * sys.J() * suffix[static_cast<std::size_t>(k)]);
    return TrajectorySequence(0, std::move(values), lambda);
}

namespace {

// Rotate a vector so its largest-magnitude entry is real and positive.
Vector canonical_phase(const Vector& v) {
    Eigen::Index arg_max = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > best) {
            best = std::abs(v(i));
            arg_max = i;
        }
    if (best == 0.0) return v;
    const Complex phase = v(arg_max) / std::abs(v(arg_max));
    return v / phase;
}

} // namespace

bool is_multivalued_witness(const SymplecticSystem& sys, const TrajectorySequence& z,
                            const TrajectorySequence& f, double tol) {
    if (z.rows() != sys.dim() || f.rows() != sys.dim() || z.cols() != 1 || f.cols() != 1)
        return false;
    for (int k = z.first(); k <= std::min(z.last(), sys.horizon()); ++k)
        if (frob(sys.Psi(k) * z.at(k)) > tol) return false;
    const TrajectorySequence Lz = apply_L(sys, z);
    double residual = 0.0;
    for (int k = Lz.first(); k <= Lz.last(); ++k) {
        const Matrix fk = f.window().contains(k) ? f.at(k) : Matrix::Zero(sys.dim(), 1);
        residual = std::max(residual, frob(Lz.at(k) - sys.Psi(k) * fk));
    }
    if (residual > tol) return false;
    const IndexRange common{f.first(), std::min(f.last(), sys.horizon())};
    return semi_norm(sys, f, common) > std::sqrt(tol);
}

std::optional<WitnessPair> multivalued_witness(const SymplecticSystem& sys) {
    const int N = sys.horizon();
    if (N < 1) return std::nullopt;
    const int dim = sys.dim();
    const double rank_tol = sys.tolerances().rank_tol;
    const double accept_tol = 10.0 * sys.tolerances().structural_tol;

    // z_k = kernel_k c_k ranges over all sequences with Psi z = 0
    std::vector<Matrix> kernels;
    std::vector<int> offsets;
    int unknowns = 0;
    kernels.reserve(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) {
        kernels.push_back(hermitian_rank(sys.Psi(k), rank_tol).kernel);
        offsets.push_back(unknowns);
        unknowns += static_cast<int>(kernels.back().cols());
    }
    if (unknowns == 0) return std::nullopt;

    // constraint rows: J (kernel_k c_k - S_k kernel_{k+1} c_{k+1}) = Psi_k f_k
    Matrix A = Matrix::Zero(static_cast<Eigen::Index>(N) * dim, unknowns);
    for (int k = 0; k < N; ++k) {
        const Eigen::Index row = static_cast<Eigen::Index>(k) * dim;
        if (kernels[static_cast<std::size_t>(k)].cols() > 0)
            A.block(row, offsets[static_cast<std::size_t>(k)], dim,
                    kernels[static_cast<std::size_t>(k)].cols()) =
                sys.J() * kernels[static_cast<std::size_t>(k)];
        if (kernels[static_cast<std::size_t>(k + 1)].cols() > 0)
            A.block(row, offsets[static_cast<std::size_t>(k + 1)], dim,
                    kernels[static_cast<std::size_t>(k + 1)].cols()) =
                -sys.J() * sys.S(k) * kernels[static_cast<std::size_t>(k + 1)];
    }

    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix null_basis = null_space(A, rank_tol);
    const Matrix z0_selector = [&] {
        Matrix sel = Matrix::Zero(dim, unknowns);
        if (kernels[0].cols() > 0) sel.block(0, 0, dim, kernels[0].cols()) = kernels[0];
        return sel;
    }();

    for (int k1 = 0; k1 < N; ++k1) {
        const HermitianRank psi_split = hermitian_rank(sys.Psi(k1), rank_tol);
        for (Eigen::Index j = psi_split.eigenvalues.size() - 1; j >= 0; --j) {
            const double eig = psi_split.eigenvalues(j);
            if (eig <= rank_tol * psi_split.eigenvalues.cwiseAbs().maxCoeff()) continue;
            // impulse forcing f = delta_{k1} v along a weight range direction
            Vector v(dim);
            {
                Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(sys.Psi(k1)));
                v = canonical_phase(es.eigenvectors().col(j));
            }
            Vector b = Vector::Zero(static_cast<Eigen::Index>(N) * dim);
            b.segment(static_cast<Eigen::Index>(k1) * dim, dim) = sys.Psi(k1) * v;

            Vector c = svd.solve(b);
            if (null_basis.cols() > 0) {
                // anchor the witness at zero initial value whenever possible
                const Vector t = lstsq(z0_selector * null_basis, -(z0_selector * c));
                c += null_basis * t;
            }
            const double solve_residual = (A * c - b).norm();
            if (solve_residual > accept_tol * std::max(1.0, b.norm())) continue;

            std::vector<Matrix> z_values;
            z_values.reserve(static_cast<std::size_t>(N) + 1);
            for (int k = 0; k <= N; ++k) {
                const Matrix& kern = kernels[static_cast<std::size_t>(k)];
                Matrix zk = Matrix::Zero(dim, 1);
                if (kern.cols() > 0)
                    zk = kern * c.segment(offsets[static_cast<std::size_t>(k)], kern.cols());
                z_values.push_back(std::move(zk));
            }
            TrajectorySequence z(0, std::move(z_values), Complex(0, 0));
            std::vector<Matrix> f_values(static_cast<std::size_t>(N) + 1,
                                         Matrix::Zero(dim, 1));
            f_values[static_cast<std::size_t>(k1)] = v;
            TrajectorySequence f(0, std::move(f_values), Complex(0, 0));

            if (!is_multivalued_witness(sys, z, f, accept_tol)) continue;

            WitnessPair pair{std::move(z), std::move(f), k1, 0.0, 0.0};
            pair.f_semi_norm = std::sqrt(std::max(0.0, std::real(
                (v.adjoint() * sys.Psi(k1) * v)(0, 0))));
            const TrajectorySequence Lz = apply_L(sys, pair.z);
            for (int k = 0; k < N; ++k) {
                const Matrix fk = k == k1 ? Matrix(v) : Matrix(Matrix::Zero(dim, 1));
                pair.residual = std::max(pair.residual, frob(Lz.at(k) - sys.Psi(k) * fk));
            }
            return pair;
        }
    }
    return std::nullopt;
}

DeficiencyReport deficiency_consistency(const SymplecticSystem& sys,
                                        const std::vector<Complex>& lambda_samples,
                                        IndexRange interval,
                                        std::vector<int> N_list,
                                        double growth_ratio_threshold) {
    if (lambda_samples.empty())
        throw std::invalid_argument("deficiency_consistency: no lambda samples");
    if (N_list.empty()) {
        const int hi = sys.horizon();
        const int lo = std::max(1, hi / 2);
        N_list = lo < hi ? std::vector<int>{lo, hi} : std::vector<int>{hi - 1, hi};
    }

    DeficiencyReport report;
    report.rank_phi = gram_phi(sys, Complex(0, 0), interval, interval.lo).rank;
    report.gap = sys.dim() - report.rank_phi;

    for (const Complex& lambda : lambda_samples) {
        DeficiencySample sample;
        sample.lambda = lambda;
        sample.classification =
            count_square_summable(sys, lambda, N_list, growth_ratio_threshold);
        sample.d = sample.classification.count;
        sample.d_tilde = sample.d - report.gap;
        report.samples.push_back(std::move(sample));
    }

    report.d_tilde_nonnegative = true;
    report.gap_constant = true;
    for (const DeficiencySample& s : report.samples) {
        if (s.d_tilde < 0) report.d_tilde_nonnegative = false;
        if (s.d - s.d_tilde != report.gap) report.gap_constant = false;
    }

    report.half_plane_constant = true;
    std::optional<int> upper, lower;
    for (const DeficiencySample& s : report.samples) {
        if (s.lambda.imag() > 0.0) {
            if (upper && *upper != s.d) report.half_plane_constant = false;
            upper = s.d;
        } else if (s.lambda.imag() < 0.0) {
            if (lower && *lower != s.d) report.half_plane_constant = false;
            lower = s.d;
        }
    }

    report.definite_implies_equal = true;
    if (report.rank_phi == sys.dim())
        for (const DeficiencySample& s : report.samples)
            if (s.d_tilde != s.d) report.definite_implies_equal = false;

    return report;
}

} // namespace sympkit
