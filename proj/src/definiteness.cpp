#include "sympkit/definiteness.hpp"

#include "sympkit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sympkit {

GramMatrix gram_phi(const SymplecticSystem& sys, Complex lambda, IndexRange interval, int k0) {
    if (interval.empty())
        throw std::invalid_argument("gram_phi: empty interval");
    if (interval.lo < 0 || interval.hi > sys.horizon())
        throw std::out_of_range("gram_phi: interval outside horizon");
    if (!interval.contains(k0))
        throw std::invalid_argument("gram_phi: anchor k0 must lie in the interval");

    const FundamentalMatrix Phi =
        fundamental_matrix(sys, lambda, k0, Matrix::Identity(sys.dim(), sys.dim()));
    Matrix value = Matrix::Zero(sys.dim(), sys.dim());
    for (int k = interval.lo; k <= interval.hi; ++k)
        value += Phi.at(k).adjoint() * sys.Psi(k) * Phi.at(k);
    value = hermitian_part(value);

    GramMatrix gram;
    gram.value = value;
    gram.interval = interval;
    gram.lambda = lambda;
    const HermitianRank split = hermitian_rank(value, sys.tolerances().rank_tol);
    gram.rank = split.rank;
    gram.kernel_basis = split.kernel;
    gram.eigenvalues = split.eigenvalues;
    return gram;
}

KernelComparison kernel_lambda_independence(const SymplecticSystem& sys, IndexRange interval,
                                            const std::vector<Complex>& lambdas) {
    if (lambdas.size() < 2)
        throw std::invalid_argument("kernel_lambda_independence: need at least two probes");
    KernelComparison cmp;
    cmp.lambdas = lambdas;
    std::vector<Matrix> kernels;
    kernels.reserve(lambdas.size());
    for (const Complex& lambda : lambdas) {
        const GramMatrix gram = gram_phi(sys, lambda, interval);
        cmp.ranks.push_back(gram.rank);
        kernels.push_back(gram.kernel_basis);
    }
    bool ranks_equal = true;
    for (std::size_t i = 1; i < cmp.ranks.size(); ++i)
        ranks_equal = ranks_equal && cmp.ranks[i] == cmp.ranks[0];
    for (std::size_t i = 0; i < kernels.size(); ++i)
        for (std::size_t j = i + 1; j < kernels.size(); ++j)
            cmp.max_principal_angle =
                std::max(cmp.max_principal_angle, max_principal_angle(kernels[i], kernels[j]));
    cmp.consistent = ranks_equal &&
                     cmp.max_principal_angle <= std::sqrt(sys.tolerances().structural_tol);
    return cmp;
}

std::pair<IndexRange, int> maximal_rank_interval(const SymplecticSystem& sys, int N_max) {
    if (N_max < 0 || N_max > sys.horizon())
        throw std::out_of_range("maximal_rank_interval: N_max outside horizon");
    // rank is lambda-independent; probe at lambda = 0
    const int full_rank = gram_phi(sys, Complex(0, 0), {0, N_max}).rank;
    int previous = 0;
    for (int m = 0; m <= N_max; ++m) {
        const int rank_m = gram_phi(sys, Complex(0, 0), {0, m}).rank;
        if (rank_m < previous)
            throw std::runtime_error("maximal_rank_interval: rank not monotone at m=" +
                                     std::to_string(m));
        previous = rank_m;
        if (rank_m == full_rank) return {IndexRange{0, m}, rank_m};
    }
    return {IndexRange{0, N_max}, full_rank};
}

DefinitenessCertificate is_definite(const SymplecticSystem& sys, IndexRange interval,
                                    Complex lambda_probe) {
    const GramMatrix gram = gram_phi(sys, lambda_probe, interval);
    DefinitenessCertificate cert;
    cert.rank = gram.rank;
    cert.eigenvalues = gram.eigenvalues;
    cert.definite = gram.rank == sys.dim();
    if (!cert.definite) {
        const Vector xi = gram.kernel_basis.col(0);
        cert.kernel_vector = xi;
        // semi-norm of Phi(lambda) xi equals sqrt(xi* phi xi)
        const double quad = std::real((xi.adjoint() * gram.value * xi)(0, 0));
        cert.kernel_semi_norm = std::sqrt(std::max(quad, 0.0));
    }
    return cert;
}

std::optional<SlBlockForm> detect_sl_block_form(const SymplecticSystem& sys, int k) {
    const int n = sys.half_dim();
    const Matrix& S = sys.S(k);
    const Matrix& V = sys.V(k);
    const Matrix& Psi = sys.Psi(k);
    const double tol = sys.tolerances().structural_tol;

    // V must vanish in the top block rows and Psi must be diag(W, 0)
    if (frob(V.topRows(n)) > tol) return std::nullopt;
    if (frob(Psi.topRightCorner(n, n)) > tol || frob(Psi.bottomLeftCorner(n, n)) > tol ||
        frob(Psi.bottomRightCorner(n, n)) > tol)
        return std::nullopt;

    SlBlockForm blocks;
    blocks.A = S.topLeftCorner(n, n);
    blocks.B = S.topRightCorner(n, n);
    blocks.C = S.bottomLeftCorner(n, n);
    blocks.D = S.bottomRightCorner(n, n);
    blocks.W = Psi.topLeftCorner(n, n);

    // bottom rows of V must reproduce (W A, W B)
    if (frob(V.bottomLeftCorner(n, n) - blocks.W * blocks.A) > tol) return std::nullopt;
    if (frob(V.bottomRightCorner(n, n) - blocks.W * blocks.B) > tol) return std::nullopt;
    return blocks;
}

bool block_sufficient_definite(const SymplecticSystem& sys, int l) {
    if (l < 1 || l > sys.horizon())
        throw std::out_of_range("block_sufficient_definite: l must satisfy 1 <= l <= horizon");
    const auto prev = detect_sl_block_form(sys, l - 1);
    const auto curr = detect_sl_block_form(sys, l);
    if (!prev || !curr)
        throw StructureError("block_sufficient_definite: special block layout not detected at l-1 or l");

    const double rank_tol = sys.tolerances().rank_tol;
    const double psd_tol = sys.tolerances().psd_tol;
    const bool b_invertible = numerical_rank(prev->B, rank_tol) == sys.half_dim();
    const bool w_prev_pd = min_eigenvalue(prev->W) > psd_tol;
    const bool w_curr_pd = min_eigenvalue(curr->W) > psd_tol;
    return b_invertible && w_prev_pd && w_curr_pd;
}

} // namespace sympkit
