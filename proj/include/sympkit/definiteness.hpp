// definiteness.hpp — Gram-matrix analysis of the definiteness condition:
// rank/kernel of phi(lambda, I), lambda-independence, maximal-rank prefixes,
// and the block-form sufficient condition.
#pragma once

#include "sympkit/propagation.hpp"

#include <optional>
#include <utility>

namespace sympkit {

/// phi(lambda, I) = sum_{k in I} Phi_k*(lambda) Psi_k Phi_k(lambda) for the
/// fundamental matrix anchored at Phi_{k0} = I, with its Hermitian
/// eigen-analysis: numerical rank and an orthonormal kernel basis.
struct GramMatrix {
    Matrix value;
    IndexRange interval;
    Complex lambda{0.0, 0.0};
    int rank{0};
    Matrix kernel_basis;      // 2n x (2n - rank)
    RealVector eigenvalues;   // ascending
};

GramMatrix gram_phi(const SymplecticSystem& sys, Complex lambda, IndexRange interval, int k0 = 0);

/// Pairwise comparison of Ker phi(lambda_i, I) across the probe list.
struct KernelComparison {
    std::vector<Complex> lambdas;
    std::vector<int> ranks;
    double max_principal_angle{0.0};
    bool consistent{false};   // equal ranks and all pairwise angles within tol
};

KernelComparison kernel_lambda_independence(const SymplecticSystem& sys, IndexRange interval,
                                            const std::vector<Complex>& lambdas);

/// Smallest prefix [0, m] whose Gram rank equals the rank on [0, N_max],
/// together with that rank. Rank monotonicity along prefixes is asserted.
std::pair<IndexRange, int> maximal_rank_interval(const SymplecticSystem& sys, int N_max);

/// Definiteness verdict on an interval: rank phi = 2n. Carries either the
/// full eigenvalue list (definite) or a kernel direction xi whose solution
/// Phi(lambda) xi has vanishing semi-norm (not definite).
struct DefinitenessCertificate {
    bool definite{false};
    RealVector eigenvalues;
    std::optional<Vector> kernel_vector;
    double kernel_semi_norm{0.0};   // ||Phi(lambda) xi||_Psi over the interval
    int rank{0};
};

DefinitenessCertificate is_definite(const SymplecticSystem& sys, IndexRange interval,
                                    Complex lambda_probe);

/// Block layout S_k(lambda) = [[A, B], [C + lambda W A, D + lambda W B]]
/// recovered from S_k and V_k; weight is then Psi_k = diag(W, 0).
struct SlBlockForm {
    Matrix A, B, C, D, W;
};

/// Recover the special block layout at index k, if present within structural_tol.
std::optional<SlBlockForm> detect_sl_block_form(const SymplecticSystem& sys, int k);

/// Sufficient definiteness condition: at some l >= 1, B_{l-1} invertible and
/// W_{l-1}, W_l positive definite. Throws StructureError when the block
/// layout cannot be recovered at l-1 or l.
bool block_sufficient_definite(const SymplecticSystem& sys, int l);

} // namespace sympkit
