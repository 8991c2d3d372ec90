// relations.hpp — finite-section diagnostics for the minimal/maximal linear
// relations: K-maps and their range decomposition, the compactly supported
// preimage construction, multivalued-part witnesses, and the deficiency-index
// identity d_lambda = d~_lambda + 2n - rank phi.
#pragma once

#include "sympkit/definiteness.hpp"
#include "sympkit/weyl_green.hpp"

#include <optional>

namespace sympkit {

/// K_{lambda,I}(z) = sum_{k in I} Phi_k*(conj lambda) Psi_k z_k
/// for the fundamental matrix anchored at Phi_0 = I.
Vector k_map_apply(const SymplecticSystem& sys, Complex lambda, const TrajectorySequence& z,
                   IndexRange interval);

struct KMapRangeReport {
    int kmap_rank{0};
    int phi_rank{0};
    double max_principal_angle{0.0};
    bool equal{false};
};

/// Compares ran K_{lambda,I}, generated by unit impulses, with Ran phi(I).
/// kmap_rank also equals the codimension of ker K within the finitely
/// supported sequences on I.
KMapRangeReport k_map_range_check(const SymplecticSystem& sys, Complex lambda, IndexRange interval);

/// For compactly Psi-supported g with K_lambda(g) = 0, the sequence
///   z_k = -Phi_k(lambda) J sum_{j>=k} Phi_j*(conj lambda) Psi_j g_j
/// solves L(z) - lambda Psi z = Psi g with z_0 = 0 and vanishes beyond the
/// Psi-support of g. Throws invalid_argument when K_lambda(g) is nonzero.
TrajectorySequence preimage_construction(const SymplecticSystem& sys, Complex lambda,
                                         const TrajectorySequence& g);

struct WitnessPair {
    TrajectorySequence z;   // Psi z = 0 everywhere
    TrajectorySequence f;   // L(z) = Psi f with ||f||_Psi > 0
    int impulse_index{0};   // support index of the canonical forcing
    double f_semi_norm{0.0};
    double residual{0.0};   // max_k ||L(z)_k - Psi_k f_k||
};

/// Searches for a multivalued-part witness: z with vanishing Psi-seminorm and
/// nontrivial f with L(z) = Psi f, probing unit impulses Psi f = Psi_k v at
/// increasing support indices. Returns the earliest witness, or nothing.
std::optional<WitnessPair> multivalued_witness(const SymplecticSystem& sys);

/// Validates a candidate pair against the witness conditions.
bool is_multivalued_witness(const SymplecticSystem& sys, const TrajectorySequence& z,
                            const TrajectorySequence& f, double tol);

struct DeficiencySample {
    Complex lambda{0.0, 0.0};
    int d{0};        // square-summable solution count estimate
    int d_tilde{0};  // d - (2n - rank phi)
    SquareSummableReport classification;
};

struct DeficiencyReport {
    std::vector<DeficiencySample> samples;
    int rank_phi{0};
    int gap{0};                        // 2n - rank phi
    bool d_tilde_nonnegative{false};
    bool gap_constant{false};          // d - d~ constant across samples
    bool half_plane_constant{false};   // d constant within each open half-plane
    bool definite_implies_equal{false};
};

/// Runs the square-summability classification at each lambda sample and checks
/// the deficiency-index identity and its corollaries on the reported values.
DeficiencyReport deficiency_consistency(const SymplecticSystem& sys,
                                        const std::vector<Complex>& lambda_samples,
                                        IndexRange interval,
                                        std::vector<int> N_list = {},
                                        double growth_ratio_threshold = 1.0 + 1e-6);

} // namespace sympkit
