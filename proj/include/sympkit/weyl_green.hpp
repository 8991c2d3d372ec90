// weyl_green.hpp — Weyl solutions and disks, half-line M-function approximation
// by nested boundary problems, the two-sided Green function, and the
// square-summable nonhomogeneous solutions built from it.
#pragma once

#include "sympkit/propagation.hpp"

#include <optional>

namespace sympkit {

/// Row-normalized self-adjoint boundary matrix: alpha alpha* = I, alpha J alpha* = 0.
class AlphaMatrix {
public:
    explicit AlphaMatrix(Matrix value, double tol = 1e-9);

    /// (I_n, 0).
    static AlphaMatrix canonical(int n);

    const Matrix& value() const { return value_; }
    int n() const { return static_cast<int>(value_.rows()); }

private:
    Matrix value_;
};

/// Fundamental matrix anchored at Phi_0 = (alpha*, -J alpha*) with its
/// natural column split Phi = (Z, Z~).
struct NaturalBasis {
    FundamentalMatrix Phi;
    TrajectorySequence Z;
    TrajectorySequence Z_tilde;
};

NaturalBasis natural_fundamental(const SymplecticSystem& sys, Complex lambda,
                                 const AlphaMatrix& alpha);

/// Weyl solution X(lambda) = Phi(lambda, alpha) [I; M] = Z + Z~ M.
TrajectorySequence weyl_solution(const SymplecticSystem& sys, Complex lambda,
                                 const AlphaMatrix& alpha, const Matrix& M);

/// Disk indicator E_k(M) = i sgn(Im lambda) X_k* J X_k (Hermitian).
/// M belongs to the Weyl disk D_k(lambda) iff E_k(M) <= 0. Only defined for
/// nonreal lambda.
Matrix disk_indicator(const SymplecticSystem& sys, int k, Complex lambda,
                      const AlphaMatrix& alpha, const Matrix& M);

struct WeylIterate {
    int N{0};
    bool boundary_solvable{false};
    Matrix M;
    double drift_from_prev{0.0};      // ||M_N - M_previous||_F, 0 at the first solvable N
    double max_disk_eigenvalue{0.0};  // max eigenvalue of E_N(M_N)
    bool in_disk{false};
};

/// Half-line M(lambda)-function approximation: the nested sequence of
/// boundary-value iterates M_N solving beta X_N(lambda) = 0, i.e.
/// M_N = -(beta Z~_N)^{-1} (beta Z_N).
struct WeylState {
    Matrix alpha;
    Matrix beta;
    Complex lambda{0.0, 0.0};
    int delta{0};                      // sgn Im(lambda)
    Matrix M;                          // last solvable iterate
    TrajectorySequence X;              // Weyl solution at M over [0, N_max]
    std::vector<WeylIterate> trace;
    std::vector<Matrix> Ek_samples;    // E_N(M) at the requested indices, final M
    double final_drift{0.0};           // drift between the last two solvable iterates
};

WeylState approx_half_line_M(const SymplecticSystem& sys, Complex lambda,
                             const std::vector<int>& N_list,
                             std::optional<AlphaMatrix> beta = std::nullopt,
                             std::optional<AlphaMatrix> alpha = std::nullopt);

/// Two-sided Green function G_{k,l}(lambda) assembled from Z~ and the Weyl
/// solutions X+ at lambda and at conj(lambda). Entries are evaluated on
/// demand from the stored factor sequences:
///   G_{k,l} = Z~_k(lambda) X_l^{+*}(conj lambda)   for k <= l,
///   G_{k,l} = X_k^+(lambda) Z~_l^*(conj lambda)    for k >= l+1.
class GreenTable {
public:
    /// Pair the half-line iterate at lambda with the one at conj(lambda),
    /// both from the boundary condition beta X_bc = 0 at the given index.
    /// The pair is adjoint-consistent up to roundoff, the Weyl factors are
    /// built by backward recursion from the boundary (numerically stable on
    /// growing systems), and the table's index range becomes [0, boundary].
    static GreenTable build(const SymplecticSystem& sys, Complex lambda, const AlphaMatrix& alpha,
                            int boundary_index, std::optional<AlphaMatrix> beta = std::nullopt);

    /// Explicit (possibly mismatched) pair, with the Weyl factors
    /// reconstructed as Z + Z~ M; identity residuals then scale with
    /// ||M* - M_bar|| amplified by the Z~ growth. Meant for sensitivity
    /// analysis at moderate indices, not production solves.
    GreenTable(const SymplecticSystem& sys, Complex lambda, const AlphaMatrix& alpha,
               Matrix M, Matrix M_bar);

    Matrix entry(int k, int l) const;      // G_{k,l}(lambda)
    Matrix entry_bar(int k, int l) const;  // G_{k,l}(conj lambda)

    Complex lambda() const { return lambda_; }
    const SymplecticSystem& system() const { return sys_; }
    int last() const { return last_; }     // table indices run over [0, last]
    const Matrix& M_plus() const { return M_; }
    const Matrix& M_plus_bar() const { return M_bar_; }
    const AlphaMatrix& alpha() const { return alpha_; }
    const TrajectorySequence& Z_tilde() const { return Z_tilde_; }
    const TrajectorySequence& Z_tilde_bar() const { return Z_tilde_bar_; }
    const TrajectorySequence& X_plus() const { return X_plus_; }
    const TrajectorySequence& X_plus_bar() const { return X_plus_bar_; }

    /// ||M_plus* - M_plus_bar||_F; zero for an adjoint-consistent pair.
    double pairing_mismatch() const;

private:
    GreenTable(const SymplecticSystem& sys, Complex lambda, const AlphaMatrix& alpha, int last,
               Matrix M, Matrix M_bar, TrajectorySequence Z_tilde, TrajectorySequence Z_tilde_bar,
               TrajectorySequence X_plus, TrajectorySequence X_plus_bar);

    SymplecticSystem sys_;
    Complex lambda_;
    AlphaMatrix alpha_;
    int last_{0};
    Matrix M_;
    Matrix M_bar_;
    TrajectorySequence Z_tilde_;
    TrajectorySequence Z_tilde_bar_;
    TrajectorySequence X_plus_;
    TrajectorySequence X_plus_bar_;
};

/// Frobenius residual of X+_k(lambda) Z~_k*(conj lambda) - Z~_k(lambda) X_k^{+*}(conj lambda) = J.
double green_pairing_residual(const GreenTable& table, int k);

/// zhat_k = X+_k(lambda) sum_{l<k} Z~_l*(conj) Psi_l f_l
///        + Z~_k(lambda) sum_{l>=k} X_l^{+*}(conj) Psi_l f_l,
/// truncated at the horizon. Solves the nonhomogeneous system and satisfies
/// alpha zhat_0 = 0. Requires nonreal lambda (enforced at table construction).
TrajectorySequence zhat(const GreenTable& table, const TrajectorySequence& f);

/// yhat = X+(lambda) v + zhat; alpha yhat_0 = v. Single-column f only.
TrajectorySequence yhat(const GreenTable& table, const Vector& v, const TrajectorySequence& f);

/// Growth-ratio classification of square-summable solution directions from
/// the Gram matrices G_N = phi(lambda, [0, N]) across the probe list.
struct SquareSummableReport {
    int count{0};
    std::vector<int> N_list;
    RealMatrix norm_trace;             // row j = eigenvalues of G_{N_j}, ascending
    std::vector<double> growth_ratios; // per direction, last probe pair
    double threshold_per_step{0.0};
    double allowed_ratio{0.0};         // threshold^(delta N) for the last pair
    double dynamic_range{0.0};         // max/min positive eigenvalue at the last probe
};

SquareSummableReport count_square_summable(const SymplecticSystem& sys, Complex lambda,
                                           const std::vector<int>& N_list,
                                           double growth_ratio_threshold = 1.0 + 1e-6);

} // namespace sympkit
