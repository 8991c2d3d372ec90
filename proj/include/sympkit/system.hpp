// system.hpp — time-reversed discrete symplectic system z_k = (S_k + lambda V_k) z_{k+1}:
// coefficient storage, standing-hypothesis validation, transfer matrices, and the
// degenerate semi-inner product induced by the weight sequence Psi.
#pragma once

#include "sympkit/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace sympkit {

/// 2n x 2n block matrix [[0, I], [-I, 0]].
Matrix make_J(int n);

/// V = -J Psi S. Inputs must share the (even) dimension 2n.
Matrix build_V(const Matrix& S, const Matrix& Psi);

/// Coefficient sequences S_k, Psi_k on the discrete interval [0, N] together
/// with the cached V_k = -J Psi_k S_k and the tolerance policy.
///
/// Construction checks shapes only; whether the coefficients actually satisfy
/// the standing hypotheses is decided by validate_hypotheses, so invalid
/// systems can be loaded and reported on rather than rejected at the door.
class SymplecticSystem {
public:
    SymplecticSystem(std::vector<Matrix> S, std::vector<Matrix> Psi,
                     ToleranceConfig tolerances = {});

    /// Same S and Psi at every index k in [0, horizon].
    static SymplecticSystem constant(const Matrix& S, const Matrix& Psi, int horizon,
                                     ToleranceConfig tolerances = {});

    /// Coefficients drawn from generators, materialized eagerly over [0, horizon].
    static SymplecticSystem from_generator(int horizon,
                                           const std::function<Matrix(int)>& S_of,
                                           const std::function<Matrix(int)>& Psi_of,
                                           ToleranceConfig tolerances = {});

    int half_dim() const { return n_; }     // n
    int dim() const { return 2 * n_; }      // 2n
    int horizon() const { return horizon_; }  // N; coefficients live on [0, N]

    const Matrix& S(int k) const;
    const Matrix& Psi(int k) const;
    const Matrix& V(int k) const;
    const Matrix& J() const { return J_; }

    /// S_k + lambda V_k.
    Matrix s_lambda(int k, Complex lambda) const;

    /// Closed-form inverse -J S*_k(conj(lambda)) J; exists for every lambda.
    Matrix s_lambda_inverse(int k, Complex lambda) const;

    const ToleranceConfig& tolerances() const { return tol_; }

private:
    void check_index(int k) const;

    int n_{0};
    int horizon_{0};
    std::vector<Matrix> S_;
    std::vector<Matrix> Psi_;
    std::vector<Matrix> V_;
    Matrix J_;
    ToleranceConfig tol_;
};

/// Per-index residuals of the standing hypotheses:
///   symplectic        ||S* J S - J||_F
///   weight_hermitian  ||Psi - Psi*||_F
///   weight_isotropic  ||Psi J Psi||_F
///   weight_min_eig    smallest eigenvalue of (Psi + Psi*)/2
///   v_roundtrip       ||J S J V* J - Psi||_F
struct HypothesisCheck {
    int k{0};
    double symplectic{0.0};
    double weight_hermitian{0.0};
    double weight_isotropic{0.0};
    double weight_min_eig{0.0};
    double v_roundtrip{0.0};
    bool pass{false};
};

struct ValidationReport {
    std::vector<HypothesisCheck> per_k;
    double max_symplectic{0.0};
    double max_weight_hermitian{0.0};
    double max_weight_isotropic{0.0};
    double min_weight_eig{0.0};
    double max_v_roundtrip{0.0};
    bool pass{false};

    /// Name of the first violated condition, empty when pass.
    std::string first_violation;
};

ValidationReport validate_hypotheses(const SymplecticSystem& sys);

/// Second-order Sturm-Liouville difference equation
///   Delta(p_k Delta y_{k-1}) + q_k y_k = lambda w_k y_k
/// realized as a 2x2 symplectic system with weight Psi_k = diag(w_k, 0).
///
/// All three sequences are indexed by k in [0, N]; p_next[k] holds p_{k+1},
/// the coefficient that enters the transfer matrix at index k. Requires
/// p_next[k] != 0 and w[k] >= 0.
SymplecticSystem from_sturm_liouville(const std::vector<double>& p_next,
                                      const std::vector<double>& q,
                                      const std::vector<double>& w,
                                      ToleranceConfig tolerances = {});

/// A 2n x m matrix sequence over a contiguous index window [first, last]
/// inside [0, N], tagged with the spectral parameter that produced it.
class TrajectorySequence {
public:
    TrajectorySequence(int first_index, std::vector<Matrix> values, Complex lambda);

    /// Zero sequence over [first, last].
    static TrajectorySequence zero(int first, int last, int rows, int cols,
                                   Complex lambda = Complex(0, 0));

    int first() const { return first_; }
    int last() const { return first_ + static_cast<int>(values_.size()) - 1; }
    IndexRange window() const { return {first(), last()}; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Complex lambda() const { return lambda_; }

    const Matrix& at(int k) const;
    Matrix& at(int k);

private:
    int first_{0};
    int rows_{0};
    int cols_{0};
    Complex lambda_{0.0, 0.0};
    std::vector<Matrix> values_;
};

/// Semi-inner product  sum_{k in interval} z_k* Psi_k w_k  (m x m matrix;
/// 1x1 when the trajectories are vectors). An empty interval yields the zero
/// matrix. The interval must lie inside both trajectory windows.
Matrix semi_inner(const SymplecticSystem& sys, const TrajectorySequence& z,
                  const TrajectorySequence& w, IndexRange interval);

/// Scalar seminorm sqrt(trace(semi_inner(z, z, interval))); for a single
/// column this is the usual ||z||_Psi.
double semi_norm(const SymplecticSystem& sys, const TrajectorySequence& z, IndexRange interval);

/// Smallest index bound N' such that Psi_k z_k vanishes (within tol) for all
/// k >= N' in the window; window end + 1 when the tail never vanishes.
int psi_support_bound(const SymplecticSystem& sys, const TrajectorySequence& z, double tol);

} // namespace sympkit
