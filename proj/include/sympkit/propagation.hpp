// propagation.hpp — solution transfer in both index directions, fundamental
// matrices, the linear map L, and Wronskian / Lagrange identity residuals.
#pragma once

#include "sympkit/system.hpp"

#include <optional>

namespace sympkit {

/// Unique solution of z_k = S_k(lambda) z_{k+1} with value `init` at k0,
/// computed over the window spanned by k0 and target: downward steps apply
/// S_k(lambda), upward steps the closed-form inverse. Non-finite growth
/// raises PropagationError with the first bad index.
TrajectorySequence transfer(const SymplecticSystem& sys, Complex lambda, const Matrix& init,
                            int k0, int target);

/// Matrix solution Phi(lambda) on [0, N] with Phi_{k0} = C for a symplectic
/// anchor C (C* J C = J within structural_tol).
class FundamentalMatrix {
public:
    FundamentalMatrix(int anchor, Matrix anchor_value, std::vector<Matrix> values, Complex lambda);

    int anchor() const { return anchor_; }
    const Matrix& anchor_value() const { return anchor_value_; }
    Complex lambda() const { return lambda_; }
    int first() const { return 0; }
    int last() const { return static_cast<int>(values_.size()) - 1; }
    int dim() const { return static_cast<int>(values_.front().rows()); }

    const Matrix& at(int k) const;

    /// Columns [col0, col0 + ncols) as a trajectory over [0, N].
    TrajectorySequence column_block(int col0, int ncols) const;
    TrajectorySequence as_trajectory() const { return column_block(0, dim()); }

private:
    int anchor_{0};
    Matrix anchor_value_;
    std::vector<Matrix> values_;
    Complex lambda_{0.0, 0.0};
};

FundamentalMatrix fundamental_matrix(const SymplecticSystem& sys, Complex lambda, int k0,
                                     const Matrix& C);

/// L(z)_k = J (z_k - S_k z_{k+1}) for k in [first, last-1] of z's window.
TrajectorySequence apply_L(const SymplecticSystem& sys, const TrajectorySequence& z);

/// Solution of the nonhomogeneous system z_k = S_k(lambda) z_{k+1} - J Psi_k f_k
/// with the given value at index f.first(); f must span [first, last-1] or more.
/// The window of the result matches [f.first(), f.last() + 1] clipped to the horizon.
TrajectorySequence solve_ivp_nonhom(const SymplecticSystem& sys, Complex lambda,
                                    const TrajectorySequence& f, const Matrix& z0);

/// max_k || z_k* J u_k - z_f* J u_f ||_F over the common window, where f is
/// the first common index. Constant for solutions at conjugate parameters.
double wronskian_residual(const SymplecticSystem& sys, const TrajectorySequence& z,
                          const TrajectorySequence& u);

struct LagrangeReport {
    std::vector<double> per_step;  // residual of the difference identity at each k
    double summed{0.0};            // residual of the telescoped identity over the window
    double max_abs{0.0};
};

/// Residuals of the extended Lagrange identity for z solving the lambda-system
/// with forcing f and u solving the nu-system with forcing g. Null forcings
/// are treated as zero sequences.
LagrangeReport lagrange_residual(const SymplecticSystem& sys,
                                 const TrajectorySequence& z, const TrajectorySequence* f,
                                 const TrajectorySequence& u, const TrajectorySequence* g);

/// max_k || z_k - S_k(lambda) z_{k+1} + J Psi_k f_k ||_F (f null = homogeneous).
double recursion_residual(const SymplecticSystem& sys, Complex lambda,
                          const TrajectorySequence& z, const TrajectorySequence* f = nullptr);

} // namespace sympkit
