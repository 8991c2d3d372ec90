// types.hpp — shared scalar/matrix aliases, tolerances, index ranges
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace sympkit {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Thresholds used by every structural / rank / definiteness decision.
///   structural_tol — residual ceiling for exact matrix identities
///   rank_tol       — relative singular-value (eigenvalue) cutoff for numerical rank
///   psd_tol        — eigenvalue floor when deciding semi-definiteness
struct ToleranceConfig {
    double structural_tol = 1e-9;
    double rank_tol       = 1e-11;
    double psd_tol        = 1e-10;

    void validate() const {
        if (structural_tol < 0.0 || rank_tol < 0.0 || psd_tol < 0.0)
            throw std::invalid_argument("ToleranceConfig: tolerances must be nonnegative");
        if (rank_tol >= 1.0)
            throw std::invalid_argument("ToleranceConfig: rank_tol must be < 1");
    }
};

/// Closed discrete interval [lo, hi]; lo > hi denotes the empty interval.
struct IndexRange {
    int lo{0};
    int hi{-1};

    IndexRange() = default;
    IndexRange(int lo_, int hi_) : lo(lo_), hi(hi_) {}

    bool empty() const { return lo > hi; }
    int length() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(int k) const { return k >= lo && k <= hi; }
    bool contains(const IndexRange& other) const {
        return other.empty() || (lo <= other.lo && other.hi <= hi);
    }
    bool operator==(const IndexRange& other) const = default;
};

/// Thrown when a propagated sequence leaves the representable range.
/// Carries the first index at which a non-finite entry appeared.
class PropagationError : public std::runtime_error {
public:
    PropagationError(const std::string& what, int index)
        : std::runtime_error(what), index_(index) {}
    int index() const { return index_; }

private:
    int index_;
};

/// Thrown when an operation requiring a specific coefficient block layout
/// cannot recover that layout from the stored coefficients.
class StructureError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sympkit
