#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "polyres/network.hpp"
#include "polyres/powerflow.hpp"

namespace polyres {

/// The 4N x 4N matrices behind the polyhedral restriction.
///
/// A is the signed block pattern over R and X acting on (pc, qc, pg, qg);
/// B = J4 (x) (R + X) and C = J4 (x) |Z| with J4 the 4x4 all-ones matrix.
struct RestrictionMatrices {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
};

/// {s >= 0 : lhs s <= rhs} with lhs = A + delta B and
/// rhs = delta (1 - delta)^2 Vmin^3 1 + (A - delta (B + (1 - delta) C)) s_hat.
///
/// Every member admits a power-flow solution V with |V_j - V_hat_j| <= delta |V_hat_j|.
/// Nonnegativity is implicit and not stored as rows.
struct PolyhedralRestriction {
    Eigen::MatrixXd lhs;
    Eigen::VectorXd rhs;
    double delta = 0.0;
    OperatingPoint center;

    int dimension() const noexcept { return static_cast<int>(lhs.cols()); }
};

inline constexpr double kMembershipTol = 1e-9;

RestrictionMatrices build_matrices(const BusMatrices& matrices);

/// Throws DeltaOutOfRange unless 0 < delta < 1 and InfeasibleCenter if the
/// center's power-flow residual exceeds kCenterResidualTol.
PolyhedralRestriction build_restriction(const BusMatrices& matrices, const OperatingPoint& center, double delta);

/// Restriction around the no-load point (V0 * 1, 0).
PolyhedralRestriction build_restriction_nominal(const BusMatrices& matrices, Complex v0, double delta);

bool contains(const PolyhedralRestriction& p, const SplitLoadVector& s, double tol = kMembershipTol);
bool contains(const PolyhedralRestriction& p, const Eigen::VectorXd& stacked, double tol = kMembershipTol);

/// Cancels simultaneous consumption and generation at each bus, keeping the
/// net load. Membership in any restriction is preserved.
SplitLoadVector normalize_split(const SplitLoadVector& s);

using Point2 = std::array<double, 2>;

/// Axis-aligned window of a 2-D slice.
struct SliceWindow {
    double lo0, hi0, lo1, hi1;
};

/// Section of P in the plane spanned by two net-load coordinates, all other
/// net loads fixed to those of `base`. Returned counter-clockwise; empty
/// when the section misses the window.
std::vector<Point2> slice_polygon(const PolyhedralRestriction& p, const SplitLoadVector& base,
                                  const std::array<LoadCoordinate, 2>& axes, const SliceWindow& window);

}  // namespace polyres
