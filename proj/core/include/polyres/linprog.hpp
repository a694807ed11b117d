#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "polyres/powerflow.hpp"
#include "polyres/restriction.hpp"

namespace polyres {

enum class Sense { Maximize, Minimize };

/// Linear objective c . s over the stacked split vector.
struct LinearObjective {
    Eigen::VectorXd weights;
    Sense direction = Sense::Maximize;

    /// sum_j (pc_j - pg_j), maximized.
    static LinearObjective max_active_load(int n);
    /// sum_j (pc_j - pg_j), minimized.
    static LinearObjective min_active_load(int n);

    double evaluate(const Eigen::VectorXd& stacked) const { return weights.dot(stacked); }
    double evaluate(const SplitLoadVector& s) const { return evaluate(s.stacked()); }
};

/// Elementwise box on the stacked split vector; upper may be +inf.
struct BoxBounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static BoxBounds nonnegative(int n);
    /// Every component in [lo, hi].
    static BoxBounds uniform(int n, double lo, double hi);
    /// Pins the split vector to a single point.
    static BoxBounds pinned(const SplitLoadVector& s);

    void validate() const;
};

struct EqualityRow {
    Eigen::VectorXd row;
    double rhs = 0.0;
};

/// Net reactive load at `bus` tied to its net active load: q = ratio(eta) p.
EqualityRow power_factor_row(int n, int bus, double power_factor);

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

/// max/min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper.
struct LinearProgram {
    Eigen::VectorXd c;
    Sense direction = Sense::Maximize;
    Eigen::MatrixXd A_ub;
    Eigen::VectorXd b_ub;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;
    double value = 0.0;
    /// Multipliers of the A_ub rows, the finite upper bounds (in variable
    /// order, zero where the bound is infinite) and the A_eq rows, signed so
    /// that for Maximize the A_ub and upper-bound multipliers are >= 0.
    Eigen::VectorXd dual_ub;
    Eigen::VectorXd dual_upper;
    Eigen::VectorXd dual_eq;
    /// Objective of the dual certificate; equals `value` at optimality.
    double dual_bound = 0.0;
    int pivots = 0;
};

/// Dense two-phase primal simplex with Bland's rule.
LpResult solve_lp(const LinearProgram& lp);

struct RestrictedLpResult {
    LpStatus status = LpStatus::Infeasible;
    std::optional<SplitLoadVector> s_star;
    double value = 0.0;
    LpResult raw;
};

/// Optimizes over P intersected with the box and optional equality rows.
/// The returned vertex is re-checked against P with `contains`.
RestrictedLpResult solve(const PolyhedralRestriction& p, const LinearObjective& obj, const BoxBounds& bounds,
                         const std::vector<EqualityRow>& extra_equalities = {});

}  // namespace polyres
