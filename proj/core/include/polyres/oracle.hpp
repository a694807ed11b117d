#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polyres/linprog.hpp"
#include "polyres/network.hpp"
#include "polyres/powerflow.hpp"
#include "polyres/restriction.hpp"

namespace polyres {

// ---------------------------------------------------------------------------
// Two-node network, solved in closed form.

/// Slack bus 0 feeding bus 1 through z = r + i x. (p1, q1) is the power
/// injected at bus 1, i.e. the negated net load.
struct TwoNodeCase {
    double r = 0.0;
    double x = 0.0;
    double p1 = 0.0;
    double q1 = 0.0;
    double v0_mag = 1.0;
};

/// One root of the quadratic in the squared line current l. (p0, q0) is the
/// power injected at the slack, so p0 + p1 = r l.
struct TwoNodeSolution {
    double ell = 0.0;
    double v1_sq = 0.0;
    double p0 = 0.0;
    double q0 = 0.0;
};

/// Both physical roots (|V1|^2 > 0), high-voltage first; empty when the
/// discriminant is negative.
std::vector<TwoNodeSolution> two_node_solutions(const TwoNodeCase& c);

/// Bounds on l implied by (1 - delta)^2 <= |V1|^2 <= (1 + delta)^2.
/// Requires |V0| = 1.
std::pair<double, double> two_node_current_box(const TwoNodeCase& c, double delta);

/// Slack power of the relaxation that only keeps the current box: the lower
/// end of the box is taken as l. `gap` is the high-voltage p0 minus the
/// relaxed p0.
struct TwoNodeRelaxation {
    double ell = 0.0;
    double p0_relaxed = 0.0;
    double p0_exact = 0.0;
    double gap = 0.0;
};

TwoNodeRelaxation two_node_relaxation(const TwoNodeCase& c, double delta);

// ---------------------------------------------------------------------------
// Sampling of the feasibility region.

/// One grid axis over a net-load coordinate. `points` == 1 uses the midpoint.
struct GridAxis {
    LoadCoordinate coordinate;
    double lo = 0.0;
    double hi = 0.0;
    int points = 201;
};

enum class Verdict { InS, Unstable, Diverged, NotConverged };

const char* to_string(Verdict v);

struct RegionPoint {
    std::vector<double> coordinates;
    SplitLoadVector load;
    Verdict verdict = Verdict::NotConverged;
    /// Solution reached from the flat start, when one was reached.
    std::optional<VoltageProfile> voltage;
};

struct RegionSample {
    std::vector<GridAxis> axes;
    double delta = 0.0;
    std::vector<RegionPoint> points;

    std::size_t count_in_s() const;
};

/// Membership test used throughout the oracle: the fixed point is reached
/// from the flat start and is delta-stable relative to `hat`.
Verdict classify(const BusMatrices& matrices, const VoltageProfile& hat, double delta, const SplitLoadVector& load,
                 const FixedPointConfig& cfg, std::optional<VoltageProfile>* witness = nullptr);

/// Row-major grid over at most three coordinates; all other loads follow
/// hat.s_hat.
RegionSample sample_region(const BusMatrices& matrices, const OperatingPoint& hat, double delta,
                           const std::vector<GridAxis>& grid, const FixedPointConfig& cfg = {});

/// Hit-and-run samples of {s >= 0 : lhs s <= rhs} intersected with `bounds`.
/// Deterministic for a given seed. Throws NoFeasiblePoint if the set is empty.
std::vector<Eigen::VectorXd> sample_polytope(const PolyhedralRestriction& p, const BoxBounds& bounds, int count,
                                             std::uint64_t seed, int thinning = 5);

// ---------------------------------------------------------------------------
// Exhaustive search.

struct BruteForceResult {
    SplitLoadVector best;
    double value = 0.0;
    VoltageProfile voltage;
    Complex slack_power;
    /// Intervals per effective axis.
    int grid_resolution = 0;
    int effective_dimension = 0;
    std::size_t evaluations = 0;
};

/// Grid search over the box for the best load with a delta-stable power-flow
/// solution around the no-load profile V0 * 1.
///
/// Effective axes are the net loads (active or reactive, per bus) whose range
/// in the box is nonzero, at most three; for each net value the split is
/// chosen to favour the objective. Each grid axis has grid_resolution
/// intervals, and every feasible/infeasible transition that would improve
/// the objective is refined by bisection. Throws NoFeasiblePoint when no grid
/// point is feasible.
BruteForceResult brute_force_optimum(const BusMatrices& matrices, const LinearObjective& obj, const BoxBounds& bounds,
                                     double delta, int grid_resolution = 200, const FixedPointConfig& cfg = {});

}  // namespace polyres
