#pragma once

#include <vector>

#include "polyres/linprog.hpp"
#include "polyres/network.hpp"
#include "polyres/powerflow.hpp"

namespace polyres {

struct SeqOptConfig {
    double delta0 = 0.1;    ///< initial voltage-deviation budget
    double epsilon = 0.01;  ///< relative objective change that stops the run
    int max_iterations = 100;
    FixedPointConfig pf_config;

    void validate() const;
};

struct SeqOptIterate {
    SplitLoadVector s;
    VoltageProfile v;
    /// Budget used to build the restriction around this iterate.
    double delta = 0.0;
    double objective = 0.0;
};

enum class Termination { Converged, MaxIterations, DeltaExhausted, LpInfeasible, LpUnbounded };

const char* to_string(Termination t);

/// Iterate 0 is the initial point; every later iterate is power-flow feasible
/// and delta0-stable with respect to iterate 0.
struct SeqOptTrace {
    std::vector<SeqOptIterate> iterates;
    Termination termination = Termination::MaxIterations;

    const SeqOptIterate& last() const { return iterates.back(); }
};

/// Budget below which a restriction is considered degenerate.
inline constexpr double kMinDelta = 1e-12;

/// Sequential LP over re-centered polyhedral restrictions.
///
/// Each step builds P around the current iterate with the current budget,
/// solves the LP, cancels simultaneous consumption/generation, solves the
/// power flow warm-started from the current voltage and shrinks the budget
/// by the distance travelled from the initial voltage.
///
/// Throws InvalidInitialPoint if `init` is not a power-flow solution and
/// NumericalError if a new iterate leaves the guaranteed region.
SeqOptTrace run(const BusMatrices& matrices, const OperatingPoint& init, const LinearObjective& obj,
                const BoxBounds& bounds, const SeqOptConfig& cfg,
                const std::vector<EqualityRow>& extra_equalities = {});

/// delta0 - max_j |v_k,j - v_0,j| / |v_0,j|; may be <= 0.
double update_delta(double delta0, const VoltageProfile& v_k, const VoltageProfile& v_0);

/// Largest budget around v_k that keeps every point reachable from it within
/// delta0 of v_0: min_j (delta0 |v_0,j| - |v_k,j - v_0,j|) / |v_k,j|.
double chained_budget(double delta0, const VoltageProfile& v_k, const VoltageProfile& v_0);

/// |f_next - f_prev| <= epsilon * max(|f_prev|, 1e-12).
bool converged(double f_next, double f_prev, double epsilon);

}  // namespace polyres
