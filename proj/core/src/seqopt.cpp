#include "polyres/seqopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "polyres/error.hpp"
#include "polyres/restriction.hpp"

namespace polyres {

namespace {

// Slack on the stability re-checks; the power flow is solved to 1e-10.
constexpr double kStabilitySlack = 1e-9;

bool within(const VoltageProfile& v, const VoltageProfile& ref, double delta) {
    for (int j = 0; j < v.size(); ++j) {
        if (std::abs(v.v[j] - ref.v[j]) > delta * std::abs(ref.v[j]) + kStabilitySlack) return false;
    }
    return true;
}

}  // namespace

void SeqOptConfig::validate() const {
    if (!(delta0 > 0.0 && delta0 < 1.0)) throw DeltaOutOfRange(delta0);
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be nonnegative");
    pf_config.validate();
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "converged";
        case Termination::MaxIterations: return "max_iterations";
        case Termination::DeltaExhausted: return "delta_exhausted";
        case Termination::LpInfeasible: return "lp_infeasible";
        case Termination::LpUnbounded: return "lp_unbounded";
    }
    return "unknown";
}

double update_delta(double delta0, const VoltageProfile& v_k, const VoltageProfile& v_0) {
    if (v_k.size() != v_0.size()) throw std::invalid_argument("dimension mismatch in update_delta");
    double worst = 0.0;
    for (int j = 0; j < v_k.size(); ++j) {
        worst = std::max(worst, std::abs(v_k.v[j] - v_0.v[j]) / std::abs(v_0.v[j]));
    }
    return delta0 - worst;
}

double chained_budget(double delta0, const VoltageProfile& v_k, const VoltageProfile& v_0) {
    if (v_k.size() != v_0.size()) throw std::invalid_argument("dimension mismatch in chained_budget");
    double budget = std::numeric_limits<double>::infinity();
    for (int j = 0; j < v_k.size(); ++j) {
        const double room = delta0 * std::abs(v_0.v[j]) - std::abs(v_k.v[j] - v_0.v[j]);
        budget = std::min(budget, room / std::abs(v_k.v[j]));
    }
    return v_k.size() == 0 ? delta0 : budget;
}

bool converged(double f_next, double f_prev, double epsilon) {
    return std::abs(f_next - f_prev) <= epsilon * std::max(std::abs(f_prev), 1e-12);
}

SeqOptTrace run(const BusMatrices& matrices, const OperatingPoint& init, const LinearObjective& obj,
                const BoxBounds& bounds, const SeqOptConfig& cfg, const std::vector<EqualityRow>& extra_equalities) {
    cfg.validate();
    const int n = matrices.size();
    if (init.v_hat.size() != n || init.s_hat.size() != n) {
        throw InvalidInitialPoint("initial point does not match the network dimension");
    }
    double residual = std::numeric_limits<double>::infinity();
    try {
        residual = pf_residual(matrices, init.v_hat, init.s_hat);
    } catch (const ZeroVoltage&) {
    }
    if (!(residual <= kCenterResidualTol)) {
        throw InvalidInitialPoint("initial point is not a power-flow solution (residual " + std::to_string(residual) +
                                  ")");
    }

    SeqOptTrace trace;
    trace.iterates.push_back({init.s_hat, init.v_hat, cfg.delta0, obj.evaluate(init.s_hat)});
    const VoltageProfile v_init = init.v_hat;

    double delta = cfg.delta0;
    for (int k = 0; k < cfg.max_iterations; ++k) {
        const SeqOptIterate current = trace.iterates.back();
        if (delta <= kMinDelta) {
            trace.termination = Termination::DeltaExhausted;
            return trace;
        }
        trace.iterates.back().delta = delta;

        const PolyhedralRestriction p = build_restriction(matrices, {current.v, current.s}, delta);
        const RestrictedLpResult lp = solve(p, obj, bounds, extra_equalities);
        if (lp.status == LpStatus::Infeasible) {
            trace.termination = Termination::LpInfeasible;
            return trace;
        }
        if (lp.status == LpStatus::Unbounded) {
            trace.termination = Termination::LpUnbounded;
            return trace;
        }

        const SplitLoadVector s_next = normalize_split(*lp.s_star);
        const FixedPointResult pf = fixed_point_solve(matrices, s_next, current.v, cfg.pf_config);

        if (!within(pf.voltage, current.v, delta)) {
            throw NumericalError("iterate " + std::to_string(k + 1) + " left the restriction's stability region");
        }
        if (!within(pf.voltage, v_init, cfg.delta0)) {
            throw NumericalError("iterate " + std::to_string(k + 1) + " left the initial stability region");
        }

        const double next_delta =
            std::min(update_delta(cfg.delta0, pf.voltage, v_init), chained_budget(cfg.delta0, pf.voltage, v_init));
        const double f_next = obj.evaluate(s_next);
        trace.iterates.push_back({s_next, pf.voltage, std::max(next_delta, 0.0), f_next});

        if (converged(f_next, current.objective, cfg.epsilon)) {
            trace.termination = Termination::Converged;
            return trace;
        }
        delta = next_delta;
    }
    trace.termination = Termination::MaxIterations;
    return trace;
}

}  // namespace polyres
