#pragma once

#include <span>

#include <Eigen/Dense>

#include "polyres/network.hpp"

namespace polyres {

/// Complex voltages at the PQ buses plus the fixed slack voltage.
struct VoltageProfile {
    Eigen::VectorXcd v;
    Complex v0{1.0, 0.0};

    int size() const noexcept { return static_cast<int>(v.size()); }

    /// The no-load profile V0 * 1.
    static VoltageProfile flat(int n, Complex v0);
};

/// Nonnegative split of the net load into consumption and generation.
///
/// Stacked order is (pc, qc, pg, qg); the net complex load at bus j is
/// (pc_j - pg_j) + i (qc_j - qg_j), positive meaning consumption.
class SplitLoadVector {
public:
    SplitLoadVector() = default;
    SplitLoadVector(Eigen::VectorXd pc, Eigen::VectorXd qc, Eigen::VectorXd pg, Eigen::VectorXd qg);

    static SplitLoadVector zeros(int n);
    static SplitLoadVector from_stacked(const Eigen::VectorXd& stacked);
    /// Complementary split of a net complex load (one of each pair is zero).
    static SplitLoadVector from_net(const Eigen::VectorXcd& net);

    int size() const noexcept { return static_cast<int>(pc_.size()); }
    const Eigen::VectorXd& pc() const noexcept { return pc_; }
    const Eigen::VectorXd& qc() const noexcept { return qc_; }
    const Eigen::VectorXd& pg() const noexcept { return pg_; }
    const Eigen::VectorXd& qg() const noexcept { return qg_; }

    Eigen::VectorXd stacked() const;
    Eigen::VectorXcd net() const;

private:
    Eigen::VectorXd pc_, qc_, pg_, qg_;
};

struct FixedPointConfig {
    double tol = 1e-10;
    int max_iter = 1000;
    double divergence_bound = 1e-3;

    void validate() const;
};

/// A power-flow solution pair (V, s) used as the center of a restriction.
struct OperatingPoint {
    VoltageProfile v_hat;
    SplitLoadVector s_hat;

    /// (V0 * 1, 0): no consumption and no generation.
    static OperatingPoint nominal(int n, Complex v0);
};

struct FixedPointResult {
    VoltageProfile voltage;
    int iterations = 0;
    double residual = 0.0;
};

/// Residual tolerance an operating point must meet to count as a solution.
inline constexpr double kCenterResidualTol = 1e-8;

/// G(V) = V0 * 1 - Z diag(V*)^-1 s*.
Eigen::VectorXcd fixed_point_map(const BusMatrices& matrices, const Eigen::VectorXcd& v,
                                 const Eigen::VectorXcd& net_load, Complex v0);

/// Iterates V <- G(V) from `start` until ||G(V) - V||_inf <= cfg.tol.
///
/// Throws NonConvergence after cfg.max_iter evaluations of G and Divergence
/// as soon as some |V_j| drops below cfg.divergence_bound.
FixedPointResult fixed_point_solve(const BusMatrices& matrices, const SplitLoadVector& load,
                                   const VoltageProfile& start, const FixedPointConfig& cfg = {});

/// Same, starting from the flat profile V0 * 1.
FixedPointResult fixed_point_solve(const BusMatrices& matrices, const SplitLoadVector& load,
                                   const FixedPointConfig& cfg = {});

/// s0 from s0* = -V0 Y00 V0 - V0 Y0L V. Positive real part: the slack
/// absorbs active power; negative: the feeder supplies it.
Complex slack_injection(const BusMatrices& matrices, const VoltageProfile& v);

/// (I0, I) = Y (V0, V).
Eigen::VectorXcd branch_currents(const BusMatrices& matrices, const VoltageProfile& v);

/// Current through every line, in the order of matrices.edges(), from -> to.
Eigen::VectorXcd line_currents(const BusMatrices& matrices, const VoltageProfile& v);

/// Sum of r |I|^2 over all lines.
double resistive_losses(const BusMatrices& matrices, const VoltageProfile& v);

/// |v_j - hat_j| <= delta |hat_j| for every PQ bus j.
bool is_delta_stable(const VoltageProfile& v, const VoltageProfile& hat, double delta);

/// ||G(v) - v||_inf; throws ZeroVoltage if some v_j == 0.
double pf_residual(const BusMatrices& matrices, const VoltageProfile& v, const SplitLoadVector& load);

/// Which part of a bus' net load a coordinate addresses.
enum class LoadComponent { Active, Reactive };

/// One net-load coordinate of a load slice. For an active coordinate a
/// nonzero `reactive_per_active` also sets q = ratio * p at the same bus
/// (constant power factor).
struct LoadCoordinate {
    int bus = 1;  ///< 1-based PQ bus
    LoadComponent component = LoadComponent::Active;
    double reactive_per_active = 0.0;
};

/// Replaces the addressed net-load coordinates of `base` by `values` and
/// returns the complementary split of the result.
SplitLoadVector with_net_coordinates(const SplitLoadVector& base, std::span<const LoadCoordinate> coords,
                                     std::span<const double> values);

/// q / p ratio of a load with power factor eta: sqrt(1 - eta^2) / eta.
double reactive_ratio(double power_factor);

}  // namespace polyres
