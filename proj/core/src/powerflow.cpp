#include "polyres/powerflow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "polyres/error.hpp"

namespace polyres {

namespace {

void require_nonnegative(const Eigen::VectorXd& v, const char* name) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] < 0.0) {
            throw std::invalid_argument(std::string("split load component ") + name +
                                        " must be finite and nonnegative");
        }
    }
}

double inf_norm(const Eigen::VectorXcd& v) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

}  // namespace

VoltageProfile VoltageProfile::flat(int n, Complex v0) {
    return VoltageProfile{Eigen::VectorXcd::Constant(n, v0), v0};
}

SplitLoadVector::SplitLoadVector(Eigen::VectorXd pc, Eigen::VectorXd qc, Eigen::VectorXd pg, Eigen::VectorXd qg)
    : pc_(std::move(pc)), qc_(std::move(qc)), pg_(std::move(pg)), qg_(std::move(qg)) {
    if (qc_.size() != pc_.size() || pg_.size() != pc_.size() || qg_.size() != pc_.size()) {
        throw std::invalid_argument("split load components must have equal length");
    }
    require_nonnegative(pc_, "pc");
    require_nonnegative(qc_, "qc");
    require_nonnegative(pg_, "pg");
    require_nonnegative(qg_, "qg");
}

SplitLoadVector SplitLoadVector::zeros(int n) {
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    return {z, z, z, z};
}

SplitLoadVector SplitLoadVector::from_stacked(const Eigen::VectorXd& stacked) {
    if (stacked.size() % 4 != 0) throw std::invalid_argument("stacked split load length must be a multiple of 4");
    const Eigen::Index n = stacked.size() / 4;
    return {stacked.segment(0, n), stacked.segment(n, n), stacked.segment(2 * n, n), stacked.segment(3 * n, n)};
}

SplitLoadVector SplitLoadVector::from_net(const Eigen::VectorXcd& net) {
    const Eigen::Index n = net.size();
    Eigen::VectorXd pc(n), qc(n), pg(n), qg(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        pc[j] = std::max(net[j].real(), 0.0);
        pg[j] = std::max(-net[j].real(), 0.0);
        qc[j] = std::max(net[j].imag(), 0.0);
        qg[j] = std::max(-net[j].imag(), 0.0);
    }
    return {pc, qc, pg, qg};
}

Eigen::VectorXd SplitLoadVector::stacked() const {
    Eigen::VectorXd s(4 * size());
    s << pc_, qc_, pg_, qg_;
    return s;
}

Eigen::VectorXcd SplitLoadVector::net() const {
    Eigen::VectorXcd s(size());
    for (int j = 0; j < size(); ++j) s[j] = Complex(pc_[j] - pg_[j], qc_[j] - qg_[j]);
    return s;
}

void FixedPointConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("fixed-point tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("fixed-point max_iter must be at least 1");
    if (!(divergence_bound > 0.0)) throw std::invalid_argument("divergence bound must be positive");
}

OperatingPoint OperatingPoint::nominal(int n, Complex v0) {
    return {VoltageProfile::flat(n, v0), SplitLoadVector::zeros(n)};
}

Eigen::VectorXcd fixed_point_map(const BusMatrices& matrices, const Eigen::VectorXcd& v,
                                 const Eigen::VectorXcd& net_load, Complex v0) {
    Eigen::VectorXcd w(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) w[j] = std::conj(net_load[j]) / std::conj(v[j]);
    Eigen::VectorXcd g = -(matrices.Z * w);
    g.array() += v0;
    return g;
}

FixedPointResult fixed_point_solve(const BusMatrices& matrices, const SplitLoadVector& load,
                                   const VoltageProfile& start, const FixedPointConfig& cfg) {
    cfg.validate();
    const int n = matrices.size();
    if (load.size() != n || start.size() != n) throw std::invalid_argument("dimension mismatch in fixed_point_solve");
    for (int j = 0; j < n; ++j) {
        if (start.v[j] == Complex(0.0, 0.0)) throw ZeroVoltage("start profile has a zero entry");
    }

    const Eigen::VectorXcd s = load.net();
    Eigen::VectorXcd v = start.v;
    double step = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= cfg.max_iter; ++it) {
        Eigen::VectorXcd next = fixed_point_map(matrices, v, s, start.v0);
        for (int j = 0; j < n; ++j) {
            const double mag = std::abs(next[j]);
            if (!(mag >= cfg.divergence_bound)) throw Divergence(it, j + 1, mag);
        }
        step = inf_norm(next - v);
        // step is exactly ||G(v) - v||, so v itself meets the tolerance.
        if (step <= cfg.tol) return {VoltageProfile{v, start.v0}, it, step};
        v = std::move(next);
    }
    throw NonConvergence(cfg.max_iter, step);
}

FixedPointResult fixed_point_solve(const BusMatrices& matrices, const SplitLoadVector& load,
                                   const FixedPointConfig& cfg) {
    return fixed_point_solve(matrices, load, VoltageProfile::flat(matrices.size(), matrices.v0), cfg);
}

Complex slack_injection(const BusMatrices& matrices, const VoltageProfile& v) {
    const Complex s0_conj = -v.v0 * matrices.Y00 * v.v0 - v.v0 * (matrices.Y0L * v.v)(0);
    return std::conj(s0_conj);
}

Eigen::VectorXcd branch_currents(const BusMatrices& matrices, const VoltageProfile& v) {
    Eigen::VectorXcd full(v.size() + 1);
    full << v.v0, v.v;
    return matrices.full_admittance() * full;
}

Eigen::VectorXcd line_currents(const BusMatrices& matrices, const VoltageProfile& v) {
    auto bus_voltage = [&](int bus) { return bus == 0 ? v.v0 : v.v[bus - 1]; };
    Eigen::VectorXcd i(static_cast<Eigen::Index>(matrices.edges.size()));
    for (std::size_t e = 0; e < matrices.edges.size(); ++e) {
        const Edge& edge = matrices.edges[e];
        i[static_cast<Eigen::Index>(e)] = edge.admittance() * (bus_voltage(edge.from) - bus_voltage(edge.to));
    }
    return i;
}

double resistive_losses(const BusMatrices& matrices, const VoltageProfile& v) {
    const Eigen::VectorXcd i = line_currents(matrices, v);
    double loss = 0.0;
    for (std::size_t e = 0; e < matrices.edges.size(); ++e) {
        loss += matrices.edges[e].r * std::norm(i[static_cast<Eigen::Index>(e)]);
    }
    return loss;
}

bool is_delta_stable(const VoltageProfile& v, const VoltageProfile& hat, double delta) {
    if (v.size() != hat.size()) throw std::invalid_argument("dimension mismatch in is_delta_stable");
    for (int j = 0; j < v.size(); ++j) {
        if (!(std::abs(v.v[j] - hat.v[j]) <= delta * std::abs(hat.v[j]))) return false;
    }
    return true;
}

double pf_residual(const BusMatrices& matrices, const VoltageProfile& v, const SplitLoadVector& load) {
    if (v.size() != matrices.size() || load.size() != matrices.size()) {
        throw std::invalid_argument("dimension mismatch in pf_residual");
    }
    for (int j = 0; j < v.size(); ++j) {
        if (v.v[j] == Complex(0.0, 0.0)) throw ZeroVoltage("voltage at bus " + std::to_string(j + 1) + " is zero");
    }
    return inf_norm(fixed_point_map(matrices, v.v, load.net(), v.v0) - v.v);
}

SplitLoadVector with_net_coordinates(const SplitLoadVector& base, std::span<const LoadCoordinate> coords,
                                     std::span<const double> values) {
    if (coords.size() != values.size()) throw std::invalid_argument("coordinate/value count mismatch");
    Eigen::VectorXcd net = base.net();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto& c = coords[i];
        if (c.bus < 1 || c.bus > base.size()) throw std::invalid_argument("load coordinate bus out of range");
        Complex& s = net[c.bus - 1];
        if (c.component == LoadComponent::Active) {
            s.real(values[i]);
            if (c.reactive_per_active != 0.0) s.imag(c.reactive_per_active * values[i]);
        } else {
            s.imag(values[i]);
        }
    }
    return SplitLoadVector::from_net(net);
}

double reactive_ratio(double power_factor) {
    if (!(power_factor > 0.0 && power_factor <= 1.0)) throw std::invalid_argument("power factor must lie in (0, 1]");
    return std::sqrt(1.0 - power_factor * power_factor) / power_factor;
}

}  // namespace polyres
