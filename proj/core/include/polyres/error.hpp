#pragma once

#include <stdexcept>
#include <string>

namespace polyres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed network, load, center or bounds document.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid network: not a tree, duplicate edge, bad impedance.
class TopologyError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(int iterations, double last_step)
        : Error("fixed-point iteration did not converge in " + std::to_string(iterations) +
                " iterations (last step " + std::to_string(last_step) + ")"),
          iterations_(iterations),
          last_step_(last_step) {}

    int iterations() const noexcept { return iterations_; }
    double last_step() const noexcept { return last_step_; }

private:
    int iterations_;
    double last_step_;
};

/// Some voltage magnitude collapsed below the configured bound.
class Divergence : public Error {
public:
    Divergence(int iteration, int bus, double magnitude)
        : Error("fixed-point iteration diverged at iteration " + std::to_string(iteration) +
                ": |V_" + std::to_string(bus) + "| = " + std::to_string(magnitude)),
          iteration_(iteration),
          bus_(bus),
          magnitude_(magnitude) {}

    int iteration() const noexcept { return iteration_; }
    /// 1-based PQ bus index.
    int bus() const noexcept { return bus_; }
    double magnitude() const noexcept { return magnitude_; }

private:
    int iteration_;
    int bus_;
    double magnitude_;
};

class ZeroVoltage : public Error {
public:
    using Error::Error;
};

class DeltaOutOfRange : public Error {
public:
    explicit DeltaOutOfRange(double delta)
        : Error("delta must lie in (0, 1), got " + std::to_string(delta)), delta_(delta) {}
    double delta() const noexcept { return delta_; }

private:
    double delta_;
};

/// The operating point handed to the restriction does not satisfy the power flow.
class InfeasibleCenter : public Error {
public:
    explicit InfeasibleCenter(double residual)
        : Error("center is not a power-flow solution (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class InvalidInitialPoint : public Error {
public:
    using Error::Error;
};

class NoFeasiblePoint : public Error {
public:
    using Error::Error;
};

/// Internal consistency check failed (e.g. an LP vertex violating its own constraints).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace polyres
