#pragma once

// Shared fixtures and independent reference computations for the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "polyres/linprog.hpp"
#include "polyres/network.hpp"
#include "polyres/powerflow.hpp"

namespace testing {

using polyres::Complex;

inline polyres::NetworkTopology two_node(double r = 0.7, double x = 0.1) {
    return polyres::NetworkTopology(1, {1.0, 0.0}, {{0, 1, r, x}});
}

inline polyres::NetworkTopology three_node(double r = 0.01, double x = 0.001) {
    return polyres::NetworkTopology(2, {1.0, 0.0}, {{0, 1, r, x}, {1, 2, r, x}});
}

/// Random tree on buses 0..n: bus k attaches to a uniformly chosen earlier bus.
inline polyres::NetworkTopology random_tree(int n, std::mt19937_64& rng, double r_max = 0.05, double x_max = 0.05) {
    std::uniform_real_distribution<double> ur(0.001, r_max), ux(0.0, x_max);
    std::vector<polyres::Edge> edges;
    for (int k = 1; k <= n; ++k) {
        std::uniform_int_distribution<int> parent(0, k - 1);
        const int p = parent(rng);
        // Randomize the stored orientation; the topology must not care.
        if (rng() % 2) {
            edges.push_back({p, k, ur(rng), ux(rng)});
        } else {
            edges.push_back({k, p, ur(rng), ux(rng)});
        }
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    return polyres::NetworkTopology(n, {1.0, 0.0}, std::move(edges));
}

/// Full admittance matrix assembled directly from the edge list.
inline Eigen::MatrixXcd admittance_from_edges(int buses, const std::vector<polyres::Edge>& edges) {
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(buses, buses);
    for (const auto& e : edges) {
        const Complex a = 1.0 / Complex(e.r, e.x);
        y(e.from, e.from) += a;
        y(e.to, e.to) += a;
        y(e.from, e.to) -= a;
        y(e.to, e.from) -= a;
    }
    return y;
}

/// Split load vector from four per-bus lists (pc, qc, pg, qg).
inline polyres::SplitLoadVector split(std::initializer_list<double> pc, std::initializer_list<double> qc,
                                      std::initializer_list<double> pg, std::initializer_list<double> qg) {
    auto vec = [](std::initializer_list<double> l) {
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(l.begin(), static_cast<Eigen::Index>(l.size())));
    };
    return polyres::SplitLoadVector(vec(pc), vec(qc), vec(pg), vec(qg));
}

/// Active power in [0, hi], reactive pinned to zero.
inline polyres::BoxBounds active_box(int n, double hi) {
    polyres::BoxBounds b = polyres::BoxBounds::uniform(n, 0.0, hi);
    b.upper.segment(n, n).setZero();
    b.upper.segment(3 * n, n).setZero();
    return b;
}

/// High-voltage root of the two-node quadratic for a line of impedance z
/// whose sending end sits at magnitude v_send and whose receiving end
/// injects (p, q). Returns the squared current.
inline double line_current_sq(Complex z, double v_send, double p, double q) {
    const double z2 = std::norm(z);
    const double b = 2.0 * (z.real() * p + z.imag() * q) + v_send * v_send;
    const double c = p * p + q * q;
    const double disc = b * b - 4.0 * z2 * c;
    // smaller root, written to avoid cancellation
    return 2.0 * c / (b + std::sqrt(disc));
}

/// Exact solution of the three-node line 0 - 1 - 2 with consumption s1, s2,
/// obtained by chaining the two-node elimination of the squared current.
/// Returns the complex voltages (V1, V2).
inline std::pair<Complex, Complex> three_node_exact(Complex z01, Complex z12, Complex s1, Complex s2,
                                                    Complex v0 = {1.0, 0.0}) {
    double v1 = std::abs(v0);
    double l12 = 0.0, l01 = 0.0;
    for (int it = 0; it < 200; ++it) {
        l12 = line_current_sq(z12, v1, -s2.real(), -s2.imag());
        const Complex into1 = s2 + z12 * l12;  // power entering line 1-2 at bus 1
        const Complex load1 = s1 + into1;
        l01 = line_current_sq(z01, std::abs(v0), -load1.real(), -load1.imag());
        const double v1_sq = std::norm(v0) - 2.0 * (z01.real() * load1.real() + z01.imag() * load1.imag()) -
                             std::norm(z01) * l01;
        const double next = std::sqrt(v1_sq);
        if (std::abs(next - v1) < 1e-15) {
            v1 = next;
            break;
        }
        v1 = next;
    }
    const Complex into1 = s2 + z12 * l12;
    const Complex send0 = s1 + into1 + z01 * l01;
    const Complex i01 = std::conj(send0 / v0);
    const Complex V1 = v0 - z01 * i01;
    const Complex send1 = s2 + z12 * l12;
    const Complex i12 = std::conj(send1 / V1);
    const Complex V2 = V1 - z12 * i12;
    return {V1, V2};
}

}  // namespace testing
