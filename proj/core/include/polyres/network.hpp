#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace polyres {

using Complex = std::complex<double>;

/// A distribution line between two buses, per-unit impedance r + i x.
struct Edge {
    int from = 0;
    int to = 0;
    double r = 0.0;
    double x = 0.0;

    Complex impedance() const { return {r, x}; }
    Complex admittance() const { return 1.0 / impedance(); }
};

/// Radial network: a tree rooted at the slack bus 0 spanning buses 0..N.
///
/// Construction validates the tree structure; an instance is immutable
/// afterwards. Buses 1..N are the PQ buses.
class NetworkTopology {
public:
    NetworkTopology(int node_count, Complex slack_voltage, std::vector<Edge> edges,
                    std::vector<std::string> labels = {});

    /// Number of PQ buses N (slack excluded).
    int node_count() const noexcept { return node_count_; }
    Complex slack_voltage() const noexcept { return slack_voltage_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Labels from the source document, index 0 is the slack.
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Parent bus on the path to the slack; -1 for bus 0.
    int parent(int bus) const { return parent_.at(static_cast<std::size_t>(bus)); }

    /// Index into edges() of the line joining `bus` to its parent; -1 for bus 0.
    int parent_edge(int bus) const { return parent_edge_.at(static_cast<std::size_t>(bus)); }

private:
    int node_count_;
    Complex slack_voltage_;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
    std::vector<int> parent_;
    std::vector<int> parent_edge_;
};

/// Admittance blocks and impedance bus matrices of a radial network.
struct BusMatrices {
    Complex Y00;
    Eigen::RowVectorXcd Y0L;
    Eigen::VectorXcd YL0;
    Eigen::MatrixXcd YLL;
    Eigen::MatrixXcd Z;
    Eigen::MatrixXd R;
    Eigen::MatrixXd X;

    Complex v0;
    std::vector<Edge> edges;

    int size() const noexcept { return static_cast<int>(Z.rows()); }

    /// The full (N+1)x(N+1) admittance matrix.
    Eigen::MatrixXcd full_admittance() const;
};

/// Parses the JSON network document. Node ids are arbitrary labels; the
/// slack becomes bus 0 and the remaining nodes 1..N in file order.
NetworkTopology parse_network(std::string_view text);

/// Inverse of parse_network (labels preserved).
std::string write_network(const NetworkTopology& topology);

/// Y from the line admittances; Z, R, X by summing line impedances over the
/// shared part of the two root paths. No matrix inversion is involved.
BusMatrices build_bus_matrices(const NetworkTopology& topology);

}  // namespace polyres
