#include "polyres/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "polyres/error.hpp"

namespace polyres {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& obj, std::initializer_list<std::string_view> allowed,
                           std::string_view where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError("unknown field '" + key + "' in " + std::string(where));
        }
    }
}

std::string id_to_label(const json& id) {
    if (id.is_string()) return id.get<std::string>();
    if (id.is_number_integer()) return std::to_string(id.get<long long>());
    throw ParseError("node id must be a string or an integer");
}

double finite_number(const json& obj, const char* key, std::string_view where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw ParseError("missing numeric field '" + std::string(key) + "' in " + std::string(where));
    }
    double v = it->get<double>();
    if (!std::isfinite(v)) throw ParseError("non-finite '" + std::string(key) + "' in " + std::string(where));
    return v;
}

}  // namespace

NetworkTopology::NetworkTopology(int node_count, Complex slack_voltage, std::vector<Edge> edges,
                                 std::vector<std::string> labels)
    : node_count_(node_count),
      slack_voltage_(slack_voltage),
      edges_(std::move(edges)),
      labels_(std::move(labels)) {
    if (node_count_ < 0) throw TopologyError("node count must be nonnegative");
    if (!(std::abs(slack_voltage_) > 0.0) || !std::isfinite(std::abs(slack_voltage_))) {
        throw TopologyError("slack voltage must be finite and nonzero");
    }
    const auto n_buses = static_cast<std::size_t>(node_count_) + 1;
    if (labels_.empty()) {
        for (std::size_t i = 0; i < n_buses; ++i) labels_.push_back(std::to_string(i));
    }
    if (labels_.size() != n_buses) throw TopologyError("label count does not match bus count");

    if (edges_.size() != static_cast<std::size_t>(node_count_)) {
        throw TopologyError("a tree on " + std::to_string(n_buses) + " buses needs exactly " +
                            std::to_string(node_count_) + " edges, got " + std::to_string(edges_.size()));
    }

    std::set<std::pair<int, int>> seen;
    std::vector<std::vector<std::pair<int, int>>> adjacency(n_buses);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& edge = edges_[e];
        if (edge.from < 0 || edge.to < 0 || edge.from > node_count_ || edge.to > node_count_) {
            throw TopologyError("edge endpoint out of range");
        }
        if (edge.from == edge.to) throw TopologyError("self-loop at bus " + labels_[edge.from]);
        if (!std::isfinite(edge.r) || !std::isfinite(edge.x) || edge.r < 0.0 || edge.x < 0.0) {
            throw TopologyError("edge " + labels_[edge.from] + "-" + labels_[edge.to] +
                                " needs finite r >= 0 and x >= 0");
        }
        if (edge.r == 0.0 && edge.x == 0.0) {
            throw TopologyError("edge " + labels_[edge.from] + "-" + labels_[edge.to] + " has zero impedance");
        }
        auto key = std::minmax(edge.from, edge.to);
        if (!seen.insert(key).second) {
            throw TopologyError("duplicate edge " + labels_[edge.from] + "-" + labels_[edge.to]);
        }
        adjacency[edge.from].emplace_back(edge.to, static_cast<int>(e));
        adjacency[edge.to].emplace_back(edge.from, static_cast<int>(e));
    }

    parent_.assign(n_buses, -2);
    parent_edge_.assign(n_buses, -1);
    parent_[0] = -1;
    std::queue<int> frontier;
    frontier.push(0);
    std::size_t reached = 1;
    while (!frontier.empty()) {
        int bus = frontier.front();
        frontier.pop();
        for (auto [next, e] : adjacency[bus]) {
            if (parent_[next] != -2) continue;
            parent_[next] = bus;
            parent_edge_[next] = e;
            ++reached;
            frontier.push(next);
        }
    }
    // N edges and every bus reachable from 0 <=> spanning tree.
    if (reached != n_buses) throw TopologyError("network is not a tree rooted at the slack bus");
}

Eigen::MatrixXcd BusMatrices::full_admittance() const {
    const int n = size();
    Eigen::MatrixXcd Y(n + 1, n + 1);
    Y(0, 0) = Y00;
    Y.block(0, 1, 1, n) = Y0L;
    Y.block(1, 0, n, 1) = YL0;
    Y.block(1, 1, n, n) = YLL;
    return Y;
}

NetworkTopology parse_network(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("network document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("network document must be a JSON object");
    reject_unknown_fields(doc, {"v0", "nodes", "edges", "name", "description"}, "network");

    if (!doc.contains("v0") || !doc["v0"].is_object()) throw ParseError("missing object 'v0'");
    reject_unknown_fields(doc["v0"], {"re", "im"}, "v0");
    Complex v0{finite_number(doc["v0"], "re", "v0"), 0.0};
    if (doc["v0"].contains("im")) v0.imag(finite_number(doc["v0"], "im", "v0"));

    if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw ParseError("missing array 'nodes'");
    if (!doc.contains("edges") || !doc["edges"].is_array()) throw ParseError("missing array 'edges'");

    std::string slack_label;
    std::vector<std::string> pq_labels;
    std::set<std::string> all_labels;
    for (const auto& node : doc["nodes"]) {
        if (!node.is_object() || !node.contains("id")) throw ParseError("every node needs an 'id'");
        reject_unknown_fields(node, {"id", "slack", "name"}, "node");
        std::string label = id_to_label(node["id"]);
        if (!all_labels.insert(label).second) throw ParseError("duplicate node id '" + label + "'");
        bool is_slack = false;
        if (node.contains("slack")) {
            if (!node["slack"].is_boolean()) throw ParseError("'slack' must be a boolean");
            is_slack = node["slack"].get<bool>();
        }
        if (is_slack) {
            if (!slack_label.empty()) throw ParseError("more than one slack node");
            slack_label = label;
        } else {
            pq_labels.push_back(label);
        }
    }
    if (slack_label.empty()) throw ParseError("no node is marked as slack");

    std::unordered_map<std::string, int> index;
    std::vector<std::string> labels{slack_label};
    index[slack_label] = 0;
    for (const auto& label : pq_labels) {
        index[label] = static_cast<int>(labels.size());
        labels.push_back(label);
    }

    std::vector<Edge> edges;
    for (const auto& item : doc["edges"]) {
        if (!item.is_object()) throw ParseError("every edge must be an object");
        reject_unknown_fields(item, {"from", "to", "r", "x"}, "edge");
        if (!item.contains("from") || !item.contains("to")) throw ParseError("edge needs 'from' and 'to'");
        auto lookup = [&](const json& id) {
            auto it = index.find(id_to_label(id));
            if (it == index.end()) throw ParseError("edge references unknown node '" + id_to_label(id) + "'");
            return it->second;
        };
        Edge edge;
        edge.from = lookup(item["from"]);
        edge.to = lookup(item["to"]);
        edge.r = finite_number(item, "r", "edge");
        edge.x = finite_number(item, "x", "edge");
        edges.push_back(edge);
    }

    return NetworkTopology(static_cast<int>(pq_labels.size()), v0, std::move(edges), std::move(labels));
}

std::string write_network(const NetworkTopology& topology) {
    json doc;
    doc["v0"] = {{"re", topology.slack_voltage().real()}, {"im", topology.slack_voltage().imag()}};
    json nodes = json::array();
    const auto& labels = topology.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        json node = {{"id", labels[i]}};
        if (i == 0) node["slack"] = true;
        nodes.push_back(node);
    }
    doc["nodes"] = nodes;
    json edges = json::array();
    for (const auto& e : topology.edges()) {
        edges.push_back({{"from", labels[e.from]}, {"to", labels[e.to]}, {"r", e.r}, {"x", e.x}});
    }
    doc["edges"] = edges;
    return doc.dump(2);
}

BusMatrices build_bus_matrices(const NetworkTopology& topology) {
    const int n = topology.node_count();
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (const auto& e : topology.edges()) {
        const Complex y = e.admittance();
        Y(e.from, e.to) -= y;
        Y(e.to, e.from) -= y;
        Y(e.from, e.from) += y;
        Y(e.to, e.to) += y;
    }

    BusMatrices m;
    m.v0 = topology.slack_voltage();
    m.edges = topology.edges();
    m.Y00 = Y(0, 0);
    m.Y0L = Y.block(0, 1, 1, n);
    m.YL0 = Y.block(1, 0, n, 1);
    m.YLL = Y.block(1, 1, n, n);

    // on_path(j, e): edge e lies on the path from PQ bus j to the slack.
    std::vector<std::vector<char>> on_path(static_cast<std::size_t>(n),
                                           std::vector<char>(topology.edges().size(), 0));
    for (int j = 1; j <= n; ++j) {
        for (int bus = j; bus != 0; bus = topology.parent(bus)) {
            on_path[j - 1][topology.parent_edge(bus)] = 1;
        }
    }

    m.Z = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
            Complex sum{0.0, 0.0};
            for (std::size_t e = 0; e < topology.edges().size(); ++e) {
                if (on_path[j][e] && on_path[k][e]) sum += topology.edges()[e].impedance();
            }
            m.Z(j, k) = sum;
            m.Z(k, j) = sum;
        }
    }
    m.R = m.Z.real();
    m.X = m.Z.imag();
    return m;
}

}  // namespace polyres
