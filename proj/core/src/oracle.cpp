#include "polyres/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "polyres/error.hpp"

namespace polyres {

namespace {

constexpr double kPhysicalVoltageFloor = 1e-12;
constexpr int kBisectionSteps = 60;

double axis_value(const GridAxis& axis, int i) {
    if (axis.points == 1) return 0.5 * (axis.lo + axis.hi);
    return axis.lo + (axis.hi - axis.lo) * static_cast<double>(i) / static_cast<double>(axis.points - 1);
}

// A net-load coordinate of the brute-force search and the split it maps to.
struct NetAxis {
    int consumption;  // index into the stacked vector
    int generation;
    double lo, hi;    // range of the net value
};

}  // namespace

std::vector<TwoNodeSolution> two_node_solutions(const TwoNodeCase& c) {
    const double z2 = c.r * c.r + c.x * c.x;
    if (!(z2 > 0.0)) throw std::invalid_argument("two-node case needs a nonzero impedance");
    const double v0_sq = c.v0_mag * c.v0_mag;
    const double drop = 2.0 * (c.r * c.p1 + c.x * c.q1);
    // z2 l^2 + b l + k = 0
    const double b = -(drop + v0_sq);
    const double k = c.p1 * c.p1 + c.q1 * c.q1;
    const double disc = b * b - 4.0 * z2 * k;
    if (disc < 0.0) return {};

    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> roots{q / z2};
    if (q != 0.0 && disc > 0.0) roots.push_back(k / q);
    std::sort(roots.begin(), roots.end());

    std::vector<TwoNodeSolution> out;
    for (double ell : roots) {
        const double v1_sq = v0_sq + drop - z2 * ell;
        if (v1_sq <= kPhysicalVoltageFloor) continue;
        out.push_back({ell, v1_sq, c.r * ell - c.p1, c.x * ell - c.q1});
    }
    return out;
}

std::pair<double, double> two_node_current_box(const TwoNodeCase& c, double delta) {
    if (std::abs(c.v0_mag - 1.0) > 1e-12) throw std::invalid_argument("current box assumes |V0| = 1");
    const double z2 = c.r * c.r + c.x * c.x;
    if (!(z2 > 0.0)) throw std::invalid_argument("two-node case needs a nonzero impedance");
    const double base = 1.0 + 2.0 * (c.r * c.p1 + c.x * c.q1);
    return {(base - (1.0 + delta) * (1.0 + delta)) / z2, (base - (1.0 - delta) * (1.0 - delta)) / z2};
}

TwoNodeRelaxation two_node_relaxation(const TwoNodeCase& c, double delta) {
    const auto sols = two_node_solutions(c);
    if (sols.empty()) throw NoFeasiblePoint("two-node case has no power-flow solution");
    TwoNodeRelaxation out;
    out.ell = two_node_current_box(c, delta).first;
    out.p0_relaxed = c.r * out.ell - c.p1;
    out.p0_exact = sols.front().p0;
    out.gap = out.p0_exact - out.p0_relaxed;
    return out;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::InS: return "in_s";
        case Verdict::Unstable: return "unstable";
        case Verdict::Diverged: return "diverged";
        case Verdict::NotConverged: return "not_converged";
    }
    return "unknown";
}

std::size_t RegionSample::count_in_s() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const RegionPoint& p) { return p.verdict == Verdict::InS; }));
}

Verdict classify(const BusMatrices& matrices, const VoltageProfile& hat, double delta, const SplitLoadVector& load,
                 const FixedPointConfig& cfg, std::optional<VoltageProfile>* witness) {
    try {
        FixedPointResult pf = fixed_point_solve(matrices, load, cfg);
        const bool stable = is_delta_stable(pf.voltage, hat, delta);
        if (witness) *witness = std::move(pf.voltage);
        return stable ? Verdict::InS : Verdict::Unstable;
    } catch (const Divergence&) {
        return Verdict::Diverged;
    } catch (const NonConvergence&) {
        return Verdict::NotConverged;
    }
}

RegionSample sample_region(const BusMatrices& matrices, const OperatingPoint& hat, double delta,
                           const std::vector<GridAxis>& grid, const FixedPointConfig& cfg) {
    if (grid.size() > 3) throw std::invalid_argument("region grids support at most three axes");
    std::size_t total = 1;
    for (const auto& axis : grid) {
        if (axis.points < 1) throw std::invalid_argument("grid axis needs at least one point");
        if (!(axis.lo <= axis.hi)) throw std::invalid_argument("grid axis has lo > hi");
        total *= static_cast<std::size_t>(axis.points);
    }

    RegionSample sample;
    sample.axes = grid;
    sample.delta = delta;
    sample.points.reserve(total);

    std::vector<LoadCoordinate> coords;
    for (const auto& axis : grid) coords.push_back(axis.coordinate);

    std::vector<int> index(grid.size(), 0);
    std::vector<double> values(grid.size());
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        for (std::size_t a = grid.size(); a-- > 0;) {
            index[a] = static_cast<int>(rest % static_cast<std::size_t>(grid[a].points));
            rest /= static_cast<std::size_t>(grid[a].points);
            values[a] = axis_value(grid[a], index[a]);
        }
        RegionPoint pt;
        pt.coordinates = values;
        pt.load = with_net_coordinates(hat.s_hat, coords, values);
        pt.verdict = classify(matrices, hat.v_hat, delta, pt.load, cfg, &pt.voltage);
        sample.points.push_back(std::move(pt));
    }
    return sample;
}

std::vector<Eigen::VectorXd> sample_polytope(const PolyhedralRestriction& p, const BoxBounds& bounds, int count,
                                             std::uint64_t seed, int thinning) {
    const int dim = p.dimension();
    bounds.validate();
    if (bounds.lower.size() != dim) throw std::invalid_argument("bounds do not match the restriction");
    if (count < 0 || thinning < 1) throw std::invalid_argument("invalid sample count or thinning");

    // Coordinate extremes give both a bounding box and an interior start.
    LinearProgram lp;
    lp.A_ub = p.lhs;
    lp.b_ub = p.rhs;
    lp.lower = bounds.lower;
    lp.upper = bounds.upper;
    Eigen::VectorXd lo(dim), hi(dim), start = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) {
        lp.c = Eigen::VectorXd::Unit(dim, i);
        for (Sense sense : {Sense::Minimize, Sense::Maximize}) {
            lp.direction = sense;
            const LpResult r = solve_lp(lp);
            if (r.status == LpStatus::Infeasible) throw NoFeasiblePoint("restriction is empty");
            if (r.status == LpStatus::Unbounded) throw std::invalid_argument("restriction is unbounded");
            (sense == Sense::Minimize ? lo : hi)[i] = r.x[i];
            start += r.x;
        }
    }
    start /= 2.0 * dim;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const Eigen::VectorXd width = hi - lo;
    Eigen::VectorXd x = start;
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s) {
        for (int step = 0; step < thinning; ++step) {
            Eigen::VectorXd d(dim);
            for (int i = 0; i < dim; ++i) d[i] = width[i] > 1e-12 ? normal(rng) : 0.0;
            const double norm = d.norm();
            if (norm == 0.0) break;  // single point
            d /= norm;

            double t_lo = -std::numeric_limits<double>::infinity();
            double t_hi = std::numeric_limits<double>::infinity();
            auto limit = [&](double a_d, double slack) {
                slack = std::max(slack, 0.0);
                if (a_d > 1e-15) t_hi = std::min(t_hi, slack / a_d);
                if (a_d < -1e-15) t_lo = std::max(t_lo, slack / a_d);
            };
            const Eigen::VectorXd ad = p.lhs * d;
            const Eigen::VectorXd room = p.rhs - p.lhs * x;
            for (int r = 0; r < ad.size(); ++r) limit(ad[r], room[r]);
            for (int i = 0; i < dim; ++i) {
                limit(-d[i], x[i] - bounds.lower[i]);
                if (std::isfinite(bounds.upper[i])) limit(d[i], bounds.upper[i] - x[i]);
            }
            if (!(t_lo <= t_hi) || !std::isfinite(t_lo) || !std::isfinite(t_hi)) continue;
            x += (t_lo + (t_hi - t_lo) * uniform(rng)) * d;
            x = x.cwiseMax(bounds.lower);
        }
        out.push_back(x);
    }
    return out;
}

BruteForceResult brute_force_optimum(const BusMatrices& matrices, const LinearObjective& obj, const BoxBounds& bounds,
                                     double delta, int grid_resolution, const FixedPointConfig& cfg) {
    const int n = matrices.size();
    bounds.validate();
    if (bounds.lower.size() != 4 * n || obj.weights.size() != 4 * n) {
        throw std::invalid_argument("objective/bounds do not match the network");
    }
    if (grid_resolution < 1) throw std::invalid_argument("grid_resolution must be positive");

    const double sgn = obj.direction == Sense::Maximize ? 1.0 : -1.0;
    std::vector<NetAxis> axes;
    Eigen::VectorXd fixed = bounds.lower;
    for (int j = 0; j < n; ++j) {
        for (int part = 0; part < 2; ++part) {
            const int c = part * n + j;
            const int g = (2 + part) * n + j;
            if (bounds.upper[c] == bounds.lower[c] && bounds.upper[g] == bounds.lower[g]) continue;
            if (!std::isfinite(bounds.upper[c]) || !std::isfinite(bounds.upper[g])) {
                throw std::invalid_argument("brute-force search needs finite upper bounds");
            }
            axes.push_back({c, g, bounds.lower[c] - bounds.upper[g], bounds.upper[c] - bounds.lower[g]});
        }
    }
    const int dims = static_cast<int>(axes.size());
    if (dims > 3) throw std::invalid_argument("brute-force search supports at most three free net loads");

    // Best split for a given vector of net values.
    auto load_at = [&](const std::vector<double>& net) {
        Eigen::VectorXd s = fixed;
        for (int a = 0; a < dims; ++a) {
            const NetAxis& ax = axes[a];
            const double t = net[a];
            const double g_lo = std::max(bounds.lower[ax.generation], bounds.lower[ax.consumption] - t);
            const double g_hi = std::max(g_lo, std::min(bounds.upper[ax.generation], bounds.upper[ax.consumption] - t));
            const double pull = sgn * (obj.weights[ax.consumption] + obj.weights[ax.generation]);
            const double g = pull > 0.0 ? g_hi : g_lo;
            s[ax.generation] = g;
            s[ax.consumption] = std::max(t + g, 0.0);
        }
        return s;
    };

    const VoltageProfile hat = VoltageProfile::flat(n, matrices.v0);
    BruteForceResult result;
    result.grid_resolution = grid_resolution;
    result.effective_dimension = dims;

    auto feasible = [&](const Eigen::VectorXd& s, std::optional<VoltageProfile>* witness) {
        ++result.evaluations;
        return classify(matrices, hat, delta, SplitLoadVector::from_stacked(s), cfg, witness) == Verdict::InS;
    };

    const int per_axis = grid_resolution + 1;
    std::size_t total = 1;
    for (int a = 0; a < dims; ++a) total *= static_cast<std::size_t>(per_axis);

    auto net_of = [&](std::size_t flat) {
        std::vector<double> net(static_cast<std::size_t>(dims));
        for (int a = dims; a-- > 0;) {
            const int i = static_cast<int>(flat % static_cast<std::size_t>(per_axis));
            flat /= static_cast<std::size_t>(per_axis);
            net[a] = axes[a].lo + (axes[a].hi - axes[a].lo) * i / grid_resolution;
        }
        return net;
    };

    std::vector<char> ok(total, 0);
    std::vector<double> score(total, 0.0);
    bool found = false;
    double best_score = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best;
    std::optional<VoltageProfile> best_v;

    auto consider = [&](const Eigen::VectorXd& s, double sc, std::optional<VoltageProfile>& v) {
        if (!found || sc > best_score) {
            found = true;
            best_score = sc;
            best = s;
            best_v = v;
        }
    };

    for (std::size_t flat = 0; flat < total; ++flat) {
        const Eigen::VectorXd s = load_at(net_of(flat));
        score[flat] = sgn * obj.evaluate(s);
        std::optional<VoltageProfile> v;
        ok[flat] = feasible(s, &v);
        if (ok[flat]) consider(s, score[flat], v);
    }
    if (!found) throw NoFeasiblePoint("no grid point admits a delta-stable power-flow solution");

    // Bisect every improving feasible -> infeasible edge of the grid.
    std::size_t stride = 1;
    for (int a = dims; a-- > 0;) {
        for (std::size_t flat = 0; flat < total; ++flat) {
            if (!ok[flat]) continue;
            const int i = static_cast<int>((flat / stride) % static_cast<std::size_t>(per_axis));
            for (int dir : {-1, 1}) {
                if (i + dir < 0 || i + dir >= per_axis) continue;
                const std::size_t nb = dir > 0 ? flat + stride : flat - stride;
                if (ok[nb] || score[nb] <= score[flat]) continue;
                std::vector<double> net = net_of(flat);
                double in = net[a];
                double out = net_of(nb)[a];
                for (int it = 0; it < kBisectionSteps && std::abs(out - in) > 1e-13 * (1.0 + std::abs(in)); ++it) {
                    net[a] = 0.5 * (in + out);
                    if (feasible(load_at(net), nullptr)) {
                        in = net[a];
                    } else {
                        out = net[a];
                    }
                }
                net[a] = in;
                const Eigen::VectorXd s = load_at(net);
                std::optional<VoltageProfile> v;
                if (feasible(s, &v)) consider(s, sgn * obj.evaluate(s), v);
            }
        }
        stride *= static_cast<std::size_t>(per_axis);
    }

    result.best = SplitLoadVector::from_stacked(best);
    result.value = obj.evaluate(best);
    result.voltage = *best_v;
    result.slack_power = slack_injection(matrices, result.voltage);
    return result;
}

}  // namespace polyres
