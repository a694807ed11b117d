#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "polyres/error.hpp"
#include "polyres/io.hpp"
#include "polyres/linprog.hpp"
#include "polyres/network.hpp"
#include "polyres/oracle.hpp"
#include "polyres/powerflow.hpp"
#include "polyres/restriction.hpp"
#include "polyres/seqopt.hpp"

namespace polyres::cli {

namespace {

using io::json;
using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// Option sets, one per subcommand. Defaults reproduce the three-node
// experiments: delta = 0.1, epsilon = 0.01, active power in [0, 35].

struct PfOptions {
    std::string network;
    std::string loads;
    std::string out;
    FixedPointConfig pf;
};

struct RestrictOptions {
    std::string network;
    std::string center;
    std::string out;
    double delta = 0.1;
};

struct SeqOptOptions {
    std::string network;
    std::string center;
    std::string bounds;
    std::string objective = "max-load";
    std::string objective_file;
    std::string out;
    double box_max = 35.0;
    SeqOptConfig cfg;
};

struct RegionOptions {
    std::string network;
    std::string center;
    std::string slice = "p1,p2";
    std::string out;
    std::string polygon;
    std::string p_out;
    std::vector<double> range{-5.0, 5.0};
    double power_factor = 1.0;
    double delta = 0.1;
    int grid = 201;
    int p_samples = 0;
    std::uint64_t seed = 1;
};

struct TwoNodeOptions {
    TwoNodeCase c{0.7, 0.1, 0.1, 0.01, 1.0};
    std::vector<double> deltas{0.1, 0.05};
    std::string out;
};

struct OptimumOptions {
    std::string network;
    std::string bounds;
    std::string objective = "max-load";
    std::string objective_file;
    std::string out;
    double box_max = 35.0;
    double delta = 0.1;
    int grid = 200;
};

// ---------------------------------------------------------------------------

json fixed_point_json(const FixedPointConfig& cfg) {
    return {{"tol", cfg.tol}, {"max_iter", cfg.max_iter}, {"divergence_bound", cfg.divergence_bound}};
}

json manifest(const std::string& command, const json& inputs, const json& config, Clock::time_point start) {
    return {{"command", command},
            {"inputs", inputs},
            {"config", config},
            {"version", io::version()},
            {"duration_s", std::chrono::duration<double>(Clock::now() - start).count()}};
}

// Writes text to `path`, or to `out` when the path is empty.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write '" + path + "'");
    f << text;
}

void emit_json(const json& doc, const std::string& path, std::ostream& out) { emit(doc.dump(2) + "\n", path, out); }

NetworkTopology load_network(const std::string& path) { return parse_network(io::read_file(path)); }

json read_json(const std::string& path) { return io::parse(io::read_file(path)); }

OperatingPoint load_center(const std::string& path, const BusMatrices& m) {
    if (path.empty()) return OperatingPoint::nominal(m.size(), m.v0);
    return io::operating_point_from_json(read_json(path), m.v0, m.size());
}

// Active power in [0, box_max], reactive power pinned to zero.
BoxBounds default_bounds(int n, double box_max) {
    BoxBounds b = BoxBounds::uniform(n, 0.0, box_max);
    b.upper.segment(n, n).setZero();
    b.upper.segment(3 * n, n).setZero();
    return b;
}

BoxBounds load_bounds(const std::string& path, int n, double box_max) {
    if (path.empty()) return default_bounds(n, box_max);
    return io::bounds_from_json(read_json(path), n);
}

LinearObjective load_objective(const std::string& name, const std::string& path, int n) {
    if (!path.empty()) return io::objective_from_json(read_json(path), n);
    return name == "min-load" ? LinearObjective::min_active_load(n) : LinearObjective::max_active_load(n);
}

LoadCoordinate parse_axis(const std::string& token, int n) {
    if (token.size() < 2 || (token[0] != 'p' && token[0] != 'q')) {
        throw std::invalid_argument("slice axis '" + token + "' must look like p<bus> or q<bus>");
    }
    int bus = 0;
    try {
        std::size_t used = 0;
        bus = std::stoi(token.substr(1), &used);
        if (used != token.size() - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("slice axis '" + token + "' has an invalid bus number");
    }
    if (bus < 1 || bus > n) throw std::invalid_argument("slice axis '" + token + "' refers to a missing bus");
    return {bus, token[0] == 'p' ? LoadComponent::Active : LoadComponent::Reactive, 0.0};
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? path.substr(0, dot) : path) + suffix;
}

// ---------------------------------------------------------------------------

int cmd_pf(const PfOptions& o, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const BusMatrices m = build_bus_matrices(load_network(o.network));
    const SplitLoadVector load =
        o.loads.empty() ? SplitLoadVector::zeros(m.size()) : io::load_from_json(read_json(o.loads), m.size());

    const FixedPointResult pf = fixed_point_solve(m, load, o.pf);
    json vmag = json::array();
    for (int j = 0; j < pf.voltage.size(); ++j) vmag.push_back(std::abs(pf.voltage.v[j]));
    json doc = {{"voltage", io::to_json(pf.voltage.v)},
                {"voltage_magnitude", vmag},
                {"slack_power", io::to_json(slack_injection(m, pf.voltage))},
                {"residual", pf_residual(m, pf.voltage, load)},
                {"iterations", pf.iterations},
                {"losses", resistive_losses(m, pf.voltage)}};
    doc["manifest"] = manifest("pf", {{"network", o.network}, {"loads", o.loads.empty() ? json() : json(o.loads)}},
                               fixed_point_json(o.pf), start);
    emit_json(doc, o.out, out);
    err << "converged in " << pf.iterations << " iterations\n";
    return kOk;
}

int cmd_restrict(const RestrictOptions& o, std::ostream& out, std::ostream&) {
    const auto start = Clock::now();
    const BusMatrices m = build_bus_matrices(load_network(o.network));
    const PolyhedralRestriction p = o.center.empty() ? build_restriction_nominal(m, m.v0, o.delta)
                                                     : build_restriction(m, load_center(o.center, m), o.delta);
    json doc = io::to_json(p);
    doc["manifest"] = manifest(
        "restrict", {{"network", o.network}, {"center", o.center.empty() ? json("nominal") : json(o.center)}},
        {{"delta", o.delta}}, start);
    emit_json(doc, o.out, out);
    return kOk;
}

int cmd_seqopt(const SeqOptOptions& o, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const BusMatrices m = build_bus_matrices(load_network(o.network));
    const int n = m.size();
    const OperatingPoint init = load_center(o.center, m);
    const BoxBounds bounds = load_bounds(o.bounds, n, o.box_max);
    const LinearObjective obj = load_objective(o.objective, o.objective_file, n);

    const SeqOptTrace trace = run(m, init, obj, bounds, o.cfg);

    err << std::setw(4) << "k" << std::setw(16) << "objective" << std::setw(14) << "delta" << std::setw(12)
        << "min|V|" << '\n';
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        const SeqOptIterate& it = trace.iterates[k];
        double vmin = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) vmin = std::min(vmin, std::abs(it.v.v[j]));
        err << std::setw(4) << k << std::setw(16) << std::setprecision(8) << it.objective << std::setw(14)
            << std::setprecision(6) << it.delta << std::setw(12) << std::setprecision(6) << vmin << '\n';
    }
    err << "termination: " << to_string(trace.termination) << '\n';

    json doc = io::to_json(trace);
    doc["final_objective"] = trace.last().objective;
    doc["manifest"] = manifest("seqopt",
                               {{"network", o.network},
                                {"center", o.center.empty() ? json("nominal") : json(o.center)},
                                {"bounds", o.bounds.empty() ? json("default") : json(o.bounds)},
                                {"objective", o.objective_file.empty() ? json(o.objective) : json(o.objective_file)}},
                               {{"delta0", o.cfg.delta0},
                                {"epsilon", o.cfg.epsilon},
                                {"max_iterations", o.cfg.max_iterations},
                                {"objective", io::to_json(obj)},
                                {"bounds", io::to_json(bounds)},
                                {"pf", fixed_point_json(o.cfg.pf_config)}},
                               start);
    emit_json(doc, o.out, out);

    if (trace.termination == Termination::LpInfeasible && trace.iterates.size() == 1) {
        err << "error: the restriction around the initial point has no point inside the bounds\n";
        return kLpInfeasible;
    }
    return kOk;
}

int cmd_region(const RegionOptions& o, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const BusMatrices m = build_bus_matrices(load_network(o.network));
    const int n = m.size();
    const OperatingPoint hat = load_center(o.center, m);

    const auto tokens = split_commas(o.slice);
    if (tokens.empty() || tokens.size() > 2) throw CLI::ValidationError("--slice", "expects one or two axes");
    if (o.range.size() != 2 || !(o.range[0] <= o.range[1])) throw std::invalid_argument("--range needs lo <= hi");

    std::vector<GridAxis> grid;
    for (const auto& t : tokens) {
        LoadCoordinate c = parse_axis(t, n);
        grid.push_back({c, o.range[0], o.range[1], o.grid});
    }
    if (o.power_factor < 1.0) {
        const double k = reactive_ratio(o.power_factor);
        for (auto& axis : grid) {
            if (axis.coordinate.component != LoadComponent::Active) continue;
            const bool reactive_is_axis = std::any_of(grid.begin(), grid.end(), [&](const GridAxis& g) {
                return g.coordinate.bus == axis.coordinate.bus && g.coordinate.component == LoadComponent::Reactive;
            });
            if (!reactive_is_axis) axis.coordinate.reactive_per_active = k;
        }
    }
    if (grid.size() == 2 && grid[0].coordinate.bus == grid[1].coordinate.bus &&
        grid[0].coordinate.component == grid[1].coordinate.component) {
        throw std::invalid_argument("slice axes must differ");
    }

    const RegionSample sample = sample_region(m, hat, o.delta, grid);
    const PolyhedralRestriction p = build_restriction(m, hat, o.delta);

    json config = {{"slice", o.slice},   {"range", o.range}, {"grid", o.grid},         {"delta", o.delta},
                   {"power_factor", o.power_factor},           {"p_samples", o.p_samples}, {"seed", o.seed}};
    const json inputs = {{"network", o.network}, {"center", o.center.empty() ? json("nominal") : json(o.center)}};
    const std::string header = "# manifest: " + manifest("region", inputs, config, start).dump() + "\n";

    std::ostringstream csv;
    csv << header;
    io::write_region_csv(csv, sample, n);
    emit(csv.str(), o.out, out);
    err << "grid points: " << sample.points.size() << ", in S: " << sample.count_in_s() << '\n';

    const std::string polygon_path = !o.polygon.empty() ? o.polygon
                                     : !o.out.empty()   ? with_suffix(o.out, "_polygon.csv")
                                                        : std::string();
    if (grid.size() == 2) {
        const std::array<LoadCoordinate, 2> axes{grid[0].coordinate, grid[1].coordinate};
        const auto poly = slice_polygon(p, hat.s_hat, axes, {o.range[0], o.range[1], o.range[0], o.range[1]});
        if (!polygon_path.empty()) {
            std::ostringstream pcsv;
            pcsv << header << "u0,u1\n" << std::setprecision(17);
            for (const auto& v : poly) pcsv << v[0] << ',' << v[1] << '\n';
            emit(pcsv.str(), polygon_path, out);
        }
        err << "restriction polygon: " << poly.size() << " vertices\n";
    }

    if (o.p_samples > 0) {
        const auto points = sample_polytope(p, BoxBounds::nonnegative(n), o.p_samples, o.seed);
        std::size_t violations = 0;
        std::ostringstream pcsv;
        pcsv << header;
        for (const auto& t : tokens) pcsv << t << ',';
        pcsv << "verdict\n" << std::setprecision(17);
        for (const auto& x : points) {
            const SplitLoadVector s = SplitLoadVector::from_stacked(x);
            const Verdict v = classify(m, hat.v_hat, o.delta, s, {});
            if (v != Verdict::InS) ++violations;
            const Eigen::VectorXcd net = s.net();
            for (const auto& axis : grid) {
                const Complex z = net[axis.coordinate.bus - 1];
                pcsv << (axis.coordinate.component == LoadComponent::Active ? z.real() : z.imag()) << ',';
            }
            pcsv << to_string(v) << '\n';
        }
        const std::string p_path = !o.p_out.empty() ? o.p_out
                                   : !o.out.empty() ? with_suffix(o.out, "_psamples.csv")
                                                    : std::string();
        if (!p_path.empty()) emit(pcsv.str(), p_path, out);
        err << "restriction samples: " << points.size() << ", outside S: " << violations << '\n';
        if (violations > 0) return kNumericalError;
    }
    return kOk;
}

int cmd_two_node(const TwoNodeOptions& o, std::ostream& out, std::ostream&) {
    const auto start = Clock::now();
    json sols = json::array();
    for (const auto& s : two_node_solutions(o.c)) {
        sols.push_back({{"ell", s.ell}, {"v1_sq", s.v1_sq}, {"p0", s.p0}, {"q0", s.q0}});
    }
    json boxes = json::array();
    for (double d : o.deltas) {
        const auto [lo, hi] = two_node_current_box(o.c, d);
        json entry = {{"delta", d}, {"ell_lo", lo}, {"ell_hi", hi}};
        if (!sols.empty()) {
            const TwoNodeRelaxation rel = two_node_relaxation(o.c, d);
            entry["p0_relaxed"] = rel.p0_relaxed;
            entry["gap"] = rel.gap;
        }
        boxes.push_back(entry);
    }
    json doc = {{"solutions", sols}, {"current_box", boxes}};
    doc["manifest"] = manifest(
        "oracle two-node", json::object(),
        {{"r", o.c.r}, {"x", o.c.x}, {"p1", o.c.p1}, {"q1", o.c.q1}, {"v0", o.c.v0_mag}, {"delta", o.deltas}}, start);
    emit_json(doc, o.out, out);
    return kOk;
}

int cmd_optimum(const OptimumOptions& o, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const BusMatrices m = build_bus_matrices(load_network(o.network));
    const int n = m.size();
    const BoxBounds bounds = load_bounds(o.bounds, n, o.box_max);
    const LinearObjective obj = load_objective(o.objective, o.objective_file, n);
    const BruteForceResult r = brute_force_optimum(m, obj, bounds, o.delta, o.grid);

    json doc = {{"value", r.value},
                {"load", io::to_json(r.best)},
                {"voltage", io::to_json(r.voltage.v)},
                {"slack_power", io::to_json(r.slack_power)},
                {"grid_resolution", r.grid_resolution},
                {"effective_dimension", r.effective_dimension},
                {"evaluations", r.evaluations}};
    doc["manifest"] = manifest("oracle optimum",
                               {{"network", o.network}, {"bounds", o.bounds.empty() ? json("default") : json(o.bounds)}},
                               {{"delta", o.delta}, {"grid", o.grid}, {"objective", io::to_json(obj)}}, start);
    emit_json(doc, o.out, out);
    err << "optimum " << r.value << " after " << r.evaluations << " power-flow solves\n";
    return kOk;
}

// Strictly inside (0, 1).
const CLI::Validator kOpenUnit = CLI::Validator(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            v = std::stod(s);
        } catch (const std::exception&) {
            return "not a number: " + s;
        }
        return (v > 0.0 && v < 1.0) ? std::string() : "value must lie strictly between 0 and 1";
    },
    "(0,1)");

void add_pf_flags(CLI::App* app, FixedPointConfig& cfg) {
    app->add_option("--tol", cfg.tol, "fixed-point tolerance (inf-norm)")->capture_default_str()->check(
        CLI::PositiveNumber);
    app->add_option("--pf-max-iter", cfg.max_iter, "fixed-point iteration limit")->capture_default_str()->check(
        CLI::PositiveNumber);
    app->add_option("--divergence-bound", cfg.divergence_bound, "abort when some |V_j| drops below this")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Polyhedral restrictions of the power-flow feasibility region for radial networks"};
    app.name(args.empty() ? "polyres" : args[0]);
    app.set_version_flag("--version", io::version());
    app.require_subcommand(1);

    PfOptions pf;
    auto* pf_cmd = app.add_subcommand("pf", "solve the power flow for a load vector");
    pf_cmd->add_option("network", pf.network, "network JSON")->required()->check(CLI::ExistingFile);
    pf_cmd->add_option("--loads", pf.loads, "load JSON (4 arrays pc, qc, pg, qg); zero load if omitted")
        ->check(CLI::ExistingFile);
    pf_cmd->add_option("--out", pf.out, "output file (default: stdout)");
    add_pf_flags(pf_cmd, pf.pf);

    RestrictOptions rs;
    auto* rs_cmd = app.add_subcommand("restrict", "build the polyhedral restriction around an operating point");
    rs_cmd->add_option("network", rs.network, "network JSON")->required()->check(CLI::ExistingFile);
    rs_cmd->add_option("--center", rs.center, "operating point JSON {v, s}; no-load point if omitted")
        ->check(CLI::ExistingFile);
    rs_cmd->add_option("--delta", rs.delta, "voltage deviation budget")->capture_default_str()->check(kOpenUnit);
    rs_cmd->add_option("--out", rs.out, "output file (default: stdout)");

    SeqOptOptions so;
    auto* so_cmd = app.add_subcommand("seqopt", "sequential LP over re-centered restrictions");
    so_cmd->add_option("network", so.network, "network JSON")->required()->check(CLI::ExistingFile);
    so_cmd->add_option("--objective", so.objective, "built-in objective")
        ->capture_default_str()
        ->check(CLI::IsMember({"max-load", "min-load"}));
    so_cmd->add_option("--objective-file", so.objective_file, "objective JSON {direction, weights}")
        ->check(CLI::ExistingFile);
    so_cmd->add_option("--delta0", so.cfg.delta0, "initial voltage deviation budget")
        ->capture_default_str()
        ->check(kOpenUnit);
    so_cmd->add_option("--eps", so.cfg.epsilon, "relative objective change that stops the run")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    so_cmd->add_option("--max-iter", so.cfg.max_iterations, "iteration limit (0 echoes the initial point)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    so_cmd->add_option("--bounds", so.bounds, "bounds JSON {lower, upper}")->check(CLI::ExistingFile);
    so_cmd->add_option("--box-max", so.box_max, "upper bound on pc and pg when --bounds is omitted")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    so_cmd->add_option("--center", so.center, "initial operating point JSON; no-load point if omitted")
        ->check(CLI::ExistingFile);
    so_cmd->add_option("--out", so.out, "output file (default: stdout)");
    add_pf_flags(so_cmd, so.cfg.pf_config);

    RegionOptions rg;
    auto* rg_cmd = app.add_subcommand("region", "sample the feasibility region on a load slice");
    rg_cmd->add_option("network", rg.network, "network JSON")->required()->check(CLI::ExistingFile);
    rg_cmd->add_option("--slice", rg.slice, "one or two axes p<bus>/q<bus>, comma separated")
        ->capture_default_str();
    rg_cmd->add_option("--range", rg.range, "lo,hi of every axis")->delimiter(',')->expected(2)->capture_default_str();
    rg_cmd->add_option("--grid", rg.grid, "points per axis")->capture_default_str()->check(CLI::PositiveNumber);
    rg_cmd->add_option("--delta", rg.delta, "voltage deviation budget")->capture_default_str()->check(kOpenUnit);
    rg_cmd->add_option("--pf", rg.power_factor, "power factor tying q to p on active axes")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0) & CLI::PositiveNumber);
    rg_cmd->add_option("--center", rg.center, "operating point JSON; no-load point if omitted")
        ->check(CLI::ExistingFile);
    rg_cmd->add_option("--out", rg.out, "sample CSV (default: stdout)");
    rg_cmd->add_option("--polygon", rg.polygon, "restriction section CSV (default: <out>_polygon.csv)");
    rg_cmd->add_option("--p-samples", rg.p_samples, "hit-and-run samples of the restriction to classify")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    rg_cmd->add_option("--p-out", rg.p_out, "restriction sample CSV (default: <out>_psamples.csv)");
    rg_cmd->add_option("--seed", rg.seed, "sampler seed")->capture_default_str();

    auto* or_cmd = app.add_subcommand("oracle", "reference solutions");
    or_cmd->require_subcommand(1);

    TwoNodeOptions tn;
    auto* tn_cmd = or_cmd->add_subcommand("two-node", "closed-form two-node solutions and current box");
    tn_cmd->add_option("--r", tn.c.r, "line resistance")->capture_default_str()->check(CLI::NonNegativeNumber);
    tn_cmd->add_option("--x", tn.c.x, "line reactance")->capture_default_str()->check(CLI::NonNegativeNumber);
    tn_cmd->add_option("--p1", tn.c.p1, "active power injected at bus 1")->capture_default_str();
    tn_cmd->add_option("--q1", tn.c.q1, "reactive power injected at bus 1")->capture_default_str();
    tn_cmd->add_option("--v0", tn.c.v0_mag, "slack voltage magnitude")->capture_default_str()->check(
        CLI::PositiveNumber);
    tn_cmd->add_option("--delta", tn.deltas, "budgets for the current box")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    tn_cmd->add_option("--out", tn.out, "output file (default: stdout)");

    OptimumOptions op;
    auto* op_cmd = or_cmd->add_subcommand("optimum", "brute-force optimum over the load box");
    op_cmd->add_option("network", op.network, "network JSON")->required()->check(CLI::ExistingFile);
    op_cmd->add_option("--objective", op.objective, "built-in objective")
        ->capture_default_str()
        ->check(CLI::IsMember({"max-load", "min-load"}));
    op_cmd->add_option("--objective-file", op.objective_file, "objective JSON")->check(CLI::ExistingFile);
    op_cmd->add_option("--bounds", op.bounds, "bounds JSON")->check(CLI::ExistingFile);
    op_cmd->add_option("--box-max", op.box_max, "upper bound on pc and pg when --bounds is omitted")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    op_cmd->add_option("--delta", op.delta, "voltage deviation budget")->capture_default_str()->check(kOpenUnit);
    op_cmd->add_option("--grid", op.grid, "intervals per free axis")->capture_default_str()->check(
        CLI::PositiveNumber);
    op_cmd->add_option("--out", op.out, "output file (default: stdout)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*pf_cmd) return cmd_pf(pf, out, err);
        if (*rs_cmd) return cmd_restrict(rs, out, err);
        if (*so_cmd) return cmd_seqopt(so, out, err);
        if (*rg_cmd) return cmd_region(rg, out, err);
        if (*tn_cmd) return cmd_two_node(tn, out, err);
        if (*op_cmd) return cmd_optimum(op, out, err);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const Divergence& e) {
        err << "error: " << e.what() << " (bus " << e.bus() << ", iteration " << e.iteration() << ")\n";
        return kDivergence;
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const InfeasibleCenter& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidCenter;
    } catch (const InvalidInitialPoint& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidCenter;
    } catch (const NoFeasiblePoint& e) {
        err << "error: " << e.what() << '\n';
        return kLpInfeasible;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}

}  // namespace polyres::cli
