#include "polyres/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "polyres/error.hpp"

namespace polyres::io {

namespace {

double number(const json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(std::string(what) + " must be finite");
    return v;
}

Eigen::VectorXd vector_from_json(const json& j, int n, const char* what, bool null_is_inf = false) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        throw ParseError(std::string(what) + " must be an array of " + std::to_string(n) + " numbers");
    }
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        if (null_is_inf && j[i].is_null()) {
            v[i] = std::numeric_limits<double>::infinity();
        } else {
            v[i] = number(j[i], what);
        }
    }
    return v;
}

json vector_to_json(const Eigen::VectorXd& v, bool inf_is_null = false) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (inf_is_null && std::isinf(v[i])) {
            out.push_back(nullptr);
        } else {
            out.push_back(v[i]);
        }
    }
    return out;
}

// Four stacked blocks as [[...], [...], [...], [...]].
json blocks_to_json(const Eigen::VectorXd& stacked, bool inf_is_null = false) {
    const Eigen::Index n = stacked.size() / 4;
    json out = json::array();
    for (int b = 0; b < 4; ++b) out.push_back(vector_to_json(stacked.segment(b * n, n), inf_is_null));
    return out;
}

Eigen::VectorXd blocks_from_json(const json& j, int n, const char* what, bool null_is_inf = false) {
    if (!j.is_array() || j.size() != 4) throw ParseError(std::string(what) + " must be four arrays (pc, qc, pg, qg)");
    Eigen::VectorXd out(4 * n);
    for (int b = 0; b < 4; ++b) out.segment(b * n, n) = vector_from_json(j[b], n, what, null_is_inf);
    return out;
}

const json& field(const json& j, const char* key, const char* where) {
    if (!j.is_object()) throw ParseError(std::string(where) + " must be a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "' in " + where);
    return *it;
}

}  // namespace

const char* version() { return POLYRES_VERSION_STRING; }

json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const json& j) {
    return {number(field(j, "re", "complex value"), "re"), number(field(j, "im", "complex value"), "im")};
}

json to_json(const SplitLoadVector& s) { return blocks_to_json(s.stacked()); }

SplitLoadVector load_from_json(const json& j, int n) {
    try {
        return SplitLoadVector::from_stacked(blocks_from_json(j, n, "load"));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

json to_json(const Eigen::VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
    return out;
}

Eigen::VectorXcd voltages_from_json(const json& j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        throw ParseError("voltages must be an array of " + std::to_string(n) + " {re, im} objects");
    }
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = complex_from_json(j[i]);
    return v;
}

json to_json(const OperatingPoint& op) { return {{"v", to_json(op.v_hat.v)}, {"s", to_json(op.s_hat)}}; }

OperatingPoint operating_point_from_json(const json& j, Complex v0, int n) {
    OperatingPoint op;
    op.v_hat = VoltageProfile{voltages_from_json(field(j, "v", "center"), n), v0};
    op.s_hat = load_from_json(field(j, "s", "center"), n);
    return op;
}

json to_json(const PolyhedralRestriction& p) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < p.lhs.rows(); ++r) rows.push_back(vector_to_json(p.lhs.row(r).transpose()));
    return {{"lhs", rows}, {"rhs", vector_to_json(p.rhs)}, {"delta", p.delta}, {"center", to_json(p.center)}};
}

PolyhedralRestriction restriction_from_json(const json& j, Complex v0) {
    const json& rhs = field(j, "rhs", "restriction");
    if (!rhs.is_array() || rhs.size() % 4 != 0) throw ParseError("'rhs' must have length 4N");
    const int dim = static_cast<int>(rhs.size());
    PolyhedralRestriction p;
    p.rhs = vector_from_json(rhs, dim, "rhs");
    const json& lhs = field(j, "lhs", "restriction");
    if (!lhs.is_array() || static_cast<int>(lhs.size()) != dim) throw ParseError("'lhs' must have 4N rows");
    p.lhs.resize(dim, dim);
    for (int r = 0; r < dim; ++r) p.lhs.row(r) = vector_from_json(lhs[r], dim, "lhs row").transpose();
    p.delta = number(field(j, "delta", "restriction"), "delta");
    if (!(p.delta > 0.0 && p.delta < 1.0)) throw ParseError("'delta' must lie in (0, 1)");
    p.center = operating_point_from_json(field(j, "center", "restriction"), v0, dim / 4);
    return p;
}

json to_json(const BoxBounds& b) {
    return {{"lower", blocks_to_json(b.lower)}, {"upper", blocks_to_json(b.upper, true)}};
}

BoxBounds bounds_from_json(const json& j, int n) {
    BoxBounds b{blocks_from_json(field(j, "lower", "bounds"), n, "lower bounds"),
                blocks_from_json(field(j, "upper", "bounds"), n, "upper bounds", true)};
    try {
        b.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return b;
}

json to_json(const LinearObjective& obj) {
    return {{"direction", obj.direction == Sense::Maximize ? "maximize" : "minimize"},
            {"weights", blocks_to_json(obj.weights)}};
}

LinearObjective objective_from_json(const json& j, int n) {
    LinearObjective obj;
    const json& dir = field(j, "direction", "objective");
    if (dir == "maximize") {
        obj.direction = Sense::Maximize;
    } else if (dir == "minimize") {
        obj.direction = Sense::Minimize;
    } else {
        throw ParseError("objective direction must be \"maximize\" or \"minimize\"");
    }
    obj.weights = blocks_from_json(field(j, "weights", "objective"), n, "objective weights");
    return obj;
}

json to_json(const SeqOptTrace& trace) {
    json its = json::array();
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        const SeqOptIterate& it = trace.iterates[k];
        json vmag = json::array();
        for (int j = 0; j < it.v.size(); ++j) vmag.push_back(std::abs(it.v.v[j]));
        its.push_back({{"k", k},
                       {"objective", it.objective},
                       {"delta", it.delta},
                       {"load", to_json(it.s)},
                       {"voltage", to_json(it.v.v)},
                       {"voltage_magnitude", vmag}});
    }
    return {{"termination", to_string(trace.termination)}, {"iterates", its}};
}

void write_region_csv(std::ostream& os, const RegionSample& sample, int n) {
    for (std::size_t a = 0; a < sample.axes.size(); ++a) {
        const LoadCoordinate& c = sample.axes[a].coordinate;
        os << (c.component == LoadComponent::Active ? 'p' : 'q') << c.bus << ',';
    }
    os << "verdict";
    for (int j = 1; j <= n; ++j) os << ",vmag" << j;
    os << '\n';
    std::ostringstream line;
    line.precision(17);
    for (const RegionPoint& pt : sample.points) {
        line.str("");
        for (double c : pt.coordinates) line << c << ',';
        line << to_string(pt.verdict);
        for (int j = 0; j < n; ++j) {
            line << ',';
            if (pt.voltage) line << std::abs(pt.voltage->v[j]);
        }
        os << line.str() << '\n';
    }
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace polyres::io
