#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "polyres/linprog.hpp"
#include "polyres/oracle.hpp"
#include "polyres/powerflow.hpp"
#include "polyres/restriction.hpp"
#include "polyres/seqopt.hpp"

// JSON layouts shared by the command-line tool and external consumers.
// Malformed input raises ParseError.
namespace polyres::io {

using nlohmann::json;

/// Library version string.
const char* version();

json to_json(Complex z);
Complex complex_from_json(const json& j);

/// [[pc...], [qc...], [pg...], [qg...]]
json to_json(const SplitLoadVector& s);
SplitLoadVector load_from_json(const json& j, int n);

/// [{"re": .., "im": ..}, ...]
json to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd voltages_from_json(const json& j, int n);

/// {"v": voltages, "s": load}; v0 comes from the network.
json to_json(const OperatingPoint& op);
OperatingPoint operating_point_from_json(const json& j, Complex v0, int n);

/// {"lhs": rows, "rhs": [...], "delta": d, "center": {...}}
json to_json(const PolyhedralRestriction& p);
PolyhedralRestriction restriction_from_json(const json& j, Complex v0);

/// {"lower": 4 arrays, "upper": 4 arrays}; null in "upper" means unbounded.
json to_json(const BoxBounds& b);
BoxBounds bounds_from_json(const json& j, int n);

/// {"direction": "maximize"|"minimize", "weights": 4 arrays}
json to_json(const LinearObjective& obj);
LinearObjective objective_from_json(const json& j, int n);

json to_json(const SeqOptTrace& trace);

/// One row per grid point: coordinates, verdict, |V_j| per bus (empty when
/// no solution was reached).
void write_region_csv(std::ostream& os, const RegionSample& sample, int n);

/// Parses text, mapping syntax errors to ParseError.
json parse(const std::string& text);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace polyres::io
