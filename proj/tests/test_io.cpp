#include <doctest.h>

#include <limits>
#include <sstream>

#include "polyres/error.hpp"
#include "polyres/io.hpp"
#include "support.hpp"

using namespace polyres;
using nlohmann::json;

TEST_CASE("load and voltage round trips") {
    const SplitLoadVector s = testing::split({1.0, 0.0}, {0.25, 0.5}, {0.0, 2.0}, {0.125, 0.0});
    CHECK(io::load_from_json(io::to_json(s), 2).stacked() == s.stacked());
    CHECK(io::to_json(s) == json::parse("[[1.0,0.0],[0.25,0.5],[0.0,2.0],[0.125,0.0]]"));

    Eigen::VectorXcd v(2);
    v << Complex(1.0, -0.1), Complex(0.9, 0.05);
    CHECK(io::voltages_from_json(io::to_json(v), 2) == v);
    CHECK(io::complex_from_json(io::to_json(Complex(0.3, -4.0))) == Complex(0.3, -4.0));
}

TEST_CASE("restriction round trip") {
    const auto m = build_bus_matrices(testing::three_node());
    const auto p = build_restriction_nominal(m, m.v0, 0.1);
    // Through text, so the printed precision is exercised as well.
    const auto q = io::restriction_from_json(io::parse(io::to_json(p).dump()), m.v0);
    CHECK(q.lhs == p.lhs);
    CHECK(q.rhs == p.rhs);
    CHECK(q.delta == p.delta);
    CHECK(q.center.v_hat.v == p.center.v_hat.v);
    CHECK(q.center.s_hat.stacked() == p.center.s_hat.stacked());
}

TEST_CASE("bounds keep infinite uppers as null") {
    BoxBounds b = BoxBounds::nonnegative(2);
    b.upper[0] = 35.0;
    const json j = io::to_json(b);
    CHECK(j["upper"][0][1].is_null());
    CHECK(j["upper"][0][0] == 35.0);
    const BoxBounds c = io::bounds_from_json(j, 2);
    CHECK(c.lower == b.lower);
    CHECK(c.upper == b.upper);
    CHECK(std::isinf(c.upper[7]));

    json crossed = j;
    crossed["lower"][0][0] = 40.0;
    CHECK_THROWS_AS(io::bounds_from_json(crossed, 2), ParseError);
}

TEST_CASE("objective round trip") {
    const auto obj = LinearObjective::min_active_load(3);
    const auto back = io::objective_from_json(io::to_json(obj), 3);
    CHECK(back.weights == obj.weights);
    CHECK(back.direction == Sense::Minimize);
    CHECK_THROWS_AS(io::objective_from_json(json::parse(R"({"direction":"sideways","weights":[[0],[0],[0],[0]]})"), 1),
                    ParseError);
}

TEST_CASE("operating point and trace documents") {
    const auto m = build_bus_matrices(testing::three_node());
    const auto op = OperatingPoint::nominal(2, m.v0);
    const auto back = io::operating_point_from_json(io::to_json(op), m.v0, 2);
    CHECK(back.v_hat.v == op.v_hat.v);
    CHECK(back.s_hat.stacked() == op.s_hat.stacked());

    SeqOptTrace trace;
    trace.iterates.push_back({op.s_hat, op.v_hat, 0.1, 0.0});
    trace.termination = Termination::MaxIterations;
    const json j = io::to_json(trace);
    CHECK(j["termination"] == to_string(Termination::MaxIterations));
    REQUIRE(j["iterates"].size() == 1);
    CHECK(j["iterates"][0]["voltage_magnitude"] == json::parse("[1.0,1.0]"));
}

TEST_CASE("region CSV layout") {
    const auto m = build_bus_matrices(testing::three_node());
    const auto r = sample_region(m, OperatingPoint::nominal(2, m.v0), 0.1,
                                 {{{1, LoadComponent::Active, 0.0}, 0.0, 500.0, 2}});
    std::ostringstream os;
    io::write_region_csv(os, r, 2);
    std::istringstream in(os.str());
    std::string header, first, second;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    CHECK(header == "p1,verdict,vmag1,vmag2");
    CHECK(first == "0,in_s,1,1");
    CHECK(second.rfind("500,", 0) == 0);
    CHECK(second.find("in_s") == std::string::npos);
}

TEST_CASE("malformed documents raise ParseError") {
    CHECK_THROWS_AS(io::parse("{not json"), ParseError);
    CHECK_THROWS_AS(io::load_from_json(json::parse("[[1],[0],[0]]"), 1), ParseError);
    CHECK_THROWS_AS(io::load_from_json(json::parse("[[-1],[0],[0],[0]]"), 1), ParseError);
    CHECK_THROWS_AS(io::load_from_json(json::parse(R"([["a"],[0],[0],[0]])"), 1), ParseError);
    CHECK_THROWS_AS(io::voltages_from_json(json::parse(R"([{"re":1}])"), 1), ParseError);
    CHECK_THROWS_AS(io::restriction_from_json(json::parse(R"({"rhs":[1,2,3]})"), {1.0, 0.0}), ParseError);
    CHECK_THROWS_AS(io::bounds_from_json(json::parse("[]"), 1), ParseError);
    CHECK_THROWS_AS(io::read_file("/nonexistent/polyres.json"), ParseError);
}
