#include <doctest.h>

#include <random>

#include "polyres/error.hpp"
#include "polyres/linprog.hpp"
#include "polyres/oracle.hpp"
#include "polyres/restriction.hpp"
#include "support.hpp"

using namespace polyres;

namespace {

// Coefficients (a, b) of block (row, col) = a R + b X, written out by hand.
constexpr int kPattern[4][4][2] = {
    {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}},
    {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}},
    {{-1, 1}, {-1, -1}, {1, -1}, {1, 1}},
    {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}},
};

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

OperatingPoint solved_center(const BusMatrices& m, const SplitLoadVector& s) {
    return {fixed_point_solve(m, s).voltage, s};
}

}  // namespace

TEST_CASE("two-node matrices by direct substitution") {
    const auto m = build_bus_matrices(testing::two_node());
    const auto rm = build_matrices(m);
    Eigen::Matrix4d expected;
    expected << -0.8, 0.6, 0.8, -0.6,  //
        0.6, 0.8, -0.6, -0.8,          //
        -0.6, -0.8, 0.6, 0.8,          //
        0.8, -0.6, -0.8, 0.6;
    CHECK((rm.A - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((rm.B.array() - 0.8).abs().maxCoeff() < 1e-15);
    CHECK((rm.C.array() - std::sqrt(0.5)).abs().maxCoeff() < 1e-15);
}

TEST_CASE("block structure against independent Kronecker construction") {
    std::mt19937_64 rng(5);
    for (int n : {2, 3, 7}) {
        const auto m = n == 2 ? build_bus_matrices(testing::three_node()) : build_bus_matrices(testing::random_tree(n, rng));
        const auto rm = build_matrices(m);
        const Eigen::MatrixXd J4 = Eigen::MatrixXd::Ones(4, 4);
        CHECK((rm.B - kron(J4, m.R + m.X)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((rm.C - kron(J4, m.Z.cwiseAbs())).cwiseAbs().maxCoeff() == 0.0);

        Eigen::MatrixXd a_ref = Eigen::MatrixXd::Zero(4 * n, 4 * n);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                Eigen::MatrixXd e = Eigen::MatrixXd::Zero(4, 4);
                e(i, j) = 1.0;
                a_ref += kron(e, kPattern[i][j][0] * m.R + kPattern[i][j][1] * m.X);
            }
        }
        CHECK((rm.A - a_ref).cwiseAbs().maxCoeff() < 1e-15);

        // Generation columns are the negated consumption columns.
        CHECK((rm.A.middleCols(0, n) + rm.A.middleCols(2 * n, n)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((rm.A.middleCols(n, n) + rm.A.middleCols(3 * n, n)).cwiseAbs().maxCoeff() == 0.0);
        CHECK(rm.B.minCoeff() >= 0.0);
        CHECK(rm.C.minCoeff() >= 0.0);
    }
}

TEST_CASE("restriction around the no-load point has a constant rhs") {
    const auto m = build_bus_matrices(testing::three_node());
    const auto nominal = build_restriction_nominal(m, m.v0, 0.1);
    CHECK((nominal.rhs.array() - 0.081).abs().maxCoeff() < 1e-15);
    const auto general = build_restriction(m, OperatingPoint::nominal(2, m.v0), 0.1);
    CHECK((general.lhs - nominal.lhs).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((general.rhs - nominal.rhs).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(contains(nominal, SplitLoadVector::zeros(2)));

    // rhs grows with delta only while delta (1 - delta)^2 does, i.e. below 1/3.
    const auto a = build_restriction_nominal(m, m.v0, 0.1);
    const auto b = build_restriction_nominal(m, m.v0, 0.3);
    const auto c = build_restriction_nominal(m, m.v0, 0.6);
    CHECK((a.rhs.array() <= b.rhs.array()).all());
    CHECK((c.rhs.array() < b.rhs.array()).all());

    const auto tiny = build_restriction_nominal(m, m.v0, 1e-9);
    CHECK(tiny.rhs.maxCoeff() < 1e-8);
}

TEST_CASE("invalid inputs") {
    const auto m = build_bus_matrices(testing::two_node());
    CHECK_THROWS_AS(build_restriction_nominal(m, m.v0, 0.0), DeltaOutOfRange);
    CHECK_THROWS_AS(build_restriction_nominal(m, m.v0, 1.0), DeltaOutOfRange);
    CHECK_THROWS_AS(build_restriction(m, OperatingPoint::nominal(1, m.v0), -0.5), DeltaOutOfRange);

    // Flat voltage with a nonzero load is not a power-flow solution.
    OperatingPoint stale{VoltageProfile::flat(1, m.v0), testing::split({0.0}, {0.0}, {0.1}, {0.01})};
    CHECK_THROWS_AS(build_restriction(m, stale, 0.1), InfeasibleCenter);
    OperatingPoint zero{{Eigen::VectorXcd::Zero(1), m.v0}, SplitLoadVector::zeros(1)};
    CHECK_THROWS_AS(build_restriction(m, zero, 0.1), InfeasibleCenter);
}

TEST_CASE("two-node restriction around the generating center") {
    const auto m = build_bus_matrices(testing::two_node());
    const SplitLoadVector s_hat = testing::split({0.0}, {0.0}, {0.1}, {0.01});
    const auto center = solved_center(m, s_hat);
    const auto p = build_restriction(m, center, 0.1);
    CHECK(contains(p, s_hat));

    // Pinned LP returns the center and the slack power of the exact solution.
    const auto lp = solve(p, LinearObjective::max_active_load(1), BoxBounds::pinned(s_hat));
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK((lp.s_star->stacked() - s_hat.stacked()).cwiseAbs().maxCoeff() < 1e-12);
    const auto v = fixed_point_solve(m, *lp.s_star);
    CHECK(std::abs(-slack_injection(m, v.voltage).real() - (-0.0938)) < 1e-3);
}

TEST_CASE("normalization cases") {
    const SplitLoadVector a = testing::split({3.0}, {0.0}, {1.0}, {0.0});
    const auto na = normalize_split(a);
    CHECK(na.pc()[0] == 2.0);
    CHECK(na.pg()[0] == 0.0);
    const SplitLoadVector b = testing::split({1.0}, {0.0}, {3.0}, {0.0});
    const auto nb = normalize_split(b);
    CHECK(nb.pc()[0] == 0.0);
    CHECK(nb.pg()[0] == 2.0);
    const SplitLoadVector c = testing::split({0.5}, {0.0}, {0.0}, {0.25});
    CHECK(normalize_split(c).stacked() == c.stacked());
}

TEST_CASE("normalization preserves net load and membership") {
    const auto m = build_bus_matrices(testing::three_node());
    const auto p = build_restriction_nominal(m, m.v0, 0.1);
    const auto points = sample_polytope(p, BoxBounds::nonnegative(2), 200, 17);
    for (const auto& x : points) {
        REQUIRE(contains(p, x));
        const auto s = SplitLoadVector::from_stacked(x);
        const auto n = normalize_split(s);
        CHECK((n.net() - s.net()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(contains(p, n));
        CHECK((n.pc().array() * n.pg().array()).abs().maxCoeff() == 0.0);
        CHECK((n.qc().array() * n.qg().array()).abs().maxCoeff() == 0.0);
    }
}

TEST_CASE("sampled restriction points are feasible and stable") {
    const FixedPointConfig cfg;
    SUBCASE("three-node nominal") {
        const auto m = build_bus_matrices(testing::three_node());
        const auto p = build_restriction_nominal(m, m.v0, 0.1);
        for (const auto& x : sample_polytope(p, BoxBounds::nonnegative(2), 150, 3)) {
            CHECK(classify(m, p.center.v_hat, 0.1, SplitLoadVector::from_stacked(x), cfg) == Verdict::InS);
        }
    }
    SUBCASE("two-node around a generating center") {
        const auto m = build_bus_matrices(testing::two_node());
        const auto center = solved_center(m, testing::split({0.0}, {0.0}, {0.1}, {0.01}));
        const auto p = build_restriction(m, center, 0.1);
        for (const auto& x : sample_polytope(p, BoxBounds::nonnegative(1), 150, 4)) {
            CHECK(classify(m, center.v_hat, 0.1, SplitLoadVector::from_stacked(x), cfg) == Verdict::InS);
        }
    }
}

TEST_CASE("slice polygon matches pointwise membership") {
    const auto m = build_bus_matrices(testing::three_node());
    const auto p = build_restriction_nominal(m, m.v0, 0.1);
    const double k = reactive_ratio(0.9);
    const std::array<LoadCoordinate, 2> axes{LoadCoordinate{1, LoadComponent::Active, k},
                                             LoadCoordinate{2, LoadComponent::Active, k}};
    const SliceWindow w{-5, 5, -5, 5};
    const auto poly = slice_polygon(p, SplitLoadVector::zeros(2), axes, w);
    REQUIRE(poly.size() >= 3);

    auto inside_polygon = [&](double u0, double u1, double tol) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto& a = poly[i];
            const auto& b = poly[(i + 1) % poly.size()];
            const double cross = (b[0] - a[0]) * (u1 - a[1]) - (b[1] - a[1]) * (u0 - a[0]);
            if (cross < -tol) return false;
        }
        return true;
    };

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    int in = 0;
    for (int i = 0; i < 2000; ++i) {
        const std::array<double, 2> vals{u(rng), u(rng)};
        const auto s = with_net_coordinates(SplitLoadVector::zeros(2), axes, vals);
        const Eigen::VectorXd slack = p.lhs * s.stacked() - p.rhs;
        const double worst = slack.maxCoeff();
        if (std::abs(worst) < 1e-6) continue;  // too close to a facet to judge
        const bool member = worst < 0.0;
        in += member;
        CHECK(inside_polygon(vals[0], vals[1], 1e-9) == member);
    }
    CHECK(in > 0);

    // A window far from the section yields an empty polygon.
    CHECK(slice_polygon(p, SplitLoadVector::zeros(2), axes, {100, 101, 100, 101}).empty());
    // Both axes on the same component are rejected.
    const std::array<LoadCoordinate, 2> bad{LoadCoordinate{1, LoadComponent::Active, 0.0},
                                            LoadCoordinate{1, LoadComponent::Active, 0.0}};
    CHECK_THROWS_AS(slice_polygon(p, SplitLoadVector::zeros(2), bad, w), std::invalid_argument);
}
